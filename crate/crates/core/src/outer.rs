//! Outer ({2}-) inverses with prescribed range and/or null space, their
//! Moore–Penrose, group and Drazin specializations, and the t-QR route.
//!
//! Everything is evaluated slice by slice in the Fourier domain. The
//! {1}-inverse used by the representation formulas is the Moore–Penrose
//! inverse, truncated at the cutoff shared by all slices of its operand.

use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{conj_mat, from_fourier, map_conjugate_pairs, map_conjugate_pairs_with, to_fourier, FourierStack};
use crate::linalg::{self, PivotedQr, RankTol, SliceSvd};
use crate::tensor::{stack_indices, stack_power, t_transpose, tprod, ScalarKind, Tensor3};

/// Which outer inverse was requested.
#[derive(Clone, Debug, PartialEq)]
pub enum Prescription {
    /// Range of the given tensor.
    RangeOnly(Tensor3),
    /// Null space of the given tensor.
    NullOnly(Tensor3),
    /// Range of `b`, null space of `c`.
    RangeNull {
        b: Tensor3,
        c: Tensor3,
    },
    /// Range and null space of the given tensor, via its t-QR factors.
    QrFrom(Tensor3),
    MoorePenrose,
    Group,
    /// Drazin inverse; the payload is the t-index.
    Drazin(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Direct,
    Qr,
    RandQr,
}

#[derive(Clone, Debug)]
pub struct OuterResult {
    pub inverse: Tensor3,
    pub prescription: Prescription,
    /// Every rank equality demanded by the existence condition, all equal.
    pub ranks_checked: Vec<(String, usize)>,
    /// Absolute singular-value cutoff used for the {1}-inverse.
    pub tolerance_used: f64,
    pub method: Method,
    /// The {1}-inverse `W` of the core product: `X = T*W` for a range
    /// prescription, `X = W*T` for a null-space one, `X = B*W*C` for both.
    pub witness: Option<Tensor3>,
}

/// Target rank for the randomized t-QR. A slice target of zero makes that
/// slice's contribution zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SliceRank {
    Uniform(usize),
    PerSlice(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QrMethod {
    Deterministic,
    Randomized { rank: SliceRank, oversample: usize, seed: u64 },
}

impl QrMethod {
    pub fn randomized(k: usize, seed: u64) -> Self {
        QrMethod::Randomized { rank: SliceRank::Uniform(k), oversample: 10, seed }
    }
}

/// Rank-`s` partition of a t-QR factorization `T * P = Q * R`.
#[derive(Clone, Debug)]
pub struct TqrPartition {
    /// Leading `s` columns of `Q`.
    pub qtil: Tensor3,
    /// Leading `s` rows of `R`.
    pub rtil: Tensor3,
    /// Permutation tensor (a permutation matrix in every Fourier slice).
    pub perm: Tensor3,
    pub s: usize,
    /// Column order used in each Fourier slice.
    pub slice_perms: Vec<Vec<usize>>,
}

struct StackPinv {
    stack: FourierStack,
    cutoff: f64,
    rank: usize,
}

fn stack_pinv(f: &FourierStack, tol: RankTol) -> Result<StackPinv> {
    let (p, q, n) = f.dims();
    let svds = f.svds()?;
    let cutoff = f.cutoff(&svds, tol);
    let rank = svds.iter().map(|s| s.rank(cutoff)).sum();
    let slices = map_conjugate_pairs(n, f.origin(), |k| Ok(svds[k].pinv(cutoff)))?;
    Ok(StackPinv { stack: FourierStack::new(q, p, slices, f.origin())?, cutoff, rank })
}

fn stack_rank(f: &FourierStack, tol: RankTol) -> Result<usize> {
    Ok(f.slice_ranks(tol)?.iter().sum())
}

fn require_slices(a: &Tensor3, b: &Tensor3) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(format!("{:?} and {:?} differ in slice count", a.dims(), b.dims())));
    }
    Ok(())
}

fn owned(ranks: &[(&str, usize)]) -> Vec<(String, usize)> {
    ranks.iter().map(|(n, r)| (n.to_string(), *r)).collect()
}

fn all_equal(ranks: &[(&str, usize)]) -> bool {
    ranks.windows(2).all(|w| w[0].1 == w[1].1)
}

fn range_ranks(s: &FourierStack, t: &FourierStack, tol: RankTol) -> Result<(FourierStack, [(&'static str, usize); 2])> {
    let z = s.mul(t)?;
    let ranks = [("rank_t(S*T)", stack_rank(&z, tol)?), ("rank_t(T)", stack_rank(t, tol)?)];
    Ok((z, ranks))
}

fn null_ranks(s: &FourierStack, t: &FourierStack, tol: RankTol) -> Result<(FourierStack, [(&'static str, usize); 2])> {
    let z = t.mul(s)?;
    let ranks = [("rank_t(T*S)", stack_rank(&z, tol)?), ("rank_t(T)", stack_rank(t, tol)?)];
    Ok((z, ranks))
}

fn range_null_ranks(
    t: &FourierStack,
    b: &FourierStack,
    c: &FourierStack,
    tol: RankTol,
) -> Result<(FourierStack, [(&'static str, usize); 3])> {
    let z = c.mul(&t.mul(b)?)?;
    let ranks = [
        ("rank_t(C*T*B)", stack_rank(&z, tol)?),
        ("rank_t(B)", stack_rank(b, tol)?),
        ("rank_t(C)", stack_rank(c, tol)?),
    ];
    Ok((z, ranks))
}

/// Whether `S{2}` with range `R(T)` exists: `rank_t(S*T) = rank_t(T)`.
pub fn exists_range(s: &Tensor3, t: &Tensor3) -> Result<bool> {
    require_slices(s, t)?;
    let (_, ranks) = range_ranks(&to_fourier(s), &to_fourier(t), RankTol::current())?;
    Ok(all_equal(&ranks))
}

/// Whether `S{2}` with null space `N(T)` exists: `rank_t(T*S) = rank_t(T)`.
pub fn exists_null(s: &Tensor3, t: &Tensor3) -> Result<bool> {
    require_slices(s, t)?;
    let (_, ranks) = null_ranks(&to_fourier(s), &to_fourier(t), RankTol::current())?;
    Ok(all_equal(&ranks))
}

/// Whether `T{2}` with range `R(B)` and null space `N(C)` exists:
/// `rank_t(C*T*B) = rank_t(B) = rank_t(C)`.
pub fn exists_range_null(t: &Tensor3, b: &Tensor3, c: &Tensor3) -> Result<bool> {
    require_slices(t, b)?;
    require_slices(t, c)?;
    let (_, ranks) = range_null_ranks(&to_fourier(t), &to_fourier(b), &to_fourier(c), RankTol::current())?;
    Ok(all_equal(&ranks))
}

/// `X = T * (S*T)^(1)`, the outer inverse of `S` with range `R(T)`.
pub fn outer_range(s: &Tensor3, t: &Tensor3) -> Result<OuterResult> {
    require_slices(s, t)?;
    let tol = RankTol::current();
    let ft = to_fourier(t);
    let (z, ranks) = range_ranks(&to_fourier(s), &ft, tol)?;
    if !all_equal(&ranks) {
        return Err(Error::existence(&ranks));
    }
    let w = stack_pinv(&z, tol)?;
    Ok(OuterResult {
        inverse: from_fourier(&ft.mul(&w.stack)?)?,
        prescription: Prescription::RangeOnly(t.clone()),
        ranks_checked: owned(&ranks),
        tolerance_used: w.cutoff,
        method: Method::Direct,
        witness: Some(from_fourier(&w.stack)?),
    })
}

/// `X = (T*S)^(1) * T`, the outer inverse of `S` with null space `N(T)`.
pub fn outer_null(s: &Tensor3, t: &Tensor3) -> Result<OuterResult> {
    require_slices(s, t)?;
    let tol = RankTol::current();
    let ft = to_fourier(t);
    let (z, ranks) = null_ranks(&to_fourier(s), &ft, tol)?;
    if !all_equal(&ranks) {
        return Err(Error::existence(&ranks));
    }
    let w = stack_pinv(&z, tol)?;
    Ok(OuterResult {
        inverse: from_fourier(&w.stack.mul(&ft)?)?,
        prescription: Prescription::NullOnly(t.clone()),
        ranks_checked: owned(&ranks),
        tolerance_used: w.cutoff,
        method: Method::Direct,
        witness: Some(from_fourier(&w.stack)?),
    })
}

struct Core {
    x: FourierStack,
    w: FourierStack,
    ranks: Vec<(String, usize)>,
    cutoff: f64,
}

fn range_null_core(t: &FourierStack, b: &FourierStack, c: &FourierStack, tol: RankTol) -> Result<Core> {
    let (z, ranks) = range_null_ranks(t, b, c, tol)?;
    if !all_equal(&ranks) {
        return Err(Error::existence(&ranks));
    }
    let w = stack_pinv(&z, tol)?;
    let x = b.mul(&w.stack.mul(c)?)?;
    Ok(Core { x, w: w.stack, ranks: owned(&ranks), cutoff: w.cutoff })
}

/// `X = B * (C*T*B)^(1) * C`, the outer inverse of `T` with range `R(B)` and
/// null space `N(C)`.
pub fn outer_range_null(t: &Tensor3, b: &Tensor3, c: &Tensor3) -> Result<OuterResult> {
    require_slices(t, b)?;
    require_slices(t, c)?;
    let core = range_null_core(&to_fourier(t), &to_fourier(b), &to_fourier(c), RankTol::current())?;
    Ok(OuterResult {
        inverse: from_fourier(&core.x)?,
        prescription: Prescription::RangeNull { b: b.clone(), c: c.clone() },
        ranks_checked: core.ranks,
        tolerance_used: core.cutoff,
        method: Method::Direct,
        witness: Some(from_fourier(&core.w)?),
    })
}

/// General member of `S{2}` with range `R(T)`:
/// `T*(S*T)^(1) + T*Z - T*Z*S*T*(S*T)^(1)` for any `Z` of shape `k × p × n`.
pub fn representation_range(s: &Tensor3, t: &Tensor3, z: &Tensor3) -> Result<Tensor3> {
    require_slices(s, t)?;
    require_slices(s, z)?;
    let tol = RankTol::current();
    let (fs, ft, fz) = (to_fourier(s), to_fourier(t), to_fourier(z));
    let (st, ranks) = range_ranks(&fs, &ft, tol)?;
    if !all_equal(&ranks) {
        return Err(Error::existence(&ranks));
    }
    let g = stack_pinv(&st, tol)?.stack;
    let tz = ft.mul(&fz)?;
    let base = ft.mul(&g)?;
    let corr = tz.mul(&st.mul(&g)?)?;
    from_fourier(&combine(&base, &tz, &corr)?)
}

/// General member of `S{2}` with null space `N(T)`:
/// `(T*S)^(1)*T + Z*T - (T*S)^(1)*T*S*Z*T` for any `Z` of shape `q × k × n`.
pub fn representation_null(s: &Tensor3, t: &Tensor3, z: &Tensor3) -> Result<Tensor3> {
    require_slices(s, t)?;
    require_slices(s, z)?;
    let tol = RankTol::current();
    let (fs, ft, fz) = (to_fourier(s), to_fourier(t), to_fourier(z));
    let (ts, ranks) = null_ranks(&fs, &ft, tol)?;
    if !all_equal(&ranks) {
        return Err(Error::existence(&ranks));
    }
    let g = stack_pinv(&ts, tol)?.stack;
    let zt = fz.mul(&ft)?;
    let base = g.mul(&ft)?;
    let corr = g.mul(&ts.mul(&zt)?)?;
    from_fourier(&combine(&base, &zt, &corr)?)
}

/// `a + b - c`, slice by slice.
fn combine(a: &FourierStack, b: &FourierStack, c: &FourierStack) -> Result<FourierStack> {
    let (p, q, _) = a.dims();
    let slices = a
        .slices()
        .iter()
        .zip(b.slices())
        .zip(c.slices())
        .map(|((x, y), z)| Mat::from_fn(p, q, |i, j| x[(i, j)] + y[(i, j)] - z[(i, j)]))
        .collect();
    FourierStack::new(p, q, slices, a.origin().join(b.origin()).join(c.origin()))
}

/// Moore–Penrose inverse, computed as the pseudoinverse of every Fourier slice.
pub fn moore_penrose(s: &Tensor3) -> Result<OuterResult> {
    let w = stack_pinv(&to_fourier(s), RankTol::current())?;
    Ok(OuterResult {
        inverse: from_fourier(&w.stack)?,
        prescription: Prescription::MoorePenrose,
        ranks_checked: vec![("rank_t(S)".into(), w.rank)],
        tolerance_used: w.cutoff,
        method: Method::Direct,
        witness: None,
    })
}

/// Moore–Penrose inverse through the two-sided formula with `B = C = S*`.
pub fn moore_penrose_two_sided(s: &Tensor3) -> Result<OuterResult> {
    let st = t_transpose(s);
    let mut r = outer_range_null(s, &st, &st)?;
    r.prescription = Prescription::MoorePenrose;
    Ok(r)
}

/// Drazin inverse `T^(2)` with range `R(T^k)` and null space `N(T^k)`,
/// `k` the t-index.
pub fn drazin(t: &Tensor3) -> Result<OuterResult> {
    t.require_square("drazin")?;
    let tol = RankTol::current();
    let f = to_fourier(t);
    let k = stack_indices(&f, tol)?.into_iter().max().unwrap_or(0);
    drazin_of_index(&f, k, tol, Prescription::Drazin(k))
}

fn drazin_of_index(f: &FourierStack, k: usize, tol: RankTol, prescription: Prescription) -> Result<OuterResult> {
    let tk = stack_power(f, k)?;
    let core = range_null_core(f, &tk, &tk, tol)?;
    let mut ranks = core.ranks;
    ranks.push(("ind_t(T)".into(), k));
    Ok(OuterResult {
        inverse: from_fourier(&core.x)?,
        prescription,
        ranks_checked: ranks,
        tolerance_used: core.cutoff,
        method: Method::Direct,
        witness: Some(from_fourier(&core.w)?),
    })
}

/// Group inverse: the Drazin inverse of a tensor of t-index at most one.
pub fn group_inverse(t: &Tensor3) -> Result<OuterResult> {
    t.require_square("group_inverse")?;
    let tol = RankTol::current();
    let f = to_fourier(t);
    let k = stack_indices(&f, tol)?.into_iter().max().unwrap_or(0);
    if k > 1 {
        return Err(Error::IndexTooLarge { index: k });
    }
    drazin_of_index(&f, k, tol, Prescription::Group)
}

fn mirror_qr(qr: &PivotedQr<Complex64>) -> PivotedQr<Complex64> {
    PivotedQr { q: conj_mat(qr.q.as_ref()), r: conj_mat(qr.r.as_ref()), perm: qr.perm.clone(), rank: qr.rank }
}

/// Column-pivoted QR of every Fourier slice with ranks decided against the
/// cutoff shared by the whole stack.
fn slice_qrcp(f: &FourierStack, tol: RankTol) -> Result<Vec<PivotedQr<Complex64>>> {
    let svds = f.svds()?;
    let cutoff = RankTol::Absolute(f.cutoff(&svds, tol));
    map_conjugate_pairs_with(f.n(), f.origin(), |k| Ok(linalg::qrcp(f.slice(k), cutoff)), mirror_qr)
}

fn uniform_rank(qrs: &[PivotedQr<Complex64>]) -> Result<usize> {
    let ranks: Vec<usize> = qrs.iter().map(|q| q.rank).collect();
    if ranks.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::NonUniformRank { ranks });
    }
    Ok(ranks.first().copied().unwrap_or(0))
}

/// t-QR with column pivoting, partitioned at the common slice rank `s`.
pub fn t_qrcp(t: &Tensor3) -> Result<TqrPartition> {
    let f = to_fourier(t);
    let (p, q, _) = f.dims();
    let qrs = slice_qrcp(&f, RankTol::current())?;
    let s = uniform_rank(&qrs)?;
    let origin = f.origin();
    let stack = |rows, cols, part: &dyn Fn(&PivotedQr<Complex64>) -> Mat<Complex64>| {
        FourierStack::new(rows, cols, qrs.iter().map(part).collect(), origin).and_then(|st| from_fourier(&st))
    };
    Ok(TqrPartition {
        qtil: stack(p, s, &|qr| qr.q_tilde().to_owned())?,
        rtil: stack(s, q, &|qr| qr.r_tilde().to_owned())?,
        perm: stack(q, q, &|qr| qr.permutation_matrix())?,
        s,
        slice_perms: qrs.iter().map(|qr| qr.perm.clone()).collect(),
    })
}

fn slice_rand_qrcp(
    f: &FourierStack,
    ranks: &[usize],
    oversample: usize,
    seed: u64,
) -> Result<Vec<PivotedQr<Complex64>>> {
    map_conjugate_pairs_with(
        f.n(),
        f.origin(),
        |k| match ranks[k] {
            0 => Ok(PivotedQr {
                q: linalg::identity(f.slice(k).nrows()),
                r: Mat::zeros(f.slice(k).nrows(), f.slice(k).ncols()),
                perm: (0..f.slice(k).ncols()).collect(),
                rank: 0,
            }),
            r => linalg::rand_qrcp(f.slice(k), r, oversample, slice_seed(seed, k)),
        },
        mirror_qr,
    )
}

fn slice_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_add((k as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Outer inverse `S{2}` with range `R(T)` and null space `N(T)`, computed as
/// `Q~ * (Q~' * T * S * Q~)^-1 * Q~' * T` from the t-QR factors of `T`.
pub fn outer_qr(s: &Tensor3, t: &Tensor3, method: &QrMethod) -> Result<OuterResult> {
    require_slices(s, t)?;
    if t.p() != s.q() || t.q() != s.p() {
        return Err(Error::DimensionMismatch(format!(
            "outer_qr needs T of shape {}x{}x{}, got {:?}",
            s.q(),
            s.p(),
            s.n(),
            t.dims()
        )));
    }
    let tol = RankTol::current();
    let (fs, ft) = (to_fourier(s), to_fourier(t));
    let n = fs.n();
    let (qrs, m) = match method {
        QrMethod::Deterministic => {
            let qrs = slice_qrcp(&ft, tol)?;
            uniform_rank(&qrs)?;
            (qrs, Method::Qr)
        }
        QrMethod::Randomized { rank, oversample, seed } => {
            let ranks = match rank {
                SliceRank::Uniform(k) => vec![*k; n],
                SliceRank::PerSlice(v) if v.len() == n => v.clone(),
                SliceRank::PerSlice(v) => {
                    return Err(Error::InvalidParameter(format!("{} slice ranks for {n} slices", v.len())))
                }
            };
            if ft.origin() == ScalarKind::Real && (1..n).any(|k| ranks[k] != ranks[n - k]) {
                return Err(Error::InvalidParameter(
                    "slice ranks of a real tensor must agree on conjugate slice pairs".into(),
                ));
            }
            (slice_rand_qrcp(&ft, &ranks, *oversample, *seed)?, Method::RandQr)
        }
    };

    let ts = ft.mul(&fs)?;
    let middles: Vec<Mat<Complex64>> = qrs
        .iter()
        .zip(ts.slices())
        .map(|(qr, tsk)| {
            let qt = qr.q_tilde();
            linalg::mul(linalg::mul_adj(qt, tsk.as_ref()).as_ref(), qt)
        })
        .collect();
    let svds: Vec<SliceSvd<Complex64>> = middles.iter().map(|m| SliceSvd::new(m.as_ref())).collect::<Result<_>>()?;
    let smax = svds.iter().map(|s| s.sigma_max()).fold(0.0, f64::max);
    let total: usize = qrs.iter().map(|qr| qr.rank).sum();
    let cutoff = tol.cutoff(total, total, smax);
    let middle_rank: usize = svds.iter().map(|s| s.rank(cutoff)).sum();
    let ranks = [("rank_t(Q~'*T*S*Q~)", middle_rank), ("rank_t(Q~)", total)];
    if middle_rank != total {
        return Err(Error::existence(&ranks));
    }

    let slices = map_conjugate_pairs(n, ft.origin().join(fs.origin()), |k| {
        let qt = qrs[k].q_tilde();
        let rhs = linalg::mul_adj(qt, ft.slice(k));
        let y = linalg::lu_solve(middles[k].as_ref(), rhs.as_ref()).map_err(|_| Error::existence(&ranks))?;
        Ok(linalg::mul(qt, y.as_ref()))
    })?;
    let x = FourierStack::new(s.q(), s.p(), slices, ft.origin().join(fs.origin()))?;
    Ok(OuterResult {
        inverse: from_fourier(&x)?,
        prescription: Prescription::QrFrom(t.clone()),
        ranks_checked: owned(&ranks),
        tolerance_used: cutoff,
        method: m,
        witness: None,
    })
}

/// The same outer inverse as [`outer_qr`] (deterministic) through the
/// permuted form `Q~ * (R~ * P' * S * Q~)^-1 * R~ * P'`.
pub fn outer_qr_permuted(s: &Tensor3, t: &Tensor3) -> Result<Tensor3> {
    let part = t_qrcp(t)?;
    let rp = tprod(&part.rtil, &t_transpose(&part.perm))?;
    let middle = tprod(&rp, &tprod(s, &part.qtil)?)?;
    let fm = to_fourier(&middle);
    let inv = fm.slices().iter().map(|d| linalg::lu_inverse(d.as_ref())).collect::<Result<Vec<_>>>()?;
    let middle_inv = from_fourier(&FourierStack::new(part.s, part.s, inv, fm.origin())?)?;
    tprod(&part.qtil, &tprod(&middle_inv, &rp)?)
}
