//! Dense third-order tensors and the structural operators of the t-product
//! calculus: frontal slices, `bcirc`/`unfold`/`fold`, the t-product itself,
//! t-transpose, identity, inverse, norms, t-rank and t-index.

use faer::{Mat, MatRef};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{from_fourier, to_fourier, FourierStack};
use crate::linalg::{self, RankTol};

/// Whether a tensor's entries are real (all imaginary parts exactly zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Real,
    Complex,
}

impl ScalarKind {
    /// Kind of a product or sum of operands of these kinds.
    pub fn join(self, other: ScalarKind) -> ScalarKind {
        if self == ScalarKind::Real && other == ScalarKind::Real {
            ScalarKind::Real
        } else {
            ScalarKind::Complex
        }
    }
}

/// Dense `p × q × n` tensor. Entries are stored slice-major with each frontal
/// slice in column-major order, so slice `k` is the contiguous range
/// `k*p*q .. (k+1)*p*q`.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    p: usize,
    q: usize,
    n: usize,
    data: Vec<Complex64>,
    kind: ScalarKind,
}

impl Tensor3 {
    pub fn zeros(p: usize, q: usize, n: usize) -> Self {
        Self { p, q, n, data: vec![Complex64::new(0.0, 0.0); p * q * n], kind: ScalarKind::Real }
    }

    fn check_len(p: usize, q: usize, n: usize, len: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::DimensionMismatch("a tensor needs at least one frontal slice".into()));
        }
        if len != p * q * n {
            return Err(Error::DimensionMismatch(format!("{len} entries for a {p}x{q}x{n} tensor")));
        }
        Ok(())
    }

    pub fn from_real(p: usize, q: usize, n: usize, data: Vec<f64>) -> Result<Self> {
        Self::check_len(p, q, n, data.len())?;
        let data = data.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
        Ok(Self { p, q, n, data, kind: ScalarKind::Real })
    }

    pub fn from_complex(p: usize, q: usize, n: usize, data: Vec<Complex64>) -> Result<Self> {
        Self::check_len(p, q, n, data.len())?;
        Ok(Self { p, q, n, data, kind: ScalarKind::Complex })
    }

    /// Builds a tensor of the given kind; a `Real` request is refused if any
    /// imaginary part is nonzero.
    pub fn from_data(p: usize, q: usize, n: usize, data: Vec<Complex64>, kind: ScalarKind) -> Result<Self> {
        Self::check_len(p, q, n, data.len())?;
        if kind == ScalarKind::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidParameter("real tensor with nonzero imaginary parts".into()));
        }
        Ok(Self { p, q, n, data, kind })
    }

    /// Real tensor from nested arrays indexed `[slice][row][col]`.
    pub fn from_array<const P: usize, const Q: usize, const N: usize>(slices: [[[f64; Q]; P]; N]) -> Self {
        Self::from_fn(P, Q, N, |i, j, k| slices[k][i][j])
    }

    /// Real tensor with entry `(i, j, k)` equal to `f(i, j, k)`.
    pub fn from_fn(p: usize, q: usize, n: usize, f: impl Fn(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(p * q * n);
        for k in 0..n {
            for j in 0..q {
                for i in 0..p {
                    data.push(Complex64::new(f(i, j, k), 0.0));
                }
            }
        }
        Self { p, q, n, data, kind: ScalarKind::Real }
    }

    /// Stacks equally sized complex slices.
    pub fn from_slices(slices: &[Mat<Complex64>], kind: ScalarKind) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::DimensionMismatch("a tensor needs at least one frontal slice".into()))?;
        let (p, q) = (first.nrows(), first.ncols());
        let mut data = Vec::with_capacity(p * q * slices.len());
        for s in slices {
            if s.nrows() != p || s.ncols() != q {
                return Err(Error::DimensionMismatch(format!(
                    "slice is {}x{}, expected {p}x{q}",
                    s.nrows(),
                    s.ncols()
                )));
            }
            for j in 0..q {
                for i in 0..p {
                    data.push(s[(i, j)]);
                }
            }
        }
        Self::from_data(p, q, slices.len(), data, kind)
    }

    pub fn from_real_slices(slices: &[Mat<f64>]) -> Result<Self> {
        let c: Vec<Mat<Complex64>> =
            slices.iter().map(|s| Mat::from_fn(s.nrows(), s.ncols(), |i, j| Complex64::new(s[(i, j)], 0.0))).collect();
        Self::from_slices(&c, ScalarKind::Real)
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.n)
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn is_real(&self) -> bool {
        self.kind == ScalarKind::Real
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Complex64 {
        self.data[k * self.p * self.q + j * self.p + i]
    }

    /// Borrowed view of frontal slice `k` (0-based).
    pub fn slice(&self, k: usize) -> MatRef<'_, Complex64> {
        let pq = self.p * self.q;
        MatRef::from_column_major_slice(&self.data[k * pq..(k + 1) * pq], self.p, self.q)
    }

    pub fn frontal_slice(&self, k: usize) -> Mat<Complex64> {
        self.slice(k).to_owned()
    }

    /// Real parts of frontal slice `k`.
    pub fn real_slice(&self, k: usize) -> Mat<f64> {
        let s = self.slice(k);
        Mat::from_fn(self.p, self.q, |i, j| s[(i, j)].re)
    }

    pub fn slices(&self) -> impl Iterator<Item = MatRef<'_, Complex64>> + '_ {
        (0..self.n).map(move |k| self.slice(k))
    }

    /// Root-sum-square of all entries (no `√n` factor).
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims(), other.dims(), "max_abs_diff on tensors of different shapes");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, alpha: Complex64) -> Tensor3 {
        let kind = if alpha.im == 0.0 { self.kind } else { ScalarKind::Complex };
        Tensor3 { data: self.data.iter().map(|z| z * alpha).collect(), kind, ..*self }
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: Complex64, other: &Tensor3, b: Complex64) -> Result<Tensor3> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch(format!("cannot combine {:?} and {:?}", self.dims(), other.dims())));
        }
        let kind = if a.im == 0.0 && b.im == 0.0 { self.kind.join(other.kind) } else { ScalarKind::Complex };
        let data = self.data.iter().zip(&other.data).map(|(x, y)| a * x + b * y).collect();
        Ok(Tensor3 { data, kind, ..*self })
    }

    pub fn add(&self, other: &Tensor3) -> Result<Tensor3> {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(1.0, 0.0))
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.lin_comb(Complex64::new(1.0, 0.0), other, Complex64::new(-1.0, 0.0))
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<()> {
        if self.p != self.q {
            return Err(Error::DimensionMismatch(format!(
                "{what} needs square frontal slices, got {}x{}",
                self.p, self.q
            )));
        }
        Ok(())
    }
}

/// A dense matrix obtained by flattening a tensor (`bcirc`, `unfold`) or
/// produced on the flattened path.
#[derive(Clone, Debug)]
pub struct BlockMatrix {
    entries: Mat<Complex64>,
    kind: ScalarKind,
    /// `(p, q, n)` of the tensor this matrix was built from, if any.
    pub blocks: Option<(usize, usize, usize)>,
}

impl BlockMatrix {
    pub fn new(entries: Mat<Complex64>, kind: ScalarKind) -> Self {
        Self { entries, kind, blocks: None }
    }

    pub fn from_real(entries: &Mat<f64>) -> Self {
        let e = Mat::from_fn(entries.nrows(), entries.ncols(), |i, j| Complex64::new(entries[(i, j)], 0.0));
        Self { entries: e, kind: ScalarKind::Real, blocks: None }
    }

    pub fn with_blocks(mut self, p: usize, q: usize, n: usize) -> Self {
        self.blocks = Some((p, q, n));
        self
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn kind(&self) -> ScalarKind {
        self.kind
    }

    pub fn entries(&self) -> MatRef<'_, Complex64> {
        self.entries.as_ref()
    }

    pub fn into_entries(self) -> Mat<Complex64> {
        self.entries
    }

    /// Real parts as an `f64` matrix.
    pub fn to_real(&self) -> Mat<f64> {
        Mat::from_fn(self.rows(), self.cols(), |i, j| self.entries[(i, j)].re)
    }

    pub fn fro_norm(&self) -> f64 {
        linalg::fro_norm(self.entries.as_ref())
    }
}

/// Block-circulant `pn × qn` matrix; block `(i, j)` is frontal slice
/// `(i − j) mod n`.
pub fn bcirc(t: &Tensor3) -> BlockMatrix {
    let (p, q, n) = t.dims();
    let entries = Mat::from_fn(p * n, q * n, |r, c| {
        let (bi, i) = (r / p, r % p);
        let (bj, j) = (c / q, c % q);
        t.get(i, j, (bi + n - bj) % n)
    });
    BlockMatrix { entries, kind: t.kind(), blocks: Some((p, q, n)) }
}

/// Frontal slices stacked vertically into a `pn × q` matrix.
pub fn unfold(t: &Tensor3) -> BlockMatrix {
    let (p, q, n) = t.dims();
    let entries = Mat::from_fn(p * n, q, |r, j| t.get(r % p, j, r / p));
    BlockMatrix { entries, kind: t.kind(), blocks: Some((p, q, n)) }
}

/// Inverse of [`unfold`]: `m` must be `pn × q`.
pub fn fold(m: &BlockMatrix, p: usize, q: usize, n: usize) -> Result<Tensor3> {
    if m.rows() != p * n || m.cols() != q {
        return Err(Error::DimensionMismatch(format!(
            "fold to {p}x{q}x{n} needs a {}x{q} matrix, got {}x{}",
            p * n,
            m.rows(),
            m.cols()
        )));
    }
    let e = m.entries();
    let mut data = Vec::with_capacity(p * q * n);
    for k in 0..n {
        for j in 0..q {
            for i in 0..p {
                data.push(e[(k * p + i, j)]);
            }
        }
    }
    Tensor3::from_data(p, q, n, data, m.kind())
}

/// Tensor whose frontal slices are the first block column of `m` (`pn × qn`).
pub fn bcirc_inv(m: &BlockMatrix, p: usize, q: usize, n: usize) -> Result<Tensor3> {
    if m.rows() != p * n || m.cols() != q * n {
        return Err(Error::DimensionMismatch(format!(
            "bcirc_inv to {p}x{q}x{n} needs a {}x{} matrix, got {}x{}",
            p * n,
            q * n,
            m.rows(),
            m.cols()
        )));
    }
    let e = m.entries();
    let mut data = Vec::with_capacity(p * q * n);
    for k in 0..n {
        for j in 0..q {
            for i in 0..p {
                data.push(e[(k * p + i, j)]);
            }
        }
    }
    Tensor3::from_data(p, q, n, data, m.kind())
}

/// Like [`bcirc_inv`], but rejects `m` when some block differs from the
/// block-circulant pattern by more than `tol · max(1, max|m_ij|)`.
pub fn bcirc_inv_strict(m: &BlockMatrix, p: usize, q: usize, n: usize, tol: f64) -> Result<Tensor3> {
    let t = bcirc_inv(m, p, q, n)?;
    let e = m.entries();
    let mut deviation: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for c in 0..q * n {
        for r in 0..p * n {
            let expect = t.get(r % p, c % q, (r / p + n - c / q) % n);
            deviation = deviation.max((e[(r, c)] - expect).norm());
            scale = scale.max(e[(r, c)].norm());
        }
    }
    let tolerance = tol * scale;
    if deviation > tolerance {
        return Err(Error::NotBlockCirculant { deviation, tolerance });
    }
    Ok(t)
}

fn check_tprod_dims(s: &Tensor3, t: &Tensor3) -> Result<()> {
    if s.q() != t.p() || s.n() != t.n() {
        return Err(Error::DimensionMismatch(format!("t-product of {:?} and {:?}", s.dims(), t.dims())));
    }
    Ok(())
}

/// t-product `S * T` of a `p × q × n` and a `q × l × n` tensor, computed as
/// slicewise products in the Fourier domain.
pub fn tprod(s: &Tensor3, t: &Tensor3) -> Result<Tensor3> {
    check_tprod_dims(s, t)?;
    from_fourier(&to_fourier(s).mul(&to_fourier(t))?)
}

/// t-product evaluated literally as `fold(bcirc(S) · unfold(T))`.
pub fn tprod_naive(s: &Tensor3, t: &Tensor3) -> Result<Tensor3> {
    check_tprod_dims(s, t)?;
    let prod = linalg::mul(bcirc(s).entries(), unfold(t).entries());
    let kind = s.kind().join(t.kind());
    let m = BlockMatrix::new(prod, kind);
    let (p, l, n) = (s.p(), t.q(), s.n());
    let e = m.entries();
    let data = (0..p * l * n)
        .map(|idx| {
            let k = idx / (p * l);
            let r = idx % (p * l);
            let (i, j) = (r % p, r / p);
            let z = e[(k * p + i, j)];
            if kind == ScalarKind::Real {
                Complex64::new(z.re, 0.0)
            } else {
                z
            }
        })
        .collect();
    Tensor3::from_data(p, l, n, data, kind)
}

/// Conjugate transpose `T*` with `bcirc(T*) = bcirc(T)ᴴ`: every slice is
/// conjugate-transposed and slices `1..n` are taken in reverse order.
pub fn t_transpose(t: &Tensor3) -> Tensor3 {
    let (p, q, n) = t.dims();
    let mut data = Vec::with_capacity(p * q * n);
    for k in 0..n {
        let src = (n - k) % n;
        for j in 0..p {
            for i in 0..q {
                data.push(t.get(j, i, src).conj());
            }
        }
    }
    Tensor3 { p: q, q: p, n, data, kind: t.kind() }
}

/// `m × m × n` identity: first slice `I_m`, the rest zero.
pub fn identity_tensor(m: usize, n: usize) -> Tensor3 {
    Tensor3::from_fn(m, m, n, |i, j, k| if k == 0 && i == j { 1.0 } else { 0.0 })
}

/// Inverse under the t-product, slice by slice in the Fourier domain.
pub fn t_inverse(t: &Tensor3) -> Result<Tensor3> {
    t.require_square("t_inverse")?;
    let f = to_fourier(t);
    let ranks = f.slice_ranks(RankTol::current())?;
    let m = t.p();
    if let Some((k, r)) = ranks.iter().enumerate().find(|(_, &r)| r < m) {
        return Err(Error::Singular(format!("Fourier slice {k} has numerical rank {r} < {m}")));
    }
    let inv: Vec<Mat<Complex64>> = f.slices().iter().map(|d| linalg::lu_inverse(d.as_ref())).collect::<Result<_>>()?;
    from_fourier(&FourierStack::new(m, m, inv, t.kind())?)
}

/// Entrywise Frobenius norm.
pub fn fro_norm(t: &Tensor3) -> f64 {
    t.fro_norm()
}

/// Largest singular value over all Fourier slices, equal to `‖bcirc(T)‖₂`.
pub fn spec_norm(t: &Tensor3) -> Result<f64> {
    let f = to_fourier(t);
    let mut best: f64 = 0.0;
    for d in f.slices() {
        let s = linalg::singular_values(d.as_ref())?;
        best = best.max(s.first().copied().unwrap_or(0.0));
    }
    Ok(best)
}

/// Spectral condition number `‖T‖₂ · ‖T⁻¹‖₂`.
pub fn cond(t: &Tensor3) -> Result<f64> {
    Ok(spec_norm(t)? * spec_norm(&t_inverse(t)?)?)
}

/// Sum of the numerical ranks of the Fourier slices under one cutoff shared
/// by all slices, i.e. the numerical rank of `bcirc(T)`.
pub fn t_rank(t: &Tensor3, tol: RankTol) -> Result<usize> {
    Ok(to_fourier(t).slice_ranks(tol)?.iter().sum())
}

/// Per-slice index of a stack of square slices: for each slice the smallest
/// `j ≥ 0` with `rank(D^j) = rank(D^{j+1})`, capped at the slice size.
pub(crate) fn stack_indices(f: &FourierStack, tol: RankTol) -> Result<Vec<usize>> {
    let (m, _, n) = f.dims();
    let mut prev_ranks = vec![m; n];
    let mut index: Vec<Option<usize>> = vec![None; n];
    let mut power = f.clone();
    for j in 0..m {
        let ranks = power.slice_ranks(tol)?;
        for k in 0..n {
            if index[k].is_none() && ranks[k] == prev_ranks[k] {
                index[k] = Some(j);
            }
        }
        if index.iter().all(Option::is_some) {
            break;
        }
        prev_ranks = ranks;
        power = power.mul(f)?;
    }
    Ok(index.into_iter().map(|i| i.unwrap_or(m)).collect())
}

/// Index of `bcirc(T)`: the maximum index over the Fourier slices.
pub fn t_index(t: &Tensor3) -> Result<usize> {
    t_index_with(t, RankTol::current())
}

pub fn t_index_with(t: &Tensor3, tol: RankTol) -> Result<usize> {
    t.require_square("t_index")?;
    Ok(stack_indices(&to_fourier(t), tol)?.into_iter().max().unwrap_or(0))
}

/// `T^k` under the t-product; `T^0` is the identity tensor.
pub fn t_power(t: &Tensor3, k: usize) -> Result<Tensor3> {
    t.require_square("t_power")?;
    if k == 0 {
        return Ok(identity_tensor(t.p(), t.n()));
    }
    from_fourier(&stack_power(&to_fourier(t), k)?)
}

pub(crate) fn stack_power(f: &FourierStack, k: usize) -> Result<FourierStack> {
    let (m, _, n) = f.dims();
    if k == 0 {
        return FourierStack::new(m, m, vec![linalg::identity(m); n], f.origin());
    }
    let mut acc = f.clone();
    for _ in 1..k {
        acc = acc.mul(f)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_s() -> Tensor3 {
        Tensor3::from_array([[[1.0, 1.0], [-2.0, 0.0]], [[0.0, 1.0], [1.0, -2.0]], [[0.0, -1.0], [1.0, 2.0]]])
    }

    fn example_t() -> Tensor3 {
        Tensor3::from_array([
            [[-1.0, 1.0, -2.0], [-2.0, 1.0, -2.0]],
            [[-2.0, 1.0, 1.0], [2.0, -2.0, 0.0]],
            [[2.0, -1.0, 2.0], [0.0, 1.0, 2.0]],
        ])
    }

    fn pseudo_random(p: usize, q: usize, n: usize, seed: u64) -> Tensor3 {
        let g: Mat<f64> = linalg::gaussian_matrix(p * q, n, seed);
        Tensor3::from_fn(p, q, n, |i, j, k| g[(i + j * p, k)])
    }

    #[test]
    fn slices_reassemble_bit_exactly() {
        let t = example_t();
        let slices: Vec<Mat<Complex64>> = (0..t.n()).map(|k| t.frontal_slice(k)).collect();
        assert_eq!(Tensor3::from_slices(&slices, ScalarKind::Real).unwrap(), t);
    }

    #[test]
    fn construction_validates_length_and_realness() {
        assert!(Tensor3::from_real(2, 2, 2, vec![0.0; 7]).is_err());
        assert!(Tensor3::from_real(2, 2, 0, vec![]).is_err());
        let bad = vec![Complex64::new(0.0, 1.0); 4];
        assert!(Tensor3::from_data(2, 2, 1, bad, ScalarKind::Real).is_err());
    }

    #[test]
    fn bcirc_single_slice_is_the_slice() {
        let t = Tensor3::from_array([[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]]);
        let b = bcirc(&t);
        assert_eq!((b.rows(), b.cols()), (2, 3));
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(b.entries()[(i, j)], t.get(i, j, 0));
            }
        }
    }

    #[test]
    fn bcirc_circulant_layout() {
        let s = example_s();
        let b = bcirc(&s);
        assert_eq!((b.rows(), b.cols()), (6, 6));
        // block rows (S1 S3 S2 / S2 S1 S3 / S3 S2 S1)
        let layout = [[0, 2, 1], [1, 0, 2], [2, 1, 0]];
        for (bi, row) in layout.iter().enumerate() {
            for (bj, &k) in row.iter().enumerate() {
                for i in 0..2 {
                    for j in 0..2 {
                        assert_eq!(b.entries()[(bi * 2 + i, bj * 2 + j)], s.get(i, j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn bcirc_of_identity_is_identity() {
        let b = bcirc(&identity_tensor(3, 4));
        let i = linalg::identity::<Complex64>(12);
        assert_eq!(linalg::fro_norm(linalg::sub(b.entries(), i.as_ref()).as_ref()), 0.0);
        assert_eq!(bcirc_inv(&b, 3, 3, 4).unwrap(), identity_tensor(3, 4));
    }

    #[test]
    fn unfold_fold_round_trip() {
        let t = example_t();
        let u = unfold(&t);
        assert_eq!((u.rows(), u.cols()), (6, 3));
        assert_eq!(fold(&u, 2, 3, 3).unwrap(), t);
        let single = Tensor3::from_array([[[1.0, 2.0], [3.0, 4.0]]]);
        assert_eq!(unfold(&single).entries()[(1, 0)], Complex64::new(3.0, 0.0));
        assert_eq!(unfold(&Tensor3::zeros(2, 2, 3)).fro_norm(), 0.0);
        assert!(fold(&u, 3, 3, 3).is_err());
    }

    #[test]
    fn bcirc_inv_round_trip_and_strict_mode() {
        let t = example_t();
        let b = bcirc(&t);
        assert_eq!(bcirc_inv(&b, 2, 3, 3).unwrap(), t);
        assert!(bcirc_inv_strict(&b, 2, 3, 3, 1e-12).is_ok());
        let mut e = b.entries().to_owned();
        e[(3, 4)] += Complex64::new(0.5, 0.0);
        let broken = BlockMatrix::new(e, ScalarKind::Real);
        assert!(matches!(bcirc_inv_strict(&broken, 2, 3, 3, 1e-12), Err(Error::NotBlockCirculant { .. })));
        assert!(bcirc_inv(&b, 2, 2, 3).is_err());
    }

    #[test]
    fn bcirc_product_folds_to_tprod() {
        let (s, t) = (example_s(), example_t());
        let prod = linalg::mul(bcirc(&s).entries(), bcirc(&t).entries());
        let folded = bcirc_inv(&BlockMatrix::new(prod, ScalarKind::Real), 2, 3, 3).unwrap();
        let fast = tprod(&s, &t).unwrap();
        assert!(folded.max_abs_diff(&fast) < 1e-12);
    }

    #[test]
    fn tprod_identity_and_dims() {
        let t = example_t();
        let it = tprod(&identity_tensor(2, 3), &t).unwrap();
        assert!(it.max_abs_diff(&t) < 1e-14);
        assert!(matches!(tprod(&t, &t), Err(Error::DimensionMismatch(_))));
        let other_n = Tensor3::zeros(3, 2, 2);
        assert!(tprod(&t, &other_n).is_err());
    }

    #[test]
    fn tprod_matches_naive_path() {
        let a = pseudo_random(3, 2, 4, 1);
        let b = pseudo_random(2, 5, 4, 2);
        let fast = tprod(&a, &b).unwrap();
        let slow = tprod_naive(&a, &b).unwrap();
        assert_eq!(fast.dims(), (3, 5, 4));
        assert!(fast.max_abs_diff(&slow) < 1e-13);
    }

    #[test]
    fn t_transpose_properties() {
        let single = Tensor3::from_array([[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]]);
        let st = t_transpose(&single);
        assert_eq!(st.dims(), (3, 2, 1));
        assert_eq!(st.get(2, 1, 0), single.get(1, 2, 0));
        let s = example_s();
        assert_eq!(t_transpose(&t_transpose(&s)), s);
        let lhs = bcirc(&t_transpose(&s));
        let rhs = linalg::adjoint(bcirc(&s).entries());
        assert_eq!(linalg::fro_norm(linalg::sub(lhs.entries(), rhs.as_ref()).as_ref()), 0.0);
        assert_eq!(t_transpose(&identity_tensor(3, 4)), identity_tensor(3, 4));
    }

    #[test]
    fn t_inverse_cases() {
        assert!(t_inverse(&identity_tensor(3, 2)).unwrap().max_abs_diff(&identity_tensor(3, 2)) < 1e-15);
        // D_k = 2I for all k  <=>  T = 2I in slice 0 only
        let two = identity_tensor(2, 3).scale(Complex64::new(2.0, 0.0));
        let half = t_inverse(&two).unwrap();
        assert!(half.max_abs_diff(&identity_tensor(2, 3).scale(Complex64::new(0.5, 0.0))) < 1e-15);

        let t = pseudo_random(4, 4, 3, 9).add(&identity_tensor(4, 3).scale(Complex64::new(4.0, 0.0))).unwrap();
        let x = t_inverse(&t).unwrap();
        let prod = linalg::mul(bcirc(&t).entries(), bcirc(&x).entries());
        let d = linalg::sub(prod.as_ref(), linalg::identity::<Complex64>(12).as_ref());
        assert!(linalg::fro_norm(d.as_ref()) <= 1e-10);

        let singular = Tensor3::from_array([[[1.0, 1.0], [1.0, 1.0]], [[0.0, 0.0], [0.0, 0.0]]]);
        assert!(matches!(t_inverse(&singular), Err(Error::Singular(_))));
        assert!(matches!(cond(&singular), Err(Error::Singular(_))));
        assert!(t_inverse(&example_t()).is_err());
    }

    #[test]
    fn norms() {
        let i = identity_tensor(3, 4);
        assert!((spec_norm(&i).unwrap() - 1.0).abs() < 1e-15);
        assert!((cond(&i).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fro_norm(&Tensor3::zeros(2, 3, 4)), 0.0);

        let t = pseudo_random(3, 4, 5, 3);
        let oracle = linalg::singular_values(bcirc(&t).entries()).unwrap()[0];
        assert!((spec_norm(&t).unwrap() - oracle).abs() <= 1e-12 * oracle);
        let bf = bcirc(&t).fro_norm();
        assert!((t.fro_norm() * (5f64).sqrt() - bf).abs() <= 1e-12 * bf);
    }

    #[test]
    fn t_rank_values() {
        assert_eq!(t_rank(&example_t(), RankTol::Auto).unwrap(), 5);
        assert_eq!(t_rank(&tprod(&example_s(), &example_t()).unwrap(), RankTol::Auto).unwrap(), 5);
        assert_eq!(t_rank(&Tensor3::zeros(3, 3, 3), RankTol::Auto).unwrap(), 0);
        // replicated slices: only the zero-frequency slice survives
        let rep = Tensor3::from_fn(2, 3, 3, |i, j, _| [[1.0, 2.0, 1.0], [0.0, 0.0, 1.0]][i][j]);
        assert_eq!(t_rank(&rep, RankTol::Auto).unwrap(), 2);
        let t = pseudo_random(4, 3, 3, 5);
        let oracle = linalg::svd_rank(bcirc(&t).entries(), RankTol::Auto).unwrap();
        assert_eq!(t_rank(&t, RankTol::Auto).unwrap(), oracle);
    }

    #[test]
    fn t_index_values() {
        assert_eq!(t_index_with(&identity_tensor(3, 2), RankTol::Auto).unwrap(), 0);
        let jordan = Tensor3::from_array([[[0.0, 1.0], [0.0, 0.0]]]);
        assert_eq!(t_index_with(&jordan, RankTol::Auto).unwrap(), 2);
        assert!(t_index_with(&example_t(), RankTol::Auto).is_err());
    }

    #[test]
    fn t_power_values() {
        let s = example_s();
        assert_eq!(t_power(&s, 0).unwrap(), identity_tensor(2, 3));
        assert!(t_power(&s, 1).unwrap().max_abs_diff(&s) < 1e-14);
        let b = bcirc(&s);
        let sq = linalg::mul(b.entries(), b.entries());
        let oracle = bcirc_inv(&BlockMatrix::new(sq, ScalarKind::Real), 2, 2, 3).unwrap();
        assert!(t_power(&s, 2).unwrap().max_abs_diff(&oracle) < 1e-13);
        assert!(t_power(&example_t(), 2).is_err());
    }

    #[test]
    fn scalar_kind_propagates() {
        let c = Tensor3::from_complex(1, 1, 2, vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]).unwrap();
        let r = Tensor3::from_array([[[2.0]], [[1.0]]]);
        assert_eq!(tprod(&c, &r).unwrap().kind(), ScalarKind::Complex);
        assert_eq!(tprod(&r, &r).unwrap().kind(), ScalarKind::Real);
    }
}
