//! The same inverses computed on flattened `bcirc` matrices with dense
//! matrix kernels. Real operands are handled in real arithmetic.
//!
//! This path serves as an independent oracle for the Fourier-domain
//! implementation and as the matrix baseline in benchmarks.

use faer::{Mat, MatRef};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, RankTol, Scalar, SliceSvd};
use crate::tensor::{BlockMatrix, ScalarKind};

type Ranked<T> = Result<(Mat<T>, Vec<(String, usize)>)>;

/// A matrix-level result with the rank equalities that were checked.
#[derive(Clone, Debug)]
pub struct FlatResult {
    pub inverse: BlockMatrix,
    pub ranks_checked: Vec<(String, usize)>,
}

enum Dense {
    Real(Vec<Mat<f64>>),
    Complex(Vec<Mat<Complex64>>),
}

fn dense(ms: &[&BlockMatrix]) -> Dense {
    if ms.iter().all(|m| m.kind() == ScalarKind::Real) {
        Dense::Real(ms.iter().map(|m| m.to_real()).collect())
    } else {
        Dense::Complex(ms.iter().map(|m| m.entries().to_owned()).collect())
    }
}

fn wrap<T: Scalar>(m: Mat<T>, kind: ScalarKind) -> BlockMatrix {
    BlockMatrix::new(Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].to_c64()), kind)
}

fn dispatch<F, G>(ms: &[&BlockMatrix], real: F, complex: G) -> Result<FlatResult>
where
    F: FnOnce(&[Mat<f64>]) -> Result<(Mat<f64>, Vec<(String, usize)>)>,
    G: FnOnce(&[Mat<Complex64>]) -> Result<(Mat<Complex64>, Vec<(String, usize)>)>,
{
    match dense(ms) {
        Dense::Real(v) => real(&v).map(|(x, r)| FlatResult { inverse: wrap(x, ScalarKind::Real), ranks_checked: r }),
        Dense::Complex(v) => {
            complex(&v).map(|(x, r)| FlatResult { inverse: wrap(x, ScalarKind::Complex), ranks_checked: r })
        }
    }
}

fn check_mul<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Result<()> {
    if a.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch(format!("{}x{} times {}x{}", a.nrows(), a.ncols(), b.nrows(), b.ncols())));
    }
    Ok(())
}

fn mul<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Result<Mat<T>> {
    check_mul(a, b)?;
    Ok(linalg::mul(a, b))
}

fn checked(ranks: Vec<(&str, usize)>) -> Result<Vec<(String, usize)>> {
    if ranks.windows(2).any(|w| w[0].1 != w[1].1) {
        return Err(Error::existence(&ranks));
    }
    Ok(ranks.into_iter().map(|(n, r)| (n.to_string(), r)).collect())
}

fn range_g<T: Scalar>(s: MatRef<'_, T>, t: MatRef<'_, T>, tol: RankTol) -> Ranked<T> {
    let z = mul(s, t)?;
    let zs = SliceSvd::new(z.as_ref())?;
    let ranks = checked(vec![("rank(ST)", zs.rank(zs.cutoff(tol))), ("rank(T)", linalg::svd_rank(t, tol)?)])?;
    Ok((linalg::mul(t, zs.pinv(zs.cutoff(tol)).as_ref()), ranks))
}

fn null_g<T: Scalar>(s: MatRef<'_, T>, t: MatRef<'_, T>, tol: RankTol) -> Ranked<T> {
    let z = mul(t, s)?;
    let zs = SliceSvd::new(z.as_ref())?;
    let ranks = checked(vec![("rank(TS)", zs.rank(zs.cutoff(tol))), ("rank(T)", linalg::svd_rank(t, tol)?)])?;
    Ok((linalg::mul(zs.pinv(zs.cutoff(tol)).as_ref(), t), ranks))
}

fn range_null_g<T: Scalar>(t: MatRef<'_, T>, b: MatRef<'_, T>, c: MatRef<'_, T>, tol: RankTol) -> Ranked<T> {
    let z = mul(c, mul(t, b)?.as_ref())?;
    let zs = SliceSvd::new(z.as_ref())?;
    let ranks = checked(vec![
        ("rank(CTB)", zs.rank(zs.cutoff(tol))),
        ("rank(B)", linalg::svd_rank(b, tol)?),
        ("rank(C)", linalg::svd_rank(c, tol)?),
    ])?;
    let w = zs.pinv(zs.cutoff(tol));
    Ok((linalg::mul(b, linalg::mul(w.as_ref(), c).as_ref()), ranks))
}

fn index_g<T: Scalar>(a: MatRef<'_, T>, tol: RankTol) -> Result<usize> {
    let m = a.nrows();
    let mut prev = m;
    let mut power = a.to_owned();
    for j in 0..m {
        let r = linalg::svd_rank(power.as_ref(), tol)?;
        if r == prev {
            return Ok(j);
        }
        prev = r;
        power = linalg::mul(power.as_ref(), a);
    }
    Ok(m)
}

fn matrix_power<T: Scalar>(a: MatRef<'_, T>, k: usize) -> Mat<T> {
    let mut p = linalg::identity::<T>(a.nrows());
    for _ in 0..k {
        p = linalg::mul(p.as_ref(), a);
    }
    p
}

fn drazin_g<T: Scalar>(a: MatRef<'_, T>, k: usize, tol: RankTol) -> Ranked<T> {
    let ak = matrix_power(a, k);
    let (x, mut ranks) = range_null_g(a, ak.as_ref(), ak.as_ref(), tol)?;
    ranks.push(("ind".into(), k));
    Ok((x, ranks))
}

fn require_square(a: &BlockMatrix) -> Result<()> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!("square matrix required, got {}x{}", a.rows(), a.cols())));
    }
    Ok(())
}

/// `T (S T)^+`.
pub fn outer_range(s: &BlockMatrix, t: &BlockMatrix) -> Result<FlatResult> {
    let tol = RankTol::current();
    dispatch(&[s, t], |v| range_g(v[0].as_ref(), v[1].as_ref(), tol), |v| range_g(v[0].as_ref(), v[1].as_ref(), tol))
}

/// `(T S)^+ T`.
pub fn outer_null(s: &BlockMatrix, t: &BlockMatrix) -> Result<FlatResult> {
    let tol = RankTol::current();
    dispatch(&[s, t], |v| null_g(v[0].as_ref(), v[1].as_ref(), tol), |v| null_g(v[0].as_ref(), v[1].as_ref(), tol))
}

/// `B (C T B)^+ C`.
pub fn outer_range_null(t: &BlockMatrix, b: &BlockMatrix, c: &BlockMatrix) -> Result<FlatResult> {
    let tol = RankTol::current();
    dispatch(
        &[t, b, c],
        |v| range_null_g(v[0].as_ref(), v[1].as_ref(), v[2].as_ref(), tol),
        |v| range_null_g(v[0].as_ref(), v[1].as_ref(), v[2].as_ref(), tol),
    )
}

pub fn moore_penrose(s: &BlockMatrix) -> Result<FlatResult> {
    let tol = RankTol::current();
    fn mp<T: Scalar>(a: MatRef<'_, T>, tol: RankTol) -> Ranked<T> {
        let svd = SliceSvd::new(a)?;
        let c = svd.cutoff(tol);
        Ok((svd.pinv(c), vec![("rank(S)".into(), svd.rank(c))]))
    }
    dispatch(&[s], |v| mp(v[0].as_ref(), tol), |v| mp(v[0].as_ref(), tol))
}

/// Index of a square matrix: smallest `k ≥ 0` with `rank(A^k) = rank(A^{k+1})`.
pub fn index(a: &BlockMatrix) -> Result<usize> {
    require_square(a)?;
    let tol = RankTol::current();
    match dense(&[a]) {
        Dense::Real(v) => index_g(v[0].as_ref(), tol),
        Dense::Complex(v) => index_g(v[0].as_ref(), tol),
    }
}

pub fn drazin(a: &BlockMatrix) -> Result<FlatResult> {
    let k = index(a)?;
    let tol = RankTol::current();
    dispatch(&[a], |v| drazin_g(v[0].as_ref(), k, tol), |v| drazin_g(v[0].as_ref(), k, tol))
}

pub fn group_inverse(a: &BlockMatrix) -> Result<FlatResult> {
    let k = index(a)?;
    if k > 1 {
        return Err(Error::IndexTooLarge { index: k });
    }
    let tol = RankTol::current();
    dispatch(&[a], |v| drazin_g(v[0].as_ref(), k, tol), |v| drazin_g(v[0].as_ref(), k, tol))
}

fn qr_g<T: Scalar>(s: MatRef<'_, T>, t: MatRef<'_, T>, rank: Option<(usize, usize, u64)>, tol: RankTol) -> Ranked<T> {
    let qr = match rank {
        None => linalg::qrcp(t, tol),
        Some((k, oversample, seed)) => linalg::rand_qrcp(t, k, oversample, seed)?,
    };
    let qt = qr.q_tilde();
    let ts = mul(t, s)?;
    let middle = linalg::mul(linalg::mul_adj(qt, ts.as_ref()).as_ref(), qt);
    let mr = linalg::svd_rank(middle.as_ref(), tol)?;
    let ranks = checked(vec![("rank(Q'TSQ)", mr), ("rank(Q)", qr.rank)])?;
    let rhs = linalg::mul_adj(qt, t);
    let y = linalg::lu_solve(middle.as_ref(), rhs.as_ref())
        .map_err(|_| Error::existence(&[("rank(Q'TSQ)", mr.saturating_sub(1)), ("rank(Q)", qr.rank)]))?;
    Ok((linalg::mul(qt, y.as_ref()), ranks))
}

/// `Q~ (Q~' T S Q~)^-1 Q~' T` from a pivoted QR of `T`.
pub fn outer_qr(s: &BlockMatrix, t: &BlockMatrix) -> Result<FlatResult> {
    let tol = RankTol::current();
    dispatch(
        &[s, t],
        |v| qr_g(v[0].as_ref(), v[1].as_ref(), None, tol),
        |v| qr_g(v[0].as_ref(), v[1].as_ref(), None, tol),
    )
}

/// [`outer_qr`] with the pivot order taken from a Gaussian sketch of `T`.
pub fn outer_rand_qr(s: &BlockMatrix, t: &BlockMatrix, k: usize, oversample: usize, seed: u64) -> Result<FlatResult> {
    let tol = RankTol::current();
    let r = Some((k, oversample, seed));
    dispatch(&[s, t], |v| qr_g(v[0].as_ref(), v[1].as_ref(), r, tol), |v| qr_g(v[0].as_ref(), v[1].as_ref(), r, tol))
}

/// Conjugate transpose.
pub fn adjoint(a: &BlockMatrix) -> BlockMatrix {
    BlockMatrix::new(linalg::adjoint(a.entries()), a.kind())
}

/// Product of two flattened operands.
pub fn product(a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
    check_mul(a.entries(), b.entries())?;
    Ok(BlockMatrix::new(linalg::mul(a.entries(), b.entries()), a.kind().join(b.kind())))
}

/// `A^k`.
pub fn power(a: &BlockMatrix, k: usize) -> Result<BlockMatrix> {
    require_square(a)?;
    Ok(BlockMatrix::new(matrix_power(a.entries(), k), a.kind()))
}
