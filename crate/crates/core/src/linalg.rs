//! Dense matrix kernels applied to single Fourier slices and to flattened
//! block-circulant matrices.
//!
//! SVD, LU and matrix products come from `faer`; the column-pivoted and the
//! sketched (randomized) Householder QR factorizations are implemented here.
//! Every kernel is generic over [`Scalar`] so the flattened path can stay in
//! real arithmetic when the source tensor is real.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{OnceLock, RwLock};

use faer::linalg::matmul::{matmul, matmul_with_conj};
use faer::linalg::solvers::{DenseSolveCore, PartialPivLu, Solve};
use faer::traits::ComplexField;
use faer::{Accum, Conj, Mat, MatRef, Par};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Environment variable consulted for the default relative rank tolerance.
pub const RANK_TOL_ENV: &str = "TOUTER_RANK_TOL";

/// Field of matrix entries: `f64` or `Complex64`.
pub trait Scalar:
    ComplexField<Real = f64>
    + Copy
    + Send
    + Sync
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_real(x: f64) -> Self;
    /// Drops the imaginary part when `Self` is real.
    fn from_c64(z: Complex64) -> Self;
    fn to_c64(self) -> Complex64;
    fn conjugate(self) -> Self;
    fn modulus(self) -> f64;
    fn modulus_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;
}

impl Scalar for f64 {
    fn from_real(x: f64) -> Self {
        x
    }
    fn from_c64(z: Complex64) -> Self {
        z.re
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn conjugate(self) -> Self {
        self
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn modulus_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

impl Scalar for Complex64 {
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn to_c64(self) -> Complex64 {
        self
    }
    fn conjugate(self) -> Self {
        self.conj()
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn modulus_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
}

/// Policy for turning singular values (or pivoted `|R_ii|`) into a numerical rank.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum RankTol {
    /// `max(rows, cols) * eps * scale`, the usual rank-revealing convention.
    #[default]
    Auto,
    /// `r * scale`.
    Relative(f64),
    /// A fixed cutoff, independent of the matrix.
    Absolute(f64),
}

static RANK_TOL_OVERRIDE: RwLock<Option<RankTol>> = RwLock::new(None);
static RANK_TOL_ENV_VALUE: OnceLock<Option<RankTol>> = OnceLock::new();

impl RankTol {
    /// Values at or below the returned cutoff count as zero. `scale` is the
    /// largest singular value (or `|R_11|`) of the operand.
    pub fn cutoff(self, rows: usize, cols: usize, scale: f64) -> f64 {
        match self {
            RankTol::Auto => rows.max(cols) as f64 * f64::EPSILON * scale,
            RankTol::Relative(r) => r * scale,
            RankTol::Absolute(a) => a,
        }
    }

    /// Parses `auto` or a positive relative tolerance such as `1e-10`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(RankTol::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(RankTol::Relative(v)),
            _ => Err(Error::InvalidParameter(format!("rank tolerance {s:?}"))),
        }
    }

    /// Process-wide default: the explicit override if set, then the
    /// `TOUTER_RANK_TOL` environment variable, then [`RankTol::Auto`].
    pub fn current() -> Self {
        if let Some(t) = *RANK_TOL_OVERRIDE.read().unwrap_or_else(|e| e.into_inner()) {
            return t;
        }
        RANK_TOL_ENV_VALUE
            .get_or_init(|| std::env::var(RANK_TOL_ENV).ok().and_then(|v| RankTol::parse(&v).ok()))
            .unwrap_or(RankTol::Auto)
    }

    pub fn set_default(tol: Option<RankTol>) {
        *RANK_TOL_OVERRIDE.write().unwrap_or_else(|e| e.into_inner()) = tol;
    }
}

fn par() -> Par {
    faer::get_global_parallelism()
}

pub fn mul<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Mat<T> {
    let mut c = Mat::zeros(a.nrows(), b.ncols());
    matmul(c.as_mut(), Accum::Replace, a, b, T::from_real(1.0), par());
    c
}

/// `aᴴ · b`.
pub fn mul_adj<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Mat<T> {
    let mut c = Mat::zeros(a.ncols(), b.ncols());
    matmul_with_conj(c.as_mut(), Accum::Replace, a.transpose(), Conj::Yes, b, Conj::No, T::from_real(1.0), par());
    c
}

pub fn adjoint<T: Scalar>(a: MatRef<'_, T>) -> Mat<T> {
    Mat::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conjugate())
}

pub fn fro_norm<T: Scalar>(a: MatRef<'_, T>) -> f64 {
    let mut acc = 0.0;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            acc += a[(i, j)].modulus_sqr();
        }
    }
    acc.sqrt()
}

pub fn sub<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Mat<T> {
    Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)] - b[(i, j)])
}

pub fn identity<T: Scalar>(m: usize) -> Mat<T> {
    Mat::from_fn(m, m, |i, j| if i == j { T::from_real(1.0) } else { T::from_real(0.0) })
}

/// Thin SVD `A = U Σ Vᴴ` with singular values in non-increasing order.
#[derive(Clone, Debug)]
pub struct SliceSvd<T: Scalar> {
    pub u: Mat<T>,
    pub s: Vec<f64>,
    pub v: Mat<T>,
    rows: usize,
    cols: usize,
}

impl<T: Scalar> SliceSvd<T> {
    pub fn new(a: MatRef<'_, T>) -> Result<Self> {
        let (m, n) = (a.nrows(), a.ncols());
        if m.min(n) == 0 {
            return Ok(Self { u: Mat::zeros(m, 0), s: Vec::new(), v: Mat::zeros(n, 0), rows: m, cols: n });
        }
        for (flip_rows, flip_cols) in REORDERINGS {
            let flipped;
            let input = if flip_rows || flip_cols {
                flipped = reordered(a, flip_rows, flip_cols);
                flipped.as_ref()
            } else {
                a
            };
            let Ok(svd) = input.thin_svd() else { continue };
            let sd = svd.S().column_vector();
            let raw: Vec<f64> = (0..sd.nrows()).map(|i| sd[i].modulus()).collect();
            // the dense kernel can return the spectrum out of order after deflation
            let order = descending(&raw);
            let (u, v) = (svd.U(), svd.V());
            let row = |i: usize| if flip_rows { m - 1 - i } else { i };
            let col = |j: usize| if flip_cols { n - 1 - j } else { j };
            return Ok(Self {
                u: Mat::from_fn(m, order.len(), |i, j| u[(row(i), order[j])]),
                s: order.iter().map(|&k| raw[k]).collect(),
                v: Mat::from_fn(n, order.len(), |i, j| v[(col(i), order[j])]),
                rows: m,
                cols: n,
            });
        }
        Err(Error::NoConvergence)
    }

    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Singular values strictly above `cutoff`.
    pub fn rank(&self, cutoff: f64) -> usize {
        self.s.iter().take_while(|&&x| x > cutoff).count()
    }

    /// Cutoff for this matrix alone under `tol`.
    pub fn cutoff(&self, tol: RankTol) -> f64 {
        tol.cutoff(self.rows, self.cols, self.sigma_max())
    }

    /// `V_r Σ_r⁻¹ U_rᴴ` keeping singular values above `cutoff`.
    pub fn pinv(&self, cutoff: f64) -> Mat<T> {
        let r = self.rank(cutoff);
        let vs = Mat::from_fn(self.cols, r, |i, j| self.v[(i, j)].scale(1.0 / self.s[j]));
        mul(vs.as_ref(), adjoint(self.u.as_ref().subcols(0, r)).as_ref())
    }
}

pub fn singular_values<T: Scalar>(a: MatRef<'_, T>) -> Result<Vec<f64>> {
    if a.nrows().min(a.ncols()) == 0 {
        return Ok(Vec::new());
    }
    for (flip_rows, flip_cols) in REORDERINGS {
        let values = if flip_rows || flip_cols {
            reordered(a, flip_rows, flip_cols).singular_values()
        } else {
            a.singular_values()
        };
        if let Ok(mut s) = values {
            s.sort_by(|x, y| y.total_cmp(x));
            return Ok(s);
        }
    }
    Err(Error::NoConvergence)
}

/// Row and column reversals tried in turn. The bidiagonal QR sweep in the
/// dense kernel occasionally stalls on one ordering of a benign matrix, and a
/// reversal changes the bidiagonal without rounding anything.
const REORDERINGS: [(bool, bool); 4] = [(false, false), (false, true), (true, false), (true, true)];

fn reordered<T: Scalar>(a: MatRef<'_, T>, flip_rows: bool, flip_cols: bool) -> Mat<T> {
    let (m, n) = (a.nrows(), a.ncols());
    Mat::from_fn(m, n, |i, j| a[(if flip_rows { m - 1 - i } else { i }, if flip_cols { n - 1 - j } else { j })])
}

fn descending(s: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    order
}

/// Number of singular values above the `tol` cutoff.
pub fn svd_rank<T: Scalar>(a: MatRef<'_, T>, tol: RankTol) -> Result<usize> {
    let s = singular_values(a)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let cutoff = tol.cutoff(a.nrows(), a.ncols(), smax);
    Ok(s.iter().take_while(|&&x| x > cutoff).count())
}

/// Moore–Penrose inverse via a truncated SVD.
pub fn pinv<T: Scalar>(a: MatRef<'_, T>, tol: RankTol) -> Result<Mat<T>> {
    let svd = SliceSvd::new(a)?;
    let cutoff = svd.cutoff(tol);
    Ok(svd.pinv(cutoff))
}

/// A {1}-inverse `G` with `A G A = A`; the Moore–Penrose inverse is used.
pub fn one_inverse<T: Scalar>(a: MatRef<'_, T>, tol: RankTol) -> Result<Mat<T>> {
    pinv(a, tol)
}

fn checked_lu<T: Scalar>(a: MatRef<'_, T>) -> Result<PartialPivLu<T>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!("LU needs a square matrix, got {}x{}", n, a.ncols())));
    }
    let lu = PartialPivLu::new(a);
    let u = lu.U();
    let diag: Vec<f64> = (0..n).map(|i| u[(i, i)].modulus()).collect();
    let max = diag.iter().cloned().fold(0.0, f64::max);
    let min = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    if n > 0 && (max == 0.0 || !min.is_finite() || min <= n as f64 * f64::EPSILON * max) {
        return Err(Error::Singular(format!("{n}x{n} matrix, pivot ratio {:.3e}", min / max)));
    }
    Ok(lu)
}

pub fn lu_inverse<T: Scalar>(a: MatRef<'_, T>) -> Result<Mat<T>> {
    if a.nrows() == 0 {
        return Ok(Mat::zeros(0, 0));
    }
    Ok(checked_lu(a)?.inverse())
}

/// Solves `A X = B`.
pub fn lu_solve<T: Scalar>(a: MatRef<'_, T>, b: MatRef<'_, T>) -> Result<Mat<T>> {
    if b.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, matrix has {}",
            b.nrows(),
            a.nrows()
        )));
    }
    if a.nrows() == 0 {
        return Ok(Mat::zeros(0, b.ncols()));
    }
    Ok(checked_lu(a)?.solve(b))
}

/// Column-pivoted QR factors `A P = Q R` with a revealed rank.
#[derive(Clone, Debug)]
pub struct PivotedQr<T: Scalar> {
    /// Unitary, `m × m`.
    pub q: Mat<T>,
    /// Upper trapezoidal, `m × n`.
    pub r: Mat<T>,
    /// Column `j` of `A P` is column `perm[j]` of `A`.
    pub perm: Vec<usize>,
    pub rank: usize,
}

impl<T: Scalar> PivotedQr<T> {
    /// First `rank` columns of `Q`.
    pub fn q_tilde(&self) -> MatRef<'_, T> {
        self.q.as_ref().subcols(0, self.rank)
    }

    /// First `rank` rows of `R`.
    pub fn r_tilde(&self) -> MatRef<'_, T> {
        self.r.as_ref().subrows(0, self.rank)
    }

    pub fn permutation_matrix(&self) -> Mat<T> {
        let n = self.perm.len();
        let mut p = Mat::zeros(n, n);
        for (j, &src) in self.perm.iter().enumerate() {
            p[(src, j)] = T::from_real(1.0);
        }
        p
    }

    /// `|R_ii|` for `i < min(m, n)`.
    pub fn pivot_magnitudes(&self) -> Vec<f64> {
        (0..self.r.nrows().min(self.r.ncols())).map(|i| self.r[(i, i)].modulus()).collect()
    }
}

/// Householder QR on a column-major copy of `a`, optionally with
/// Businger–Golub column pivoting. Returns `(Q, R, perm)`.
fn householder_qr<T: Scalar>(a: MatRef<'_, T>, pivoting: bool) -> (Mat<T>, Mat<T>, Vec<usize>) {
    let (m, n) = (a.nrows(), a.ncols());
    let mut w: Vec<T> = Vec::with_capacity(m * n);
    for j in 0..n {
        for i in 0..m {
            w.push(a[(i, j)]);
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let steps = m.min(n);
    let mut reflectors: Vec<(Vec<T>, f64)> = Vec::with_capacity(steps);
    let zero = T::from_real(0.0);

    for k in 0..steps {
        if pivoting {
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..n {
                let col = &w[j * m + k..(j + 1) * m];
                let nrm: f64 = col.iter().map(|x| x.modulus_sqr()).sum();
                if nrm > best_norm {
                    best_norm = nrm;
                    best = j;
                }
            }
            if best != k {
                for i in 0..m {
                    w.swap(k * m + i, best * m + i);
                }
                perm.swap(k, best);
            }
        }

        let x = &w[k * m + k..(k + 1) * m];
        let xnorm = x.iter().map(|v| v.modulus_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 || x[1..].iter().all(|v| v.modulus() == 0.0) {
            reflectors.push((Vec::new(), 0.0));
            continue;
        }
        let x0 = x[0];
        let phase = if x0.modulus() == 0.0 { T::from_real(1.0) } else { x0.scale(1.0 / x0.modulus()) };
        let alpha = -(phase.scale(xnorm));
        let mut v: Vec<T> = x.to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t.modulus_sqr()).sum();
        let beta = if vnorm2 == 0.0 { 0.0 } else { 2.0 / vnorm2 };

        for j in k + 1..n {
            let col = &mut w[j * m + k..(j + 1) * m];
            let mut dot = zero;
            for (vi, ci) in v.iter().zip(col.iter()) {
                dot += vi.conjugate() * *ci;
            }
            let f = dot.scale(beta);
            for (vi, ci) in v.iter().zip(col.iter_mut()) {
                *ci -= *vi * f;
            }
        }
        w[k * m + k] = alpha;
        for i in k + 1..m {
            w[k * m + i] = zero;
        }
        reflectors.push((v, beta));
    }

    let mut q: Mat<T> = identity(m);
    for (k, (v, beta)) in reflectors.iter().enumerate().rev() {
        if *beta == 0.0 {
            continue;
        }
        for j in 0..m {
            let mut dot = zero;
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conjugate() * q[(k + t, j)];
            }
            let f = dot.scale(*beta);
            for (t, vi) in v.iter().enumerate() {
                q[(k + t, j)] -= *vi * f;
            }
        }
    }
    let r = Mat::from_fn(m, n, |i, j| if i <= j { w[j * m + i] } else { zero });
    (q, r, perm)
}

fn revealed_rank<T: Scalar>(r: &Mat<T>, cutoff: f64) -> usize {
    let steps = r.nrows().min(r.ncols());
    (0..steps).take_while(|&i| r[(i, i)].modulus() > cutoff).count()
}

/// Householder QR with column pivoting. The rank is the number of leading
/// pivots with `|R_ii|` above the `tol` cutoff scaled by `|R_11|`.
pub fn qrcp<T: Scalar>(a: MatRef<'_, T>, tol: RankTol) -> PivotedQr<T> {
    let (q, r, perm) = householder_qr(a, true);
    let r11 = if a.nrows().min(a.ncols()) > 0 { r[(0, 0)].modulus() } else { 0.0 };
    let cutoff = tol.cutoff(a.nrows(), a.ncols(), r11);
    let rank = revealed_rank(&r, cutoff);
    PivotedQr { q, r, perm, rank }
}

/// Gaussian `rows × cols` test matrix drawn from a ChaCha8 stream.
pub fn gaussian_matrix<T: Scalar>(rows: usize, cols: usize, seed: u64) -> Mat<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let x: f64 = StandardNormal.sample(&mut rng);
        vals.push(x);
    }
    Mat::from_fn(rows, cols, |i, j| T::from_real(vals[j * rows + i]))
}

/// Randomized QR with column pivoting: the pivot order is chosen by QRCP on
/// the sketch `Ω A` with `Ω` an `(k + oversample) × m` Gaussian matrix, then
/// `A P` is factored by unpivoted Householder QR. The returned rank is `k`.
pub fn rand_qrcp<T: Scalar>(a: MatRef<'_, T>, k: usize, oversample: usize, seed: u64) -> Result<PivotedQr<T>> {
    let (m, n) = (a.nrows(), a.ncols());
    let max = m.min(n);
    if k < 1 || k > max {
        return Err(Error::InvalidRank { k, max });
    }
    let omega: Mat<T> = gaussian_matrix(k + oversample, m, seed);
    let sketch = mul(omega.as_ref(), a);
    let (_, _, perm) = householder_qr(sketch.as_ref(), true);
    let ap = Mat::from_fn(m, n, |i, j| a[(i, perm[j])]);
    let (q, r, _) = householder_qr(ap.as_ref(), false);
    Ok(PivotedQr { q, r, perm, rank: k })
}
