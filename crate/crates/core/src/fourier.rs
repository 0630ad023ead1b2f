//! Mode-3 DFT between a tensor and its stack of Fourier slices.
//!
//! The forward transform is unnormalized and the inverse carries `1/n`, so
//! `bcirc(T)` is similar to `blockdiag(D_1, ..., D_n)` and both have the same
//! singular values.

use faer::{Mat, MatRef};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::linalg::{self, RankTol, SliceSvd};
use crate::tensor::{ScalarKind, Tensor3};

/// Fourier slices `D_k` of a `p × q × n` tensor.
#[derive(Clone, Debug)]
pub struct FourierStack {
    p: usize,
    q: usize,
    slices: Vec<Mat<Complex64>>,
    origin: ScalarKind,
}

impl FourierStack {
    pub fn new(p: usize, q: usize, slices: Vec<Mat<Complex64>>, origin: ScalarKind) -> Result<Self> {
        if slices.is_empty() {
            return Err(Error::DimensionMismatch("a Fourier stack needs at least one slice".into()));
        }
        if let Some(bad) = slices.iter().find(|d| d.nrows() != p || d.ncols() != q) {
            return Err(Error::DimensionMismatch(format!(
                "slice is {}x{}, stack is {p}x{q}",
                bad.nrows(),
                bad.ncols()
            )));
        }
        Ok(Self { p, q, slices, origin })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.p, self.q, self.slices.len())
    }

    pub fn n(&self) -> usize {
        self.slices.len()
    }

    pub fn origin(&self) -> ScalarKind {
        self.origin
    }

    pub fn slice(&self, k: usize) -> MatRef<'_, Complex64> {
        self.slices[k].as_ref()
    }

    pub fn slices(&self) -> &[Mat<Complex64>] {
        &self.slices
    }

    pub fn slices_mut(&mut self) -> &mut [Mat<Complex64>] {
        &mut self.slices
    }

    pub fn into_slices(self) -> Vec<Mat<Complex64>> {
        self.slices
    }

    pub fn fro_norm(&self) -> f64 {
        self.slices.iter().map(|d| linalg::fro_norm(d.as_ref()).powi(2)).sum::<f64>().sqrt()
    }

    /// Slicewise product `D_k(self) · D_k(rhs)`, i.e. the t-product in the
    /// Fourier domain.
    pub fn mul(&self, rhs: &FourierStack) -> Result<FourierStack> {
        if self.q != rhs.p || self.n() != rhs.n() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{}x{} by {}x{}x{}",
                self.p,
                self.q,
                self.n(),
                rhs.p,
                rhs.q,
                rhs.n()
            )));
        }
        let slices = self
            .slices
            .par_iter()
            .zip(rhs.slices.par_iter())
            .map(|(a, b)| linalg::mul(a.as_ref(), b.as_ref()))
            .collect();
        Ok(FourierStack { p: self.p, q: rhs.q, slices, origin: self.origin.join(rhs.origin) })
    }

    /// Slicewise conjugate transpose; the Fourier image of the t-transpose.
    pub fn adjoint(&self) -> FourierStack {
        let slices = self.slices.iter().map(|d| linalg::adjoint(d.as_ref())).collect();
        FourierStack { p: self.q, q: self.p, slices, origin: self.origin }
    }

    pub fn block_diagonal(&self) -> Mat<Complex64> {
        let n = self.n();
        let mut m = Mat::zeros(self.p * n, self.q * n);
        for (k, d) in self.slices.iter().enumerate() {
            for j in 0..self.q {
                for i in 0..self.p {
                    m[(k * self.p + i, k * self.q + j)] = d[(i, j)];
                }
            }
        }
        m
    }

    /// Largest `‖D_{n-k} − conj(D_k)‖_F` over `k`, relative to the stack norm.
    pub fn conjugate_symmetry_defect(&self) -> f64 {
        let n = self.n();
        let scale = self.fro_norm().max(f64::MIN_POSITIVE);
        (1..n)
            .map(|k| {
                let a = &self.slices[k];
                let b = &self.slices[n - k];
                let mut acc = 0.0;
                for j in 0..self.q {
                    for i in 0..self.p {
                        acc += (a[(i, j)] - b[(i, j)].conj()).norm_sqr();
                    }
                }
                acc.sqrt() / scale
            })
            .fold(0.0, f64::max)
    }

    /// Thin SVD of every slice.
    pub fn svds(&self) -> Result<Vec<SliceSvd<Complex64>>> {
        self.slices.par_iter().map(|d| SliceSvd::new(d.as_ref())).collect()
    }

    /// Singular-value cutoff shared by all slices: the `tol` cutoff of the
    /// `pn × qn` block-diagonal (equivalently, block-circulant) matrix.
    pub fn cutoff(&self, svds: &[SliceSvd<Complex64>], tol: RankTol) -> f64 {
        let smax = svds.iter().map(|s| s.sigma_max()).fold(0.0, f64::max);
        tol.cutoff(self.p * self.n(), self.q * self.n(), smax)
    }

    /// Numerical rank of every slice under the shared cutoff.
    pub fn slice_ranks(&self, tol: RankTol) -> Result<Vec<usize>> {
        let svds = self.svds()?;
        let cutoff = self.cutoff(&svds, tol);
        Ok(svds.iter().map(|s| s.rank(cutoff)).collect())
    }
}

/// Evaluates `f(k)` for every slice index. For a real-origin stack only the
/// slices `0..=n/2` are computed and the rest are filled with the conjugates
/// of their partners, which keeps non-unique per-slice results (QR bases,
/// sketches) conjugate-consistent.
pub(crate) fn map_conjugate_pairs<F>(n: usize, origin: ScalarKind, f: F) -> Result<Vec<Mat<Complex64>>>
where
    F: Fn(usize) -> Result<Mat<Complex64>> + Sync + Send,
{
    map_conjugate_pairs_with(n, origin, f, |m: &Mat<Complex64>| conj_mat(m.as_ref()))
}

/// [`map_conjugate_pairs`] for arbitrary per-slice results; `mirror` maps the
/// result for slice `k` to the one for slice `n - k`.
pub(crate) fn map_conjugate_pairs_with<R, F, M>(n: usize, origin: ScalarKind, f: F, mirror: M) -> Result<Vec<R>>
where
    R: Send,
    F: Fn(usize) -> Result<R> + Sync + Send,
    M: Fn(&R) -> R,
{
    match origin {
        ScalarKind::Complex => (0..n).into_par_iter().map(&f).collect(),
        ScalarKind::Real => {
            let mut out: Vec<R> = (0..=n / 2).into_par_iter().map(&f).collect::<Result<_>>()?;
            for k in n / 2 + 1..n {
                let m = mirror(&out[n - k]);
                out.push(m);
            }
            Ok(out)
        }
    }
}

pub(crate) fn conj_mat(m: MatRef<'_, Complex64>) -> Mat<Complex64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].conj())
}

/// Mode-3 DFT of `t`.
pub fn to_fourier(t: &Tensor3) -> FourierStack {
    let (p, q, n) = t.dims();
    let pq = p * q;
    let mut buf = vec![Complex64::new(0.0, 0.0); pq * n];
    let data = t.data();
    for k in 0..n {
        for e in 0..pq {
            buf[e * n + k] = data[k * pq + e];
        }
    }
    if n > 1 && pq > 0 {
        let fft = FftPlanner::new().plan_fft_forward(n);
        fft.process(&mut buf);
    }
    let slices = (0..n).map(|k| Mat::from_fn(p, q, |i, j| buf[(i + j * p) * n + k])).collect();
    FourierStack { p, q, slices, origin: t.kind() }
}

/// Default imaginary-residue tolerance for real-origin inverse transforms.
pub fn cleanup_tolerance(stack: &FourierStack) -> f64 {
    1e-9 * (1.0 + stack.fro_norm())
}

/// Inverse mode-3 DFT with the default cleanup tolerance.
pub fn from_fourier(stack: &FourierStack) -> Result<Tensor3> {
    from_fourier_with_tol(stack, cleanup_tolerance(stack))
}

/// Inverse mode-3 DFT. A real-origin stack must come back with every
/// imaginary part at most `tol`; those residues are then dropped.
pub fn from_fourier_with_tol(stack: &FourierStack, tol: f64) -> Result<Tensor3> {
    let (p, q, n) = stack.dims();
    let pq = p * q;
    let mut buf = vec![Complex64::new(0.0, 0.0); pq * n];
    for (k, d) in stack.slices.iter().enumerate() {
        for j in 0..q {
            for i in 0..p {
                buf[(i + j * p) * n + k] = d[(i, j)];
            }
        }
    }
    if n > 1 && pq > 0 {
        let ifft = FftPlanner::new().plan_fft_inverse(n);
        ifft.process(&mut buf);
    }
    let inv_n = 1.0 / n as f64;
    let mut data = vec![Complex64::new(0.0, 0.0); pq * n];
    for e in 0..pq {
        for k in 0..n {
            data[k * pq + e] = buf[e * n + k] * inv_n;
        }
    }
    match stack.origin {
        ScalarKind::Complex => Tensor3::from_complex(p, q, n, data),
        ScalarKind::Real => {
            let residue = data.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            if residue > tol {
                return Err(Error::RealnessViolated { residue, tolerance: tol });
            }
            Tensor3::from_real(p, q, n, data.into_iter().map(|z| z.re).collect())
        }
    }
}
