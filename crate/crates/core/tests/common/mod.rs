#![allow(dead_code)]

use faer::Mat;
use num_complex::Complex64;
use touter::fourier::{from_fourier, FourierStack};
use touter::linalg;
use touter::tensor::{tprod, BlockMatrix};
use touter::{ScalarKind, Tensor3};

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Tensor with independent standard normal entries.
pub fn gaussian(p: usize, q: usize, n: usize, seed: u64) -> Tensor3 {
    let g: Mat<f64> = linalg::gaussian_matrix(p * q, n, seed);
    Tensor3::from_fn(p, q, n, |i, j, k| g[(i + j * p, k)])
}

/// `A * B` with `A` of shape `p × r × n`: every Fourier slice has rank `r`
/// almost surely.
pub fn low_rank(p: usize, q: usize, r: usize, n: usize, seed: u64) -> Tensor3 {
    tprod(&gaussian(p, r, n, seed), &gaussian(r, q, n, seed ^ 0x5555)).unwrap()
}

pub fn complex_gaussian(rows: usize, cols: usize, seed: u64) -> Mat<Complex64> {
    let re: Mat<f64> = linalg::gaussian_matrix(rows, cols, seed);
    let im: Mat<f64> = linalg::gaussian_matrix(rows, cols, seed ^ 0xa5a5_a5a5);
    Mat::from_fn(rows, cols, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

pub fn rel(a: &Tensor3, b: &Tensor3) -> f64 {
    let scale = a.fro_norm().max(b.fro_norm());
    if scale == 0.0 {
        return 0.0;
    }
    a.sub(b).unwrap().fro_norm() / scale
}

pub fn rel_mat(a: faer::MatRef<'_, Complex64>, b: faer::MatRef<'_, Complex64>) -> f64 {
    touter::metrics::relative_difference(a, b)
}

pub fn rel_block(a: &BlockMatrix, b: &BlockMatrix) -> f64 {
    rel_mat(a.entries(), b.entries())
}

fn slice_seed(seed: u64, k: usize) -> u64 {
    seed.wrapping_mul(31).wrapping_add(k as u64 * 1009)
}

/// A square real tensor built slice by slice in the Fourier domain as
/// `P diag(G, N) P^-1` with `G` invertible and `N` a single nilpotent Jordan
/// block of size `nil[k]`, together with its Drazin inverse
/// `P diag(G^-1, 0) P^-1`. The t-index is the largest block size.
pub struct DrazinCase {
    pub t: Tensor3,
    pub drazin: Tensor3,
    pub index: usize,
}

pub fn drazin_case(m: usize, n: usize, nil: &[usize], seed: u64) -> DrazinCase {
    assert_eq!(nil.len(), n / 2 + 1);
    let mut a = vec![Mat::<Complex64>::zeros(m, m); n];
    let mut x = vec![Mat::<Complex64>::zeros(m, m); n];
    for k in 0..=n / 2 {
        let self_conjugate = k == 0 || 2 * k == n;
        let draw = |rows, cols, s| {
            if self_conjugate {
                let g: Mat<f64> = linalg::gaussian_matrix(rows, cols, s);
                Mat::from_fn(rows, cols, |i, j| c(g[(i, j)]))
            } else {
                complex_gaussian(rows, cols, s)
            }
        };
        let s = slice_seed(seed, k);
        let d = nil[k];
        let g = m - d;
        let scale = 0.3 / (m as f64).sqrt();
        let pm = draw(m, m, s);
        let p = Mat::from_fn(m, m, |i, j| if i == j { c(1.0) } else { c(0.0) } + pm[(i, j)] * scale);
        let gm = draw(g, g, s + 1);
        let core = Mat::from_fn(g, g, |i, j| if i == j { c(2.0) } else { c(0.0) } + gm[(i, j)] * scale);
        let core_inv = linalg::lu_inverse(core.as_ref()).unwrap();
        let block = Mat::from_fn(m, m, |i, j| {
            if i < g && j < g {
                core[(i, j)]
            } else if i >= g && j == i + 1 {
                c(1.0)
            } else {
                c(0.0)
            }
        });
        let block_x = Mat::from_fn(m, m, |i, j| if i < g && j < g { core_inv[(i, j)] } else { c(0.0) });
        let p_inv = linalg::lu_inverse(p.as_ref()).unwrap();
        let sim = |b: &Mat<Complex64>| linalg::mul(linalg::mul(p.as_ref(), b.as_ref()).as_ref(), p_inv.as_ref());
        a[k] = sim(&block);
        x[k] = sim(&block_x);
        if !self_conjugate {
            a[n - k] = Mat::from_fn(m, m, |i, j| a[k][(i, j)].conj());
            x[n - k] = Mat::from_fn(m, m, |i, j| x[k][(i, j)].conj());
        }
    }
    let fold = |s: Vec<Mat<Complex64>>| from_fourier(&FourierStack::new(m, m, s, ScalarKind::Real).unwrap()).unwrap();
    DrazinCase { t: fold(a), drazin: fold(x), index: nil.iter().copied().max().unwrap_or(0) }
}

/// Explicit DFT matrix `F[j, k] = exp(-2 pi i jk / n)`.
pub fn dft(n: usize) -> Mat<Complex64> {
    Mat::from_fn(n, n, |j, k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k % n) as f64 / n as f64))
}

/// Kronecker product `F ⊗ I_p`.
pub fn kron_identity(f: &Mat<Complex64>, p: usize) -> Mat<Complex64> {
    let n = f.nrows();
    Mat::from_fn(n * p, f.ncols() * p, |i, j| if i % p == j % p { f[(i / p, j / p)] } else { c(0.0) })
}

fn orthonormal_columns(rows: usize, cols: usize, seed: u64, real: bool) -> Mat<Complex64> {
    let g = if real {
        let g: Mat<f64> = linalg::gaussian_matrix(rows, cols, seed);
        Mat::from_fn(rows, cols, |i, j| c(g[(i, j)]))
    } else {
        complex_gaussian(rows, cols, seed)
    };
    linalg::qrcp(g.as_ref(), linalg::RankTol::Auto).q_tilde().to_owned()
}

/// Real tensor whose Fourier slices are `U_k diag(sigma) V_k'` with
/// orthonormal `U_k`, `V_k` and `sigma` spread over `[1, 2]`: every slice
/// has rank `r` and condition number at most 2.
pub fn well_conditioned(p: usize, q: usize, r: usize, n: usize, seed: u64) -> Tensor3 {
    let mut slices = vec![Mat::<Complex64>::zeros(p, q); n];
    for k in 0..=n / 2 {
        let real = k == 0 || 2 * k == n;
        let s = slice_seed(seed, k);
        let u = orthonormal_columns(p, r, s, real);
        let v = orthonormal_columns(q, r, s + 1, real);
        let us = Mat::from_fn(p, r, |i, j| u[(i, j)] * (1.0 + j as f64 / r as f64));
        slices[k] = linalg::mul(us.as_ref(), linalg::adjoint(v.as_ref()).as_ref());
        if !real {
            slices[n - k] = Mat::from_fn(p, q, |i, j| slices[k][(i, j)].conj());
        }
    }
    from_fourier(&FourierStack::new(p, q, slices, ScalarKind::Real).unwrap()).unwrap()
}

/// A pair `(S, T)` with `S` of shape `p × q` and full slice rank, and `T` of
/// shape `q × p` and slice rank `r`, built from the singular vectors of `S`
/// as `T_k = V_k W D W' U_k'`. Then `T*S*T` has the core `W' Σ W`, which is
/// positive definite, so every product in the existence conditions keeps rank
/// `r` with a wide margin.
pub fn robust_pair(p: usize, q: usize, r: usize, n: usize, seed: u64) -> (Tensor3, Tensor3) {
    let m = p.min(q);
    assert!(r <= m);
    let mut s = vec![Mat::<Complex64>::zeros(p, q); n];
    let mut t = vec![Mat::<Complex64>::zeros(q, p); n];
    for k in 0..=n / 2 {
        let real = k == 0 || 2 * k == n;
        let sd = slice_seed(seed, k);
        let u = orthonormal_columns(p, m, sd, real);
        let v = orthonormal_columns(q, m, sd + 1, real);
        let w = orthonormal_columns(m, r, sd + 2, real);
        let us = Mat::from_fn(p, m, |i, j| u[(i, j)] * (1.0 + j as f64 / m as f64));
        s[k] = linalg::mul(us.as_ref(), linalg::adjoint(v.as_ref()).as_ref());
        let vw = linalg::mul(v.as_ref(), w.as_ref());
        let uw = linalg::mul(u.as_ref(), w.as_ref());
        let vwd = Mat::from_fn(q, r, |i, j| vw[(i, j)] * (2.0 - j as f64 / r as f64));
        t[k] = linalg::mul(vwd.as_ref(), linalg::adjoint(uw.as_ref()).as_ref());
        if !real {
            s[n - k] = Mat::from_fn(p, q, |i, j| s[k][(i, j)].conj());
            t[n - k] = Mat::from_fn(q, p, |i, j| t[k][(i, j)].conj());
        }
    }
    let fold = |sl: Vec<Mat<Complex64>>, rows, cols| {
        from_fourier(&FourierStack::new(rows, cols, sl, ScalarKind::Real).unwrap()).unwrap()
    };
    (fold(s, p, q), fold(t, q, p))
}
