//! Residuals of the defining equations of generalized inverses, on the
//! tensor path and on the flattened `bcirc` path.

use faer::{Mat, MatRef};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fourier::{to_fourier, FourierStack};
use crate::linalg::{self, Scalar};
use crate::tensor::{bcirc, BlockMatrix, ScalarKind, Tensor3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Path {
    Tensor,
    FlattenedMatrix,
}

/// Frobenius residuals
/// `e1 = ‖S − S*X*S‖`, `e2 = ‖X − X*S*X‖`, `e3 = ‖S*X − (S*X)'‖`,
/// `e4 = ‖X*S − (X*S)'‖`, `e5 = ‖S*X − X*S‖`, `e1k = ‖X*S^(k+1) − S^k‖`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub e4: f64,
    /// Only for square slices.
    pub e5: Option<f64>,
    pub e1k: Option<f64>,
    pub k: Option<usize>,
    pub path: Path,
    /// SHA-256 of the operand and the inverse.
    pub inputs_digest: String,
}

impl ErrorReport {
    /// `(name, value)` pairs in table order, skipping absent entries.
    pub fn rows(&self) -> Vec<(&'static str, f64)> {
        let mut rows = vec![("E1", self.e1), ("E2", self.e2), ("E3", self.e3), ("E4", self.e4)];
        if let Some(v) = self.e5 {
            rows.push(("E5", v));
        }
        if let Some(v) = self.e1k {
            rows.push(("E1k", v));
        }
        rows
    }

    pub fn max(&self) -> f64 {
        self.rows().iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

fn digest_tensors(ts: &[&Tensor3]) -> String {
    let mut h = Sha256::new();
    for t in ts {
        let (p, q, n) = t.dims();
        for d in [p, q, n] {
            h.update((d as u64).to_le_bytes());
        }
        h.update([t.is_real() as u8]);
        for z in t.data() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
    }
    hex::encode(h.finalize())
}

fn digest_matrices(ms: &[&BlockMatrix]) -> String {
    let mut h = Sha256::new();
    for m in ms {
        h.update((m.rows() as u64).to_le_bytes());
        h.update((m.cols() as u64).to_le_bytes());
        let e = m.entries();
        for j in 0..m.cols() {
            for i in 0..m.rows() {
                h.update(e[(i, j)].re.to_le_bytes());
                h.update(e[(i, j)].im.to_le_bytes());
            }
        }
    }
    hex::encode(h.finalize())
}

fn check_k(k: Option<usize>, rows: usize, cols: usize) -> Result<Option<usize>> {
    match k {
        None | Some(0) => Ok(None),
        Some(_) if rows != cols => Err(Error::DimensionMismatch("E1k needs square slices".into())),
        Some(k) if k > rows => Err(Error::InvalidParameter(format!("power {k} exceeds slice size {rows}"))),
        Some(k) => Ok(Some(k)),
    }
}

/// Matrix-level residual computations shared by both paths; on the tensor
/// path the "matrices" are Fourier stacks.
trait Operand: Sized {
    fn mul(&self, rhs: &Self) -> Self;
    fn adjoint(&self) -> Self;
    fn diff_norm(&self, rhs: &Self) -> f64;
    fn identity_like(&self) -> Self;
}

impl Operand for FourierStack {
    fn mul(&self, rhs: &Self) -> Self {
        FourierStack::mul(self, rhs).expect("shapes validated")
    }

    fn adjoint(&self) -> Self {
        FourierStack::adjoint(self)
    }

    /// Spatial Frobenius norm of the difference, by Parseval.
    fn diff_norm(&self, rhs: &Self) -> f64 {
        let s: f64 = self
            .slices()
            .iter()
            .zip(rhs.slices())
            .map(|(a, b)| linalg::fro_norm(linalg::sub(a.as_ref(), b.as_ref()).as_ref()).powi(2))
            .sum();
        (s / self.n() as f64).sqrt()
    }

    fn identity_like(&self) -> Self {
        let (p, _, n) = self.dims();
        FourierStack::new(p, p, vec![linalg::identity(p); n], self.origin()).expect("square")
    }
}

impl<T: Scalar> Operand for Mat<T> {
    fn mul(&self, rhs: &Self) -> Self {
        linalg::mul(self.as_ref(), rhs.as_ref())
    }

    fn adjoint(&self) -> Self {
        linalg::adjoint(self.as_ref())
    }

    fn diff_norm(&self, rhs: &Self) -> f64 {
        linalg::fro_norm(linalg::sub(self.as_ref(), rhs.as_ref()).as_ref())
    }

    fn identity_like(&self) -> Self {
        linalg::identity(self.nrows())
    }
}

struct Raw {
    e1: f64,
    e2: f64,
    e3: f64,
    e4: f64,
    e5: Option<f64>,
    e1k: Option<f64>,
}

fn evaluate<O: Operand>(s: &O, x: &O, square: bool, k: Option<usize>) -> Raw {
    let sx = s.mul(x);
    let xs = x.mul(s);
    let e1k = k.map(|k| {
        let mut sk = s.identity_like();
        for _ in 0..k {
            sk = sk.mul(s);
        }
        x.mul(&sk.mul(s)).diff_norm(&sk)
    });
    Raw {
        e1: s.diff_norm(&sx.mul(s)),
        e2: x.diff_norm(&xs.mul(x)),
        e3: sx.diff_norm(&sx.adjoint()),
        e4: xs.diff_norm(&xs.adjoint()),
        e5: square.then(|| sx.diff_norm(&xs)),
        e1k,
    }
}

fn report(raw: Raw, k: Option<usize>, path: Path, inputs_digest: String) -> ErrorReport {
    ErrorReport { e1: raw.e1, e2: raw.e2, e3: raw.e3, e4: raw.e4, e5: raw.e5, e1k: raw.e1k, k, path, inputs_digest }
}

/// Residuals of `X` as a generalized inverse of `S` (`S` is `p × q × n`, `X`
/// is `q × p × n`). `k ≥ 1` adds `e1k` and needs square slices.
pub fn residuals(s: &Tensor3, x: &Tensor3, k: Option<usize>, path: Path) -> Result<ErrorReport> {
    let (p, q, n) = s.dims();
    if x.dims() != (q, p, n) {
        return Err(Error::DimensionMismatch(format!("inverse of a {:?} tensor cannot be {:?}", s.dims(), x.dims())));
    }
    let k = check_k(k, p, q)?;
    let digest = digest_tensors(&[s, x]);
    let raw = match path {
        Path::Tensor => evaluate(&to_fourier(s), &to_fourier(x), p == q, k),
        Path::FlattenedMatrix => evaluate_flat(&bcirc(s), &bcirc(x), k),
    };
    Ok(report(raw, k, path, digest))
}

/// Residuals of dense matrices `S` and `X` (flattened path).
pub fn residuals_matrix(s: &BlockMatrix, x: &BlockMatrix, k: Option<usize>) -> Result<ErrorReport> {
    if x.rows() != s.cols() || x.cols() != s.rows() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of a {}x{} matrix cannot be {}x{}",
            s.rows(),
            s.cols(),
            x.rows(),
            x.cols()
        )));
    }
    let k = check_k(k, s.rows(), s.cols())?;
    let digest = digest_matrices(&[s, x]);
    Ok(report(evaluate_flat(s, x, k), k, Path::FlattenedMatrix, digest))
}

fn evaluate_flat(s: &BlockMatrix, x: &BlockMatrix, k: Option<usize>) -> Raw {
    let square = s.rows() == s.cols();
    if s.kind() == ScalarKind::Real && x.kind() == ScalarKind::Real {
        evaluate(&s.to_real(), &x.to_real(), square, k)
    } else {
        evaluate(&s.entries().to_owned(), &x.entries().to_owned(), square, k)
    }
}

/// `‖A − B‖_F / max(‖A‖_F, ‖B‖_F)`, zero when both vanish.
pub fn relative_difference(a: MatRef<'_, Complex64>, b: MatRef<'_, Complex64>) -> f64 {
    let scale = linalg::fro_norm(a).max(linalg::fro_norm(b));
    if scale == 0.0 {
        return 0.0;
    }
    linalg::fro_norm(linalg::sub(a, b).as_ref()) / scale
}
