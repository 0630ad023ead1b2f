//! Classic test-matrix families, turned into tensors by a slice rule.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tensor::Tensor3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Family {
    /// Lower Hessenberg Toeplitz: `alpha^(i-j+1)` for `i - j >= -1`, plus
    /// `delta` on the diagonal.
    Chow { alpha: f64, delta: f64 },
    /// Upper triangular with diagonal `sin(theta)^i` and off-diagonal
    /// `-cos(theta) sin(theta)^i`, diagonal nudged by `pert * eps`.
    Kahan { theta: f64, pert: f64 },
    /// Gaussian block of `cycle_len` columns repeated across the width.
    Cycol { cycle_len: usize, seed: u64 },
    /// Ones on the sub- and superdiagonal, `sign(i)` at `(0, |i|-1)` and
    /// `sign(j)` at `(n-1, n-|j|)`.
    Gearmat { i: i64, j: i64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Chow { .. } => "chow",
            Family::Kahan { .. } => "kahan",
            Family::Cycol { .. } => "cycol",
            Family::Gearmat { .. } => "gearmat",
        }
    }

    /// The family with its customary default parameters (`gearmat` corners
    /// depend on the size, see [`GallerySpec::new`]).
    pub fn default_for(name: &str) -> Result<Family> {
        match name {
            "chow" => Ok(Family::Chow { alpha: 1.0, delta: 0.0 }),
            "kahan" => Ok(Family::Kahan { theta: 1.2, pert: 25.0 }),
            "cycol" => Ok(Family::Cycol { cycle_len: 2, seed: 0 }),
            "gearmat" => Ok(Family::Gearmat { i: 0, j: 0 }),
            other => Err(Error::InvalidParameter(format!("unknown gallery family {other:?}"))),
        }
    }
}

/// How the frontal slices are derived from the base matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum SliceRule {
    /// Every slice equals the base matrix.
    Replicate,
    /// Slice `k` is the base plus `magnitude` times a seeded Gaussian matrix.
    SeededPerturb { seed: u64, magnitude: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GallerySpec {
    pub family: Family,
    pub rows: usize,
    pub cols: usize,
    pub n: usize,
    pub slice_rule: SliceRule,
}

impl GallerySpec {
    /// Replicated-slice spec. A `gearmat` with zero corners gets the
    /// customary `i = rows`, `j = -rows`.
    pub fn new(family: Family, rows: usize, cols: usize, n: usize) -> Self {
        let family = match family {
            Family::Gearmat { i: 0, j: 0 } => Family::Gearmat { i: rows as i64, j: -(rows as i64) },
            f => f,
        };
        Self { family, rows, cols, n, slice_rule: SliceRule::Replicate }
    }

    pub fn with_rule(mut self, rule: SliceRule) -> Self {
        self.slice_rule = rule;
        self
    }

    pub fn size_label(&self) -> String {
        format!("{}x{}x{}", self.rows, self.cols, self.n)
    }
}

/// The base matrix of `spec`.
pub fn base_matrix(spec: &GallerySpec) -> Result<Mat<f64>> {
    let (m, c) = (spec.rows, spec.cols);
    if m == 0 || c == 0 || spec.n == 0 {
        return Err(Error::InvalidParameter(format!("empty gallery size {}", spec.size_label())));
    }
    match spec.family {
        Family::Chow { alpha, delta } => Ok(Mat::from_fn(m, c, |i, j| {
            let d = i as i64 - j as i64;
            let v = if d >= -1 { alpha.powi((d + 1) as i32) } else { 0.0 };
            if i == j {
                v + delta
            } else {
                v
            }
        })),
        Family::Kahan { theta, pert } => {
            if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
                return Err(Error::InvalidParameter(format!("kahan theta {theta} outside (0, pi/2)")));
            }
            let (s, co) = theta.sin_cos();
            let r = m.min(c);
            Ok(Mat::from_fn(m, c, |i, j| {
                let si = s.powi(i as i32);
                if i == j {
                    si + pert * f64::EPSILON * (r - i) as f64
                } else if j > i {
                    -co * si
                } else {
                    0.0
                }
            }))
        }
        Family::Cycol { cycle_len, seed } => {
            if cycle_len == 0 {
                return Err(Error::InvalidParameter("cycol cycle length must be positive".into()));
            }
            let block: Mat<f64> = linalg::gaussian_matrix(m, cycle_len, seed);
            Ok(Mat::from_fn(m, c, |i, j| block[(i, j % cycle_len)]))
        }
        Family::Gearmat { i: ci, j: cj } => {
            if m != c {
                return Err(Error::InvalidParameter(format!("gearmat needs a square size, got {m}x{c}")));
            }
            let valid = |v: i64| v != 0 && v.unsigned_abs() as usize <= m;
            if !valid(ci) || !valid(cj) {
                return Err(Error::InvalidParameter(format!("gearmat corners ({ci}, {cj}) outside 1..={m}")));
            }
            let mut a = Mat::from_fn(m, m, |r, col| if r.abs_diff(col) == 1 { 1.0 } else { 0.0 });
            a[(0, ci.unsigned_abs() as usize - 1)] = ci.signum() as f64;
            a[(m - 1, m - cj.unsigned_abs() as usize)] = cj.signum() as f64;
            Ok(a)
        }
    }
}

/// Tensor built from `spec`; a deterministic function of every field.
pub fn generate(spec: &GallerySpec) -> Result<Tensor3> {
    let base = base_matrix(spec)?;
    let (m, c, n) = (spec.rows, spec.cols, spec.n);
    match spec.slice_rule {
        SliceRule::Replicate => Ok(Tensor3::from_fn(m, c, n, |i, j, _| base[(i, j)])),
        SliceRule::SeededPerturb { seed, magnitude } => {
            if !magnitude.is_finite() {
                return Err(Error::InvalidParameter(format!("perturbation magnitude {magnitude}")));
            }
            let noise: Mat<f64> = linalg::gaussian_matrix(m * c, n, seed);
            Ok(Tensor3::from_fn(m, c, n, |i, j, k| base[(i, j)] + magnitude * noise[(i + j * m, k)]))
        }
    }
}
