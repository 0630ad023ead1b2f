//! Timing and accuracy comparison of the Fourier-domain tensor path against
//! the flattened dense-matrix path on gallery problems.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flat;
use crate::fourier::to_fourier;
use crate::gallery::{generate, GallerySpec};
use crate::linalg::RankTol;
use crate::metrics::{residuals, residuals_matrix, ErrorReport, Path};
use crate::outer::{self, QrMethod, SliceRank};
use crate::tensor::{bcirc, t_index, t_transpose, BlockMatrix, Tensor3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Op {
    Mp,
    Drazin,
    Group,
    OuterRange,
    OuterNull,
    OuterBc,
    Qr,
    Rqr,
}

impl Op {
    pub const ALL: [Op; 8] =
        [Op::Mp, Op::Drazin, Op::Group, Op::OuterRange, Op::OuterNull, Op::OuterBc, Op::Qr, Op::Rqr];

    pub fn name(self) -> &'static str {
        match self {
            Op::Mp => "mp",
            Op::Drazin => "drazin",
            Op::Group => "group",
            Op::OuterRange => "outer-range",
            Op::OuterNull => "outer-null",
            Op::OuterBc => "outer-bc",
            Op::Qr => "qr",
            Op::Rqr => "rqr",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Op {
    type Err = Error;

    fn from_str(s: &str) -> Result<Op> {
        Op::ALL
            .into_iter()
            .find(|op| op.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bench op {s:?}")))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchRecord {
    pub problem: GallerySpec,
    pub op: Op,
    pub size_tensor: String,
    pub size_matrix: String,
    /// Mean seconds per run of the tensor path.
    pub mt_tensor: f64,
    /// Mean seconds per run of the flattened path.
    pub mt_matrix: f64,
    pub report_tensor: Option<ErrorReport>,
    pub report_matrix: Option<ErrorReport>,
    pub trials: usize,
    pub seed: u64,
    /// Set when either path raised an error; timings are then zero.
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Failure {
    pub message: String,
    /// Exit code the command-line front end reports for the error.
    pub exit_code: i32,
}

impl BenchRecord {
    pub fn failed(&self) -> bool {
        self.failure.is_some()
    }
}

/// Every operation is benchmarked with `S*` as the prescribing tensor (so the
/// prescribed inverses coincide with the Moore–Penrose inverse), except the
/// group and Drazin inverses, which prescribe through powers of `S`.
struct Problem {
    s: Tensor3,
    st: Tensor3,
    flat_s: BlockMatrix,
    flat_st: BlockMatrix,
    k: Option<usize>,
    slice_ranks: Vec<usize>,
    total_rank: usize,
}

fn tensor_path(op: Op, pr: &Problem, seed: u64) -> Result<Tensor3> {
    let r = match op {
        Op::Mp => outer::moore_penrose(&pr.s)?,
        Op::Drazin => outer::drazin(&pr.s)?,
        Op::Group => outer::group_inverse(&pr.s)?,
        Op::OuterRange => outer::outer_range(&pr.s, &pr.st)?,
        Op::OuterNull => outer::outer_null(&pr.s, &pr.st)?,
        Op::OuterBc => outer::outer_range_null(&pr.s, &pr.st, &pr.st)?,
        Op::Qr => outer::outer_qr(&pr.s, &pr.st, &QrMethod::Deterministic)?,
        Op::Rqr => outer::outer_qr(
            &pr.s,
            &pr.st,
            &QrMethod::Randomized { rank: SliceRank::PerSlice(pr.slice_ranks.clone()), oversample: 10, seed },
        )?,
    };
    Ok(r.inverse)
}

fn matrix_path(op: Op, pr: &Problem, seed: u64) -> Result<BlockMatrix> {
    let r = match op {
        Op::Mp => flat::moore_penrose(&pr.flat_s)?,
        Op::Drazin => flat::drazin(&pr.flat_s)?,
        Op::Group => flat::group_inverse(&pr.flat_s)?,
        Op::OuterRange => flat::outer_range(&pr.flat_s, &pr.flat_st)?,
        Op::OuterNull => flat::outer_null(&pr.flat_s, &pr.flat_st)?,
        Op::OuterBc => flat::outer_range_null(&pr.flat_s, &pr.flat_st, &pr.flat_st)?,
        Op::Qr => flat::outer_qr(&pr.flat_s, &pr.flat_st)?,
        Op::Rqr => {
            if pr.total_rank == 0 {
                return Err(Error::InvalidRank { k: 0, max: pr.flat_s.rows().min(pr.flat_s.cols()) });
            }
            flat::outer_rand_qr(&pr.flat_s, &pr.flat_st, pr.total_rank, 10, seed)?
        }
    };
    Ok(r.inverse)
}

fn timed<T>(trials: usize, mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let mut last = f()?;
    let start = Instant::now();
    for _ in 0..trials {
        last = f()?;
    }
    Ok((last, start.elapsed().as_secs_f64() / trials as f64))
}

/// Runs `op` on the gallery tensor of `spec` along both paths: one warm-up
/// run, then `trials` timed runs each. Errors from the inverses themselves
/// are recorded in [`BenchRecord::failure`].
pub fn run_bench(spec: &GallerySpec, op: Op, trials: usize, seed: u64) -> Result<BenchRecord> {
    if trials < 3 {
        return Err(Error::InvalidParameter(format!("trials must be at least 3, got {trials}")));
    }
    let s = generate(spec)?;
    let (p, q, n) = s.dims();
    let mut record = BenchRecord {
        problem: spec.clone(),
        op,
        size_tensor: format!("{p}x{q}x{n}"),
        size_matrix: format!("{}x{}", p * n, q * n),
        mt_tensor: 0.0,
        mt_matrix: 0.0,
        report_tensor: None,
        report_matrix: None,
        trials,
        seed,
        failure: None,
    };
    if let Err(e) = measure(&s, op, trials, seed, &mut record) {
        record.failure = Some(Failure { message: e.to_string(), exit_code: e.exit_code() });
        record.mt_tensor = 0.0;
        record.mt_matrix = 0.0;
    }
    Ok(record)
}

fn measure(s: &Tensor3, op: Op, trials: usize, seed: u64, record: &mut BenchRecord) -> Result<()> {
    let st = t_transpose(s);
    let slice_ranks = to_fourier(&st).slice_ranks(RankTol::current())?;
    let k = match op {
        Op::Drazin | Op::Group => Some(t_index(s)?).filter(|&k| k > 0),
        _ => None,
    };
    let pr = Problem {
        flat_s: bcirc(s),
        flat_st: bcirc(&st),
        total_rank: slice_ranks.iter().sum(),
        s: s.clone(),
        st,
        k,
        slice_ranks,
    };
    let (xt, mt_t) = timed(trials, || tensor_path(op, &pr, seed))?;
    let (xm, mt_m) = timed(trials, || matrix_path(op, &pr, seed))?;
    record.mt_tensor = mt_t;
    record.mt_matrix = mt_m;
    record.report_tensor = Some(residuals(&pr.s, &xt, pr.k, Path::Tensor)?);
    record.report_matrix = Some(residuals_matrix(&pr.flat_s, &xm, pr.k)?);
    Ok(())
}

pub const CSV_HEADER: [&str; 9] =
    ["family", "op", "size_tensor", "size_matrix", "mt_t", "mt_m", "residual", "error_t", "error_m"];

/// One CSV row per residual name; a failed record gets a single row with
/// `residual = failed`.
pub fn write_csv<W: Write>(records: &[BenchRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in records {
        let head = [
            r.problem.family.name().to_string(),
            r.op.to_string(),
            r.size_tensor.clone(),
            r.size_matrix.clone(),
            format!("{:.6e}", r.mt_tensor),
            format!("{:.6e}", r.mt_matrix),
        ];
        match (&r.failure, &r.report_tensor, &r.report_matrix) {
            (None, Some(t), Some(m)) => {
                for ((name, et), (_, em)) in t.rows().into_iter().zip(m.rows()) {
                    let mut row = head.to_vec();
                    row.extend([name.to_string(), format!("{et:.6e}"), format!("{em:.6e}")]);
                    w.write_record(&row).map_err(csv_err)?;
                }
            }
            _ => {
                let mut row = head.to_vec();
                row.extend(["failed".to_string(), String::new(), String::new()]);
                w.write_record(&row).map_err(csv_err)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
