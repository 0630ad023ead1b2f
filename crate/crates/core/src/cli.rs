//! Command-line front end of the `touter` binary.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_bench, write_csv, Op};
use crate::error::{Error, Result};
use crate::fourier::to_fourier;
use crate::gallery::{generate, Family, GallerySpec, SliceRule};
use crate::io::{read_t3, write_t3};
use crate::linalg::RankTol;
use crate::metrics::{residuals, Path};
use crate::outer::{self, OuterResult, QrMethod, SliceRank};
use crate::tensor::{t_index, t_power, t_transpose, tprod, Tensor3};

#[derive(Parser, Debug)]
#[command(name = "touter", version, about = "Outer inverses of third-order tensors under the t-product")]
struct Cli {
    /// Relative rank tolerance (`auto` or a positive number).
    #[arg(long, global = true, value_name = "REL")]
    tol: Option<String>,
    /// Worker threads for slicewise loops and dense kernels (`auto` or a count).
    #[arg(long, global = true, value_name = "N|auto")]
    threads: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// t-product of two tensors.
    Tprod {
        a: PathBuf,
        b: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generalized inverse of a tensor.
    Inv(InvArgs),
    /// Residuals of a candidate inverse, on the tensor and flattened paths.
    Verify {
        s: PathBuf,
        x: PathBuf,
        /// Power for the Drazin residual `‖X*S^(k+1) − S^k‖`.
        #[arg(long)]
        k: Option<usize>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time the tensor path against the flattened matrix path.
    Bench {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value = "mp")]
        op: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the full records as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write a gallery tensor.
    Gen {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Mp,
    Group,
    Drazin,
    Outer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Direct,
    Qr,
    Rqr,
}

#[derive(Args, Debug)]
struct InvArgs {
    a: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Prescribed range: that of this tensor.
    #[arg(long)]
    range: Option<PathBuf>,
    /// Prescribed null space: that of this tensor.
    #[arg(long)]
    null: Option<PathBuf>,
    /// Range factor of the two-sided prescription.
    #[arg(long)]
    b: Option<PathBuf>,
    /// Null-space factor of the two-sided prescription.
    #[arg(long)]
    c: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "direct")]
    method: MethodArg,
    /// Target rank per Fourier slice for `rqr` (default: the exact slice ranks).
    #[arg(long)]
    rank: Option<usize>,
    #[arg(long, default_value_t = 10)]
    oversample: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct ProblemArgs {
    #[arg(long)]
    family: String,
    /// `ROWSxCOLSxN`.
    #[arg(long)]
    size: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    pert: Option<f64>,
    #[arg(long)]
    cycle_len: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    gear_i: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    gear_j: Option<i64>,
    /// Perturb every slice by this multiple of a seeded Gaussian matrix
    /// instead of replicating the base matrix.
    #[arg(long)]
    perturb: Option<f64>,
}

fn parse_size(s: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<&str> = s.split('x').collect();
    let bad = || Error::InvalidParameter(format!("size {s:?} is not ROWSxCOLSxN"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<usize> = parts.iter().map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<_>>()?;
    if v.contains(&0) {
        return Err(bad());
    }
    Ok((v[0], v[1], v[2]))
}

impl ProblemArgs {
    fn spec(&self) -> Result<GallerySpec> {
        let (rows, cols, n) = parse_size(&self.size)?;
        let family = match Family::default_for(&self.family)? {
            Family::Chow { alpha, delta } => {
                Family::Chow { alpha: self.alpha.unwrap_or(alpha), delta: self.delta.unwrap_or(delta) }
            }
            Family::Kahan { theta, pert } => {
                Family::Kahan { theta: self.theta.unwrap_or(theta), pert: self.pert.unwrap_or(pert) }
            }
            Family::Cycol { cycle_len, .. } => {
                Family::Cycol { cycle_len: self.cycle_len.unwrap_or(cycle_len), seed: self.seed }
            }
            Family::Gearmat { .. } => {
                Family::Gearmat { i: self.gear_i.unwrap_or(rows as i64), j: self.gear_j.unwrap_or(-(rows as i64)) }
            }
        };
        let spec = GallerySpec::new(family, rows, cols, n);
        Ok(match self.perturb {
            Some(magnitude) => spec.with_rule(SliceRule::SeededPerturb { seed: self.seed, magnitude }),
            None => spec,
        })
    }
}

fn configure_threads(threads: Option<&str>) -> Result<()> {
    let count = match threads {
        None | Some("auto") => return Ok(()),
        Some(t) => t
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| Error::InvalidParameter(format!("--threads {t:?}")))?,
    };
    // a pool may already exist when the front end is driven in-process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(count).build_global();
    faer::set_global_parallelism(if count == 1 { faer::Par::Seq } else { faer::Par::rayon(count) });
    Ok(())
}

fn qr_method(args: &InvArgs, prescriber: &Tensor3) -> Result<QrMethod> {
    Ok(match args.method {
        MethodArg::Rqr => {
            let rank = match args.rank {
                Some(k) => SliceRank::Uniform(k),
                None => SliceRank::PerSlice(to_fourier(prescriber).slice_ranks(RankTol::current())?),
            };
            QrMethod::Randomized { rank, oversample: args.oversample, seed: args.seed }
        }
        _ => QrMethod::Deterministic,
    })
}

fn invert(args: &InvArgs) -> Result<OuterResult> {
    let s = read_t3(&args.a)?;
    let qr = args.method != MethodArg::Direct;
    match args.kind {
        Kind::Mp if qr => {
            let t = t_transpose(&s);
            outer::outer_qr(&s, &t, &qr_method(args, &t)?)
        }
        Kind::Mp => outer::moore_penrose(&s),
        Kind::Drazin | Kind::Group if qr => {
            let k = t_index(&s)?;
            if args.kind == Kind::Group && k > 1 {
                return Err(Error::IndexTooLarge { index: k });
            }
            let t = t_power(&s, k)?;
            outer::outer_qr(&s, &t, &qr_method(args, &t)?)
        }
        Kind::Drazin => outer::drazin(&s),
        Kind::Group => outer::group_inverse(&s),
        Kind::Outer => {
            let load = |p: &Option<PathBuf>| p.as_ref().map(read_t3).transpose();
            let (range, null, b, c) = (load(&args.range)?, load(&args.null)?, load(&args.b)?, load(&args.c)?);
            if qr {
                let same = matches!((&args.range, &args.null), (Some(r), Some(n)) if r == n);
                if !same {
                    return Err(Error::InvalidParameter(
                        "--method qr/rqr needs --range and --null naming the same tensor".into(),
                    ));
                }
                let t = range.expect("checked above");
                return outer::outer_qr(&s, &t, &qr_method(args, &t)?);
            }
            match (range, null, b, c) {
                (None, None, Some(b), Some(c)) | (Some(b), Some(c), None, None) => outer::outer_range_null(&s, &b, &c),
                (Some(t), None, None, None) => outer::outer_range(&s, &t),
                (None, Some(t), None, None) => outer::outer_null(&s, &t),
                _ => {
                    Err(Error::InvalidParameter("give --range, --null, both, or --b with --c for --kind outer".into()))
                }
            }
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout()),
    })
}

fn execute(cli: Cli) -> Result<i32> {
    if let Some(t) = &cli.tol {
        RankTol::set_default(Some(RankTol::parse(t)?));
    }
    configure_threads(cli.threads.as_deref())?;
    match cli.command {
        Command::Tprod { a, b, output } => write_t3(output, &tprod(&read_t3(a)?, &read_t3(b)?)?).map(|_| 0),
        Command::Inv(args) => {
            let r = invert(&args)?;
            write_t3(&args.output, &r.inverse)?;
            let ranks: Vec<String> = r.ranks_checked.iter().map(|(n, v)| format!("{n}={v}")).collect();
            println!("method={:?} ranks=({}) cutoff={:.3e}", r.method, ranks.join(", "), r.tolerance_used);
            Ok(0)
        }
        Command::Verify { s, x, k, csv } => {
            let (s, x) = (read_t3(s)?, read_t3(x)?);
            let mut w = csv::Writer::from_writer(open_out(&csv)?);
            let csv_err = |e: csv::Error| Error::Io(io::Error::other(e));
            w.write_record(["path", "residual", "value"]).map_err(csv_err)?;
            for (label, path) in [("tensor", Path::Tensor), ("matrix", Path::FlattenedMatrix)] {
                let rep = residuals(&s, &x, k, path)?;
                for (name, v) in rep.rows() {
                    w.write_record([label, name, &format!("{v:.6e}")]).map_err(csv_err)?;
                }
            }
            w.flush()?;
            Ok(0)
        }
        Command::Bench { problem, op, trials, csv, json } => {
            let spec = problem.spec()?;
            let op: Op = op.parse()?;
            let rec = run_bench(&spec, op, trials, problem.seed)?;
            write_csv(std::slice::from_ref(&rec), open_out(&csv)?)?;
            if let Some(j) = json {
                serde_json::to_writer_pretty(File::create(j)?, &rec).map_err(|e| Error::Io(e.into()))?;
            }
            match rec.failure {
                Some(f) => {
                    eprintln!("error: benchmark failed: {}", f.message);
                    Ok(f.exit_code)
                }
                None => Ok(0),
            }
        }
        Command::Gen { problem, output } => write_t3(output, &generate(&problem.spec()?)?).map(|_| 0),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
