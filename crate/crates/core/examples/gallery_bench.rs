//! Gallery tensors and a short tensor-versus-flattened benchmark.

use std::io;

use touter::bench::{run_bench, write_csv, Op};
use touter::gallery::{generate, Family, GallerySpec, SliceRule};
use touter::tensor::{cond, t_rank};
use touter::{RankTol, Result};

fn main() -> Result<()> {
    for name in ["chow", "kahan", "cycol", "gearmat"] {
        // replicated slices leave only the zero-frequency slice nonzero
        let spec = GallerySpec::new(Family::default_for(name)?, 8, 8, 4);
        let replicated = generate(&spec)?;
        let perturbed = generate(&spec.with_rule(SliceRule::SeededPerturb { seed: 1, magnitude: 1e-2 }))?;
        println!(
            "{name:<8} t-rank replicated {:>2}/32, perturbed {:>2}/32, cond {:.2e}",
            t_rank(&replicated, RankTol::Auto)?,
            t_rank(&perturbed, RankTol::Auto)?,
            cond(&perturbed).unwrap_or(f64::INFINITY)
        );
    }

    let spec = GallerySpec::new(Family::Kahan { theta: 1.2, pert: 25.0 }, 16, 16, 8)
        .with_rule(SliceRule::SeededPerturb { seed: 3, magnitude: 1e-3 });
    let records = [run_bench(&spec, Op::Mp, 3, 0)?, run_bench(&spec, Op::Drazin, 3, 0)?];
    for r in &records {
        println!("{}: tensor {:.2e}s, flattened {:.2e}s", r.op, r.mt_tensor, r.mt_matrix);
    }
    write_csv(&records, io::stdout())
}
