//! Moore-Penrose, Drazin and group inverses of small tensors, checked with
//! the residual table on both the tensor and the flattened path.

use touter::metrics::{residuals, Path};
use touter::outer::{drazin, group_inverse, moore_penrose};
use touter::samples;
use touter::tensor::t_index;
use touter::{Result, Tensor3};

fn report(label: &str, s: &Tensor3, x: &Tensor3, k: Option<usize>) -> Result<()> {
    println!("{label}");
    let t = residuals(s, x, k, Path::Tensor)?;
    let m = residuals(s, x, k, Path::FlattenedMatrix)?;
    for ((name, a), (_, b)) in t.rows().into_iter().zip(m.rows()) {
        println!("  {name:<4} tensor {a:9.2e}   matrix {b:9.2e}");
    }
    Ok(())
}

fn main() -> Result<()> {
    let s = samples::pseudoinverse_operand();
    let mp = moore_penrose(&s)?;
    println!("cutoff {:.2e}, {:?}", mp.tolerance_used, mp.ranks_checked);
    report("moore-penrose", &s, &mp.inverse, None)?;

    let g = samples::group_operand();
    let gi = group_inverse(&g)?;
    report("group", &g, &gi.inverse, Some(1))?;

    // nilpotent in the last direction, so the index is 2
    let t = Tensor3::from_array([
        [[2.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]],
        [[0.5, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    ]);
    let k = t_index(&t)?;
    let d = drazin(&t)?;
    println!("index {k}");
    report("drazin", &t, &d.inverse, Some(k))?;
    println!("group inverse: {}", group_inverse(&t).unwrap_err());
    Ok(())
}
