//! Outer inverses with a prescribed range, null space, or both, on the small
//! sample tensors. The two-sided case is reported as non-existent.

use touter::outer::{exists_range_null, outer_null, outer_range, outer_range_null, representation_range};
use touter::samples;
use touter::tensor::tprod;
use touter::{Error, Result, Tensor3};

fn show(label: &str, x: &Tensor3) {
    println!("{label}:");
    for k in 0..x.n() {
        let s = x.real_slice(k);
        for i in 0..s.nrows() {
            let row: Vec<String> = (0..s.ncols()).map(|j| format!("{:8.4}", s[(i, j)])).collect();
            println!("  {}", row.join(" "));
        }
        if k + 1 < x.n() {
            println!("  --");
        }
    }
}

fn two_inverse_gap(s: &Tensor3, x: &Tensor3) -> Result<f64> {
    Ok(tprod(&tprod(x, s)?, x)?.max_abs_diff(x))
}

fn main() -> Result<()> {
    let s = samples::base_operand();

    let r = outer_range(&s, &samples::range_prescriber())?;
    show("range prescribed", &r.inverse);
    println!("  ranks {:?}, |X*S*X - X| = {:.1e}", r.ranks_checked, two_inverse_gap(&s, &r.inverse)?);

    let n = outer_null(&s, &samples::null_prescriber())?;
    show("null space prescribed", &n.inverse);
    println!("  ranks {:?}, |X*S*X - X| = {:.1e}", n.ranks_checked, two_inverse_gap(&s, &n.inverse)?);

    let t = samples::range_prescriber();
    let z = Tensor3::from_fn(t.q(), s.p(), s.n(), |i, j, k| (i + j + k) as f64 * 0.1);
    let other = representation_range(&s, &t, &z)?;
    println!("another member of the range family: |X*S*X - X| = {:.1e}", two_inverse_gap(&s, &other)?);

    let (b, c) = (samples::two_sided_range(), samples::two_sided_null());
    println!("two-sided prescription exists: {}", exists_range_null(&s, &b, &c)?);
    match outer_range_null(&s, &b, &c) {
        Err(Error::ExistenceFailed { ranks }) => println!("  refused: {ranks}"),
        other => println!("  unexpected: {other:?}"),
    }
    Ok(())
}
