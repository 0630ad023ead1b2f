//! Outer inverses through a column-pivoted t-QR, deterministic and sketched.

use touter::outer::{outer_qr, outer_qr_permuted, outer_range_null, t_qrcp, QrMethod, SliceRank};
use touter::tensor::{t_transpose, tprod};
use touter::{Result, Tensor3};

fn low_rank(p: usize, q: usize, r: usize, n: usize) -> Result<Tensor3> {
    let a = Tensor3::from_fn(p, r, n, |i, j, k| ((3 * i + 5 * j + 7 * k) % 11) as f64 - 5.0);
    let b = Tensor3::from_fn(r, q, n, |i, j, k| ((2 * i + 7 * j + k) % 13) as f64 / 6.0 - 1.0);
    tprod(&a, &b)
}

fn main() -> Result<()> {
    let s = low_rank(12, 10, 4, 3)?;
    let t = t_transpose(&s);

    let part = t_qrcp(&t)?;
    println!("numerical rank per slice: {}", part.s);
    println!("Q*R vs T*P: {:.2e}", tprod(&part.qtil, &part.rtil)?.max_abs_diff(&tprod(&t, &part.perm)?));

    let direct = outer_range_null(&s, &t, &t)?.inverse;
    let qr = outer_qr(&s, &t, &QrMethod::Deterministic)?;
    let permuted = outer_qr_permuted(&s, &t)?;
    println!("qr vs direct:          {:.2e}", qr.inverse.max_abs_diff(&direct));
    println!("permuted vs direct:    {:.2e}", permuted.max_abs_diff(&direct));

    let sketched = outer_qr(&s, &t, &QrMethod::Randomized { rank: SliceRank::Uniform(4), oversample: 10, seed: 1 })?;
    println!("randomized vs direct:  {:.2e}", sketched.inverse.max_abs_diff(&direct));
    let short = outer_qr(&s, &t, &QrMethod::randomized(2, 1))?;
    println!("rank-2 sketch differs: {:.2e}", short.inverse.max_abs_diff(&direct));
    Ok(())
}
