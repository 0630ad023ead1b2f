//! The t-product three ways: FFT slices, the naive circular convolution and
//! the block-circulant matrix.

use touter::fourier::to_fourier;
use touter::tensor::{bcirc, fold, identity_tensor, t_inverse, tprod, tprod_naive, unfold, BlockMatrix};
use touter::{linalg, Result, ScalarKind, Tensor3};

fn main() -> Result<()> {
    let a = Tensor3::from_fn(3, 4, 5, |i, j, k| ((i + 2 * j + 3 * k) % 7) as f64 - 3.0);
    let b = Tensor3::from_fn(4, 2, 5, |i, j, k| (i * j + k) as f64 / 4.0);

    let fast = tprod(&a, &b)?;
    let slow = tprod_naive(&a, &b)?;
    let product = BlockMatrix::new(linalg::mul(bcirc(&a).entries(), unfold(&b).entries()), ScalarKind::Real);
    let via_matrix = fold(&product, 3, 2, 5)?;
    println!("fft vs naive:   {:.2e}", fast.max_abs_diff(&slow));
    println!("fft vs bcirc:   {:.2e}", fast.max_abs_diff(&via_matrix));

    let stack = to_fourier(&a);
    println!("fourier slices: {} of size {}x{}", stack.n(), stack.dims().0, stack.dims().1);
    println!("conjugate symmetry defect: {:.2e}", stack.conjugate_symmetry_defect());

    let sq = Tensor3::from_fn(3, 3, 4, |i, j, k| if i == j && k == 0 { 4.0 } else { ((i + j + k) % 3) as f64 * 0.5 });
    let inv = t_inverse(&sq)?;
    let eye = identity_tensor(3, 4);
    println!("A * inv(A) - I: {:.2e}", tprod(&sq, &inv)?.max_abs_diff(&eye));
    Ok(())
}
