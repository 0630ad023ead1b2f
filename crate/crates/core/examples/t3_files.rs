//! Writing and reading `.t3` files.

use num_complex::Complex64;
use touter::io::{from_bytes, read_t3, to_bytes, write_t3};
use touter::{Result, ScalarKind, Tensor3};

fn main() -> Result<()> {
    let real = Tensor3::from_fn(2, 3, 2, |i, j, k| (i * 100 + j * 10 + k) as f64);
    let bytes = to_bytes(&real);
    println!("real 2x3x2: {} bytes, header {:?}", bytes.len(), String::from_utf8_lossy(&bytes[..4]));
    assert_eq!(from_bytes(&bytes)?, real);

    let data = (0..8).map(|v| Complex64::new(v as f64, -(v as f64))).collect();
    let complex = Tensor3::from_data(2, 2, 2, data, ScalarKind::Complex)?;
    let path = std::env::temp_dir().join(format!("touter-example-{}.t3", std::process::id()));
    write_t3(&path, &complex)?;
    let back = read_t3(&path)?;
    std::fs::remove_file(&path)?;
    println!("complex round trip equal: {}", back == complex);

    println!("truncated file: {}", from_bytes(&bytes[..bytes.len() - 3]).unwrap_err());
    Ok(())
}
