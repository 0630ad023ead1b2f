//! `.t3` files: the magic `T3v1`, one kind byte (0 real, 1 complex), the
//! dimensions `p q n` as little-endian `u64`, then little-endian `f64`
//! entries in storage order (complex entries as `re, im` pairs).

use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{ScalarKind, Tensor3};

const MAGIC: &[u8; 4] = b"T3v1";
const HEADER: usize = 4 + 1 + 3 * 8;

pub fn to_bytes(t: &Tensor3) -> Vec<u8> {
    let (p, q, n) = t.dims();
    let per = if t.is_real() { 8 } else { 16 };
    let mut out = Vec::with_capacity(HEADER + per * t.data().len());
    out.extend_from_slice(MAGIC);
    out.push(if t.is_real() { 0 } else { 1 });
    for d in [p, q, n] {
        out.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for z in t.data() {
        out.extend_from_slice(&z.re.to_le_bytes());
        if !t.is_real() {
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Tensor3> {
    if bytes.len() < HEADER || &bytes[..4] != MAGIC {
        return Err(Error::Format("missing T3v1 header".into()));
    }
    let kind = match bytes[4] {
        0 => ScalarKind::Real,
        1 => ScalarKind::Complex,
        b => return Err(Error::Format(format!("unknown scalar kind byte {b}"))),
    };
    let dim = |i: usize| {
        let raw = u64::from_le_bytes(bytes[5 + 8 * i..13 + 8 * i].try_into().expect("8 bytes"));
        usize::try_from(raw).map_err(|_| Error::Format(format!("dimension {raw} too large")))
    };
    let (p, q, n) = (dim(0)?, dim(1)?, dim(2)?);
    let per = if kind == ScalarKind::Real { 8 } else { 16 };
    let count = p
        .checked_mul(q)
        .and_then(|v| v.checked_mul(n))
        .ok_or_else(|| Error::Format("dimension product overflows".into()))?;
    let payload = &bytes[HEADER..];
    if Some(payload.len()) != count.checked_mul(per) {
        return Err(Error::Format(format!("payload of {} bytes for a {p}x{q}x{n} tensor", payload.len())));
    }
    let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let data: Vec<Complex64> = payload
        .chunks_exact(per)
        .map(|c| if per == 8 { Complex64::new(f(c), 0.0) } else { Complex64::new(f(&c[..8]), f(&c[8..])) })
        .collect();
    Tensor3::from_data(p, q, n, data, kind).map_err(|e| Error::Format(e.to_string()))
}

pub fn write_t3(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    fs::write(path, to_bytes(t))?;
    Ok(())
}

pub fn read_t3(path: impl AsRef<Path>) -> Result<Tensor3> {
    from_bytes(&fs::read(path)?)
}
