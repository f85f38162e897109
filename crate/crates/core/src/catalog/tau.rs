//! Ramanujan tau by sparse convolution with the cube of the eta product.
//!
//! `Delta = q prod (1 - q^n)^24 = q (eta^3)^8` and
//! `prod (1 - q^n)^3 = sum_k (-1)^k (2k + 1) q^{k(k+1)/2}`, so eight sparse
//! multiplications of length `N` give `tau(1..=N)` in `O(N^{3/2})`.
//! The inner loops run in checked `i128`; on overflow the whole table is
//! recomputed with arbitrary-precision integers.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const TAU_LIMIT: usize = 1_000_000;
const MAGIC: &[u8; 6] = b"TAUTBL";
const VERSION: u8 = 1;

/// `(exponent, coefficient)` pairs of `prod (1 - q^n)^3` up to `q^len`.
fn eta_cubed(len: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e > len {
            break;
        }
        let c = (2 * k + 1) as i64;
        out.push((e, if k % 2 == 0 { c } else { -c }));
        k += 1;
    }
    out
}

fn sparse_mul_i128(dense: &[i128], sparse: &[(usize, i64)]) -> Option<Vec<i128>> {
    dense
        .par_iter()
        .enumerate()
        .map(|(n, _)| {
            let mut acc: i128 = 0;
            for &(e, c) in sparse {
                if e > n {
                    break;
                }
                acc = acc.checked_add(dense[n - e].checked_mul(c as i128)?)?;
            }
            Some(acc)
        })
        .collect()
}

fn sparse_mul_big(dense: &[BigInt], sparse: &[(usize, i64)]) -> Vec<BigInt> {
    (0..dense.len())
        .into_par_iter()
        .map(|n| {
            let mut acc = BigInt::zero();
            for &(e, c) in sparse {
                if e > n {
                    break;
                }
                acc += &dense[n - e] * c;
            }
            acc
        })
        .collect()
}

/// Coefficients of `(eta^3)^8` as a dense series of length `len`.
fn eta24(len: usize) -> Vec<BigInt> {
    let sparse = eta_cubed(len);
    let mut dense: Vec<i128> = vec![0; len];
    for &(e, c) in &sparse {
        if e < len {
            dense[e] = c as i128;
        }
    }
    let mut fits = true;
    for _ in 1..8 {
        match sparse_mul_i128(&dense, &sparse) {
            Some(next) => dense = next,
            None => {
                fits = false;
                break;
            }
        }
    }
    if fits {
        return dense.into_iter().map(BigInt::from).collect();
    }
    let mut big: Vec<BigInt> = vec![BigInt::zero(); len];
    for &(e, c) in &sparse {
        if e < len {
            big[e] = BigInt::from(c);
        }
    }
    for _ in 1..8 {
        big = sparse_mul_big(&big, &sparse);
    }
    big
}

/// Exact `tau(1..=n)`; index 0 of the result holds `tau(1)`.
pub fn ramanujan_tau(n: usize) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::EmptyDomain("tau table of length 0".into()));
    }
    if n > TAU_LIMIT {
        return Err(Error::Range(format!("tau table length {n} above {TAU_LIMIT}")));
    }
    Ok(eta24(n))
}

/// `tau(p) / p^{11/2}` as a float.
pub fn normalized(tau_p: &BigInt, p: u64) -> f64 {
    let t = tau_p.to_f64().unwrap_or(f64::NAN);
    t / (p as f64).powf(5.5)
}

pub fn write_cache(path: &Path, tau: &[BigInt]) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    let mut buf = Vec::with_capacity(16 * tau.len() + 16);
    buf.extend_from_slice(MAGIC);
    buf.push(VERSION);
    buf.extend_from_slice(&(tau.len() as u64).to_le_bytes());
    for t in tau {
        let bytes = t.to_signed_bytes_le();
        buf.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
        buf.extend_from_slice(&bytes);
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(&buf).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub fn read_cache(path: &Path) -> Result<Vec<BigInt>> {
    let bad = |why: &str| Error::Cache(format!("{}: {why}", path.display()));
    let mut raw = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut raw))
        .map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    if raw.len() < 15 || &raw[..6] != MAGIC {
        return Err(bad("bad magic"));
    }
    if raw[6] != VERSION {
        return Err(bad(&format!("unsupported version {}", raw[6])));
    }
    let count = u64::from_le_bytes(raw[7..15].try_into().unwrap()) as usize;
    let mut pos = 15;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let len_bytes = raw.get(pos..pos + 4).ok_or_else(|| bad("truncated record header"))?;
        let len = u32::from_le_bytes(len_bytes.try_into().unwrap()) as usize;
        pos += 4;
        let body = raw.get(pos..pos + len).ok_or_else(|| bad("truncated record"))?;
        out.push(BigInt::from_signed_bytes_le(body));
        pos += len;
    }
    if pos != raw.len() {
        return Err(bad("trailing bytes"));
    }
    Ok(out)
}

/// Read `tau(1..=n)` from `path` when it holds at least `n` values, otherwise
/// build the table and write it.
pub fn load_or_build(path: &Path, n: usize) -> Result<Vec<BigInt>> {
    if let Ok(mut t) = read_cache(path) {
        if t.len() >= n {
            t.truncate(n);
            return Ok(t);
        }
    }
    let t = ramanujan_tau(n)?;
    write_cache(path, &t)?;
    Ok(t)
}
