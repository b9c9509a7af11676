//! Fast Walsh-Hadamard transform over complex vectors.
//!
//! Natural (Hadamard) ordering: `out[k] = Σ_a in[a]·(-1)^popcount(k & a)`,
//! unnormalized, so applying it twice multiplies by the length. Index bits
//! pair positionally, which is the convention the chirp decoder's peak
//! arithmetic relies on.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// In-place transform. Length must be a power of two.
pub fn fwht_inplace(v: &mut [Complex64]) -> Result<()> {
    let n = v.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::shape(format!(
            "fwht requires a power-of-two length, got {n}"
        )));
    }
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(h * 2) {
            for i in block..block + h {
                let a = v[i];
                let b = v[i + h];
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
    Ok(())
}

pub fn fwht(v: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut out = v.to_vec();
    fwht_inplace(&mut out)?;
    Ok(out)
}

/// Index of the entry with the largest magnitude, lowest index on ties.
pub fn argmax_magnitude(v: &[Complex64]) -> usize {
    let mut best = 0usize;
    let mut best_sq = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let sq = z.norm_sqr();
        if sq > best_sq {
            best_sq = sq;
            best = i;
        }
    }
    best
}
