//! Gray-mapped square 16-QAM with unit average symbol energy.

use num_complex::Complex64;

use crate::error::{dim_err, Result};

pub const BITS_PER_SYMBOL: usize = 4;

/// `1/√10`: half the spacing between adjacent levels at `E_s = 1`.
const SCALE: f64 = 0.316_227_766_016_837_94;

/// Gray 4-PAM: `00 → −3`, `01 → −1`, `11 → +1`, `10 → +3`.
fn pam_level(b0: bool, b1: bool) -> f64 {
    match (b0, b1) {
        (false, false) => -3.0,
        (false, true) => -1.0,
        (true, true) => 1.0,
        (true, false) => 3.0,
    }
}

fn pam_slice(x: f64) -> (bool, bool) {
    let x = x / SCALE;
    (x > 0.0, x.abs() < 2.0)
}

/// Maps every four bits `[b0 b1 b2 b3]` to `(pam(b0 b1) + j·pam(b2 b3)) / √10`.
pub fn modulate(bits: &[bool]) -> Result<Vec<Complex64>> {
    if bits.len() % BITS_PER_SYMBOL != 0 {
        return Err(dim_err("a multiple of 4 bits", bits.len()));
    }
    Ok(bits
        .chunks_exact(BITS_PER_SYMBOL)
        .map(|b| Complex64::new(pam_level(b[0], b[1]), pam_level(b[2], b[3])) * SCALE)
        .collect())
}

/// Minimum-distance hard decisions.
pub fn demodulate(symbols: &[Complex64]) -> Vec<bool> {
    let mut bits = Vec::with_capacity(symbols.len() * BITS_PER_SYMBOL);
    for s in symbols {
        let (i0, i1) = pam_slice(s.re);
        let (q0, q1) = pam_slice(s.im);
        bits.extend([i0, i1, q0, q1]);
    }
    bits
}

/// All 16 points with their bit labels.
pub fn constellation() -> Vec<([bool; 4], Complex64)> {
    (0..16u8)
        .map(|v| {
            let bits = [v & 8 != 0, v & 4 != 0, v & 2 != 0, v & 1 != 0];
            let point = modulate(&bits).expect("four bits")[0];
            (bits, point)
        })
        .collect()
}
