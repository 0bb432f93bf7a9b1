//! Real-valued multiplication counts for preprocessing and equalization.
//!
//! Every beamspace algorithm pays `E = 4TUK` to apply its `U × K` equalizer
//! to `T` receive vectors and `F = (U + T)·2B·log₂B` for the FFTs of the `U`
//! channel columns and the `T` receive vectors. Antenna-domain LMMSE pays
//! `4TUB` for equalization and no FFT. All counts use exact integer
//! arithmetic.

use crate::algorithm::Algorithm;
use crate::error::{Error, Result};

/// Real multiplications per complex multiplication.
pub const REAL_MULTS_PER_COMPLEX: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexityReport {
    pub algorithm: Algorithm,
    pub b: u64,
    pub u: u64,
    /// `B` for exact LMMSE, which uses every antenna.
    pub k: u64,
    pub t: u64,
    pub preprocessing_mults: u64,
    pub equalization_mults: u64,
    pub fft_mults: u64,
    pub total: u64,
}

fn validate(b: u64, u: u64) -> Result<u32> {
    if !b.is_power_of_two() {
        return Err(Error::Parameter(format!("B must be a power of two, got {b}")));
    }
    if u == 0 {
        return Err(Error::Parameter("U must be at least 1".into()));
    }
    Ok(b.trailing_zeros())
}

fn to_count(v: i128, what: &str) -> Result<u64> {
    u64::try_from(v).map_err(|_| Error::Parameter(format!("{what} count {v} is outside the u64 range")))
}

/// Preprocessing polynomial of each algorithm, without the `E` and `F` terms.
fn preprocessing(algorithm: Algorithm, b: i128, u: i128, k: i128) -> i128 {
    let u2 = u * u;
    let u3 = u2 * u;
    let u4 = u3 * u;
    match algorithm {
        Algorithm::Lmmse => 2 * u3 + 6 * b * u2 - 2 * (b + 1) * u,
        Algorithm::LocalLmmse => {
            (-4 * u - 6) * k * k * k + (4 * b * u + 8 * b + 2 * u) * k * k + (8 * b * u - 12 * b + 4 * u - 6) * k
        }
        Algorithm::Sb => 2 * b * u + 2 * u3 + 6 * k * u2 - 2 * (k + 1) * u,
        Algorithm::Comp => {
            2 * u3 + (4 * b * k + 2 * k * k + 12 * k - 4) * u2 + (2 * b + 2 * b * k - 2 * k * k + 4 * k - 6) * u
        }
        Algorithm::Lc => 6 * b * u + 2 * u3 + 6 * k * u2 - 2 * k * u - 2 * u,
        Algorithm::Eomp => {
            2 * u4 + (6 * k - 4) * u3 + (3 * k * k + (2 * b + 9) * k) * u2 + (2 * b * (k + 1) - k * k) * u
        }
        Algorithm::Le => 2 * u4 + 2 * k * u3 + (4 * k - 2) * u2 + 2 * b * u,
    }
}

/// Multiplication count of `algorithm` for one coherence interval of `T` transmissions.
///
/// `T = 0` is allowed and isolates the preprocessing (plus channel FFT) cost.
pub fn mult_count(algorithm: Algorithm, b: u64, u: u64, k: u64, t: u64) -> Result<ComplexityReport> {
    let log2b = validate(b, u)?;
    let k = if algorithm == Algorithm::Lmmse {
        b
    } else {
        if k == 0 || k > b {
            return Err(Error::Parameter(format!("K must lie in 1..={b}, got {k}")));
        }
        k
    };
    let (bi, ui, ki, ti) = (b as i128, u as i128, k as i128, t as i128);
    let per_complex = REAL_MULTS_PER_COMPLEX as i128;
    let pre = preprocessing(algorithm, bi, ui, ki);
    let (equalization, fft) = if algorithm.is_beamspace() {
        (per_complex * ti * ui * ki, (ui + ti) * 2 * bi * log2b as i128)
    } else {
        (per_complex * ti * ui * bi, 0)
    };
    let preprocessing_mults = to_count(pre, "preprocessing")?;
    let equalization_mults = to_count(equalization, "equalization")?;
    let fft_mults = to_count(fft, "FFT")?;
    let total = to_count(pre + equalization + fft, "total")?;
    Ok(ComplexityReport {
        algorithm,
        b,
        u,
        k,
        t,
        preprocessing_mults,
        equalization_mults,
        fft_mults,
        total,
    })
}

/// Cost of `(H_Ω^H H_Ω + ρI)^{-1} H_Ω^H` for a `K × U` matrix using Cholesky.
pub fn cholesky_solve_count(u: u64, k: u64) -> Result<u64> {
    if u == 0 || k == 0 {
        return Err(Error::Parameter("U and K must be at least 1".into()));
    }
    let (u, k) = (u as i128, k as i128);
    to_count(2 * u * u * u + 6 * k * u * u - (2 * k + 1) * u, "Cholesky")
}

/// Largest density `δ = K/B` below which per-transmission beamspace cost
/// (`4UK + 2B log₂B`) undercuts antenna-domain cost (`4UB`): `1 − log₂B / (2U)`.
///
/// A nonpositive result means beamspace processing can never win as `T → ∞`.
pub fn asymptotic_threshold(b: u64, u: u64) -> Result<f64> {
    let log2b = validate(b, u)?;
    Ok(1.0 - log2b as f64 / (2.0 * u as f64))
}

/// Growth of the count per additional transmission.
pub fn per_transmission_slope(algorithm: Algorithm, b: u64, u: u64, k: u64) -> Result<u64> {
    let at0 = mult_count(algorithm, b, u, k, 0)?;
    let at1 = mult_count(algorithm, b, u, k, 1)?;
    Ok(at1.total - at0.total)
}

/// Smallest `T ≥ 1` at which `algorithm` needs strictly fewer multiplications
/// than antenna-domain LMMSE, or `None` when its per-transmission slope is not smaller.
pub fn crossover_t(algorithm: Algorithm, b: u64, u: u64, k: u64) -> Result<Option<u64>> {
    let alg0 = mult_count(algorithm, b, u, k, 0)?.total as i128;
    let ref0 = mult_count(Algorithm::Lmmse, b, u, k, 0)?.total as i128;
    let alg_slope = per_transmission_slope(algorithm, b, u, k)? as i128;
    let ref_slope = per_transmission_slope(Algorithm::Lmmse, b, u, k)? as i128;
    if alg_slope >= ref_slope {
        return Ok(None);
    }
    // alg0 + alg_slope·T < ref0 + ref_slope·T  <=>  T > (alg0 − ref0) / (ref_slope − alg_slope)
    let excess = alg0 - ref0;
    let t = if excess < 0 {
        1
    } else {
        (excess / (ref_slope - alg_slope) + 1).max(1)
    };
    Ok(Some(t as u64))
}
