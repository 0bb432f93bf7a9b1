use crate::algorithm::Algorithm;
use crate::equalizers::k_from_delta;
use crate::error::{Error, Result};

use super::{simulate, BerCurve, BerSample, Cell, SimConfig};

/// SNR at which a BER curve crosses the target.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint {
    pub algorithm: Algorithm,
    pub delta: f64,
    pub k: usize,
    pub target_ber: f64,
    /// `None` when the target is not bracketed by the simulated grid.
    pub snr_db: Option<f64>,
    pub reachable: bool,
    /// First-order Monte-Carlo standard deviation of `snr_db`.
    pub snr_std_db: f64,
}

/// BER used on the log axis; zero-error points are floored at half an error.
fn log_ber(s: &BerSample) -> (f64, f64) {
    let n = s.bit_count.max(1) as f64;
    let p = s.ber.max(0.5 / n);
    // standard deviation of ln p̂ for a binomial estimate
    let sigma = ((1.0 - p) / (n * p)).sqrt();
    (p.ln(), sigma)
}

/// Log-linear interpolation between the first pair of neighbouring samples
/// that brackets `target` (`ber_i ≥ target ≥ ber_{i+1}`).
pub fn snr_operating_point(curve: &BerCurve, target: f64) -> OperatingPoint {
    let mut point = OperatingPoint {
        algorithm: curve.algorithm,
        delta: curve.delta,
        k: curve.k,
        target_ber: target,
        snr_db: None,
        reachable: false,
        snr_std_db: f64::INFINITY,
    };
    if !(target > 0.0) {
        return point;
    }
    let lt = target.ln();
    for pair in curve.samples.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        if !(lo.ber >= target && hi.ber <= target) {
            continue;
        }
        let (la, sa) = log_ber(lo);
        let (lb, sb) = log_ber(hi);
        let span = hi.snr_db - lo.snr_db;
        let d = la - lb;
        let x = if d > 0.0 { ((la - lt) / d).clamp(0.0, 1.0) } else { 0.0 };
        point.snr_db = Some(lo.snr_db + x * span);
        point.reachable = true;
        point.snr_std_db = if d > 0.0 {
            (span / d).abs() * ((1.0 - x).powi(2) * sa * sa + x * x * sb * sb).sqrt()
        } else {
            0.0
        };
        break;
    }
    point
}

pub fn operating_points(curves: &[BerCurve], target: f64) -> Vec<OperatingPoint> {
    curves.iter().map(|c| snr_operating_point(c, target)).collect()
}

/// Result of a minimum-density search.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaMin {
    pub algorithm: Algorithm,
    pub gap_db: f64,
    pub delta_min: f64,
    pub k_min: usize,
    /// Operating point of exact LMMSE, the reference of the gap.
    pub lmmse_snr_db: Option<f64>,
}

/// Smallest δ whose operating point is within `gap_db` of the LMMSE reference.
/// `points` must belong to one algorithm; they are scanned in ascending δ.
pub fn delta_min_from_points(points: &[OperatingPoint], lmmse: &OperatingPoint, gap_db: f64, beams: usize) -> Result<DeltaMin> {
    let algorithm = match points.first() {
        Some(p) => p.algorithm,
        None => return Err(Error::SearchFailed("no density coefficients to search".into())),
    };
    let vacuous = gap_db == f64::INFINITY;
    let reference = lmmse.snr_db.filter(|_| lmmse.reachable);
    if reference.is_none() && !vacuous {
        return Err(Error::SearchFailed(format!(
            "{algorithm}: LMMSE never reaches BER {:e} on the SNR grid",
            lmmse.target_ber
        )));
    }
    let mut sorted: Vec<&OperatingPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.delta.total_cmp(&b.delta));
    let hit = sorted.iter().find(|p| {
        vacuous
            || match (p.reachable, p.snr_db, reference) {
                (true, Some(s), Some(r)) => s <= r + gap_db,
                _ => false,
            }
    });
    match hit {
        Some(p) => Ok(DeltaMin {
            algorithm,
            gap_db,
            delta_min: p.delta,
            k_min: k_from_delta(p.delta, beams),
            lmmse_snr_db: reference,
        }),
        None => {
            let summary: Vec<String> = sorted
                .iter()
                .map(|p| match p.snr_db {
                    Some(s) => format!("delta {} at {s:.2} dB", p.delta),
                    None => format!("delta {} unreachable", p.delta),
                })
                .collect();
            Err(Error::SearchFailed(format!(
                "{algorithm}: no density within {gap_db} dB of LMMSE at {:.2} dB ({})",
                reference.unwrap_or(f64::NAN),
                summary.join(", ")
            )))
        }
    }
}

/// Simulates LMMSE and `algorithm` over the δ grid and returns `δ_min`.
pub fn delta_min_search(config: &SimConfig, algorithm: Algorithm) -> Result<DeltaMin> {
    if !config.delta_grid.contains(&1.0) {
        return Err(Error::Parameter("the density grid must contain 1".into()));
    }
    let mut cells = vec![Cell::new(Algorithm::Lmmse, 1.0)];
    cells.extend(config.delta_grid.iter().map(|&d| Cell::new(algorithm, d)));
    let curves = simulate(config, &cells)?;
    let points = operating_points(&curves, config.target_ber);
    delta_min_from_points(&points[1..], &points[0], config.gap_db, config.b)
}
