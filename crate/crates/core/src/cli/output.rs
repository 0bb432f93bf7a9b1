//! CSV result files. Every file is rewritten from scratch with a header row.

use std::io::Write;
use std::path::Path;

use crate::complexity::ComplexityReport;
use crate::equalizers::SparseEqualizer;
use crate::simulator::{BerCurve, DeltaMin, OperatingPoint};

pub const BER_HEADER: [&str; 8] = ["algorithm", "delta", "K", "snr_db", "ber", "bit_errors", "bit_count", "seed"];
pub const OPOINT_HEADER: [&str; 6] = ["algorithm", "delta", "K", "target_ber", "snr_db", "reachable"];
pub const DELTAMIN_HEADER: [&str; 5] = ["algorithm", "gap_db", "delta_min", "K_min", "lmmse_snr_db"];
pub const COMPLEXITY_HEADER: [&str; 9] = [
    "algorithm",
    "B",
    "U",
    "K",
    "T",
    "preprocessing_mults",
    "equalization_mults",
    "fft_mults",
    "total_mults",
];
pub const EQUALIZER_HEADER: [&str; 4] = ["user", "beam", "re", "im"];

/// Six significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.5e}")
}

fn opt_db(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.4}")).unwrap_or_default()
}

fn write_rows<W: Write>(out: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_file(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> csv::Result<()> {
    write_rows(std::fs::File::create(path)?, header, rows)
}

pub fn ber_rows(curves: &[BerCurve], seed: u64) -> Vec<Vec<String>> {
    curves
        .iter()
        .flat_map(|c| {
            c.samples.iter().map(move |s| {
                vec![
                    c.algorithm.name().to_string(),
                    c.delta.to_string(),
                    c.k.to_string(),
                    s.snr_db.to_string(),
                    sci(s.ber),
                    s.bit_errors.to_string(),
                    s.bit_count.to_string(),
                    seed.to_string(),
                ]
            })
        })
        .collect()
}

pub fn opoint_rows(points: &[OperatingPoint]) -> Vec<Vec<String>> {
    points
        .iter()
        .map(|p| {
            vec![
                p.algorithm.name().to_string(),
                p.delta.to_string(),
                p.k.to_string(),
                sci(p.target_ber),
                opt_db(p.snr_db),
                p.reachable.to_string(),
            ]
        })
        .collect()
}

pub fn deltamin_rows(results: &[DeltaMin]) -> Vec<Vec<String>> {
    results
        .iter()
        .map(|d| {
            vec![
                d.algorithm.name().to_string(),
                d.gap_db.to_string(),
                d.delta_min.to_string(),
                d.k_min.to_string(),
                opt_db(d.lmmse_snr_db),
            ]
        })
        .collect()
}

pub fn complexity_rows(reports: &[ComplexityReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.algorithm.name().to_string(),
                r.b.to_string(),
                r.u.to_string(),
                r.k.to_string(),
                r.t.to_string(),
                r.preprocessing_mults.to_string(),
                r.equalization_mults.to_string(),
                r.fft_mults.to_string(),
                r.total.to_string(),
            ]
        })
        .collect()
}

pub fn write_ber(path: &Path, curves: &[BerCurve], seed: u64) -> csv::Result<()> {
    write_file(path, &BER_HEADER, ber_rows(curves, seed))
}

pub fn write_opoint(path: &Path, points: &[OperatingPoint]) -> csv::Result<()> {
    write_file(path, &OPOINT_HEADER, opoint_rows(points))
}

pub fn write_deltamin(path: &Path, results: &[DeltaMin]) -> csv::Result<()> {
    write_file(path, &DELTAMIN_HEADER, deltamin_rows(results))
}

pub fn write_complexity(path: &Path, reports: &[ComplexityReport]) -> csv::Result<()> {
    write_file(path, &COMPLEXITY_HEADER, complexity_rows(reports))
}

/// Nonzero coefficients as `user,beam,re,im`, 1-based indices, row by row.
pub fn write_equalizer<W: Write>(out: W, eq: &SparseEqualizer) -> csv::Result<()> {
    let rows = (0..eq.users()).flat_map(|u| {
        eq.row_entries(u).into_iter().map(move |(b, c)| {
            vec![
                (u + 1).to_string(),
                (b + 1).to_string(),
                format!("{:.16e}", c.re),
                format!("{:.16e}", c.im),
            ]
        })
    });
    write_rows(out, &EQUALIZER_HEADER, rows)
}
