//! Monte-Carlo uplink simulation: 16-QAM over the synthetic channel, pilot
//! based channel estimation, beamspace equalization and hard-decision BER.
//!
//! SNR is per receive antenna, `E_s / N0`, with `E_s = 1` and channels
//! normalized to `E‖h̄_u‖² = B`; the regularizer is `ρ = N0 / E_s`.
//!
//! Randomness is split into independent ChaCha streams: one per coherence
//! block for the channel draw (shared by every SNR point) and one per
//! (SNR point, block) for pilot noise, data bits and receiver noise. Every
//! (algorithm, δ) cell therefore sees exactly the same channels, data and
//! noise, and results do not depend on thread scheduling.

mod operating;
pub mod qam;

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algorithm::Algorithm;
use crate::channel::{
    complex_gaussian, dft_pilots, generate_channel_with_rng, ls_channel_estimate, to_beamspace_with, ChannelMatrix,
    ChannelProfile, Domain,
};
use crate::equalizers::{
    build_equalizer, comp_checkpoints, eomp_checkpoints, k_from_delta, GramMethod, SparseEqualizer,
};
use crate::error::{dim_err, Error, Result};
use crate::numerics::UnitaryTransform;

pub use operating::{
    delta_min_from_points, delta_min_search, operating_points, snr_operating_point, DeltaMin,
    OperatingPoint,
};

/// Average transmit symbol energy.
pub const SYMBOL_ENERGY: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Modulation {
    #[default]
    Qam16,
}

impl Modulation {
    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Qam16 => qam::BITS_PER_SYMBOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub b: usize,
    pub u: usize,
    pub modulation: Modulation,
    /// Strictly increasing, in dB.
    pub snr_grid: Vec<f64>,
    /// Density coefficients in `(0, 1]`.
    pub delta_grid: Vec<f64>,
    /// Coherence blocks per SNR point; each block redraws the user drop.
    pub trials: usize,
    /// Data transmissions `T` per coherence block.
    pub transmissions: usize,
    pub seed: u64,
    pub profile: ChannelProfile,
    pub target_ber: f64,
    pub gap_db: f64,
    /// Build equalizers from the true channel instead of the LS estimate.
    pub perfect_csi: bool,
}

impl SimConfig {
    pub fn new(b: usize, u: usize) -> Self {
        Self {
            b,
            u,
            modulation: Modulation::Qam16,
            snr_grid: (-10..=10).map(f64::from).collect(),
            delta_grid: vec![0.0625, 0.125, 0.25, 0.5, 1.0],
            trials: 100,
            transmissions: 16,
            seed: 1,
            profile: ChannelProfile::los(),
            target_ber: 1e-2,
            gap_db: 1.0,
            perfect_csi: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        if !self.b.is_power_of_two() {
            return bad(format!("B must be a power of two, got {}", self.b));
        }
        if self.u == 0 || self.u > self.b {
            return bad(format!("need 1 <= U <= B, got U = {}", self.u));
        }
        if self.trials == 0 || self.transmissions == 0 {
            return bad("trials and transmissions must be at least 1".into());
        }
        if self.snr_grid.is_empty() || self.snr_grid.iter().any(|s| s.is_nan()) {
            return bad("snr_grid must be a non-empty list of numbers".into());
        }
        if self.snr_grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("snr_grid must be strictly increasing".into());
        }
        if let Some(d) = self.delta_grid.iter().find(|d| !(**d > 0.0 && **d <= 1.0)) {
            return bad(format!("density coefficients must lie in (0, 1], got {d}"));
        }
        if !(self.target_ber > 0.0 && self.target_ber < 1.0) {
            return bad(format!("target_ber must lie in (0, 1), got {}", self.target_ber));
        }
        if !(self.gap_db >= 0.0) {
            return bad(format!("gap_db must be nonnegative, got {}", self.gap_db));
        }
        self.profile.validate()
    }

    pub fn bits_per_transmission(&self) -> usize {
        self.u * self.modulation.bits_per_symbol()
    }
}

/// `N0 = E_s · 10^{−SNR/10}`; `+∞` dB gives a noiseless link.
pub fn noise_variance(snr_db: f64) -> f64 {
    SYMBOL_ENERGY * 10f64.powf(-snr_db / 10.0)
}

/// `ρ = N0 / E_s`.
pub fn regularizer(snr_db: f64) -> f64 {
    noise_variance(snr_db) / SYMBOL_ENERGY
}

/// Bit errors and bits transmitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ErrorCount {
    pub bit_errors: u64,
    pub bits: u64,
}

impl ErrorCount {
    fn add(&mut self, other: ErrorCount) {
        self.bit_errors += other.bit_errors;
        self.bits += other.bits;
    }
}

/// One uplink transmission as seen by the receiver.
struct Transmission {
    bits: Vec<bool>,
    /// Beamspace receive vector `y = F(H̄ s + n̄)`.
    y: Vec<Complex64>,
}

fn draw_transmission<R: Rng + ?Sized>(
    h_bar: &ChannelMatrix,
    n0: f64,
    transform: &UnitaryTransform,
    rng: &mut R,
) -> Result<Transmission> {
    let bits: Vec<bool> = (0..h_bar.u() * qam::BITS_PER_SYMBOL).map(|_| rng.random()).collect();
    let s = qam::modulate(&bits)?;
    let mut y = h_bar.matrix().mul_vec(&s)?;
    let sigma = n0.sqrt();
    for y_b in y.iter_mut() {
        *y_b += complex_gaussian(rng) * sigma;
    }
    transform.forward_in_place(&mut y)?;
    Ok(Transmission { bits, y })
}

fn count_errors(eq: &SparseEqualizer, tx: &Transmission) -> Result<ErrorCount> {
    let s_hat = eq.apply(&tx.y)?;
    let decided = qam::demodulate(&s_hat);
    let bit_errors = decided.iter().zip(&tx.bits).filter(|(a, b)| a != b).count() as u64;
    Ok(ErrorCount {
        bit_errors,
        bits: tx.bits.len() as u64,
    })
}

/// Sends one random 16-QAM vector through `h_bar` (antenna domain), applies
/// `eq` in beamspace and counts bit errors after hard slicing.
pub fn run_trial<R: Rng + ?Sized>(
    h_bar: &ChannelMatrix,
    eq: &SparseEqualizer,
    snr_db: f64,
    transform: &UnitaryTransform,
    rng: &mut R,
) -> Result<ErrorCount> {
    if h_bar.domain() != Domain::Antenna {
        return Err(Error::Domain {
            expected: Domain::Antenna.as_str(),
            actual: h_bar.domain().as_str(),
        });
    }
    if eq.beams() != h_bar.b() || eq.users() != h_bar.u() || transform.size() != h_bar.b() {
        return Err(dim_err(
            format!("{}x{} equalizer and size-{} transform", h_bar.u(), h_bar.b(), h_bar.b()),
            format!("{}x{} and {}", eq.users(), eq.beams(), transform.size()),
        ));
    }
    let tx = draw_transmission(h_bar, noise_variance(snr_db), transform, rng)?;
    count_errors(eq, &tx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerSample {
    pub snr_db: f64,
    pub ber: f64,
    pub bit_errors: u64,
    pub bit_count: u64,
}

impl BerSample {
    /// Binomial standard deviation of the BER estimate.
    pub fn std_dev(&self) -> f64 {
        (self.ber * (1.0 - self.ber) / self.bit_count as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub algorithm: Algorithm,
    pub delta: f64,
    pub k: usize,
    pub samples: Vec<BerSample>,
}

/// One (algorithm, δ) combination to simulate. δ is ignored for LMMSE.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub algorithm: Algorithm,
    pub delta: f64,
}

impl Cell {
    pub fn new(algorithm: Algorithm, delta: f64) -> Self {
        let delta = if algorithm == Algorithm::Lmmse { 1.0 } else { delta };
        Self { algorithm, delta }
    }

    fn k(&self, b: usize) -> usize {
        k_from_delta(self.delta, b)
    }
}

fn block_rngs(seed: u64, snr_index: usize, block: usize) -> (ChaCha8Rng, ChaCha8Rng) {
    let mut channel = ChaCha8Rng::seed_from_u64(seed);
    channel.set_stream(block as u64);
    let mut link = ChaCha8Rng::seed_from_u64(seed);
    link.set_stream(((snr_index as u64 + 1) << 32) | block as u64);
    (channel, link)
}

/// Beamspace channel the receiver builds its equalizers from.
fn receiver_channel<R: Rng + ?Sized>(
    config: &SimConfig,
    h_bar: &ChannelMatrix,
    n0: f64,
    transform: &UnitaryTransform,
    rng: &mut R,
) -> Result<ChannelMatrix> {
    // Each user sends a length-U pilot sequence at symbol energy E_s: the
    // unitary DFT pilots scaled by √U. Undoing that gain before the LS
    // estimate leaves per-entry estimation noise N0 / U.
    let pilots = dft_pilots(config.u);
    let gain = (config.u as f64 * SYMBOL_ENERGY).sqrt();
    let sigma = n0.sqrt();
    let mut y_pilot = h_bar.matrix().matmul(&pilots)?.scale(gain);
    for i in 0..config.b {
        for z in y_pilot.row_mut(i) {
            *z += complex_gaussian(rng) * sigma;
        }
    }
    if config.perfect_csi {
        return to_beamspace_with(h_bar, transform);
    }
    let estimate = ls_channel_estimate(&y_pilot.scale(1.0 / gain), &pilots, Domain::Antenna)?;
    to_beamspace_with(&estimate, transform)
}

/// Builds the equalizer of every cell for one channel estimate, sharing one
/// greedy run across all densities of COMP and EOMP.
fn build_cell_equalizers(cells: &[Cell], h: &ChannelMatrix, rho: f64) -> Result<Vec<SparseEqualizer>> {
    let b = h.b();
    let mut out: Vec<Option<SparseEqualizer>> = vec![None; cells.len()];
    let mut greedy: BTreeMap<Algorithm, Vec<usize>> = BTreeMap::new();
    for (i, cell) in cells.iter().enumerate() {
        match cell.algorithm {
            Algorithm::Comp | Algorithm::Eomp => greedy.entry(cell.algorithm).or_default().push(i),
            alg => out[i] = Some(build_equalizer(alg, h, rho, cell.k(b))?),
        }
    }
    for (alg, members) in greedy {
        let mut ks: Vec<usize> = members.iter().map(|&i| cells[i].k(b)).collect();
        ks.sort_unstable();
        ks.dedup();
        let built = match alg {
            Algorithm::Comp => comp_checkpoints(h, rho, &ks, GramMethod::ShermanMorrison)?,
            _ => eomp_checkpoints(h, rho, &ks, GramMethod::ShermanMorrison)?,
        };
        for i in members {
            let pos = ks.binary_search(&cells[i].k(b)).expect("k collected above");
            out[i] = Some(built[pos].clone());
        }
    }
    Ok(out.into_iter().map(|e| e.expect("every cell built")).collect())
}

fn simulate_block(
    config: &SimConfig,
    cells: &[Cell],
    snr_index: usize,
    block: usize,
    transform: &UnitaryTransform,
) -> Result<Vec<ErrorCount>> {
    let snr_db = config.snr_grid[snr_index];
    let n0 = noise_variance(snr_db);
    let (mut channel_rng, mut link_rng) = block_rngs(config.seed, snr_index, block);
    let h_bar = generate_channel_with_rng(config.b, config.u, &config.profile, &mut channel_rng)?;
    let h_rx = receiver_channel(config, &h_bar, n0, transform, &mut link_rng)?;
    let equalizers = build_cell_equalizers(cells, &h_rx, regularizer(snr_db))?;
    let transmissions = (0..config.transmissions)
        .map(|_| draw_transmission(&h_bar, n0, transform, &mut link_rng))
        .collect::<Result<Vec<_>>>()?;
    equalizers
        .iter()
        .map(|eq| {
            let mut acc = ErrorCount::default();
            for tx in &transmissions {
                acc.add(count_errors(eq, tx)?);
            }
            Ok(acc)
        })
        .collect()
}

/// BER curves for all `cells`, evaluated on common channels, data and noise.
pub fn simulate(config: &SimConfig, cells: &[Cell]) -> Result<Vec<BerCurve>> {
    config.validate()?;
    if let Some(cell) = cells.iter().find(|c| !c.algorithm.is_buildable()) {
        return Err(Error::Parameter(format!("{} cannot be simulated", cell.algorithm)));
    }
    let transform = UnitaryTransform::new(config.b)?;
    let mut curves: Vec<BerCurve> = cells
        .iter()
        .map(|c| BerCurve {
            algorithm: c.algorithm,
            delta: c.delta,
            k: c.k(config.b),
            samples: Vec::with_capacity(config.snr_grid.len()),
        })
        .collect();
    for (snr_index, &snr_db) in config.snr_grid.iter().enumerate() {
        let totals = (0..config.trials)
            .into_par_iter()
            .map(|block| simulate_block(config, cells, snr_index, block, &transform))
            .try_reduce(
                || vec![ErrorCount::default(); cells.len()],
                |mut acc, part| {
                    for (a, p) in acc.iter_mut().zip(part) {
                        a.add(p);
                    }
                    Ok(acc)
                },
            )?;
        for (curve, total) in curves.iter_mut().zip(totals) {
            curve.samples.push(BerSample {
                snr_db,
                ber: total.bit_errors as f64 / total.bits as f64,
                bit_errors: total.bit_errors,
                bit_count: total.bits,
            });
        }
    }
    Ok(curves)
}

/// BER versus SNR for one algorithm at density `delta`.
pub fn ber_curve(config: &SimConfig, algorithm: Algorithm, delta: f64) -> Result<BerCurve> {
    let mut curves = simulate(config, &[Cell::new(algorithm, delta)])?;
    Ok(curves.remove(0))
}
