use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{ChannelMatrix, Domain};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

const PLACEMENT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// One dominant unit-magnitude path plus weaker Rayleigh paths.
    Los,
    /// Equal-power Rayleigh paths.
    NonLos,
}

/// Geometry and path statistics of the synthetic ray-sum channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProfile {
    pub scenario: Scenario,
    pub paths_per_user: usize,
    /// Width of the circular sector users are dropped in, centred on broadside.
    pub sector_deg: f64,
    pub min_distance_m: f64,
    pub max_distance_m: f64,
    pub min_separation_deg: f64,
    /// Power of each weak LoS path relative to the dominant one, in dB below it.
    pub weak_path_db: f64,
    /// Metadata only; the model is frequency agnostic.
    pub carrier_ghz: f64,
}

impl ChannelProfile {
    pub fn los() -> Self {
        Self {
            scenario: Scenario::Los,
            paths_per_user: 3,
            sector_deg: 120.0,
            min_distance_m: 10.0,
            max_distance_m: 110.0,
            min_separation_deg: 1.0,
            weak_path_db: 10.0,
            carrier_ghz: 60.0,
        }
    }

    pub fn non_los() -> Self {
        Self {
            scenario: Scenario::NonLos,
            paths_per_user: 8,
            ..Self::los()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Parameter(msg));
        if self.paths_per_user == 0 {
            return bad("paths_per_user must be at least 1".into());
        }
        if !(0.0..=180.0).contains(&self.sector_deg) {
            return bad(format!("sector_deg must lie in [0, 180], got {}", self.sector_deg));
        }
        if !(self.min_distance_m > 0.0 && self.min_distance_m <= self.max_distance_m) {
            return bad(format!(
                "need 0 < min_distance_m <= max_distance_m, got {} and {}",
                self.min_distance_m, self.max_distance_m
            ));
        }
        if !(self.min_separation_deg >= 0.0) {
            return bad("min_separation_deg must be nonnegative".into());
        }
        if self.scenario == Scenario::Los {
            let (dominant, weak) = self.path_powers();
            if dominant < weak * (self.paths_per_user - 1) as f64 {
                return bad(format!(
                    "LoS dominant path must carry at least the power of the {} weak paths",
                    self.paths_per_user - 1
                ));
            }
        }
        Ok(())
    }

    /// Normalized (first path, each other path) powers; they sum to one over all paths.
    pub fn path_powers(&self) -> (f64, f64) {
        let l = self.paths_per_user as f64;
        match self.scenario {
            Scenario::Los => {
                let ratio = 10f64.powf(-self.weak_path_db / 10.0);
                let total = 1.0 + (l - 1.0) * ratio;
                (1.0 / total, ratio / total)
            }
            Scenario::NonLos => (1.0 / l, 1.0 / l),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserPosition {
    pub angle_deg: f64,
    pub distance_m: f64,
}

/// ULA response with half-wavelength spacing, `[a(θ)]_b = exp(jπ b sin θ)`.
pub fn steering_vector(antennas: usize, angle_rad: f64) -> Vec<Complex64> {
    let phase = PI * angle_rad.sin();
    (0..antennas)
        .map(|b| Complex64::from_polar(1.0, phase * b as f64))
        .collect()
}

/// Drops `users` UEs uniformly in the sector, redrawing until every pair of
/// angles is at least `min_separation_deg` apart.
pub fn place_users<R: Rng + ?Sized>(
    users: usize,
    profile: &ChannelProfile,
    rng: &mut R,
) -> Result<Vec<UserPosition>> {
    let infeasible = Error::Placement {
        users,
        sector_deg: profile.sector_deg,
        separation_deg: profile.min_separation_deg,
    };
    if users > 1 && (users - 1) as f64 * profile.min_separation_deg > profile.sector_deg {
        return Err(infeasible);
    }
    let half = profile.sector_deg / 2.0;
    for _ in 0..PLACEMENT_ATTEMPTS {
        let mut angles: Vec<f64> = Vec::with_capacity(users);
        let mut ok = true;
        for _ in 0..users {
            let mut placed = false;
            for _ in 0..PLACEMENT_ATTEMPTS {
                let a = uniform(rng, -half, half);
                if angles.iter().all(|&b| (a - b).abs() >= profile.min_separation_deg) {
                    angles.push(a);
                    placed = true;
                    break;
                }
            }
            if !placed {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(angles
                .into_iter()
                .map(|angle_deg| UserPosition {
                    angle_deg,
                    distance_m: uniform(rng, profile.min_distance_m, profile.max_distance_m),
                })
                .collect());
        }
    }
    Err(infeasible)
}

/// Antenna-domain channel for a fixed seed.
pub fn generate_channel(
    antennas: usize,
    users: usize,
    profile: &ChannelProfile,
    seed: u64,
) -> Result<ChannelMatrix> {
    generate_channel_with_rng(antennas, users, profile, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Antenna-domain channel `h̄_u = Σ_l g_{u,l} a(θ_{u,l})` with `E‖h̄_u‖² = B`.
///
/// The first path of every user points at the user. Under LoS it has unit
/// magnitude (times the normalized dominant power) and a uniform phase; the
/// remaining paths are circularly-symmetric Gaussian with angles uniform in
/// the sector. Distances do not scale the gains: users are power controlled.
pub fn generate_channel_with_rng<R: Rng + ?Sized>(
    antennas: usize,
    users: usize,
    profile: &ChannelProfile,
    rng: &mut R,
) -> Result<ChannelMatrix> {
    if !antennas.is_power_of_two() {
        return Err(Error::Parameter(format!(
            "antenna count must be a power of two, got {antennas}"
        )));
    }
    if users == 0 || users > antennas {
        return Err(Error::Parameter(format!(
            "need 1 <= U <= B, got U = {users}, B = {antennas}"
        )));
    }
    profile.validate()?;
    let positions = place_users(users, profile, rng)?;
    let (first_power, other_power) = profile.path_powers();
    let half = profile.sector_deg / 2.0;

    let mut h = ComplexMatrix::zeros(antennas, users);
    for (u, pos) in positions.iter().enumerate() {
        let mut column = vec![Complex64::new(0.0, 0.0); antennas];
        for l in 0..profile.paths_per_user {
            let (angle_deg, gain) = if l == 0 {
                let gain = match profile.scenario {
                    Scenario::Los => Complex64::from_polar(first_power.sqrt(), uniform(rng, -PI, PI)),
                    Scenario::NonLos => complex_gaussian(rng) * first_power.sqrt(),
                };
                (pos.angle_deg, gain)
            } else {
                (uniform(rng, -half, half), complex_gaussian(rng) * other_power.sqrt())
            };
            for (h_b, a_b) in column.iter_mut().zip(steering_vector(antennas, angle_deg.to_radians())) {
                *h_b += gain * a_b;
            }
        }
        h.set_column(u, &column);
    }
    ChannelMatrix::new(h, Domain::Antenna)
}

fn uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// `CN(0, 1)` sample.
pub(crate) fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}
