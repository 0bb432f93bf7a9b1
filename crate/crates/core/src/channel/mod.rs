//! Synthetic sparse mmWave channels, the antenna/beamspace domain tag, pilot
//! based LS estimation and the plain-text channel file format.
//!
//! The propagation model is a geometric ray sum over a half-wavelength ULA:
//! every user sees `L` plane waves, each contributing `g · a(θ)` with
//! `[a(θ)]_b = exp(jπ b sin θ)`. Off-grid angles leak into neighbouring DFT
//! beams, so beamspace columns are approximately (not exactly) sparse.

mod file;
mod model;

use std::fmt;

use num_complex::Complex64;

use crate::error::{dim_err, Error, Result};
use crate::numerics::{ComplexMatrix, UnitaryTransform};

pub use file::{read_channel, read_channel_file, write_channel, write_channel_file};
pub use model::{
    generate_channel, generate_channel_with_rng, place_users, steering_vector, ChannelProfile,
    Scenario, UserPosition,
};
pub(crate) use model::complex_gaussian;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Antenna,
    Beamspace,
}

impl Domain {
    pub fn as_str(self) -> &'static str {
        match self {
            Domain::Antenna => "antenna",
            Domain::Beamspace => "beamspace",
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A `B × U` channel matrix tagged with the domain it lives in.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    matrix: ComplexMatrix,
    domain: Domain,
}

impl ChannelMatrix {
    pub fn new(matrix: ComplexMatrix, domain: Domain) -> Result<Self> {
        if matrix.rows() < matrix.cols() {
            return Err(Error::Parameter(format!(
                "channel needs B >= U, got B = {} and U = {}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::Parameter("channel has non-finite entries".into()));
        }
        Ok(Self { matrix, domain })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Number of antennas (or beams).
    pub fn b(&self) -> usize {
        self.matrix.rows()
    }

    /// Number of users.
    pub fn u(&self) -> usize {
        self.matrix.cols()
    }

    fn expect_domain(&self, expected: Domain) -> Result<()> {
        if self.domain != expected {
            return Err(Error::Domain {
                expected: expected.as_str(),
                actual: self.domain.as_str(),
            });
        }
        Ok(())
    }
}

/// `H = F H̄`, column by column.
pub fn to_beamspace(h: &ChannelMatrix) -> Result<ChannelMatrix> {
    to_beamspace_with(h, &UnitaryTransform::new(h.b())?)
}

pub fn to_beamspace_with(h: &ChannelMatrix, transform: &UnitaryTransform) -> Result<ChannelMatrix> {
    h.expect_domain(Domain::Antenna)?;
    map_columns(h, Domain::Beamspace, |col| transform.forward_in_place(col))
}

/// `H̄ = F^H H`.
pub fn to_antenna(h: &ChannelMatrix) -> Result<ChannelMatrix> {
    h.expect_domain(Domain::Beamspace)?;
    let transform = UnitaryTransform::new(h.b())?;
    map_columns(h, Domain::Antenna, |col| transform.inverse_in_place(col))
}

fn map_columns(
    h: &ChannelMatrix,
    domain: Domain,
    mut f: impl FnMut(&mut [Complex64]) -> Result<()>,
) -> Result<ChannelMatrix> {
    let mut out = h.matrix.clone();
    for j in 0..h.u() {
        let mut col = h.matrix.column(j);
        f(&mut col)?;
        out.set_column(j, &col);
    }
    Ok(ChannelMatrix { matrix: out, domain })
}

/// Unitary `U × U` DFT pilot matrix; row `u` is the pilot sequence of user `u`.
pub fn dft_pilots(users: usize) -> ComplexMatrix {
    let scale = 1.0 / (users as f64).sqrt();
    ComplexMatrix::from_fn(users, users, |u, t| {
        let phase = -2.0 * std::f64::consts::PI * ((u * t) % users) as f64 / users as f64;
        Complex64::from_polar(scale, phase)
    })
}

/// Least-squares channel estimate `Ĥ = Y P^H` for unitary pilots `P`.
///
/// `y_pilot` is the `B × U` matrix received over the `U` pilot slots; the
/// estimate is tagged with `domain`, the domain `y_pilot` was observed in.
pub fn ls_channel_estimate(
    y_pilot: &ComplexMatrix,
    pilots: &ComplexMatrix,
    domain: Domain,
) -> Result<ChannelMatrix> {
    let u = pilots.rows();
    if !pilots.is_square() || y_pilot.cols() != u {
        return Err(dim_err(
            format!("B x {u} observations with {u} x {u} pilots"),
            format!(
                "{}x{} observations, {}x{} pilots",
                y_pilot.rows(),
                y_pilot.cols(),
                pilots.rows(),
                pilots.cols()
            ),
        ));
    }
    let gram = pilots.matmul(&pilots.adjoint())?;
    let deviation = gram.max_abs_diff(&ComplexMatrix::identity(u));
    if deviation > 1e-10 {
        return Err(Error::Pilot(deviation));
    }
    ChannelMatrix::new(y_pilot.matmul(&pilots.adjoint())?, domain)
}

/// Fraction of a column's energy held by its `k` largest-magnitude entries.
pub fn top_k_energy_fraction(column: &[Complex64], k: usize) -> f64 {
    let mut energies: Vec<f64> = column.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = energies.iter().sum();
    if total == 0.0 {
        return 0.0;
    }
    energies.sort_by(|a, b| b.total_cmp(a));
    energies.iter().take(k).sum::<f64>() / total
}
