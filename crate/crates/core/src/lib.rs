//! Sparsity-exploiting beamspace equalization for mmWave massive MU-MIMO uplink.
//!
//! The crate covers the whole chain used to study the performance/complexity
//! trade-off of sparse beamspace equalizers:
//!
//! - [`numerics`]: dense complex matrices, unitary DFT, Cholesky solves and
//!   Sherman-Morrison updates.
//! - [`channel`]: synthetic geometric ULA channels, beamspace transform, LS
//!   channel estimation and a text file format.
//! - [`equalizers`]: exact LMMSE plus COMP, LC, EOMP and LE.
//! - [`complexity`]: real-multiplication counts per algorithm.
//! - [`simulator`]: Monte-Carlo uncoded BER with 16-QAM, SNR operating points
//!   and minimum-density searches.
//! - [`cli`]: configuration, sweeps and CSV output behind the `beamspace` binary.

pub mod algorithm;
pub mod channel;
pub mod cli;
pub mod complexity;
pub mod equalizers;
pub mod error;
pub mod numerics;
pub mod simulator;

pub use algorithm::Algorithm;
pub use error::{Error, Result};
