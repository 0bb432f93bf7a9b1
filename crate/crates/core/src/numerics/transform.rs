use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{dim_err, Error, Result};

/// Unitary DFT of size `B`, the antenna-to-beamspace map.
///
/// Backed by a radix-2 FFT and rescaled by `1/√B` so that `F F^H = I`.
#[derive(Clone)]
pub struct UnitaryTransform {
    size: usize,
    scale: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl UnitaryTransform {
    pub fn new(size: usize) -> Result<Self> {
        if !size.is_power_of_two() {
            return Err(Error::Parameter(format!(
                "transform size must be a power of two, got {size}"
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            size,
            scale: 1.0 / (size as f64).sqrt(),
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// `x ← F x`.
    pub fn forward_in_place(&self, x: &mut [Complex64]) -> Result<()> {
        self.run(&self.forward, x)
    }

    /// `x ← F^H x`.
    pub fn inverse_in_place(&self, x: &mut [Complex64]) -> Result<()> {
        self.run(&self.inverse, x)
    }

    pub fn forward(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = x.to_vec();
        self.forward_in_place(&mut out)?;
        Ok(out)
    }

    pub fn inverse(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = x.to_vec();
        self.inverse_in_place(&mut out)?;
        Ok(out)
    }

    fn run(&self, plan: &Arc<dyn Fft<f64>>, x: &mut [Complex64]) -> Result<()> {
        if x.len() != self.size {
            return Err(dim_err(format!("vector of length {}", self.size), x.len()));
        }
        plan.process(x);
        for z in x.iter_mut() {
            *z *= self.scale;
        }
        Ok(())
    }
}

impl fmt::Debug for UnitaryTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitaryTransform").field("size", &self.size).finish()
    }
}

/// One-shot `F x` for a vector whose length sets `B`.
pub fn beamspace_transform(x: &[Complex64]) -> Result<Vec<Complex64>> {
    UnitaryTransform::new(x.len())?.forward(x)
}
