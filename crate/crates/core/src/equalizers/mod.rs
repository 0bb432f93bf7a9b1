//! Beamspace equalizers: exact LMMSE and the sparse column-wise (COMP, LC)
//! and entry-wise (EOMP, LE) constructions.
//!
//! All of them target the regularized MSE objective
//! `J(W) = ‖I_U − W H‖_F² + ρ‖W‖_F²` for a beamspace channel `H` (`B × U`).
//! Row `u` of the objective, `‖e_u − H^T w_u‖² + ρ‖w_u‖²`, only involves row
//! `u` of `W`, which is what lets the entry-wise methods treat users
//! independently. Beam indices are 0-based throughout the library.

mod columnwise;
mod entrywise;
mod gram;
mod lmmse;

use num_complex::Complex64;

use crate::algorithm::Algorithm;
use crate::channel::{ChannelMatrix, Domain};
use crate::error::{dim_err, Error, Result};
use crate::numerics::ComplexMatrix;

pub use columnwise::{comp, comp_checkpoints, comp_path, comp_select_beam, comp_with, lc};
pub use entrywise::{eomp, eomp_checkpoints, eomp_path, eomp_select_beam, eomp_with, le, top_k_indices};
pub use gram::{GramMethod, RegularizedGram};
pub use lmmse::lmmse_full;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualizerKind {
    Full,
    Columnwise,
    Entrywise,
}

/// Nonzero entries of one row of an entry-wise equalizer.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    /// Beam indices in selection order.
    pub support: Vec<usize>,
    pub coeffs: Vec<Complex64>,
}

/// A `U × B` equalization matrix together with its sparsity structure.
#[derive(Debug, Clone, PartialEq)]
pub enum SparseEqualizer {
    Full {
        w: ComplexMatrix,
    },
    /// Nonzero columns `support`; `block` is `U × K`, column `m` belonging to beam `support[m]`.
    Columnwise {
        beams: usize,
        support: Vec<usize>,
        block: ComplexMatrix,
    },
    Entrywise {
        beams: usize,
        rows: Vec<SparseRow>,
    },
}

impl SparseEqualizer {
    pub fn full(w: ComplexMatrix) -> Result<Self> {
        if !w.is_finite() {
            return Err(Error::Parameter("equalizer has non-finite coefficients".into()));
        }
        Ok(Self::Full { w })
    }

    pub fn columnwise(beams: usize, support: Vec<usize>, block: ComplexMatrix) -> Result<Self> {
        check_support(&support, beams)?;
        if block.cols() != support.len() {
            return Err(dim_err(format!("{} block columns", support.len()), block.cols()));
        }
        if !block.is_finite() {
            return Err(Error::Parameter("equalizer has non-finite coefficients".into()));
        }
        Ok(Self::Columnwise { beams, support, block })
    }

    pub fn entrywise(beams: usize, rows: Vec<SparseRow>) -> Result<Self> {
        let k = rows.first().map_or(0, |r| r.support.len());
        if rows.is_empty() {
            return Err(Error::Parameter("entry-wise equalizer needs at least one row".into()));
        }
        for row in &rows {
            check_support(&row.support, beams)?;
            if row.support.len() != k || row.coeffs.len() != k {
                return Err(dim_err(
                    format!("{k} entries per row"),
                    format!("{} indices, {} coefficients", row.support.len(), row.coeffs.len()),
                ));
            }
            if row.coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Parameter("equalizer has non-finite coefficients".into()));
            }
        }
        Ok(Self::Entrywise { beams, rows })
    }

    pub fn kind(&self) -> EqualizerKind {
        match self {
            Self::Full { .. } => EqualizerKind::Full,
            Self::Columnwise { .. } => EqualizerKind::Columnwise,
            Self::Entrywise { .. } => EqualizerKind::Entrywise,
        }
    }

    pub fn users(&self) -> usize {
        match self {
            Self::Full { w } => w.rows(),
            Self::Columnwise { block, .. } => block.rows(),
            Self::Entrywise { rows, .. } => rows.len(),
        }
    }

    pub fn beams(&self) -> usize {
        match self {
            Self::Full { w } => w.cols(),
            Self::Columnwise { beams, .. } | Self::Entrywise { beams, .. } => *beams,
        }
    }

    /// Nonzero columns (column-wise) or entries per row (entry-wise); `B` for full.
    pub fn k(&self) -> usize {
        match self {
            Self::Full { w } => w.cols(),
            Self::Columnwise { support, .. } => support.len(),
            Self::Entrywise { rows, .. } => rows[0].support.len(),
        }
    }

    /// Support and coefficients of row `u`.
    pub fn row_entries(&self, u: usize) -> Vec<(usize, Complex64)> {
        match self {
            Self::Full { w } => w.row(u).iter().copied().enumerate().collect(),
            Self::Columnwise { support, block, .. } => {
                support.iter().copied().zip(block.row(u).iter().copied()).collect()
            }
            Self::Entrywise { rows, .. } => {
                rows[u].support.iter().copied().zip(rows[u].coeffs.iter().copied()).collect()
            }
        }
    }

    /// The equalizer as a dense `U × B` matrix.
    pub fn to_dense(&self) -> ComplexMatrix {
        let mut w = ComplexMatrix::zeros(self.users(), self.beams());
        for u in 0..self.users() {
            for (b, c) in self.row_entries(u) {
                w[(u, b)] = c;
            }
        }
        w
    }

    /// Symbol estimates `ŝ = W y` for a beamspace receive vector, touching only the support.
    pub fn apply(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        if y.len() != self.beams() {
            return Err(dim_err(format!("receive vector of length {}", self.beams()), y.len()));
        }
        Ok(match self {
            Self::Full { w } => w.mul_vec(y)?,
            Self::Columnwise { support, block, .. } => {
                let y_sel: Vec<Complex64> = support.iter().map(|&b| y[b]).collect();
                block.mul_vec(&y_sel)?
            }
            Self::Entrywise { rows, .. } => rows
                .iter()
                .map(|r| r.support.iter().zip(&r.coeffs).map(|(&b, c)| c * y[b]).sum())
                .collect(),
        })
    }

    /// Complex products spent by one [`apply`](Self::apply): `U·K` (`U·B` for full).
    pub fn complex_mults_per_apply(&self) -> usize {
        self.users() * self.k()
    }

    /// Row `u` of the objective, `‖e_u − H^T w_u‖² + ρ‖w_u‖²`.
    pub fn row_objective(&self, h: &ComplexMatrix, rho: f64, u: usize) -> f64 {
        let entries = self.row_entries(u);
        row_objective(h, rho, u, &entries)
    }

    /// `‖I − W H‖_F² + ρ‖W‖_F²`.
    pub fn objective(&self, h: &ComplexMatrix, rho: f64) -> f64 {
        (0..self.users()).map(|u| self.row_objective(h, rho, u)).sum()
    }
}

pub(crate) fn row_objective(h: &ComplexMatrix, rho: f64, u: usize, entries: &[(usize, Complex64)]) -> f64 {
    let mut residual = vec![Complex64::new(0.0, 0.0); h.cols()];
    residual[u] = Complex64::new(1.0, 0.0);
    let mut penalty = 0.0;
    for &(b, c) in entries {
        penalty += c.norm_sqr();
        for (r, hb) in residual.iter_mut().zip(h.row(b)) {
            *r -= c * hb;
        }
    }
    residual.iter().map(|z| z.norm_sqr()).sum::<f64>() + rho * penalty
}

fn check_support(support: &[usize], beams: usize) -> Result<()> {
    if support.is_empty() || support.len() > beams {
        return Err(Error::Parameter(format!(
            "support size must lie in 1..={beams}, got {}",
            support.len()
        )));
    }
    let mut seen = vec![false; beams];
    for &b in support {
        if b >= beams {
            return Err(Error::Parameter(format!("beam index {b} out of range 0..{beams}")));
        }
        if std::mem::replace(&mut seen[b], true) {
            return Err(Error::Parameter(format!("beam index {b} selected twice")));
        }
    }
    Ok(())
}

/// `K = δB` rounded to the nearest integer and clamped to `1..=B`.
pub fn k_from_delta(delta: f64, beams: usize) -> usize {
    ((delta * beams as f64).round() as usize).clamp(1, beams)
}

pub(crate) fn beamspace_matrix(h: &ChannelMatrix) -> Result<&ComplexMatrix> {
    if h.domain() != Domain::Beamspace {
        return Err(Error::Domain {
            expected: Domain::Beamspace.as_str(),
            actual: h.domain().as_str(),
        });
    }
    Ok(h.matrix())
}

pub(crate) fn check_sparse_params(b: usize, rho: f64, k: usize) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Parameter(format!(
            "sparse equalizers need a positive regularizer, got rho = {rho}"
        )));
    }
    if k == 0 || k > b {
        return Err(Error::Parameter(format!("K must lie in 1..={b}, got {k}")));
    }
    Ok(())
}

/// Builds the equalizer of `algorithm` from a beamspace channel estimate.
/// `k` is ignored for exact LMMSE.
pub fn build_equalizer(algorithm: Algorithm, h: &ChannelMatrix, rho: f64, k: usize) -> Result<SparseEqualizer> {
    match algorithm {
        Algorithm::Lmmse => lmmse_full(h, rho),
        Algorithm::Comp => comp(h, rho, k),
        Algorithm::Lc => lc(h, rho, k),
        Algorithm::Eomp => eomp(h, rho, k),
        Algorithm::Le => le(h, rho, k),
        Algorithm::LocalLmmse | Algorithm::Sb => Err(Error::Parameter(format!(
            "{algorithm} is available in the complexity model only"
        ))),
    }
}
