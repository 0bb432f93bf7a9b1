use super::{beamspace_matrix, SparseEqualizer};
use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, Cholesky};

/// Exact beamspace LMMSE, `W = (H^H H + ρ I)^{-1} H^H`.
///
/// `ρ = 0` gives the zero-forcing solution and needs `H` to have full column rank.
pub fn lmmse_full(h: &ChannelMatrix, rho: f64) -> Result<SparseEqualizer> {
    let h = beamspace_matrix(h)?;
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Parameter(format!("rho must be nonnegative, got {rho}")));
    }
    let h_adj = h.adjoint();
    let gram = h_adj.matmul(h)?.add(&ComplexMatrix::scaled_identity(h.cols(), rho))?;
    let chol = match Cholesky::factor(&gram) {
        Ok(c) => c,
        Err(Error::NotPositiveDefinite { .. }) if rho == 0.0 => return Err(Error::Rank),
        Err(e) => return Err(e),
    };
    let w = chol.solve(&h_adj)?;
    if rho == 0.0 && !w.is_finite() {
        return Err(Error::Rank);
    }
    SparseEqualizer::full(w)
}
