use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::{sherman_morrison_in_place, Cholesky, ComplexMatrix};

/// How the Gram inverse is refreshed after each added beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GramMethod {
    /// Rank-one Sherman-Morrison update of the previous inverse.
    #[default]
    ShermanMorrison,
    /// Cholesky re-factorization of the accumulated Gram matrix.
    FreshSolve,
}

/// `(H_Ω^H H_Ω + ρ I_U)^{-1}` for a growing beam support `Ω`.
///
/// Starts at `Ω = ∅`, where the inverse is `ρ^{-1} I`. Adding beam `b` adds
/// `conj(h_b) h_b^T` to the Gram matrix.
#[derive(Debug, Clone)]
pub struct RegularizedGram {
    gram: ComplexMatrix,
    inverse: ComplexMatrix,
    support_len: usize,
    method: GramMethod,
}

impl RegularizedGram {
    /// `rho` must be positive.
    pub fn new(users: usize, rho: f64, method: GramMethod) -> Self {
        debug_assert!(rho > 0.0);
        Self {
            gram: ComplexMatrix::scaled_identity(users, rho),
            inverse: ComplexMatrix::scaled_identity(users, 1.0 / rho),
            support_len: 0,
            method,
        }
    }

    /// Extends the support by one beam with channel row `row` (length `U`).
    pub fn add_beam(&mut self, row: &[Complex64]) -> Result<()> {
        let v: Vec<Complex64> = row.iter().map(|z| z.conj()).collect();
        let n = self.gram.rows();
        for i in 0..n {
            let vi = v[i];
            for (g, vj) in self.gram.row_mut(i).iter_mut().zip(&v) {
                *g += vi * vj.conj();
            }
        }
        match self.method {
            GramMethod::ShermanMorrison => sherman_morrison_in_place(&mut self.inverse, &v)?,
            GramMethod::FreshSolve => self.inverse = Cholesky::factor(&self.gram)?.inverse(),
        }
        self.support_len += 1;
        Ok(())
    }

    pub fn inverse(&self) -> &ComplexMatrix {
        &self.inverse
    }

    pub fn gram(&self) -> &ComplexMatrix {
        &self.gram
    }

    pub fn support_len(&self) -> usize {
        self.support_len
    }

    /// `max |G · G^{-1} − I|`.
    pub fn consistency_error(&self) -> f64 {
        let n = self.gram.rows();
        self.gram
            .matmul(&self.inverse)
            .expect("square matrices of equal size")
            .max_abs_diff(&ComplexMatrix::identity(n))
    }
}
