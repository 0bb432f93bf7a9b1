//! Complex linear-algebra kernel shared by the channel code and the equalizers:
//! dense matrices, the unitary beamspace DFT, Cholesky solves of Hermitian
//! positive-definite systems and Sherman-Morrison rank-one inverse updates.

mod linalg;
mod matrix;
mod transform;

pub use linalg::{sherman_morrison_in_place, sherman_morrison_update, solve_hpd, Cholesky};
pub use matrix::{dot_h, vec_norm, vec_norm_sqr, ComplexMatrix};
pub use transform::{beamspace_transform, UnitaryTransform};

#[cfg(test)]
pub(crate) use linalg::tests::random_matrix;
