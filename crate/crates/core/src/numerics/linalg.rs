use num_complex::Complex64;

use super::matrix::{dot_h, ComplexMatrix};
use crate::error::{dim_err, Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const DEGENERACY_TOL: f64 = 1e-14;

/// Lower-triangular Cholesky factor `L` with `G = L L^H`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: ComplexMatrix,
}

impl Cholesky {
    /// Factorizes a Hermitian positive-definite matrix without pivoting.
    pub fn factor(g: &ComplexMatrix) -> Result<Self> {
        if !g.is_square() {
            return Err(dim_err("square matrix", format!("{}x{}", g.rows(), g.cols())));
        }
        let scale = g.as_slice().iter().map(|z| z.norm()).fold(1.0, f64::max);
        if !g.is_hermitian(HERMITIAN_TOL * scale) {
            return Err(Error::Parameter("matrix is not Hermitian".into()));
        }
        let n = g.rows();
        let mut l = ComplexMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = g[(j, j)].re;
            for k in 0..j {
                d -= l[(j, k)].norm_sqr();
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { pivot: j, value: d });
            }
            let djj = d.sqrt();
            l[(j, j)] = Complex64::new(djj, 0.0);
            for i in j + 1..n {
                let mut s = g[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)].conj();
                }
                l[(i, j)] = s / djj;
            }
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &ComplexMatrix {
        &self.l
    }

    /// Solves `G x = b` for one right-hand side in place.
    pub fn solve_vec_in_place(&self, b: &mut [Complex64]) {
        let n = self.l.rows();
        assert_eq!(b.len(), n);
        // forward: L y = b
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[(i, k)] * b[k];
            }
            b[i] = s / self.l[(i, i)].re;
        }
        // backward: L^H x = y
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= self.l[(k, i)].conj() * b[k];
            }
            b[i] = s / self.l[(i, i)].re;
        }
    }

    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.l.rows();
        if rhs.rows() != n {
            return Err(dim_err(format!("{n} rows"), rhs.rows()));
        }
        let mut out = rhs.clone();
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..rhs.cols() {
            for (i, c) in col.iter_mut().enumerate() {
                *c = rhs[(i, j)];
            }
            self.solve_vec_in_place(&mut col);
            out.set_column(j, &col);
        }
        Ok(out)
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let inv = self
            .solve(&ComplexMatrix::identity(self.l.rows()))
            .expect("identity has matching rows");
        hermitian_part(&inv)
    }
}

/// Solves `G X = RHS` for Hermitian positive-definite `G`.
pub fn solve_hpd(g: &ComplexMatrix, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
    Cholesky::factor(g)?.solve(rhs)
}

/// `(G + v v^H)^{-1}` from `G^{-1}`.
pub fn sherman_morrison_update(g_inv: &ComplexMatrix, v: &[Complex64]) -> Result<ComplexMatrix> {
    let mut out = g_inv.clone();
    sherman_morrison_in_place(&mut out, v)?;
    Ok(out)
}

/// In-place form of [`sherman_morrison_update`]. `g_inv` is left untouched on error.
pub fn sherman_morrison_in_place(g_inv: &mut ComplexMatrix, v: &[Complex64]) -> Result<()> {
    let n = g_inv.rows();
    if !g_inv.is_square() || v.len() != n {
        return Err(dim_err(
            format!("{n}x{n} inverse with a length-{n} vector"),
            format!("{}x{} and length {}", g_inv.rows(), g_inv.cols(), v.len()),
        ));
    }
    let u = g_inv.mul_vec(v)?;
    let denom = Complex64::new(1.0, 0.0) + dot_h(v, &u);
    if denom.norm() < DEGENERACY_TOL {
        return Err(Error::Degenerate(denom.norm()));
    }
    let inv_denom = 1.0 / denom;
    for i in 0..n {
        let ui = u[i] * inv_denom;
        let row = g_inv.row_mut(i);
        for (r, uj) in row.iter_mut().zip(&u) {
            *r -= ui * uj.conj();
        }
    }
    Ok(())
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}
