use num_complex::Complex64;

use super::columnwise::{check_checkpoints, ratio};
use super::gram::{GramMethod, RegularizedGram};
use super::{beamspace_matrix, check_sparse_params, SparseEqualizer, SparseRow};
use crate::channel::ChannelMatrix;
use crate::error::{dim_err, Error, Result};
use crate::numerics::{dot_h, vec_norm_sqr, Cholesky, ComplexMatrix};

/// Next EOMP beam for residual `z`: the `b ∉ Ω_u` maximizing
/// `|z^H h_b|² / (‖h_b‖² + ρ)`, ties to the smallest index.
pub fn eomp_select_beam(z: &[Complex64], h: &ChannelMatrix, support: &[usize], rho: f64) -> Result<usize> {
    let h = beamspace_matrix(h)?;
    if z.len() != h.cols() {
        return Err(dim_err(format!("residual of length {}", h.cols()), z.len()));
    }
    let mut mask = vec![false; h.rows()];
    for &b in support {
        if b >= h.rows() {
            return Err(Error::Parameter(format!("beam index {b} out of range")));
        }
        mask[b] = true;
    }
    select_beam(z, h, &mask, rho)
}

fn select_beam(z: &[Complex64], h: &ComplexMatrix, in_support: &[bool], rho: f64) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for b in (0..h.rows()).filter(|&b| !in_support[b]) {
        let row = h.row(b);
        let score = ratio(dot_h(z, row).norm_sqr(), vec_norm_sqr(row) + rho);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((b, score));
        }
    }
    best.map(|(b, _)| b).ok_or(Error::SupportExhausted)
}

/// Indices of the `k` largest scores, largest first; ties keep the smaller index first.
pub fn top_k_indices(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]));
    order.truncate(k);
    order
}

/// Row-`u` coefficients on `support` given the Gram inverse of that support:
/// `w_m = Σ_j [G^{-1}]_{u,j} conj(H[Ω_m, j])`, the entries of row `u` of `G^{-1} H_Ω^H`.
/// Equivalently `conj(H_Ω g_u)` with `g_u` column `u` of `G^{-1}`.
fn row_coefficients(h: &ComplexMatrix, support: &[usize], gram_inv_col: &[Complex64]) -> Vec<Complex64> {
    support
        .iter()
        .map(|&b| {
            h.row(b)
                .iter()
                .zip(gram_inv_col)
                .map(|(hb, g)| hb * g)
                .sum::<Complex64>()
                .conj()
        })
        .collect()
}

/// Entry-wise pursuit for one row of `Ŵ`.
struct RowPursuit<'a> {
    h: &'a ComplexMatrix,
    user: usize,
    rho: f64,
    gram: RegularizedGram,
    support: Vec<usize>,
    in_support: Vec<bool>,
    coeffs: Vec<Complex64>,
}

impl<'a> RowPursuit<'a> {
    fn new(h: &'a ComplexMatrix, user: usize, rho: f64, method: GramMethod) -> Self {
        Self {
            h,
            user,
            rho,
            gram: RegularizedGram::new(h.cols(), rho, method),
            support: Vec::new(),
            in_support: vec![false; h.rows()],
            coeffs: Vec::new(),
        }
    }

    /// `z = e_u − H_Ω^T ŵ_u`.
    fn residual(&self) -> Vec<Complex64> {
        let mut z = vec![Complex64::new(0.0, 0.0); self.h.cols()];
        z[self.user] = Complex64::new(1.0, 0.0);
        for (&b, c) in self.support.iter().zip(&self.coeffs) {
            for (zj, hb) in z.iter_mut().zip(self.h.row(b)) {
                *zj -= c * hb;
            }
        }
        z
    }

    fn step(&mut self) -> Result<()> {
        let z = self.residual();
        let b = select_beam(&z, self.h, &self.in_support, self.rho)?;
        self.gram.add_beam(self.h.row(b))?;
        self.support.push(b);
        self.in_support[b] = true;
        let g_u = self.gram.inverse().column(self.user);
        self.coeffs = row_coefficients(self.h, &self.support, &g_u);
        Ok(())
    }

    fn row(&self) -> SparseRow {
        SparseRow {
            support: self.support.clone(),
            coeffs: self.coeffs.clone(),
        }
    }
}

/// Entry-wise OMP with `K` nonzero entries per row and Sherman-Morrison Gram updates.
pub fn eomp(h: &ChannelMatrix, rho: f64, k: usize) -> Result<SparseEqualizer> {
    eomp_with(h, rho, k, GramMethod::default())
}

pub fn eomp_with(h: &ChannelMatrix, rho: f64, k: usize, method: GramMethod) -> Result<SparseEqualizer> {
    let hm = beamspace_matrix(h)?;
    check_sparse_params(hm.rows(), rho, k)?;
    let rows = (0..hm.cols())
        .map(|u| {
            let mut state = RowPursuit::new(hm, u, rho, method);
            for _ in 0..k {
                state.step()?;
            }
            Ok(state.row())
        })
        .collect::<Result<Vec<_>>>()?;
    SparseEqualizer::entrywise(hm.rows(), rows)
}

/// EOMP iterates: element `k − 1` holds every row after `k` iterations.
pub fn eomp_path(h: &ChannelMatrix, rho: f64, k: usize, method: GramMethod) -> Result<Vec<SparseEqualizer>> {
    let ks: Vec<usize> = (1..=k).collect();
    eomp_checkpoints(h, rho, &ks, method)
}

/// EOMP iterates at the per-row support sizes in `ks` (strictly increasing).
pub fn eomp_checkpoints(h: &ChannelMatrix, rho: f64, ks: &[usize], method: GramMethod) -> Result<Vec<SparseEqualizer>> {
    let hm = beamspace_matrix(h)?;
    check_checkpoints(hm.rows(), rho, ks)?;
    let mut per_checkpoint: Vec<Vec<SparseRow>> = vec![Vec::with_capacity(hm.cols()); ks.len()];
    for u in 0..hm.cols() {
        let mut state = RowPursuit::new(hm, u, rho, method);
        for (&k, rows) in ks.iter().zip(per_checkpoint.iter_mut()) {
            while state.support.len() < k {
                state.step()?;
            }
            rows.push(state.row());
        }
    }
    per_checkpoint
        .into_iter()
        .map(|rows| SparseEqualizer::entrywise(hm.rows(), rows))
        .collect()
}

/// Largest-entries approximation: per row, the `K` beams with the largest
/// `|H[b, u]|² / (‖h_b‖² + ρ)`, then the restricted refit on that support.
pub fn le(h: &ChannelMatrix, rho: f64, k: usize) -> Result<SparseEqualizer> {
    let hm = beamspace_matrix(h)?;
    check_sparse_params(hm.rows(), rho, k)?;
    let denominators: Vec<f64> = (0..hm.rows()).map(|b| vec_norm_sqr(hm.row(b)) + rho).collect();
    let rows = (0..hm.cols())
        .map(|u| {
            let scores: Vec<f64> = (0..hm.rows())
                .map(|b| ratio(hm[(b, u)].norm_sqr(), denominators[b]))
                .collect();
            let support = top_k_indices(&scores, k);
            let h_sel = hm.select_rows(&support);
            let gram = h_sel
                .adjoint()
                .matmul(&h_sel)?
                .add(&ComplexMatrix::scaled_identity(hm.cols(), rho))?;
            let mut g_u = vec![Complex64::new(0.0, 0.0); hm.cols()];
            g_u[u] = Complex64::new(1.0, 0.0);
            Cholesky::factor(&gram)?.solve_vec_in_place(&mut g_u);
            let coeffs = row_coefficients(hm, &support, &g_u);
            Ok(SparseRow { support, coeffs })
        })
        .collect::<Result<Vec<_>>>()?;
    SparseEqualizer::entrywise(hm.rows(), rows)
}
