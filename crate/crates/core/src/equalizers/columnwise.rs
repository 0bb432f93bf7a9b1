use num_complex::Complex64;

use super::gram::{GramMethod, RegularizedGram};
use super::{beamspace_matrix, check_sparse_params, SparseEqualizer};
use crate::channel::ChannelMatrix;
use crate::error::{dim_err, Error, Result};
use crate::numerics::{vec_norm_sqr, Cholesky, ComplexMatrix};

/// Next COMP beam: the `b ∉ Ω` maximizing `‖A conj(h_b)‖² / (‖h_b‖² + ρ)`,
/// where `h_b` is row `b` of `H`. Ties go to the smallest index.
///
/// The score is the decrease of `min_w ‖A − w h_b^T‖_F² + ρ‖w‖²` relative to
/// `‖A‖_F²`, so the winner also minimizes that single-column refit.
pub fn comp_select_beam(a: &ComplexMatrix, h: &ChannelMatrix, support: &[usize], rho: f64) -> Result<usize> {
    let h = beamspace_matrix(h)?;
    if a.shape() != (h.cols(), h.cols()) {
        return Err(dim_err(
            format!("{0}x{0} residual", h.cols()),
            format!("{}x{}", a.rows(), a.cols()),
        ));
    }
    let mut mask = vec![false; h.rows()];
    for &b in support {
        if b >= h.rows() {
            return Err(Error::Parameter(format!("beam index {b} out of range")));
        }
        mask[b] = true;
    }
    select_beam(a, h, &mask, rho)
}

fn select_beam(a: &ComplexMatrix, h: &ComplexMatrix, in_support: &[bool], rho: f64) -> Result<usize> {
    let u = h.cols();
    let mut best: Option<(usize, f64)> = None;
    let mut projected = vec![Complex64::new(0.0, 0.0); u];
    for b in (0..h.rows()).filter(|&b| !in_support[b]) {
        let row = h.row(b);
        for (i, p) in projected.iter_mut().enumerate() {
            *p = a.row(i).iter().zip(row).map(|(x, y)| x * y.conj()).sum();
        }
        let score = ratio(vec_norm_sqr(&projected), vec_norm_sqr(row) + rho);
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((b, score));
        }
    }
    best.map(|(b, _)| b).ok_or(Error::SupportExhausted)
}

pub(super) fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Greedy column-wise pursuit state.
struct ColumnPursuit<'a> {
    h: &'a ComplexMatrix,
    rho: f64,
    gram: RegularizedGram,
    support: Vec<usize>,
    in_support: Vec<bool>,
    /// Columns of `Ŵ`, one per selected beam.
    columns: Vec<Vec<Complex64>>,
}

impl<'a> ColumnPursuit<'a> {
    fn new(h: &'a ComplexMatrix, rho: f64, method: GramMethod) -> Self {
        Self {
            h,
            rho,
            gram: RegularizedGram::new(h.cols(), rho, method),
            support: Vec::new(),
            in_support: vec![false; h.rows()],
            columns: Vec::new(),
        }
    }

    /// `A = I_U − Ŵ H_Ω`.
    fn residual(&self) -> ComplexMatrix {
        let u = self.h.cols();
        let mut a = ComplexMatrix::identity(u);
        for (col, &b) in self.columns.iter().zip(&self.support) {
            let row = self.h.row(b);
            for i in 0..u {
                let wi = col[i];
                for (x, hb) in a.row_mut(i).iter_mut().zip(row) {
                    *x -= wi * hb;
                }
            }
        }
        a
    }

    fn step(&mut self) -> Result<()> {
        let a = self.residual();
        let b = select_beam(&a, self.h, &self.in_support, self.rho)?;
        self.gram.add_beam(self.h.row(b))?;
        self.support.push(b);
        self.in_support[b] = true;
        // Ŵ = G^{-1} H_Ω^H
        let inv = self.gram.inverse();
        self.columns = self
            .support
            .iter()
            .map(|&b| {
                let h_conj: Vec<Complex64> = self.h.row(b).iter().map(|z| z.conj()).collect();
                inv.mul_vec(&h_conj).expect("square Gram inverse")
            })
            .collect();
        Ok(())
    }

    fn snapshot(&self) -> Result<SparseEqualizer> {
        let block = ComplexMatrix::from_columns(&self.columns)?;
        SparseEqualizer::columnwise(self.h.rows(), self.support.clone(), block)
    }
}

/// Column-wise OMP with `K` nonzero columns and Sherman-Morrison Gram updates.
pub fn comp(h: &ChannelMatrix, rho: f64, k: usize) -> Result<SparseEqualizer> {
    comp_with(h, rho, k, GramMethod::default())
}

pub fn comp_with(h: &ChannelMatrix, rho: f64, k: usize, method: GramMethod) -> Result<SparseEqualizer> {
    let hm = beamspace_matrix(h)?;
    check_sparse_params(hm.rows(), rho, k)?;
    let mut state = ColumnPursuit::new(hm, rho, method);
    for _ in 0..k {
        state.step()?;
    }
    state.snapshot()
}

/// Every COMP iterate `Ŵ^{(1)}, …, Ŵ^{(K)}`.
pub fn comp_path(h: &ChannelMatrix, rho: f64, k: usize, method: GramMethod) -> Result<Vec<SparseEqualizer>> {
    let ks: Vec<usize> = (1..=k).collect();
    comp_checkpoints(h, rho, &ks, method)
}

/// COMP iterates at the support sizes in `ks` (strictly increasing), from a
/// single greedy run up to the largest one.
pub fn comp_checkpoints(h: &ChannelMatrix, rho: f64, ks: &[usize], method: GramMethod) -> Result<Vec<SparseEqualizer>> {
    let hm = beamspace_matrix(h)?;
    check_checkpoints(hm.rows(), rho, ks)?;
    let mut state = ColumnPursuit::new(hm, rho, method);
    let mut out = Vec::with_capacity(ks.len());
    for &k in ks {
        while state.support.len() < k {
            state.step()?;
        }
        out.push(state.snapshot()?);
    }
    Ok(out)
}

pub(super) fn check_checkpoints(b: usize, rho: f64, ks: &[usize]) -> Result<()> {
    if ks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("checkpoints must be strictly increasing".into()));
    }
    for &k in ks {
        check_sparse_params(b, rho, k)?;
    }
    Ok(())
}

/// Largest-columns approximation: the `K` beams with the largest row norms,
/// then the restricted LMMSE refit on that support.
pub fn lc(h: &ChannelMatrix, rho: f64, k: usize) -> Result<SparseEqualizer> {
    let hm = beamspace_matrix(h)?;
    check_sparse_params(hm.rows(), rho, k)?;
    let norms: Vec<f64> = (0..hm.rows()).map(|b| vec_norm_sqr(hm.row(b))).collect();
    let mut order: Vec<usize> = (0..hm.rows()).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    order.truncate(k);
    let block = restricted_lmmse(hm, &order, rho)?;
    SparseEqualizer::columnwise(hm.rows(), order, block)
}

/// `(H_Ω^H H_Ω + ρ I)^{-1} H_Ω^H` by Cholesky.
pub(crate) fn restricted_lmmse(h: &ComplexMatrix, support: &[usize], rho: f64) -> Result<ComplexMatrix> {
    let h_sel = h.select_rows(support);
    let h_adj = h_sel.adjoint();
    let gram = h_adj.matmul(&h_sel)?.add(&ComplexMatrix::scaled_identity(h.cols(), rho))?;
    Cholesky::factor(&gram)?.solve(&h_adj)
}
