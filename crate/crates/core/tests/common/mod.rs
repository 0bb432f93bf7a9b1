//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use beamspace::channel::{ChannelMatrix, Domain};
use beamspace::numerics::ComplexMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::function::erf::erfc;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut impl Rng, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = random_vec(rng, rows * cols);
    ComplexMatrix::new(rows, cols, data).unwrap()
}

pub fn random_beamspace(rng: &mut impl Rng, b: usize, u: usize) -> ChannelMatrix {
    ChannelMatrix::new(random_matrix(rng, b, u), Domain::Beamspace).unwrap()
}

/// Solves `(XᵀX + λI) x = Xᵀy` by Gaussian elimination with partial pivoting
/// and returns the minimizer and `‖y − Xx‖² + λ‖x‖²`.
pub fn ridge_real(x: &[Vec<f64>], y: &[f64], lambda: f64) -> (Vec<f64>, f64) {
    let p = x[0].len();
    let mut m = vec![vec![0.0; p + 1]; p];
    for i in 0..p {
        for j in 0..p {
            m[i][j] = x.iter().map(|r| r[i] * r[j]).sum::<f64>() + if i == j { lambda } else { 0.0 };
        }
        m[i][p] = x.iter().zip(y).map(|(r, yv)| r[i] * yv).sum();
    }
    for col in 0..p {
        let piv = (col..p).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())).unwrap();
        m.swap(col, piv);
        for r in 0..p {
            if r != col {
                let f = m[r][col] / m[col][col];
                for k in col..=p {
                    m[r][k] -= f * m[col][k];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..p).map(|i| m[i][p] / m[i][i]).collect();
    let resid: f64 = x
        .iter()
        .zip(y)
        .map(|(r, yv)| {
            let fit: f64 = r.iter().zip(&coef).map(|(a, b)| a * b).sum();
            (yv - fit).powi(2)
        })
        .sum();
    let pen: f64 = coef.iter().map(|v| v * v).sum();
    (coef, resid + lambda * pen)
}

/// `min_w ‖z − w h‖² + ρ|w|²` over complex scalars, as a real 2-parameter ridge problem.
pub fn scalar_fit_objective(z: &[Complex64], h: &[Complex64], rho: f64) -> f64 {
    let mut x = Vec::new();
    let mut y = Vec::new();
    for (zi, hi) in z.iter().zip(h) {
        // w h = (x1 + j x2)(hr + j hi)
        x.push(vec![hi.re, -hi.im]);
        y.push(zi.re);
        x.push(vec![hi.im, hi.re]);
        y.push(zi.im);
    }
    ridge_real(&x, &y, rho).1
}

/// `min_w ‖A − w hᵀ‖_F² + ρ‖w‖²`: one scalar fit per row of `A`.
pub fn column_fit_objective(a: &ComplexMatrix, h: &[Complex64], rho: f64) -> f64 {
    (0..a.rows()).map(|i| scalar_fit_objective(a.row(i), h, rho)).sum()
}

/// Index of the smallest value; the earliest wins ties.
pub fn argmin_first(values: &[(usize, f64)]) -> usize {
    let mut best = values[0];
    for &v in &values[1..] {
        if v.1 < best.1 {
            best = v;
        }
    }
    best.0
}

pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Gray 16-QAM bit error probability in AWGN at `E_s/N0 = gamma`.
pub fn qam16_ber(gamma: f64) -> f64 {
    let x = (gamma / 5.0).sqrt();
    (3.0 * q_function(x) + 2.0 * q_function(3.0 * x) - q_function(5.0 * x)) / 4.0
}
