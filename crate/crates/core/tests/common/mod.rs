//! Test-side oracles shared by several integration targets.

#![allow(dead_code)]

use nalgebra::DMatrix;
use pswf_mimo::estimators::{build_sensing_matrix, mmse_estimate, random_pilots, PilotObservation};
use pswf_mimo::linalg::vec_of;
use pswf_mimo::rng::{complex_normal_matrix, complex_normal_vector, stream_rng};
use pswf_mimo::special::gauss_legendre_rule;
use pswf_mimo::{CMatrix, C64};

/// Eigenvalues (descending) of the sinc kernel `sin(c(x−y))/(π(x−y))` on
/// `[−1, 1]` from an `n`-point Gauss–Legendre Nyström discretization.
///
/// The nodes are symmetric, so the symmetrized matrix splits exactly into an
/// even and an odd block of size `n/2` acting on the positive nodes.
pub fn nystrom_sinc_eigenvalues(c: f64, n: usize) -> Vec<f64> {
    assert!(n % 2 == 0);
    let q = gauss_legendre_rule(n).unwrap();
    let half = n / 2;
    let xs: Vec<f64> = q.nodes[half..].to_vec();
    let ws: Vec<f64> = q.weights[half..].to_vec();
    let kernel = |d: f64| {
        if d.abs() < 1e-300 {
            c / std::f64::consts::PI
        } else {
            (c * d).sin() / (std::f64::consts::PI * d)
        }
    };
    let mut out = Vec::with_capacity(n);
    for sign in [1.0, -1.0] {
        let m = DMatrix::from_fn(half, half, |i, j| {
            (ws[i] * ws[j]).sqrt() * (kernel(xs[i] - xs[j]) + sign * kernel(xs[i] + xs[j]))
        });
        out.extend(m.symmetric_eigenvalues().iter().copied());
    }
    out.sort_by(|a, b| b.total_cmp(a));
    out
}

/// `∫_{-1}^{1} sin(c(x−y))/(π(x−y)) f(y) dy` by Gauss–Legendre quadrature.
pub fn apply_sinc_kernel(c: f64, x: f64, nodes: &[f64], weights: &[f64], f_at_nodes: &[f64]) -> f64 {
    nodes
        .iter()
        .zip(weights)
        .zip(f_at_nodes)
        .map(|((&y, &w), &f)| {
            let d = x - y;
            let k = if d.abs() < 1e-12 {
                c / std::f64::consts::PI
            } else {
                (c * d).sin() / (std::f64::consts::PI * d)
            };
            w * k * f
        })
        .sum()
}

/// Empirical MSE of MMSE and of least squares on a 2×2 channel with four
/// random pilots; returns the per-trial differences `mse_mmse − mse_ls`.
pub fn mmse_minus_ls(trials: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream_rng(seed, 0);
    let root = complex_normal_matrix(&mut rng, 4, 4);
    let cov = &root * root.adjoint() * C64::new(0.25, 0.0) + CMatrix::identity(4, 4) * C64::new(0.05, 0.0);
    let chol = cov.clone().cholesky().unwrap();
    let noise_var: f64 = 0.5;
    (0..trials)
        .map(|t| {
            let mut rng = stream_rng(seed, 1 + t as u64);
            let design = random_pilots(&mut rng, 2, 2, 4, 1.0);
            let b = build_sensing_matrix(&design);
            let h = chol.l() * complex_normal_vector(&mut rng, 4);
            let z = complex_normal_vector(&mut rng, 4) * C64::new(noise_var.sqrt(), 0.0);
            let y = &b * &h + z;
            let obs = PilotObservation::new(y.clone(), noise_var, design).unwrap();
            let est = vec_of(&mmse_estimate(&obs, &cov).unwrap().h_hat);
            let ls = b.clone().lu().solve(&y).unwrap();
            (&est - &h).norm_squared() - (&ls - &h).norm_squared()
        })
        .collect()
}

