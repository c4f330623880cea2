//! Maximum-likelihood (uniform-prior MAP) estimate of the DPSS bandwidth `W`
//! from randomly piloted observations.
//!
//! Under hypothesis `W` the channel is modeled as `vec(H) ~ CN(0, S̄_t ⊗ S̄_r)`
//! with `S̄ = S_W/W`, the concentration matrix scaled to a unit diagonal, so
//! every hypothesis carries the same per-entry power as the normalized
//! channel and only the correlation shape is compared.

use nalgebra::DMatrix;

use super::PilotObservation;
use crate::dpss::build_concentration_matrix;
use crate::error::{invalid, Result};
use crate::{linalg, CMatrix, C64};

/// Default search grid `{k/64 : k = 1..=64}`.
pub fn default_w_grid() -> Vec<f64> {
    (1..=64).map(|k| k as f64 / 64.0).collect()
}

fn unit_diag_concentration(n: usize, w: f64) -> Result<CMatrix> {
    let s: DMatrix<f64> = build_concentration_matrix(n, w)?;
    Ok(linalg::to_complex(&(s / w)))
}

/// Observation covariance `P B (S̄_t ⊗ S̄_r) Bᴴ + σ² I`.
///
/// Entry `(i, j)` is `P (v_iᵀ S̄_t v_j*)(w_iᴴ S̄_r w_j)`, which avoids forming
/// the Kronecker product.
pub fn observation_covariance(obs: &PilotObservation, w: f64) -> Result<CMatrix> {
    let d = &obs.design;
    let s_t = unit_diag_concentration(d.n_t(), w)?;
    let s_r = unit_diag_concentration(d.n_r(), w)?;
    let np = d.len();
    let t_side: Vec<_> = d.precoders().iter().map(|v| &s_t * v.conjugate()).collect();
    let r_side: Vec<_> = d.combiners().iter().map(|c| &s_r * c).collect();
    let mut c = CMatrix::zeros(np, np);
    for i in 0..np {
        for j in 0..=i {
            let a = d.precoders()[i].transpose() * &t_side[j];
            let b = d.combiners()[i].dotc(&r_side[j]);
            let v = a[(0, 0)] * b * d.power();
            c[(i, j)] = v;
            c[(j, i)] = v.conj();
        }
        c[(i, i)] = C64::new(c[(i, i)].re + obs.noise_var, 0.0);
    }
    Ok(c)
}

/// `−yᴴ C⁻¹ y − log det C` for hypothesis `w`.
pub fn bandwidth_log_likelihood(obs: &PilotObservation, w: f64) -> Result<f64> {
    let c = observation_covariance(obs, w)?;
    let ch = linalg::cholesky_with_jitter(&c)?;
    let z = ch.l().solve_lower_triangular(&obs.y).ok_or_else(|| {
        crate::Error::NumericalFailure("triangular solve failed in bandwidth likelihood".into())
    })?;
    Ok(-z.norm_squared() - linalg::logdet(&ch))
}

/// Grid point maximizing the log-likelihood (first one on ties).
pub fn estimate_bandwidth_map(obs: &PilotObservation, w_grid: &[f64]) -> Result<f64> {
    if w_grid.is_empty() {
        return invalid("bandwidth grid is empty");
    }
    let mut best = (f64::NEG_INFINITY, w_grid[0]);
    for &w in w_grid {
        let ll = bandwidth_log_likelihood(obs, w)?;
        if ll > best.0 {
            best = (ll, w);
        }
    }
    Ok(best.1)
}
