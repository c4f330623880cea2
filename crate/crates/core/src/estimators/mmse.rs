//! Linear MMSE channel estimate under a Gaussian prior.

use super::{build_sensing_matrix, reshape, EstimationResult, PilotObservation};
use crate::error::{invalid, numerical, Result};
use crate::{linalg, CMatrix, C64};

/// `ĥ = √P C Bᴴ (P B C Bᴴ + σ² I)⁻¹ y`, solved by Cholesky.
pub fn mmse_estimate(obs: &PilotObservation, prior_cov: &CMatrix) -> Result<EstimationResult> {
    let design = &obs.design;
    let n = design.n_t() * design.n_r();
    if prior_cov.nrows() != n || prior_cov.ncols() != n {
        return invalid(format!("prior covariance must be {n}x{n}"));
    }
    let b = build_sensing_matrix(design);
    let p = design.power();
    let bc = &b * prior_cov;
    let mut m = &bc * b.adjoint() * C64::new(p, 0.0);
    for i in 0..m.nrows() {
        m[(i, i)] += C64::new(obs.noise_var, 0.0);
    }
    let m = linalg::hermitian_part(&m);
    let Some(ch) = linalg::hpd_cholesky(&m) else {
        return numerical("pilot covariance is singular; MMSE system cannot be solved");
    };
    let alpha = ch.solve(&obs.y);
    let h = bc.adjoint() * alpha * C64::new(p.sqrt(), 0.0);
    Ok(EstimationResult::new(reshape(&h, design.n_r(), design.n_t()), "mmse"))
}
