//! Two-step PSWF channel estimation.
//!
//! Step 1 estimates the DPSS bandwidth `Ŵ` from `N_P1` randomly piloted
//! slots. Step 2 transmits DPSS precoder/combiner pairs at `Ŵ` in the
//! remaining slots and solves an MMSE problem over all `N_P` observations.

use super::{
    dpss_pilots, estimate_bandwidth_map, mmse_estimate, ChannelAccess, EstimationResult, Pairing, PilotDesign,
    PilotObservation,
};
use crate::error::{invalid, Result};
use crate::CMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct PswfCeConfig {
    pub n_p: usize,
    pub n_p1: usize,
    pub eps: f64,
    pub w_grid: Vec<f64>,
    pub pairing: Pairing,
}

impl PswfCeConfig {
    /// `N_P1 = ⌊N_P/4⌋`, `ε = 0.1`, the default bandwidth grid and
    /// eigenvalue-product pairing.
    pub fn new(n_p: usize) -> PswfCeConfig {
        PswfCeConfig {
            n_p,
            n_p1: n_p / 4,
            eps: 0.1,
            w_grid: super::default_w_grid(),
            pairing: Pairing::Product,
        }
    }
}

/// DPSS-piloted MMSE at bandwidth `w` over slots `first_slot..n_p`, appended
/// to the observations in `prefix`.
#[allow(clippy::too_many_arguments)]
pub fn dpss_mmse(
    access: &ChannelAccess,
    prefix: Option<&PilotObservation>,
    w: f64,
    eps: f64,
    n_p: usize,
    pairing: Pairing,
    prior_cov: &CMatrix,
) -> Result<EstimationResult> {
    let h = access.channel();
    let (n_r, n_t) = h.shape();
    let first = prefix.map_or(0, |p| p.design.len());
    if first >= n_p {
        return invalid(format!("no DPSS slots left ({first} of {n_p} already used)"));
    }
    let (design, recycled) = dpss_pilots(n_t, n_r, w, eps, n_p - first, access.power(), pairing)?;
    let obs2 = access.observe(&design, first)?;
    let obs = match prefix {
        Some(p) => p.concat(&obs2)?,
        None => obs2,
    };
    let mut out = mmse_estimate(&obs, prior_cov)?;
    out.metadata.recycled_pilots = recycled;
    out.metadata.w_hat = Some(w);
    Ok(out)
}

/// Full PSWF-CE. `step1` supplies the random pilots for the first
/// `cfg.n_p1` slots.
pub fn pswf_ce(access: &ChannelAccess, step1: &PilotDesign, cfg: &PswfCeConfig) -> Result<EstimationResult> {
    if cfg.n_p1 == 0 || cfg.n_p1 >= cfg.n_p {
        return invalid(format!("need 0 < N_P1 < N_P, got N_P1 = {}, N_P = {}", cfg.n_p1, cfg.n_p));
    }
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return invalid(format!("eps must lie in (0, 1), got {}", cfg.eps));
    }
    if step1.len() < cfg.n_p1 {
        return invalid("step-1 design shorter than N_P1");
    }
    let obs1 = access.observe(&step1.prefix(cfg.n_p1), 0)?;
    let w_hat = estimate_bandwidth_map(&obs1, &cfg.w_grid)?;
    let n = access.channel().nrows() * access.channel().ncols();
    let mut out = dpss_mmse(access, Some(&obs1), w_hat, cfg.eps, cfg.n_p, cfg.pairing, &CMatrix::identity(n, n))?;
    out.metadata.name = "pswf-ce".into();
    Ok(out)
}
