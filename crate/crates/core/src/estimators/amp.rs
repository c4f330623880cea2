//! Compressed-sensing baseline: complex vector AMP with a Bernoulli–Gaussian
//! prior on the DFT-domain channel.
//!
//! The channel is written `H = F_r H̃ F_tᴴ` with unitary DFT matrices, so
//! `vec(H) = (F_t* ⊗ F_r) vec(H̃)` and the measurements become
//! `y = √P B_CS vec(H̃) + z` with `B_CS = B (F_t* ⊗ F_r)`. The prior on each
//! entry of `vec(H̃)` is `(1−ρ) δ_0 + ρ CN(0, θ)`, with `ρ` and `θ` re-learned
//! by expectation-maximization after every iteration.

use super::{build_sensing_matrix, reshape, EstimationResult, PilotDesign, PilotObservation};
use crate::error::{invalid, numerical, Result};
use crate::{linalg, CMatrix, CVector, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmpConfig {
    pub iterations: usize,
    /// Weight on the new iterate, `x ← d·x_new + (1−d)·x_old`.
    pub damping: f64,
    pub initial_sparsity: f64,
    /// Consecutive residual increases treated as divergence.
    pub divergence_window: usize,
}

impl Default for AmpConfig {
    fn default() -> Self {
        AmpConfig {
            iterations: 50,
            damping: 0.7,
            initial_sparsity: 0.1,
            divergence_window: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AmpSolution {
    pub x: CVector,
    pub iterations: usize,
    pub diverged: bool,
    pub sparsity: f64,
    pub active_variance: f64,
}

/// `B (F_t* ⊗ F_r)` for the design's array sizes.
pub fn cs_sensing_matrix(design: &PilotDesign) -> CMatrix {
    let ft = linalg::unitary_dft(design.n_t());
    let fr = linalg::unitary_dft(design.n_r());
    build_sensing_matrix(design) * linalg::kron(&ft.conjugate(), &fr)
}

struct Denoised {
    mean: CVector,
    var: f64,
    pi: Vec<f64>,
    post_second: Vec<f64>,
}

fn bg_denoise(r: &CVector, nu_r: f64, rho: f64, theta: f64) -> Denoised {
    let n = r.len();
    let mut mean = CVector::zeros(n);
    let mut pi = vec![0.0; n];
    let mut post_second = vec![0.0; n];
    let mut var_sum = 0.0;
    let gain = theta / (theta + nu_r);
    let v = theta * nu_r / (theta + nu_r);
    let base = (rho / (1.0 - rho)).ln() + (nu_r / (theta + nu_r)).ln();
    for i in 0..n {
        let r2 = r[i].norm_sqr();
        let log_odds = base + r2 * (1.0 / nu_r - 1.0 / (theta + nu_r));
        let p = if log_odds > 0.0 {
            1.0 / (1.0 + (-log_odds).exp())
        } else {
            let e = log_odds.exp();
            e / (1.0 + e)
        };
        let g = r[i] * gain;
        let second = v + g.norm_sqr();
        let m = g * p;
        pi[i] = p;
        post_second[i] = second;
        mean[i] = m;
        var_sum += p * second - m.norm_sqr();
    }
    Denoised {
        mean,
        var: (var_sum / n as f64).max(0.0),
        pi,
        post_second,
    }
}

/// Vector AMP for `y = A x + CN(0, σ²)` with an EM-tuned Bernoulli–Gaussian
/// prior on `x`.
///
/// Alternates the separable Bernoulli–Gaussian denoiser with an LMMSE stage
/// evaluated through the SVD of `A`, exchanging extrinsic means and
/// precisions between them. Unlike scalar AMP its state evolution holds for
/// any right-orthogonally invariant `A`, which covers the Kronecker-structured
/// and unitary sensing matrices used here.
pub fn amp_bernoulli_gaussian(a: &CMatrix, y: &CVector, noise_var: f64, cfg: &AmpConfig) -> Result<AmpSolution> {
    let (m, n) = a.shape();
    if y.len() != m {
        return invalid("measurement length does not match the sensing matrix");
    }
    if m == 0 || n == 0 {
        return invalid("empty sensing matrix");
    }
    let y_energy = y.norm_squared();
    if y_energy == 0.0 {
        return Ok(AmpSolution {
            x: CVector::zeros(n),
            iterations: 0,
            diverged: false,
            sparsity: cfg.initial_sparsity,
            active_variance: 0.0,
        });
    }
    let a_fro2 = a.norm_squared();
    let noise = noise_var.max(1e-12 * y_energy / m as f64);
    let gamma_w = 1.0 / noise;

    let svd = a.clone().svd(true, true);
    let (u, v_t) = match (svd.u, svd.v_t) {
        (Some(u), Some(v_t)) => (u, v_t),
        _ => return numerical("SVD of the sensing matrix failed"),
    };
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let uh_y = u.adjoint() * y;
    let v = v_t.adjoint();

    let clamp = |g: f64| g.clamp(1e-11, 1e11 * gamma_w.max(1.0));

    // LMMSE stage: posterior of x under CN(r2, 1/γ2) and the likelihood.
    let lmmse = |r2: &CVector, gamma2: f64| -> (CVector, f64) {
        let proj = &v_t * r2;
        let coef = CVector::from_iterator(
            sv.len(),
            sv.iter().enumerate().map(|(i, &s)| {
                let g = gamma_w * s / (gamma_w * s * s + gamma2);
                (uh_y[i] - proj[i] * s) * g
            }),
        );
        let x2 = r2 + &v * coef;
        let mut alpha: f64 = sv.iter().map(|&s| gamma2 / (gamma_w * s * s + gamma2)).sum();
        alpha += (n - sv.len()) as f64;
        (x2, alpha / n as f64)
    };

    let mut rho = cfg.initial_sparsity.clamp(1e-6, 1.0 - 1e-6);
    let mut theta = ((y_energy - m as f64 * noise).max(1e-3 * y_energy) / (a_fro2 * rho)).max(1e-300);

    let (x2, alpha2) = lmmse(&CVector::zeros(n), clamp(1.0 / (rho * theta)));
    let gamma2 = clamp(1.0 / (rho * theta));
    let eta2 = gamma2 / alpha2.max(1e-300);
    let mut gamma1 = clamp(eta2 - gamma2);
    let mut r1 = x2 * C64::new(eta2 / gamma1, 0.0);

    let d = cfg.damping;
    let residual = |x: &CVector| (y - a * x).norm_squared();
    let mut x = CVector::zeros(n);
    let mut best = (residual(&x), x.clone());
    let mut last = best.0;
    let mut rises = 0;
    let mut diverged = false;
    let mut iterations = 0;

    for it in 0..cfg.iterations {
        iterations = it + 1;
        let den = bg_denoise(&r1, 1.0 / gamma1, rho, theta);
        x = den.mean.clone();

        let pi_sum: f64 = den.pi.iter().sum();
        rho = (pi_sum / n as f64).clamp(1e-6, 1.0 - 1e-6);
        if pi_sum > 0.0 {
            let second: f64 = den.pi.iter().zip(&den.post_second).map(|(p, s)| p * s).sum();
            theta = (second / pi_sum).max(1e-300);
        }

        let res = residual(&x);
        if !res.is_finite() {
            diverged = true;
            break;
        }
        if res < best.0 {
            best = (res, x.clone());
        }
        rises = if res > last { rises + 1 } else { 0 };
        last = res;
        if rises >= cfg.divergence_window {
            diverged = true;
            break;
        }

        let alpha1 = (den.var * gamma1).clamp(1e-12, 1.0 - 1e-12);
        let eta1 = gamma1 / alpha1;
        let gamma2 = clamp(eta1 - gamma1);
        let r2 = (&den.mean * C64::new(eta1, 0.0) - &r1 * C64::new(gamma1, 0.0)) / C64::new(gamma2, 0.0);

        let (x2, alpha2) = lmmse(&r2, gamma2);
        let alpha2 = alpha2.clamp(1e-12, 1.0 - 1e-12);
        let eta2 = gamma2 / alpha2;
        let gamma1_new = clamp(eta2 - gamma2);
        let r1_new = (x2 * C64::new(eta2, 0.0) - r2 * C64::new(gamma2, 0.0)) / C64::new(gamma1_new, 0.0);
        r1 = r1_new * C64::new(d, 0.0) + &r1 * C64::new(1.0 - d, 0.0);
        gamma1 = clamp(1.0 / (d / gamma1_new + (1.0 - d) / gamma1));
    }
    if diverged {
        log::debug!("AMP diverged after {iterations} iterations; returning best iterate");
        x = best.1;
    }
    Ok(AmpSolution {
        x,
        iterations,
        diverged,
        sparsity: rho,
        active_variance: theta,
    })
}

/// AMP channel estimate: recovers `vec(H̃)` from `y` with sensing matrix
/// `b_cs` (see [`cs_sensing_matrix`]) and maps back to `Ĥ = F_r H̃ F_tᴴ`.
pub fn amp_estimate(obs: &PilotObservation, b_cs: &CMatrix, cfg: &AmpConfig) -> Result<EstimationResult> {
    let d = &obs.design;
    let (n_t, n_r) = (d.n_t(), d.n_r());
    if b_cs.nrows() != d.len() || b_cs.ncols() != n_t * n_r {
        return invalid("B_CS shape does not match the pilot design");
    }
    let a = b_cs * C64::new(d.power().sqrt(), 0.0);
    let sol = amp_bernoulli_gaussian(&a, &obs.y, obs.noise_var, cfg)?;
    let h_tilde = reshape(&sol.x, n_r, n_t);
    let ft = linalg::unitary_dft(n_t);
    let fr = linalg::unitary_dft(n_r);
    let h = fr * h_tilde * ft.adjoint();
    let mut out = EstimationResult::new(h, "amp");
    out.metadata.diverged = sol.diverged;
    out.metadata.iterations = Some(sol.iterations);
    Ok(out)
}
