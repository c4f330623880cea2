//! MIMO capacity, ε-DoF, spectral dominance and the PSWF capacity bound.
//!
//! Transmit power is normalized to one, so the SNR `P_T/σ²_z` is the only
//! free parameter and the noise variance is `1/snr`. Capacities are in nats.

use crate::channel::Interval;
use crate::error::{invalid, Result};
use crate::pswf::PswfBasis;
use crate::{linalg, CMatrix};

/// Tail energy below which the bound's eigenvalue sum is truncated.
pub const BOUND_TAIL_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// Power per input singular value, in the caller's order.
    pub powers: Vec<f64>,
    pub total: f64,
    /// Water level `μ`; zero when no mode is active.
    pub water_level: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub capacity_nats: f64,
    pub allocation: PowerAllocation,
    pub singular_values: Vec<f64>,
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr > 0.0) || !snr.is_finite() {
        return invalid(format!("snr must be positive and finite, got {snr}"));
    }
    Ok(())
}

/// Water-filling capacity for channel singular values `σ_i` at `snr`.
///
/// The active set is found from the sorted breakpoints `σ²_z/σ_i²`: with the
/// `k` strongest modes active the level is `(1 + Σ_{i<k} σ²_z/σ_i²)/k`.
pub fn waterfill_capacity(singular_values: &[f64], snr: f64) -> Result<CapacityResult> {
    check_snr(snr)?;
    if let Some(s) = singular_values.iter().find(|s| !(**s >= 0.0)) {
        return invalid(format!("singular values must be non-negative, got {s}"));
    }
    let noise = 1.0 / snr;
    let mut order: Vec<usize> = (0..singular_values.len())
        .filter(|&i| singular_values[i] > 0.0)
        .collect();
    order.sort_by(|&a, &b| singular_values[b].total_cmp(&singular_values[a]));
    let floors: Vec<f64> = order
        .iter()
        .map(|&i| noise / (singular_values[i] * singular_values[i]))
        .collect();

    let mut active = 0;
    let mut level = 0.0;
    let mut cum = 0.0;
    for (k, &f) in floors.iter().enumerate() {
        cum += f;
        let mu = (1.0 + cum) / (k + 1) as f64;
        if mu > f {
            active = k + 1;
            level = mu;
        } else {
            break;
        }
    }

    let mut powers = vec![0.0; singular_values.len()];
    let mut capacity = 0.0;
    for (&i, &f) in order.iter().zip(&floors).take(active) {
        let p = level - f;
        powers[i] = p;
        capacity += (level / f).ln();
    }
    let total = powers.iter().sum();
    Ok(CapacityResult {
        capacity_nats: capacity,
        allocation: PowerAllocation {
            powers,
            total,
            water_level: level,
        },
        singular_values: singular_values.to_vec(),
    })
}

/// `log det(I + (snr/N_t) H Hᴴ)` from the singular values of `H`.
pub fn equipower_rate_from_singular_values(singular_values: &[f64], n_t: usize, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    if n_t == 0 {
        return invalid("N_t must be positive");
    }
    let a = snr / n_t as f64;
    Ok(singular_values.iter().map(|s| (a * s * s).ln_1p()).sum())
}

/// Equal-power rate `log det(I + (snr/N_t) H Hᴴ)`.
pub fn equipower_rate(h: &CMatrix, snr: f64) -> Result<f64> {
    equipower_rate_from_singular_values(&linalg::singular_values(h), h.ncols(), snr)
}

/// Number of singular values at least `eps`.
pub fn epsilon_dof(singular_values: &[f64], eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps < 1.0) {
        return invalid(format!("eps must lie in (0, 1), got {eps}"));
    }
    Ok(singular_values.iter().filter(|&&s| s >= eps).count())
}

/// Ergodic-capacity upper bound `Σ_ℓ log(1 + snr·γ_ℓ)` over the prolate
/// eigenvalues of `(𝒜, ℬ_Ω)`, `Ω = min{L̄, 1/Γ}`.
pub fn pswf_capacity_bound(support: Interval, gamma: f64, aperture_wavelengths: f64, snr: f64) -> Result<f64> {
    Interval::new(support.lo, support.hi)?;
    check_snr(snr)?;
    if !(gamma > 0.0) || !(aperture_wavelengths > 0.0) {
        return invalid("Γ and the aperture must be positive");
    }
    let omega = aperture_wavelengths.min(1.0 / gamma);
    let basis = PswfBasis::on_interval(omega, support.lo, support.hi)?;
    let total = 2.0 * basis.c() / std::f64::consts::PI;
    let mut sum = 0.0;
    let mut used = 0.0;
    for &g in basis.gamma() {
        sum += (snr * g).ln_1p();
        used += g;
        if snr * (total - used) < BOUND_TAIL_TOLERANCE {
            break;
        }
    }
    Ok(sum)
}

/// Whether `σ_i(QAP) ≤ σ_i(A) + 1e-10` for every `i`, given contractions
/// `P` and `Q`.
pub fn check_spectral_dominance(a: &CMatrix, p: &CMatrix, q: &CMatrix) -> Result<bool> {
    if q.ncols() != a.nrows() || a.ncols() != p.nrows() {
        return invalid("shapes of Q, A, P do not chain");
    }
    for (name, m) in [("P", p), ("Q", q)] {
        let norm = linalg::singular_values(m).first().copied().unwrap_or(0.0);
        if norm > 1.0 + 1e-12 {
            return invalid(format!("{name} is not a contraction (operator norm {norm})"));
        }
    }
    let s_a = linalg::singular_values(a);
    let s_qap = linalg::singular_values(&(q * a * p));
    Ok(s_qap
        .iter()
        .enumerate()
        .all(|(i, s)| *s <= s_a.get(i).copied().unwrap_or(0.0) + 1e-10))
}

/// Capacity divided by `log(1 + snr)`.
pub fn normalized(capacity_nats: f64, snr: f64) -> f64 {
    capacity_nats / snr.ln_1p()
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats * std::f64::consts::LOG2_E
}
