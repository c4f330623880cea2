//! Pilot-based MIMO channel estimation.
//!
//! Pilot slot `i` sends precoder `v_i` and combines with `w_i`, observing
//! `y_i = √P_T w_iᴴ H v_i + z_i`. Stacking slots gives
//! `y = √P_T B vec(H) + z` with row `i` of `B` equal to `v_iᵀ ⊗ w_iᴴ`
//! (`vec` stacks columns).

pub mod amp;
pub mod bandwidth;
pub mod mmse;
pub mod pilots;
pub mod pswf_ce;

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Result};
use crate::{linalg, CMatrix, CVector, C64};

pub use amp::{amp_estimate, cs_sensing_matrix, amp_bernoulli_gaussian, AmpConfig, AmpSolution};
pub use bandwidth::{bandwidth_log_likelihood, default_w_grid, estimate_bandwidth_map};
pub use mmse::mmse_estimate;
pub use pilots::{dpss_pilots, random_pilots, Pairing};
pub use pswf_ce::{dpss_mmse, pswf_ce, PswfCeConfig};

/// Precoders and combiners for `N_P` pilot slots.
#[derive(Debug, Clone)]
pub struct PilotDesign {
    precoders: Vec<CVector>,
    combiners: Vec<CVector>,
    power: f64,
}

impl PilotDesign {
    pub fn new(precoders: Vec<CVector>, combiners: Vec<CVector>, power: f64) -> Result<PilotDesign> {
        if precoders.len() != combiners.len() {
            return invalid("precoder and combiner counts differ");
        }
        if !(power > 0.0) {
            return invalid(format!("pilot power must be positive, got {power}"));
        }
        let check = |vs: &[CVector], what: &str| -> Result<()> {
            let n = vs.first().map_or(0, |v| v.len());
            for v in vs {
                if v.len() != n {
                    return invalid(format!("{what} lengths differ"));
                }
                if (v.norm() - 1.0).abs() > 1e-12 {
                    return invalid(format!("{what} not unit norm (‖·‖ = {})", v.norm()));
                }
            }
            Ok(())
        };
        check(&precoders, "precoder")?;
        check(&combiners, "combiner")?;
        Ok(PilotDesign {
            precoders,
            combiners,
            power,
        })
    }

    pub fn len(&self) -> usize {
        self.precoders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.precoders.is_empty()
    }

    pub fn n_t(&self) -> usize {
        self.precoders.first().map_or(0, |v| v.len())
    }

    pub fn n_r(&self) -> usize {
        self.combiners.first().map_or(0, |v| v.len())
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn precoders(&self) -> &[CVector] {
        &self.precoders
    }

    pub fn combiners(&self) -> &[CVector] {
        &self.combiners
    }

    /// First `n` slots.
    pub fn prefix(&self, n: usize) -> PilotDesign {
        PilotDesign {
            precoders: self.precoders[..n].to_vec(),
            combiners: self.combiners[..n].to_vec(),
            power: self.power,
        }
    }

    /// Slots of `self` followed by those of `other`.
    pub fn concat(&self, other: &PilotDesign) -> Result<PilotDesign> {
        if !self.is_empty() && !other.is_empty() && (self.n_t() != other.n_t() || self.n_r() != other.n_r()) {
            return invalid("cannot join pilot designs of different array sizes");
        }
        let mut precoders = self.precoders.clone();
        precoders.extend(other.precoders.iter().cloned());
        let mut combiners = self.combiners.clone();
        combiners.extend(other.combiners.iter().cloned());
        Ok(PilotDesign {
            precoders,
            combiners,
            power: self.power,
        })
    }
}

/// Received pilots for a design.
#[derive(Debug, Clone)]
pub struct PilotObservation {
    pub y: CVector,
    pub noise_var: f64,
    pub design: PilotDesign,
}

impl PilotObservation {
    pub fn new(y: CVector, noise_var: f64, design: PilotDesign) -> Result<PilotObservation> {
        if y.len() != design.len() {
            return invalid(format!("{} observations for {} pilot slots", y.len(), design.len()));
        }
        if !(noise_var >= 0.0) {
            return invalid("noise variance must be non-negative");
        }
        Ok(PilotObservation { y, noise_var, design })
    }

    /// First `n` slots.
    pub fn prefix(&self, n: usize) -> PilotObservation {
        PilotObservation {
            y: self.y.rows(0, n).into_owned(),
            noise_var: self.noise_var,
            design: self.design.prefix(n),
        }
    }

    /// Slots of `self` followed by those of `other`.
    pub fn concat(&self, other: &PilotObservation) -> Result<PilotObservation> {
        let design = self.design.concat(&other.design)?;
        let y = CVector::from_iterator(
            self.y.len() + other.y.len(),
            self.y.iter().chain(other.y.iter()).copied(),
        );
        PilotObservation::new(y, self.noise_var, design)
    }
}

/// Pilot transmission over a fixed channel with pre-drawn unit-variance noise
/// per slot, so that different pilot designs see the same noise in the same
/// slot.
#[derive(Debug, Clone)]
pub struct ChannelAccess {
    h: CMatrix,
    power: f64,
    noise_var: f64,
    noise: Vec<C64>,
}

impl ChannelAccess {
    /// `noise` holds `CN(0, 1)` draws, one per slot.
    pub fn new(h: CMatrix, snr: f64, noise: Vec<C64>) -> Result<ChannelAccess> {
        if !(snr > 0.0) {
            return invalid(format!("snr must be positive, got {snr}"));
        }
        Ok(ChannelAccess {
            h,
            power: 1.0,
            noise_var: 1.0 / snr,
            noise,
        })
    }

    pub fn channel(&self) -> &CMatrix {
        &self.h
    }

    pub fn noise_var(&self) -> f64 {
        self.noise_var
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    pub fn slots(&self) -> usize {
        self.noise.len()
    }

    /// Transmits `design` in slots `first_slot..first_slot + design.len()`.
    pub fn observe(&self, design: &PilotDesign, first_slot: usize) -> Result<PilotObservation> {
        if first_slot + design.len() > self.noise.len() {
            return invalid("pilot slots exceed the pre-drawn noise budget");
        }
        if design.n_t() != self.h.ncols() || design.n_r() != self.h.nrows() {
            return invalid("pilot design does not match the channel dimensions");
        }
        let amp = C64::new(self.power.sqrt(), 0.0);
        let sigma = C64::new(self.noise_var.sqrt(), 0.0);
        let y = CVector::from_iterator(
            design.len(),
            (0..design.len()).map(|i| {
                let w = &design.combiners[i];
                let v = &design.precoders[i];
                let s = w.dotc(&(&self.h * v));
                amp * s + sigma * self.noise[first_slot + i]
            }),
        );
        PilotObservation::new(y, self.noise_var, design.clone())
    }
}

/// Estimator bookkeeping.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EstimatorMetadata {
    pub name: String,
    pub w_hat: Option<f64>,
    /// DPSS pilot pairs were reused because too few were admissible.
    pub recycled_pilots: bool,
    pub diverged: bool,
    pub iterations: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct EstimationResult {
    pub h_hat: CMatrix,
    pub nmse: Option<f64>,
    pub metadata: EstimatorMetadata,
}

impl EstimationResult {
    pub fn new(h_hat: CMatrix, name: &str) -> EstimationResult {
        EstimationResult {
            h_hat,
            nmse: None,
            metadata: EstimatorMetadata {
                name: name.to_string(),
                ..Default::default()
            },
        }
    }

    /// Fills `nmse` against `truth`.
    pub fn scored(mut self, truth: &CMatrix) -> Result<EstimationResult> {
        self.nmse = Some(nmse(truth, &self.h_hat)?);
        Ok(self)
    }
}

/// `N_P × N_tN_r` matrix with row `i` equal to `v_iᵀ ⊗ w_iᴴ`.
pub fn build_sensing_matrix(design: &PilotDesign) -> CMatrix {
    let n_t = design.n_t();
    let n_r = design.n_r();
    CMatrix::from_fn(design.len(), n_t * n_r, |i, col| {
        let (t, r) = (col / n_r, col % n_r);
        design.precoders[i][t] * design.combiners[i][r].conj()
    })
}

/// `‖H − Ĥ‖²_F / ‖H‖²_F`.
pub fn nmse(truth: &CMatrix, estimate: &CMatrix) -> Result<f64> {
    if truth.shape() != estimate.shape() {
        return invalid("truth and estimate shapes differ");
    }
    let denom = truth.norm_squared();
    if denom == 0.0 {
        return invalid("NMSE undefined for an all-zero channel");
    }
    Ok((truth - estimate).norm_squared() / denom)
}

/// Column-stacked channel estimate reshaped to `N_r × N_t`.
pub(crate) fn reshape(h: &CVector, n_r: usize, n_t: usize) -> CMatrix {
    linalg::unvec(h, n_r, n_t)
}

/// Estimators compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EstimatorKind {
    /// Random pilots, MMSE with the true prior covariance.
    RandcombMmse,
    /// Random pilots, Bernoulli–Gaussian AMP in the DFT domain.
    RandcombAmp,
    /// Two-step PSWF-CE with the bandwidth estimated from random pilots.
    BwestPswf,
    /// DPSS pilots at the true bandwidth, MMSE with identity prior.
    PswfMmseNoprior,
    /// DPSS pilots at the true bandwidth, MMSE with the true prior.
    PswfMmseStatcsi,
}

impl EstimatorKind {
    pub const ALL: [EstimatorKind; 5] = [
        EstimatorKind::RandcombMmse,
        EstimatorKind::RandcombAmp,
        EstimatorKind::BwestPswf,
        EstimatorKind::PswfMmseNoprior,
        EstimatorKind::PswfMmseStatcsi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EstimatorKind::RandcombMmse => "randcomb-mmse",
            EstimatorKind::RandcombAmp => "randcomb-amp",
            EstimatorKind::BwestPswf => "bwest-pswf",
            EstimatorKind::PswfMmseNoprior => "pswf-mmse-noprior",
            EstimatorKind::PswfMmseStatcsi => "pswf-mmse-statcsi",
        }
    }

    pub fn is_pswf(self) -> bool {
        matches!(
            self,
            EstimatorKind::BwestPswf | EstimatorKind::PswfMmseNoprior | EstimatorKind::PswfMmseStatcsi
        )
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimatorKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<EstimatorKind> {
        Self::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                crate::Error::InvalidArgument(format!(
                    "unknown estimator '{s}'; valid names: {}",
                    Self::valid_names()
                ))
            })
    }
}
