//! TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::channel::{ChannelSpec, Interval};
use crate::error::{Error, Result};
use crate::estimators::{EstimatorKind, Pairing};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    HmimoSaturation,
    XlmimoSaturation,
    CeSnrSweep,
    CePilotSweep,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::HmimoSaturation => "hmimo-saturation",
            ExperimentKind::XlmimoSaturation => "xlmimo-saturation",
            ExperimentKind::CeSnrSweep => "ce-snr-sweep",
            ExperimentKind::CePilotSweep => "ce-pilot-sweep",
        }
    }

    pub fn is_capacity(self) -> bool {
        matches!(self, ExperimentKind::HmimoSaturation | ExperimentKind::XlmimoSaturation)
    }
}

fn default_carrier() -> f64 {
    3.5e9
}

fn default_gamma() -> f64 {
    0.05
}

fn default_grid_k() -> usize {
    1024
}

fn default_sigma2() -> f64 {
    1.0
}

fn default_spacing() -> f64 {
    0.5
}

fn default_eps() -> f64 {
    0.1
}

fn default_w_points() -> usize {
    64
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default = "default_carrier")]
    pub carrier_hz: f64,
    /// Transmit wavenumber support `[lo, hi]`.
    pub support_t: [f64; 2],
    /// Receive wavenumber support `[lo, hi]`.
    pub support_r: [f64; 2],
    /// Bandlimit `Γ` for both sides unless overridden.
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub gamma_t: Option<f64>,
    pub gamma_r: Option<f64>,
    #[serde(default = "default_grid_k")]
    pub grid_k: usize,
    #[serde(default = "default_sigma2")]
    pub sigma2: f64,
}

impl ChannelConfig {
    pub fn spec(&self) -> Result<ChannelSpec> {
        let spec = ChannelSpec {
            support_t: Interval::new(self.support_t[0], self.support_t[1])?,
            support_r: Interval::new(self.support_r[0], self.support_r[1])?,
            gamma_t: self.gamma_t.unwrap_or(self.gamma),
            gamma_r: self.gamma_r.unwrap_or(self.gamma),
            sigma2: self.sigma2,
            grid_k: self.grid_k,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn wavelength(&self) -> f64 {
        crate::wavelength(self.carrier_hz)
    }
}

/// Swept quantity and the fixed parameters around it.
///
/// `values` holds antenna densities `λ_c/δ` (hmimo), apertures in meters
/// (xlmimo), SNRs in dB (ce-snr-sweep) or pilot counts (ce-pilot-sweep).
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub values: Vec<f64>,
    pub aperture_m: Option<f64>,
    #[serde(default = "default_spacing")]
    pub spacing_wavelengths: f64,
    pub snr_db: Option<f64>,
    pub pilots: Option<usize>,
    /// Array size override; otherwise `round(L/Δ)`.
    pub n_elems: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PairingChoice {
    #[default]
    Product,
    Random,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimationConfig {
    #[serde(default)]
    pub estimators: Vec<String>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_w_points")]
    pub w_grid_points: usize,
    #[serde(default)]
    pub pairing: PairingChoice,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        EstimationConfig {
            estimators: Vec::new(),
            eps: default_eps(),
            w_grid_points: default_w_points(),
            pairing: PairingChoice::Product,
        }
    }
}

impl EstimationConfig {
    /// Parsed estimator list; empty means all five.
    pub fn kinds(&self) -> Result<Vec<EstimatorKind>> {
        if self.estimators.is_empty() {
            return Ok(EstimatorKind::ALL.to_vec());
        }
        self.estimators.iter().map(|s| s.parse()).collect()
    }

    pub fn w_grid(&self) -> Vec<f64> {
        let n = self.w_grid_points.max(1);
        (1..=n).map(|k| k as f64 / n as f64).collect()
    }

    pub fn pairing(&self, seed: u64) -> Pairing {
        match self.pairing {
            PairingChoice::Product => Pairing::Product,
            PairingChoice::Random => Pairing::Random(seed),
        }
    }
}

fn default_output() -> PathBuf {
    PathBuf::from("results.csv")
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub trials: usize,
    pub seed: u64,
    /// CSV path, relative to the output directory.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub svg: bool,
    pub channel: ChannelConfig,
    pub sweep: SweepConfig,
    #[serde(default)]
    pub estimation: EstimationConfig,
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return config_err("trials must be >= 1");
        }
        if self.sweep.values.is_empty() {
            return config_err("sweep.values must be nonempty");
        }
        if !(self.sweep.spacing_wavelengths > 0.0) {
            return config_err("sweep.spacing_wavelengths must be positive");
        }
        self.channel.spec().map_err(|e| Error::Config(e.to_string()))?;
        let need = |what: &str, ok: bool| if ok { Ok(()) } else { config_err(format!("{} requires {what}", self.kind.name())) };
        match self.kind {
            ExperimentKind::HmimoSaturation => {
                need("sweep.aperture_m", self.sweep.aperture_m.is_some())?;
                need("sweep.snr_db", self.sweep.snr_db.is_some())?;
                if self.sweep.values.iter().any(|&d| !(d > 0.0)) {
                    return config_err("densities must be positive");
                }
            }
            ExperimentKind::XlmimoSaturation => {
                need("sweep.snr_db", self.sweep.snr_db.is_some())?;
                if self.sweep.values.iter().any(|&l| !(l > 0.0)) {
                    return config_err("apertures must be positive");
                }
            }
            ExperimentKind::CeSnrSweep => {
                need("sweep.aperture_m or sweep.n_elems", self.sweep.aperture_m.is_some() || self.sweep.n_elems.is_some())?;
                need("sweep.pilots >= 4", self.sweep.pilots.is_some_and(|p| p >= 4))?;
            }
            ExperimentKind::CePilotSweep => {
                need("sweep.aperture_m or sweep.n_elems", self.sweep.aperture_m.is_some() || self.sweep.n_elems.is_some())?;
                need("sweep.snr_db", self.sweep.snr_db.is_some())?;
                if self.sweep.values.iter().any(|&p| p < 4.0 || p.fract() != 0.0) {
                    return config_err("pilot counts must be integers >= 4");
                }
            }
        }
        if !self.kind.is_capacity() {
            self.estimation.kinds().map_err(|e| Error::Config(e.to_string()))?;
            let eps = self.estimation.eps;
            if !(eps > 0.0 && eps < 1.0) {
                return config_err("estimation.eps must lie in (0, 1)");
            }
        }
        Ok(())
    }
}
