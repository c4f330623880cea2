//! Channel-estimation NMSE sweeps over SNR and pilot count.

use rayon::prelude::*;

use super::antenna_count;
use super::config::{ExperimentConfig, ExperimentKind};
use super::table::{db, mean_std, ResultRow, ResultTable, TableKind};
use crate::channel::{ArrayChannelModel, ArrayGeometry, Synthesis};
use crate::error::{invalid, Result};
use crate::estimators::{
    amp_estimate, cs_sensing_matrix, dpss_mmse, mmse_estimate, nmse, pswf_ce, random_pilots, AmpConfig,
    ChannelAccess, EstimatorKind, PswfCeConfig,
};
use crate::rng::{complex_normal, stream_rng};
use crate::{CMatrix, C64};

/// Shared per-run state.
pub struct EstimationSetup {
    pub model: ArrayChannelModel,
    pub prior: CMatrix,
    pub identity: CMatrix,
    /// DPSS bandwidth of the true wavenumber support at the array spacing.
    pub w_true: f64,
    pub kinds: Vec<EstimatorKind>,
}

impl EstimationSetup {
    pub fn new(cfg: &ExperimentConfig) -> Result<EstimationSetup> {
        let spec = cfg.channel.spec()?;
        let lam = cfg.channel.wavelength();
        let spacing = cfg.sweep.spacing_wavelengths * lam;
        let n = match cfg.sweep.n_elems {
            Some(n) => n,
            None => antenna_count(cfg.sweep.aperture_m.unwrap_or(0.5), spacing),
        };
        let geom = ArrayGeometry::contiguous(n, spacing, lam)?;
        let model = ArrayChannelModel::new(spec, geom, geom, Synthesis::Dictionary, true)?;
        let prior = model.prior_covariance();
        let w_t = spec.support_t.width() * cfg.sweep.spacing_wavelengths;
        let w_r = spec.support_r.width() * cfg.sweep.spacing_wavelengths;
        if (w_t - w_r).abs() > 1e-12 {
            log::warn!("unequal Tx/Rx DPSS bandwidths {w_t} and {w_r}; using the larger");
        }
        let w_true = w_t.max(w_r).min(1.0);
        Ok(EstimationSetup {
            identity: CMatrix::identity(n * n, n * n),
            model,
            prior,
            w_true,
            kinds: cfg.estimation.kinds()?,
        })
    }
}

/// One trial: NMSE for every `(snr, n_p)` point and estimator, in that
/// nesting order.
pub fn estimation_trial(
    cfg: &ExperimentConfig,
    setup: &EstimationSetup,
    trial: usize,
    points: &[(f64, usize)],
) -> Result<Vec<Vec<f64>>> {
    let mut rng = stream_rng(cfg.seed, trial as u64);
    let h = setup.model.sample(&mut rng).h;
    let n = h.nrows();
    let max_np = points.iter().map(|p| p.1).max().unwrap_or(0);
    let noise: Vec<C64> = (0..max_np).map(|_| complex_normal(&mut rng)).collect();
    let random = random_pilots(&mut rng, n, n, max_np, 1.0);
    let eps = cfg.estimation.eps;
    let pairing = cfg.estimation.pairing(cfg.seed.wrapping_add(trial as u64));
    let w_grid = cfg.estimation.w_grid();

    points
        .iter()
        .map(|&(snr, n_p)| {
            let access = ChannelAccess::new(h.clone(), snr, noise[..n_p].to_vec())?;
            let design = random.prefix(n_p);
            setup
                .kinds
                .iter()
                .map(|kind| {
                    let est = match kind {
                        EstimatorKind::RandcombMmse => mmse_estimate(&access.observe(&design, 0)?, &setup.prior)?,
                        EstimatorKind::RandcombAmp => {
                            let obs = access.observe(&design, 0)?;
                            amp_estimate(&obs, &cs_sensing_matrix(&design), &AmpConfig::default())?
                        }
                        EstimatorKind::BwestPswf => {
                            let ce = PswfCeConfig {
                                n_p,
                                n_p1: n_p / 4,
                                eps,
                                w_grid: w_grid.clone(),
                                pairing,
                            };
                            pswf_ce(&access, &design, &ce)?
                        }
                        EstimatorKind::PswfMmseNoprior => {
                            dpss_mmse(&access, None, setup.w_true, eps, n_p, pairing, &setup.identity)?
                        }
                        EstimatorKind::PswfMmseStatcsi => {
                            dpss_mmse(&access, None, setup.w_true, eps, n_p, pairing, &setup.prior)?
                        }
                    };
                    nmse(&h, &est.h_hat)
                })
                .collect()
        })
        .collect()
}

fn run_points(cfg: &ExperimentConfig, points: &[(f64, usize)], sweep_values: &[f64]) -> Result<ResultTable> {
    let setup = EstimationSetup::new(cfg)?;
    let per_trial = (0..cfg.trials)
        .into_par_iter()
        .map(|t| estimation_trial(cfg, &setup, t, points))
        .collect::<Result<Vec<_>>>()?;
    let mut table = ResultTable::new(TableKind::Estimation);
    for (p, &x) in sweep_values.iter().enumerate() {
        for (e, kind) in setup.kinds.iter().enumerate() {
            let vals: Vec<f64> = per_trial.iter().map(|t| t[p][e]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let dbs: Vec<f64> = vals.iter().map(|&v| db(v)).collect();
            let (_, std_db) = mean_std(&dbs);
            table.rows.push(ResultRow {
                sweep_value: x,
                label: kind.name().to_string(),
                mean: db(mean),
                std: std_db,
                trials: cfg.trials,
                bound: None,
            });
        }
    }
    Ok(table)
}

/// Mean NMSE (dB) versus SNR at a fixed pilot count.
pub fn run_ce_snr_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.kind != ExperimentKind::CeSnrSweep {
        return invalid("config kind is not ce-snr-sweep");
    }
    let n_p = cfg.sweep.pilots.unwrap_or(40);
    let points: Vec<(f64, usize)> = cfg.sweep.values.iter().map(|&s| (10f64.powf(s / 10.0), n_p)).collect();
    run_points(cfg, &points, &cfg.sweep.values)
}

/// Mean NMSE (dB) versus pilot count at a fixed SNR.
pub fn run_ce_pilot_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.kind != ExperimentKind::CePilotSweep {
        return invalid("config kind is not ce-pilot-sweep");
    }
    let snr = 10f64.powf(cfg.sweep.snr_db.unwrap_or(10.0) / 10.0);
    let points: Vec<(f64, usize)> = cfg.sweep.values.iter().map(|&p| (snr, p as usize)).collect();
    run_points(cfg, &points, &cfg.sweep.values)
}
