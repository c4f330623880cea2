//! Capacity-saturation sweeps over antenna density and aperture.

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::table::{mean_std, ResultRow, ResultTable, TableKind};
use super::antenna_count;
use crate::capacity::{equipower_rate_from_singular_values, normalized, pswf_capacity_bound, waterfill_capacity};
use crate::channel::{ArrayChannelModel, ArrayGeometry, KlModel, Synthesis};
use crate::error::{invalid, Result};
use crate::linalg::singular_values;
use crate::rng::stream_rng;

pub const WATERFILL: &str = "waterfill";
pub const EQUIPOWER: &str = "equipower";

struct Point {
    value: f64,
    geom: ArrayGeometry,
    aperture_m: f64,
}

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Normalized water-filled and equal-power capacity versus antenna density
/// `λ_c/δ` at fixed aperture, with `δ = Δ`.
pub fn run_hmimo_saturation(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.kind != ExperimentKind::HmimoSaturation {
        return invalid("config kind is not hmimo-saturation");
    }
    let lam = cfg.channel.wavelength();
    let aperture = cfg.sweep.aperture_m.unwrap_or(1.0);
    let points = cfg
        .sweep
        .values
        .iter()
        .map(|&density| {
            let spacing = lam / density;
            let n = cfg.sweep.n_elems.unwrap_or_else(|| antenna_count(aperture, spacing));
            Ok(Point {
                value: density,
                geom: ArrayGeometry::contiguous(n, spacing, lam)?,
                aperture_m: aperture,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_points(cfg, &points)
}

/// Normalized capacity versus aperture at fixed spacing (equal Tx/Rx
/// apertures).
pub fn run_xlmimo_saturation(cfg: &ExperimentConfig) -> Result<ResultTable> {
    if cfg.kind != ExperimentKind::XlmimoSaturation {
        return invalid("config kind is not xlmimo-saturation");
    }
    let lam = cfg.channel.wavelength();
    let spacing = cfg.sweep.spacing_wavelengths * lam;
    let points = cfg
        .sweep
        .values
        .iter()
        .map(|&aperture| {
            let n = antenna_count(aperture, spacing);
            Ok(Point {
                value: aperture,
                geom: ArrayGeometry::contiguous(n, spacing, lam)?,
                aperture_m: aperture,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    run_points(cfg, &points)
}

fn run_points(cfg: &ExperimentConfig, points: &[Point]) -> Result<ResultTable> {
    let spec = cfg.channel.spec()?;
    let snr = db_to_linear(cfg.sweep.snr_db.unwrap_or(10.0));
    let lam = cfg.channel.wavelength();
    let kl = KlModel::new(spec)?;
    let mut table = ResultTable::new(TableKind::Saturation);

    for (p, pt) in points.iter().enumerate() {
        let model = ArrayChannelModel::from_kl(kl.clone(), pt.geom, pt.geom, Synthesis::Segmented, false)?;
        let per_trial = (0..cfg.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = stream_rng(cfg.seed, ((p as u64) << 32) | t as u64);
                let h = model.sample(&mut rng).h;
                let sv = singular_values(&h);
                let wf = waterfill_capacity(&sv, snr)?.capacity_nats;
                let eq = equipower_rate_from_singular_values(&sv, h.ncols(), snr)?;
                Ok((normalized(wf, snr), normalized(eq, snr)))
            })
            .collect::<Result<Vec<(f64, f64)>>>()?;
        let bound = normalized(
            pswf_capacity_bound(spec.support_t, spec.gamma_t, pt.aperture_m / lam, snr)?,
            snr,
        );
        for (label, vals) in [
            (WATERFILL, per_trial.iter().map(|v| v.0).collect::<Vec<_>>()),
            (EQUIPOWER, per_trial.iter().map(|v| v.1).collect::<Vec<_>>()),
        ] {
            let (mean, std) = mean_std(&vals);
            if mean > bound {
                log::warn!("{label} at {} exceeds the PSWF bound ({mean} > {bound})", pt.value);
            }
            table.rows.push(ResultRow {
                sweep_value: pt.value,
                label: label.to_string(),
                mean,
                std,
                trials: cfg.trials,
                bound: Some(bound),
            });
        }
        log::info!(
            "{} = {}: N = {}, waterfill {:.4}, bound {:.4}",
            cfg.kind.name(),
            pt.value,
            pt.geom.n_elems,
            table.rows[table.rows.len() - 2].mean,
            bound
        );
    }
    Ok(table)
}
