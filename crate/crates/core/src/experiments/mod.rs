//! Config-driven Monte Carlo harness.
//!
//! Every trial draws from its own `(seed, trial)` random stream and trial
//! results are reduced in trial order, so output is identical for any worker
//! count.

pub mod config;
pub mod estimation;
pub mod saturation;
pub mod svg;
pub mod table;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, ExperimentKind};
pub use estimation::{run_ce_pilot_sweep, run_ce_snr_sweep};
pub use saturation::{run_hmimo_saturation, run_xlmimo_saturation};
pub use table::{ResultRow, ResultTable, TableKind};

use crate::error::Result;
use crate::io::write_atomic;

/// `round(L/Δ)` elements (at least one); logs the aperture mismatch.
pub fn antenna_count(aperture_m: f64, spacing_m: f64) -> usize {
    let n = ((aperture_m / spacing_m).round() as usize).max(1);
    let mismatch = (n as f64 * spacing_m - aperture_m).abs();
    if mismatch > 1e-9 {
        log::debug!("aperture {aperture_m} m realized as {n} x {spacing_m:.6} m (off by {mismatch:.3e} m)");
    }
    n
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    match cfg.kind {
        ExperimentKind::HmimoSaturation => run_hmimo_saturation(cfg),
        ExperimentKind::XlmimoSaturation => run_xlmimo_saturation(cfg),
        ExperimentKind::CeSnrSweep => run_ce_snr_sweep(cfg),
        ExperimentKind::CePilotSweep => run_ce_pilot_sweep(cfg),
    }
}

/// Writes the CSV (and the SVG when enabled) under `out_dir`.
pub fn write_outputs(cfg: &ExperimentConfig, table: &ResultTable, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let csv_path = out_dir.join(&cfg.output);
    write_atomic(&csv_path, table.to_csv().as_bytes())?;
    let mut written = vec![csv_path.clone()];
    if cfg.svg {
        let (x_label, log_x) = match cfg.kind {
            ExperimentKind::HmimoSaturation => ("antenna density λc/δ", true),
            ExperimentKind::XlmimoSaturation => ("aperture L [m]", false),
            ExperimentKind::CeSnrSweep => ("SNR [dB]", false),
            ExperimentKind::CePilotSweep => ("pilots N_P", false),
        };
        let svg_path = csv_path.with_extension("svg");
        write_atomic(&svg_path, svg::render(table, cfg.kind.name(), x_label, log_x).as_bytes())?;
        written.push(svg_path);
    }
    Ok(written)
}
