//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::path::Path;
use std::time::{Duration, Instant};

use pswf_mimo::capacity::{check_spectral_dominance, epsilon_dof, waterfill_capacity};
use pswf_mimo::dpss::compute_dpss;
use pswf_mimo::experiments::saturation::WATERFILL;
use pswf_mimo::experiments::{run_experiment, write_outputs, ExperimentConfig, ResultTable};
use pswf_mimo::linalg::singular_values;
use pswf_mimo::pswf::PswfBasis;
use pswf_mimo::rng::{complex_normal_matrix, stream_rng};
use pswf_mimo::{CMatrix, C64};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn config(name: &str) -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/configs").join(name);
    ExperimentConfig::from_file(&path).unwrap()
}

fn pswf_trace() -> Outcome {
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for c in [1.0, 5.0, 10.0, 25.0] {
        let t = Instant::now();
        let basis = PswfBasis::standard(c).unwrap();
        slowest = slowest.max(t.elapsed());
        let sum: f64 = basis.gamma().iter().sum();
        let target = 2.0 * c / std::f64::consts::PI;
        worst = worst.max((sum - target).abs() / target);
    }
    outcome(
        worst <= 1e-6 && slowest < Duration::from_secs(1),
        format!("max relative trace error {worst:.2e}, slowest c {slowest:.2?}"),
    )
}

fn pswf_vs_nystrom() -> Outcome {
    let mut worst = 0.0f64;
    for c in [5.0f64, 10.0] {
        let basis = PswfBasis::standard(c).unwrap();
        let oracle = common::nystrom_sinc_eigenvalues(c, 2048);
        let top = (2.0 * c / std::f64::consts::PI).ceil() as usize + 10;
        for l in 0..top {
            worst = worst.max((basis.gamma()[l] - oracle[l]).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |Δγ| {worst:.2e}"))
}

fn dpss_exactness() -> Outcome {
    let pi = std::f64::consts::PI;
    let two = compute_dpss(2, 0.5).unwrap();
    let want = [0.5 * (1.0 + 2.0 / pi), 0.5 * (1.0 - 2.0 / pi)];
    let small = two.eigenvalues().iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let mut trace = 0.0f64;
    for n in [1, 2, 3, 7, 16, 33, 64, 100, 128, 200, 256] {
        for w in [0.05, 0.3, 0.5, 0.77] {
            let b = compute_dpss(n, w).unwrap();
            let sum: f64 = b.eigenvalues().iter().sum();
            trace = trace.max((sum - n as f64 * w).abs());
        }
    }
    outcome(small <= 1e-12 && trace <= 1e-9, format!("n=2 error {small:.2e}, trace error {trace:.2e}"))
}

fn contraction(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    let m = complex_normal_matrix(rng, rows, cols);
    let scale: f64 = rng.random_range(0.05..=1.0);
    let norm = singular_values(&m)[0];
    m * C64::new(scale / norm, 0.0)
}

fn dominance_suite() -> Outcome {
    let mut violations = 0;
    for i in 0..1000 {
        let mut rng = stream_rng(404, i);
        let (m, n) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let (k, l) = (rng.random_range(1..=8), rng.random_range(1..=8));
        let a = complex_normal_matrix(&mut rng, m, n);
        let p = contraction(&mut rng, n, k);
        let q = contraction(&mut rng, l, m);
        if !check_spectral_dominance(&a, &p, &q).unwrap() {
            violations += 1;
        }
        let s_a = singular_values(&a);
        let s_b = singular_values(&(&q * &a * &p));
        for eps in [0.1, 0.5, 0.9] {
            if epsilon_dof(&s_b, eps).unwrap() > epsilon_dof(&s_a, eps).unwrap() {
                violations += 1;
            }
        }
        for snr in [0.1, 1.0, 10.0] {
            let ca = waterfill_capacity(&s_a, snr).unwrap().capacity_nats;
            let cb = waterfill_capacity(&s_b, snr).unwrap().capacity_nats;
            if cb > ca + 1e-10 {
                violations += 1;
            }
        }
    }
    outcome(violations == 0, format!("{violations} violations in 1000 instances"))
}

fn hmimo_saturation() -> Outcome {
    let mut cfg = config("hmimo.toml");
    cfg.trials = 50;
    let table = run_experiment(&cfg).unwrap();
    let under = table.rows.iter().all(|r| r.mean <= r.bound.unwrap());
    let at = |d: f64| table.value(d, WATERFILL).unwrap();
    let flat = (at(8.0) - at(4.0)).abs() / at(4.0);
    let growth = (at(2.0) - at(0.5)) / at(0.5);
    outcome(
        under && flat < 0.03 && growth > 0.2,
        format!(
            "below bound {under}, 4→8 change {:.2}%, 0.5→2 growth {:.1}%",
            100.0 * flat,
            100.0 * growth
        ),
    )
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

fn xlmimo_saturation() -> Outcome {
    let mut cfg = config("xlmimo.toml");
    cfg.trials = 50;
    let table = run_experiment(&cfg).unwrap();
    let curve: Vec<(f64, f64)> = table.series(WATERFILL).iter().map(|r| (r.sweep_value, r.mean)).collect();
    let early: Vec<(f64, f64)> = curve.iter().copied().filter(|p| p.0 >= 0.2 && p.0 <= 1.0).collect();
    let late: Vec<(f64, f64)> = curve.iter().copied().filter(|p| p.0 >= 2.5 && p.0 <= 4.0).collect();
    let (rise, offset) = fit(&early);
    let (tail, _) = fit(&late);
    let plateau = late.iter().map(|p| p.1).sum::<f64>() / late.len() as f64;
    let knee = (plateau - offset) / rise;
    let ratio = tail.abs() / rise;
    outcome(
        ratio < 0.1 && (1.2..=2.2).contains(&knee),
        format!("slope ratio {:.2}%, knee {knee:.2} m", 100.0 * ratio),
    )
}

fn estimator_ordering() -> Outcome {
    let mut cfg = config("ce_snr_12x12.toml");
    cfg.trials = 50;
    cfg.sweep.values = vec![0.0, 10.0, 20.0];
    cfg.sweep.pilots = Some(40);
    cfg.sweep.n_elems = Some(12);
    cfg.estimation.estimators.clear();
    let table = run_experiment(&cfg).unwrap();
    let mut failures = Vec::new();
    let mut cells = Vec::new();
    for snr in [0.0, 10.0, 20.0] {
        let v = |name: &str| table.value(snr, name).unwrap();
        let (stat, nop, bw) = (v("pswf-mmse-statcsi"), v("pswf-mmse-noprior"), v("bwest-pswf"));
        let (rm, ra) = (v("randcomb-mmse"), v("randcomb-amp"));
        cells.push(format!(
            "{snr} dB: statcsi {stat:.1} noprior {nop:.1} bwest {bw:.1} randcomb-mmse {rm:.1} randcomb-amp {ra:.1}"
        ));
        if stat > nop + 1.0 || nop > bw + 1.0 {
            failures.push(format!("ordering at {snr} dB"));
        }
        if snr >= 10.0 {
            for (name, x) in [("statcsi", stat), ("noprior", nop), ("bwest", bw)] {
                if x > rm.min(ra) - 2.0 {
                    failures.push(format!("{name} margin at {snr} dB"));
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        cells.join("; ")
    } else {
        format!("{}; {}", failures.join(", "), cells.join("; "))
    };
    outcome(failures.is_empty(), detail)
}

fn pilot_plateau() -> Outcome {
    let mut cfg = config("ce_pilots_10db.toml");
    cfg.trials = 50;
    cfg.estimation.estimators.clear();
    let table = run_experiment(&cfg).unwrap();
    let largest = cfg.sweep.values.iter().copied().fold(f64::MIN, f64::max);
    let mut ok = true;
    let mut cells = Vec::new();
    for name in ["bwest-pswf", "pswf-mmse-noprior", "pswf-mmse-statcsi"] {
        let v = table.value(largest, name).unwrap();
        ok &= (-23.0..=-17.0).contains(&v);
        cells.push(format!("{name} {v:.2} dB"));
    }
    outcome(ok, format!("N_P = {largest}: {}", cells.join(", ")))
}

fn mmse_sanity() -> Outcome {
    let d = common::mmse_minus_ls(10_000, 9);
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let se = (d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() / n.sqrt();
    outcome(mean <= 3.0 * se, format!("MSE(mmse) − MSE(ls) = {mean:.4} (se {se:.4})"))
}

fn written_bytes(cfg: &ExperimentConfig, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let table: ResultTable = pool.install(|| run_experiment(cfg)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let paths = write_outputs(cfg, &table, dir.path()).unwrap();
    std::fs::read(&paths[0]).unwrap()
}

fn determinism() -> Outcome {
    let mut cases = Vec::new();
    for (name, values) in [
        ("hmimo.toml", vec![0.5, 2.0, 8.0]),
        ("xlmimo.toml", vec![0.2, 1.0, 2.5]),
        ("ce_snr_12x12.toml", vec![0.0, 20.0]),
        ("ce_pilots_0db.toml", vec![8.0, 40.0]),
    ] {
        let mut cfg = config(name);
        cfg.trials = 8;
        cfg.sweep.values = values;
        let same = written_bytes(&cfg, 1) == written_bytes(&cfg, 8);
        cases.push((name, same));
    }
    let ok = cases.iter().all(|c| c.1);
    let bad: Vec<&str> = cases.iter().filter(|c| !c.1).map(|c| c.0).collect();
    outcome(ok, if ok { "1 vs 8 threads byte-identical for all configs".to_string() } else { format!("differs: {bad:?}") })
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("PSWF trace identity", pswf_trace),
        ("PSWF vs Nystrom oracle", pswf_vs_nystrom),
        ("DPSS exactness", dpss_exactness),
        ("dominance suite", dominance_suite),
        ("H-MIMO saturation", hmimo_saturation),
        ("XL-MIMO saturation", xlmimo_saturation),
        ("estimator ordering", estimator_ordering),
        ("pilot-sweep plateau", pilot_plateau),
        ("MMSE sanity", mmse_sanity),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {status} {name}: {} [{:.1?}]", i + 1, o.detail, start.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
