//! `pswf-mimo` command-line front end.
//!
//! Exit status: 0 on success, 1 on numerical or I/O failure, 2 on usage or
//! config errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pswf_mimo::capacity::{nats_to_bits, normalized, pswf_capacity_bound};
use pswf_mimo::channel::Interval;
use pswf_mimo::dpss::compute_dpss;
use pswf_mimo::experiments::{run_experiment, write_outputs, ExperimentConfig};
use pswf_mimo::io::write_atomic;
use pswf_mimo::pswf::{default_n_max, rescale_to_interval};
use pswf_mimo::special::gauss_legendre_rule;
use pswf_mimo::{wavelength, Error};

#[derive(Debug, Parser)]
#[command(name = "pswf-mimo", version, about = "PSWF tools and wavenumber-domain MIMO experiments")]
struct Cli {
    /// Worker threads for the Monte Carlo harness (default: all cores).
    #[arg(long, global = true, env = "PSWF_MIMO_THREADS")]
    threads: Option<usize>,

    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// PSWF eigenvalues and sampled eigenfunctions on [a, b] for bandwidth Ω.
    Pswf(PswfArgs),
    /// DPSS eigenvalues and vectors for length n and bandwidth w.
    Dpss(DpssArgs),
    /// PSWF ergodic-capacity upper bound.
    Bound(BoundArgs),
    /// Capacity-saturation experiment from a TOML config.
    Simulate(RunArgs),
    /// Channel-estimation experiment from a TOML config.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct PswfArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    /// Legendre truncation order (default max(64, ⌈2c⌉ + 40)).
    #[arg(long)]
    nmax: Option<usize>,
    /// Number of eigenfunctions to sample.
    #[arg(long, default_value_t = 8)]
    modes: usize,
    /// Uniform sample points on [a, b].
    #[arg(long, default_value_t = 201)]
    samples: usize,
}

#[derive(Debug, Args)]
struct DpssArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    w: f64,
    /// Admissibility threshold on the concentration eigenvalues.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
struct BoundArgs {
    /// Wavenumber resolution Γ.
    #[arg(long)]
    gamma: f64,
    /// Transmit wavenumber support [a, b].
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: f64,
    /// Aperture in meters.
    #[arg(long)]
    aperture: f64,
    #[arg(long, default_value_t = 3.5e9)]
    carrier_hz: f64,
    #[arg(long)]
    snr_db: f64,
}

#[derive(Debug, Args)]
struct RunArgs {
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config trial count.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated estimator names (default: config list, else all).
    #[arg(long, value_delimiter = ',')]
    estimators: Option<Vec<String>>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) | Error::Config(_) => 2,
        Error::NumericalFailure(_) | Error::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            log::warn!("could not configure thread pool: {e}");
        }
    }

    let result = match &cli.command {
        Command::Pswf(args) => cmd_pswf(args, &cli.out_dir),
        Command::Dpss(args) => cmd_dpss(args, &cli.out_dir),
        Command::Bound(args) => cmd_bound(args),
        Command::Simulate(args) => cmd_run(args, None, true, &cli.out_dir),
        Command::Estimate(args) => cmd_run(&args.run, args.estimators.clone(), false, &cli.out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cmd_pswf(args: &PswfArgs, out_dir: &Path) -> Result<(), Error> {
    if !(args.a < args.b) {
        return Err(Error::InvalidArgument(format!("need a < b, got [{}, {}]", args.a, args.b)));
    }
    let c = std::f64::consts::PI * args.omega * (args.b - args.a) / 2.0;
    let n_max = args.nmax.unwrap_or_else(|| default_n_max(c));
    let quad = gauss_legendre_rule(2 * n_max.max(1))?;
    let basis = rescale_to_interval(args.omega, args.a, args.b, n_max, &quad)?;

    let mut eigen = Vec::new();
    basis.write_eigen_csv(&mut eigen)?;
    let mut funcs = Vec::new();
    basis.write_functions_csv(args.modes, args.samples, &mut funcs)?;
    let eigen_path = out_dir.join("pswf_eigen.csv");
    let funcs_path = out_dir.join("pswf_functions.csv");
    write_atomic(&eigen_path, &eigen)?;
    write_atomic(&funcs_path, &funcs)?;

    let sum: f64 = basis.gamma().iter().sum();
    println!(
        "c = {c:.6}, modes = {}, sum(gamma) = {sum:.9} (2c/pi = {:.9})",
        basis.len(),
        2.0 * c / std::f64::consts::PI
    );
    println!("wrote {} and {}", eigen_path.display(), funcs_path.display());
    Ok(())
}

fn cmd_dpss(args: &DpssArgs, out_dir: &Path) -> Result<(), Error> {
    let basis = compute_dpss(args.n, args.w)?;
    let mut eigen = String::from("k,lambda\n");
    for (k, l) in basis.eigenvalues().iter().enumerate() {
        eigen.push_str(&format!("{k},{l}\n"));
    }
    let v = basis.vectors();
    let mut vectors = String::from("index");
    for k in 0..v.ncols() {
        vectors.push_str(&format!(",s_{k}"));
    }
    vectors.push('\n');
    for i in 0..v.nrows() {
        vectors.push_str(&i.to_string());
        for k in 0..v.ncols() {
            vectors.push_str(&format!(",{}", v[(i, k)]));
        }
        vectors.push('\n');
    }
    let eigen_path = out_dir.join("dpss_eigen.csv");
    let vectors_path = out_dir.join("dpss_vectors.csv");
    write_atomic(&eigen_path, eigen.as_bytes())?;
    write_atomic(&vectors_path, vectors.as_bytes())?;
    println!(
        "n = {}, w = {}, admissible(eps = {}) = {}",
        args.n,
        args.w,
        args.eps,
        basis.admissible(args.eps)
    );
    println!("wrote {} and {}", eigen_path.display(), vectors_path.display());
    Ok(())
}

fn cmd_bound(args: &BoundArgs) -> Result<(), Error> {
    let support = Interval::new(args.a, args.b)?;
    let lbar = args.aperture / wavelength(args.carrier_hz);
    let snr = 10f64.powf(args.snr_db / 10.0);
    let nats = pswf_capacity_bound(support, args.gamma, lbar, snr)?;
    println!(
        "bound = {nats:.6} nats/s/Hz ({:.6} bits/s/Hz), normalized = {:.6}",
        nats_to_bits(nats),
        normalized(nats, snr)
    );
    Ok(())
}

fn cmd_run(args: &RunArgs, estimators: Option<Vec<String>>, capacity: bool, out_dir: &Path) -> Result<(), Error> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    if cfg.kind.is_capacity() != capacity {
        let want = if capacity { "simulate" } else { "estimate" };
        return Err(Error::Config(format!(
            "config kind '{}' cannot be run with '{want}'",
            cfg.kind.name()
        )));
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.trials = trials;
    }
    if let Some(list) = estimators {
        cfg.estimation.estimators = list;
    }
    cfg.validate()?;

    let table = run_experiment(&cfg)?;
    for line in table.summary_lines() {
        println!("{line}");
    }
    for path in write_outputs(&cfg, &table, out_dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
