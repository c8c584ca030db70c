//! `bfc-walk`: reproduces frequency-domain quantum walks of entangled photon
//! pairs from the command line.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use bfc_walk_core::ProfileKind;
use config::{
    config_error, from_value, named_profile, parse_dims, parse_reals, Command, ConfigError,
    RunConfig,
};

const THREADS_ENV: &str = "BFC_WALK_THREADS";

#[derive(Parser)]
#[command(
    name = "bfc-walk",
    version,
    about = "Quantum walks of biphoton frequency combs under phase modulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Single-photon output distribution P_n = J_n(delta)^2
    SingleWalk(Opts),
    /// Joint spectral intensity of a coherent d-pair state
    Jsi(Opts),
    /// Joint spectral intensity of the incoherent mixture of pairs
    Incoherent(Opts),
    /// Net energy-transfer distribution P(u), u = j + k
    Transfer(Opts),
    /// Energy-transfer spread versus modulation depth
    SweepDepth(Opts),
    /// Energy-transfer spread versus entanglement dimension
    SweepDimension(Opts),
    /// Poisson-sampled coincidence counts
    Sample(Opts),
    /// Run whatever command a config or manifest file names
    Run(Opts),
}

#[derive(Args, Default)]
struct Opts {
    /// JSON run config, or a manifest.json from a previous run
    #[arg(long)]
    config: Option<PathBuf>,
    /// Entanglement dimension (number of pairs)
    #[arg(long)]
    d: Option<usize>,
    /// Modulation depth
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// bosonic | fermionic | anyonic | constant | linear | quadratic | custom
    #[arg(long)]
    profile: Option<String>,
    /// Constant phase offset (rad)
    #[arg(long, allow_hyphen_values = true)]
    theta0: Option<f64>,
    /// Linear phase slope (rad per mode)
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<f64>,
    /// Quadratic phase curvature (rad per mode^2)
    #[arg(long, allow_hyphen_values = true)]
    curv: Option<f64>,
    /// Comma-separated per-pair phases for a custom profile
    #[arg(long, allow_hyphen_values = true)]
    thetas: Option<String>,
    /// Depths for sweep-depth: start:step:end and/or comma list
    #[arg(long)]
    deltas: Option<String>,
    /// Dimensions for sweep-dimension: start:step:end and/or comma list
    #[arg(long)]
    dims: Option<String>,
    /// Expected total counts for sample
    #[arg(long)]
    counts: Option<f64>,
    /// Random seed for sample
    #[arg(long)]
    seed: Option<u64>,
    /// Truncation tolerance for the scattering window
    #[arg(long)]
    epsilon: Option<f64>,
    /// Output directory
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Write PGM heatmaps (default)
    #[arg(long, conflicts_with = "no_pgm")]
    pgm: bool,
    /// Skip PGM heatmaps
    #[arg(long)]
    no_pgm: bool,
}

fn resolve(command: Option<Command>, opts: &Opts) -> Result<RunConfig, ConfigError> {
    let mut value = match &opts.config {
        Some(path) => config::load(path)?,
        None => Value::Object(Default::default()),
    };
    if let Some(cmd) = command {
        value["command"] = serde_json::to_value(cmd).expect("command serializes");
    } else if value.get("command").is_none() {
        return Err(config_error(
            "command",
            "`run` needs a config file that names a command",
        ));
    }
    let mut cfg = from_value(value)?;
    apply(&mut cfg, opts)?;
    cfg.validate()?;
    Ok(cfg)
}

fn apply(cfg: &mut RunConfig, opts: &Opts) -> Result<(), ConfigError> {
    if let Some(d) = opts.d {
        cfg.d = d;
    }
    if let Some(delta) = opts.delta {
        cfg.delta = delta;
    }
    let named = opts.profile.is_some();
    if let Some(name) = &opts.profile {
        cfg.profile = named_profile(name)?;
    }
    let p = &mut cfg.profile;
    if let Some(v) = opts.theta0 {
        p.theta0 = v;
    }
    if let Some(v) = opts.slope {
        p.slope_a = v;
    }
    if let Some(v) = opts.curv {
        p.curv_b = v;
    }
    if let Some(text) = &opts.thetas {
        p.custom_thetas = Some(parse_reals("thetas", text)?);
        p.kind = ProfileKind::Custom;
    }
    if !named && p.kind != ProfileKind::Custom {
        if p.curv_b != 0.0 {
            p.kind = ProfileKind::Quadratic;
        } else if p.slope_a != 0.0 && p.kind == ProfileKind::Constant {
            p.kind = ProfileKind::Linear;
        }
    }
    if let Some(text) = &opts.deltas {
        cfg.deltas = Some(parse_reals("deltas", text)?);
    }
    if let Some(text) = &opts.dims {
        cfg.dims = Some(parse_dims("dims", text)?);
    }
    if let Some(v) = opts.counts {
        cfg.counts = Some(v);
    }
    if let Some(v) = opts.seed {
        cfg.seed = Some(v);
    }
    if let Some(v) = opts.epsilon {
        cfg.epsilon_trunc = v;
    }
    if let Some(dir) = &opts.out_dir {
        cfg.out_dir = dir.clone();
    }
    if opts.no_pgm {
        cfg.emit_pgm = false;
    } else if opts.pgm {
        cfg.emit_pgm = true;
    }
    Ok(())
}

fn configure_threads() -> Result<(), ConfigError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        config_error(
            THREADS_ENV,
            format!("`{raw}` is not a non-negative integer"),
        )
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| config_error(THREADS_ENV, e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, opts) = match &cli.command {
        Cmd::SingleWalk(o) => (Some(Command::SingleWalk), o),
        Cmd::Jsi(o) => (Some(Command::Jsi), o),
        Cmd::Incoherent(o) => (Some(Command::Incoherent), o),
        Cmd::Transfer(o) => (Some(Command::Transfer), o),
        Cmd::SweepDepth(o) => (Some(Command::SweepDepth), o),
        Cmd::SweepDimension(o) => (Some(Command::SweepDimension), o),
        Cmd::Sample(o) => (Some(Command::Sample), o),
        Cmd::Run(o) => (None, o),
    };
    let result = configure_threads()
        .and_then(|()| resolve(command, opts))
        .map_err(run::RunError::from)
        .and_then(|cfg| run::run(&cfg));
    match result {
        Ok(files) => {
            for f in files {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("bfc-walk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
