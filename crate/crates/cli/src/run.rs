//! Executes a resolved [`RunConfig`] and writes its artifacts.

use std::fs;
use std::path::Path;

use bfc_walk_core::export;
use bfc_walk_core::{
    confinement_metrics, incoherent_jsi, moments, poisson_sample, profile_jsi,
    single_photon_distribution, sweep_depth_with, sweep_dimension_with, symmetrized_display,
    transfer_distribution, JsiMatrix, ModulatorConfig, SweepTable, TransferDistribution,
};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{config_error, Command, ConfigError, RunConfig};

/// Largest tolerated `|total probability - 1|`.
pub const RESIDUAL_LIMIT: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("{0}")]
    Model(#[from] bfc_walk_core::Error),

    #[error("normalization residual {residual:e} exceeds {RESIDUAL_LIMIT:e}; artifacts were written to {out_dir}")]
    Residual { residual: f64, out_dir: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) | RunError::Model(_) => 2,
            RunError::Residual { .. } => 3,
        }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    library_version: &'static str,
    cli_version: &'static str,
    config: &'a RunConfig,
    outputs: Vec<String>,
    diagnostics: Map<String, Value>,
}

struct Artifacts<'a> {
    dir: &'a Path,
    written: Vec<String>,
}

impl Artifacts<'_> {
    fn write(&mut self, name: &str, contents: &str) -> Result<(), ConfigError> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| {
            config_error("out_dir", format!("cannot write {}: {e}", path.display()))
        })?;
        self.written.push(name.to_string());
        Ok(())
    }
}

fn modulator(config: &RunConfig, delta: f64) -> ModulatorConfig {
    ModulatorConfig::new(delta).with_epsilon(config.epsilon_trunc)
}

fn jsi_diagnostics(jsi: &JsiMatrix, diag: &mut Map<String, Value>) {
    let metrics = confinement_metrics(jsi);
    let transfer = moments(&transfer_distribution(jsi));
    diag.insert("total_probability".into(), json!(jsi.total()));
    diag.insert(
        "window".into(),
        json!({
            "j_min": jsi.j_min, "j_max": jsi.j_max, "k_min": jsi.k_min, "k_max": jsi.k_max,
        }),
    );
    diag.insert("antidiag_mass".into(), json!(metrics.antidiag_mass));
    diag.insert("sigma_u".into(), json!(metrics.sigma_u));
    diag.insert("sigma_v".into(), json!(metrics.sigma_v));
    diag.insert("mean_u".into(), json!(transfer.mean));
}

fn write_jsi(
    out: &mut Artifacts,
    stem: &str,
    jsi: &JsiMatrix,
    pgm: bool,
) -> Result<(), ConfigError> {
    out.write(&format!("{stem}.csv"), &export::jsi_csv(jsi))?;
    if pgm {
        out.write(&format!("{stem}.pgm"), &export::jsi_pgm(jsi))?;
        out.write(
            &format!("{stem}_display.pgm"),
            &export::display_pgm(&symmetrized_display(jsi)),
        )?;
    }
    Ok(())
}

fn sweep_diagnostics(table: &SweepTable, diag: &mut Map<String, Value>) -> f64 {
    let residual = table
        .mass
        .iter()
        .map(|m| (m - 1.0).abs())
        .fold(0.0, f64::max);
    diag.insert("points".into(), json!(table.len()));
    diag.insert(
        "max_sigma".into(),
        json!(table.sigma.iter().copied().fold(0.0, f64::max)),
    );
    residual
}

/// Runs `config`, writing artifacts and `manifest.json` under `out_dir`.
/// Returns the list of files written.
pub fn run(config: &RunConfig) -> Result<Vec<String>, RunError> {
    config.validate()?;
    let dir = config.out_dir.as_path();
    fs::create_dir_all(dir)
        .map_err(|e| config_error("out_dir", format!("cannot create {}: {e}", dir.display())))?;
    let mut out = Artifacts {
        dir,
        written: Vec::new(),
    };
    let mut diag = Map::new();
    let profile = &config.profile;

    let residual = match config.command {
        Command::SingleWalk => {
            let cfg = modulator(config, config.delta);
            let dist = single_photon_distribution(&cfg)?;
            out.write("single_walk.csv", &export::single_photon_csv(&dist))?;
            let m = moments(&TransferDistribution::from(&dist));
            diag.insert("total_probability".into(), json!(dist.total()));
            diag.insert("window_half_width".into(), json!(dist.n_max));
            diag.insert("sigma".into(), json!(m.sigma));
            diag.insert(
                "sigma_reference".into(),
                json!(config.delta / std::f64::consts::SQRT_2),
            );
            (dist.total() - 1.0).abs()
        }
        Command::Jsi => {
            let jsi = profile_jsi(config.d, profile, &modulator(config, config.delta))?;
            write_jsi(&mut out, "jsi", &jsi, config.emit_pgm)?;
            jsi_diagnostics(&jsi, &mut diag);
            (jsi.total() - 1.0).abs()
        }
        Command::Incoherent => {
            let jsi = incoherent_jsi(config.d, &modulator(config, config.delta))?;
            write_jsi(&mut out, "incoherent", &jsi, config.emit_pgm)?;
            jsi_diagnostics(&jsi, &mut diag);
            (jsi.total() - 1.0).abs()
        }
        Command::Transfer => {
            let jsi = profile_jsi(config.d, profile, &modulator(config, config.delta))?;
            let dist = transfer_distribution(&jsi);
            out.write("transfer.csv", &export::transfer_csv(&dist))?;
            let m = moments(&dist);
            diag.insert("total_probability".into(), json!(dist.total()));
            diag.insert("mean_u".into(), json!(m.mean));
            diag.insert("sigma_u".into(), json!(m.sigma));
            diag.insert("p_zero".into(), json!(dist.get(0)));
            (dist.total() - 1.0).abs()
        }
        Command::SweepDepth => {
            let deltas = config.deltas.as_deref().unwrap_or_default();
            let table = sweep_depth_with(profile, config.d, deltas, config.epsilon_trunc)?;
            out.write("sweep_depth.csv", &export::sweep_csv(&table))?;
            sweep_diagnostics(&table, &mut diag)
        }
        Command::SweepDimension => {
            let dims = config.dims.as_deref().unwrap_or_default();
            let table = sweep_dimension_with(profile, config.delta, dims, config.epsilon_trunc)?;
            out.write("sweep_dimension.csv", &export::sweep_csv(&table))?;
            sweep_diagnostics(&table, &mut diag)
        }
        Command::Sample => {
            let jsi = profile_jsi(config.d, profile, &modulator(config, config.delta))?;
            let counts = config.counts.unwrap_or_default();
            let sample = poisson_sample(&jsi, counts, config.seed.unwrap_or_default())?;
            out.write("counts.csv", &export::counts_csv(&sample))?;
            if config.emit_pgm {
                out.write("counts.pgm", &export::counts_pgm(&sample))?;
            }
            diag.insert("total_counts".into(), json!(sample.total()));
            diag.insert("total_probability".into(), json!(jsi.total()));
            (jsi.total() - 1.0).abs()
        }
    };
    diag.insert("normalization_residual".into(), json!(residual));

    let mut outputs = out.written.clone();
    outputs.push("manifest.json".into());
    let manifest = Manifest {
        tool: "bfc-walk",
        library_version: bfc_walk_core::VERSION,
        cli_version: env!("CARGO_PKG_VERSION"),
        config,
        outputs: outputs.clone(),
        diagnostics: diag,
    };
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    out.write("manifest.json", &text)?;

    if residual > RESIDUAL_LIMIT {
        return Err(RunError::Residual {
            residual,
            out_dir: dir.display().to_string(),
        });
    }
    Ok(outputs)
}
