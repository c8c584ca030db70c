//! Run configuration: JSON file, command-line overrides and validation.

use std::path::{Path, PathBuf};

use bfc_walk_core::bessel::{DEFAULT_TRUNCATION, MAX_DEPTH};
use bfc_walk_core::{ProfileKind, SpectralPhaseProfile};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
#[error("invalid config: field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

pub fn config_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SingleWalk,
    Jsi,
    Incoherent,
    Transfer,
    SweepDepth,
    SweepDimension,
    Sample,
}

fn default_d() -> usize {
    8
}

fn default_epsilon() -> f64 {
    DEFAULT_TRUNCATION
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_true() -> bool {
    true
}

/// Fully resolved run description. This is also the `config` object of every
/// manifest, so a manifest can be fed back in with `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "SpectralPhaseProfile::bosonic")]
    pub profile: SpectralPhaseProfile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deltas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_epsilon")]
    pub epsilon_trunc: f64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_true")]
    pub emit_pgm: bool,
}

impl RunConfig {
    #[cfg(test)]
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            d: default_d(),
            delta: 0.0,
            profile: SpectralPhaseProfile::bosonic(),
            deltas: None,
            dims: None,
            counts: None,
            seed: None,
            epsilon_trunc: default_epsilon(),
            out_dir: default_out_dir(),
            emit_pgm: true,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.d < 1 {
            return Err(config_error("d", "must be >= 1"));
        }
        check_depth("delta", self.delta)?;
        if !(self.epsilon_trunc > 0.0 && self.epsilon_trunc < 1.0) {
            return Err(config_error("epsilon_trunc", "must lie in (0, 1)"));
        }
        check_profile(&self.profile, self.d)?;
        match self.command {
            Command::SweepDepth => {
                let deltas = self
                    .deltas
                    .as_ref()
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| config_error("deltas", "required for sweep-depth"))?;
                for &x in deltas {
                    check_depth("deltas", x)?;
                }
            }
            Command::SweepDimension => {
                let dims = self
                    .dims
                    .as_ref()
                    .filter(|v| !v.is_empty())
                    .ok_or_else(|| config_error("dims", "required for sweep-dimension"))?;
                if dims.contains(&0) {
                    return Err(config_error("dims", "every dimension must be >= 1"));
                }
                if self.profile.kind == ProfileKind::Custom {
                    return Err(config_error(
                        "profile",
                        "custom phases cannot be swept over d",
                    ));
                }
            }
            Command::Sample => {
                let counts = self
                    .counts
                    .ok_or_else(|| config_error("counts", "required for sample"))?;
                if !(counts.is_finite() && counts > 0.0) {
                    return Err(config_error("counts", "must be a positive number"));
                }
                if self.seed.is_none() {
                    return Err(config_error("seed", "required for sample"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn check_depth(field: &str, x: f64) -> Result<(), ConfigError> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(config_error(
            field,
            format!("depth {x} must be finite and >= 0"),
        ));
    }
    if x > MAX_DEPTH {
        return Err(config_error(
            field,
            format!("depth {x} exceeds {MAX_DEPTH}"),
        ));
    }
    Ok(())
}

fn check_profile(p: &SpectralPhaseProfile, d: usize) -> Result<(), ConfigError> {
    if p.kind == ProfileKind::Custom {
        match &p.custom_thetas {
            None => {
                return Err(config_error(
                    "profile.custom_thetas",
                    "required for custom profiles",
                ))
            }
            Some(t) if t.len() != d => {
                return Err(config_error(
                    "profile.custom_thetas",
                    format!("has {} phases but d = {d}", t.len()),
                ))
            }
            Some(t) if t.iter().any(|x| !x.is_finite()) => {
                return Err(config_error(
                    "profile.custom_thetas",
                    "phases must be finite",
                ))
            }
            _ => {}
        }
    }
    for (name, v) in [
        ("profile.theta0", p.theta0),
        ("profile.slope_a", p.slope_a),
        ("profile.curv_b", p.curv_b),
    ] {
        if !v.is_finite() {
            return Err(config_error(name, "must be finite"));
        }
    }
    Ok(())
}

/// Reads a run config, or the `config` object of a manifest.
pub fn load(path: &Path) -> Result<serde_json::Value, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_error("config", format!("cannot read {}: {e}", path.display())))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| config_error("config", format!("{}: {e}", path.display())))?;
    if let Some(inner) = value.get_mut("config") {
        value = inner.take();
    }
    if !value.is_object() {
        return Err(config_error("config", "expected a JSON object"));
    }
    Ok(value)
}

/// Deserializes a config object, reporting the offending field on failure.
pub fn from_value(value: serde_json::Value) -> Result<RunConfig, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let message = e.inner().to_string();
        let field = if path != "." {
            path
        } else {
            // unknown or missing keys are reported at the parent path
            message.split('`').nth(1).unwrap_or("config").to_string()
        };
        ConfigError { field, message }
    })
}

/// Parses `start:step:end` ranges and comma lists (mixable), e.g. `0:0.5:6`
/// or `1,2,4.6`.
pub fn parse_reals(field: &str, text: &str) -> Result<Vec<f64>, ConfigError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| config_error(field, format!("`{s}` is not a number")))
        };
        match parts.as_slice() {
            [x] => out.push(num(x)?),
            [start, step, end] => {
                let (start, step, end) = (num(start)?, num(step)?, num(end)?);
                if !(step > 0.0 && step.is_finite()) || end < start {
                    return Err(config_error(field, format!("bad range `{item}`")));
                }
                let count = ((end - start) / step + 1e-9).floor() as usize + 1;
                out.extend((0..count).map(|i| start + step * i as f64));
            }
            _ => {
                return Err(config_error(
                    field,
                    format!("expected start:step:end, got `{item}`"),
                ))
            }
        }
    }
    if out.is_empty() {
        return Err(config_error(field, "no values given"));
    }
    Ok(out)
}

pub fn parse_dims(field: &str, text: &str) -> Result<Vec<usize>, ConfigError> {
    parse_reals(field, text)?
        .into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 && x < 1e6 {
                Ok(x as usize)
            } else {
                Err(config_error(field, format!("{x} is not a whole number")))
            }
        })
        .collect()
}

pub fn named_profile(name: &str) -> Result<SpectralPhaseProfile, ConfigError> {
    Ok(match name {
        "bosonic" => SpectralPhaseProfile::bosonic(),
        "fermionic" => SpectralPhaseProfile::fermionic(),
        "anyonic" => SpectralPhaseProfile::anyonic(),
        "constant" => SpectralPhaseProfile::constant(0.0),
        "linear" => SpectralPhaseProfile::linear(0.0, 0.0),
        "quadratic" => SpectralPhaseProfile::quadratic(0.0, 0.0, 0.0),
        "custom" => SpectralPhaseProfile::custom(Vec::new()),
        other => {
            return Err(config_error(
                "profile",
                format!("unknown profile `{other}` (bosonic, fermionic, anyonic, constant, linear, quadratic, custom)"),
            ))
        }
    })
}
