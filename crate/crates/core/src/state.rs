//! Biphoton frequency-comb input states and the spectral phase applied to
//! them before the walk.
//!
//! Mode indices are absolute: the signal photon of pair `m` sits at `+m`, the
//! idler at `-m`, and index 0 is never occupied. `m` runs over `1..=d`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Comb line spacing used throughout the experiments, in Hz.
pub const DEFAULT_FSR_HZ: f64 = 25e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Constant,
    Linear,
    Quadratic,
    Custom,
}

/// Per-pair phase `theta_m = theta0 + slope_a * m + curv_b * m^2`, or an
/// explicit list of `d` phases for [`ProfileKind::Custom`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPhaseProfile {
    pub kind: ProfileKind,
    #[serde(default)]
    pub theta0: f64,
    #[serde(default)]
    pub slope_a: f64,
    #[serde(default)]
    pub curv_b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_thetas: Option<Vec<f64>>,
}

/// A phase both as accumulated and reduced to `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase {
    pub raw: f64,
    pub canonical: f64,
}

/// Reduces an angle to `(-pi, pi]`. Values within rounding of `-pi` map to `pi`.
pub fn canonical_phase(raw: f64) -> f64 {
    let turns = (raw / TAU).round();
    let r = raw - TAU * turns;
    let slack = 8.0 * f64::EPSILON * raw.abs().max(1.0);
    if (r.abs() - PI).abs() <= slack {
        PI
    } else {
        r
    }
}

impl SpectralPhaseProfile {
    fn coefficients(kind: ProfileKind, theta0: f64, slope_a: f64, curv_b: f64) -> Self {
        SpectralPhaseProfile {
            kind,
            theta0,
            slope_a,
            curv_b,
            custom_thetas: None,
        }
    }

    /// `theta_m = 0`.
    pub fn bosonic() -> Self {
        Self::coefficients(ProfileKind::Constant, 0.0, 0.0, 0.0)
    }

    /// `theta_m = m pi`: adjacent pairs carry a relative pi phase.
    pub fn fermionic() -> Self {
        Self::coefficients(ProfileKind::Linear, 0.0, PI, 0.0)
    }

    /// `theta_m = m pi / 2`.
    pub fn anyonic() -> Self {
        Self::coefficients(ProfileKind::Linear, 0.0, FRAC_PI_2, 0.0)
    }

    pub fn constant(theta0: f64) -> Self {
        Self::coefficients(ProfileKind::Constant, theta0, 0.0, 0.0)
    }

    pub fn linear(theta0: f64, slope_a: f64) -> Self {
        Self::coefficients(ProfileKind::Linear, theta0, slope_a, 0.0)
    }

    pub fn quadratic(theta0: f64, slope_a: f64, curv_b: f64) -> Self {
        Self::coefficients(ProfileKind::Quadratic, theta0, slope_a, curv_b)
    }

    pub fn custom(thetas: Vec<f64>) -> Self {
        SpectralPhaseProfile {
            kind: ProfileKind::Custom,
            theta0: 0.0,
            slope_a: 0.0,
            curv_b: 0.0,
            custom_thetas: Some(thetas),
        }
    }

    /// Phase of pair `m` with the constant `theta0` left out. This is what
    /// the amplitudes carry; `theta0` is kept as a separate global phase.
    fn relative_raw(&self, m: i64) -> Result<f64> {
        match self.kind {
            ProfileKind::Custom => {
                let thetas = self
                    .custom_thetas
                    .as_deref()
                    .ok_or_else(|| domain("custom profile has no custom_thetas"))?;
                if m < 1 || m as usize > thetas.len() {
                    return Err(domain(format!(
                        "mode {m} outside 1..={} of the custom profile",
                        thetas.len()
                    )));
                }
                Ok(thetas[m as usize - 1])
            }
            _ => {
                let mf = m as f64;
                Ok(self.slope_a * mf + self.curv_b * mf * mf)
            }
        }
    }

    fn global_phase(&self) -> f64 {
        match self.kind {
            ProfileKind::Custom => 0.0,
            _ => self.theta0,
        }
    }

    /// `theta_m`, raw and reduced.
    pub fn eval_phase(&self, m: i64) -> Result<Phase> {
        let raw = self.global_phase() + self.relative_raw(m)?;
        Ok(Phase {
            raw,
            canonical: canonical_phase(raw),
        })
    }

    /// Short human-readable form, used in matrix metadata.
    pub fn describe(&self) -> String {
        let mut s = match self.kind {
            ProfileKind::Custom => {
                let n = self.custom_thetas.as_ref().map_or(0, Vec::len);
                return format!("custom[{n}]");
            }
            ProfileKind::Constant => "constant".to_string(),
            ProfileKind::Linear => "linear".to_string(),
            ProfileKind::Quadratic => "quadratic".to_string(),
        };
        s.push_str(&format!(
            "(theta0={}, a={}, b={})",
            self.theta0, self.slope_a, self.curv_b
        ));
        s
    }

    fn validate_for(&self, d: usize) -> Result<()> {
        if let ProfileKind::Custom = self.kind {
            let len = self.custom_thetas.as_ref().map_or(0, Vec::len);
            if len != d {
                return Err(domain(format!(
                    "custom profile has {len} phases, expected {d}"
                )));
            }
            if self.custom_thetas.iter().flatten().any(|t| !t.is_finite()) {
                return Err(domain("custom phases must be finite"));
            }
        } else if ![self.theta0, self.slope_a, self.curv_b]
            .iter()
            .all(|c| c.is_finite())
        {
            return Err(domain("phase coefficients must be finite"));
        }
        Ok(())
    }
}

/// Two-photon frequency-bin state `sum_m c_m |m, -m>`.
///
/// `amplitudes[m - 1]` holds `c_m` up to the common factor
/// `exp(i * global_phase)`, which cannot affect any detection probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BfcState {
    pub d: usize,
    pub amplitudes: Vec<Complex64>,
    #[serde(default)]
    pub global_phase: f64,
    #[serde(default = "default_fsr")]
    pub fsr_hz: f64,
}

fn default_fsr() -> f64 {
    DEFAULT_FSR_HZ
}

const NORM_TOLERANCE: f64 = 1e-12;

impl BfcState {
    /// State from explicit pair amplitudes. They may be non-uniform but must
    /// be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = BfcState {
            d: amplitudes.len(),
            amplitudes,
            global_phase: 0.0,
            fsr_hz: DEFAULT_FSR_HZ,
        };
        state.validate()?;
        Ok(state)
    }

    /// Only the pair `|m, -m>` populated, inside a `d`-pair comb.
    pub fn single_pair(d: usize, m: usize) -> Result<Self> {
        if m < 1 || m > d {
            return Err(domain(format!("pair index {m} outside 1..={d}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); d];
        amplitudes[m - 1] = Complex64::new(1.0, 0.0);
        Self::from_amplitudes(amplitudes)
    }

    pub fn with_fsr(mut self, fsr_hz: f64) -> Self {
        self.fsr_hz = fsr_hz;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 1 {
            return Err(domain("state dimension must be >= 1"));
        }
        if self.amplitudes.len() != self.d {
            return Err(domain(format!(
                "state has {} amplitudes for d = {}",
                self.amplitudes.len(),
                self.d
            )));
        }
        if !(self.fsr_hz.is_finite() && self.fsr_hz > 0.0) {
            return Err(domain("fsr_hz must be positive"));
        }
        let norm = self.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(domain(format!("state norm {norm} is not 1")));
        }
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `c_m` including the global phase.
    pub fn coefficient(&self, m: usize) -> Complex64 {
        self.amplitudes[m - 1] * Complex64::from_polar(1.0, self.global_phase)
    }
}

/// `c_m = exp(i theta_m) / sqrt(d)` for `m = 1..=d`.
pub fn make_maximal_state(d: usize, profile: &SpectralPhaseProfile) -> Result<BfcState> {
    if d < 1 {
        return Err(domain("entanglement dimension d must be >= 1"));
    }
    profile.validate_for(d)?;
    let norm = 1.0 / (d as f64).sqrt();
    let amplitudes = (1..=d as i64)
        .map(|m| {
            let theta = canonical_phase(profile.relative_raw(m)?);
            Ok(if theta == 0.0 {
                Complex64::new(norm, 0.0)
            } else {
                Complex64::from_polar(norm, theta)
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BfcState {
        d,
        amplitudes,
        global_phase: profile.global_phase(),
        fsr_hz: DEFAULT_FSR_HZ,
    })
}
