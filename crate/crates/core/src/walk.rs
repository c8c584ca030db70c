//! The phase modulator as a scattering operator on frequency modes.
//!
//! A photon in mode `m` leaves in mode `m + n` with amplitude `J_n(delta)`.
//! For a pair state `sum_m c_m |m, -m>` the coincidence probability between
//! signal mode `j` and idler mode `k` is
//!
//! ```text
//! C[j, k] = | sum_m c_m J_{j-m}(delta) J_{k+m}(delta) |^2
//! ```
//!
//! The `i^n` factors of the modulator expansion contribute `i^{j+k}` to every
//! term of a given cell and drop out of `C`, so they are not carried here.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::{self, bessel_row, truncation_order, BesselRow, DEFAULT_TRUNCATION};
use crate::error::{domain, Error, Result};
use crate::state::{make_maximal_state, BfcState, SpectralPhaseProfile, DEFAULT_FSR_HZ};

/// Drive settings of the phase modulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulatorConfig {
    /// Modulation depth.
    pub delta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon_trunc: f64,
    #[serde(default = "default_mod_freq")]
    pub mod_freq_hz: f64,
}

fn default_epsilon() -> f64 {
    DEFAULT_TRUNCATION
}

fn default_mod_freq() -> f64 {
    DEFAULT_FSR_HZ
}

impl ModulatorConfig {
    pub fn new(delta: f64) -> Self {
        ModulatorConfig {
            delta,
            epsilon_trunc: DEFAULT_TRUNCATION,
            mod_freq_hz: DEFAULT_FSR_HZ,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon_trunc = epsilon;
        self
    }

    pub fn with_mod_freq(mut self, hz: f64) -> Self {
        self.mod_freq_hz = hz;
        self
    }

    pub fn validate(&self) -> Result<()> {
        bessel::check_depth(self.delta)?;
        if !(self.epsilon_trunc > 0.0 && self.epsilon_trunc < 1.0) {
            return Err(domain(format!(
                "epsilon_trunc must lie in (0, 1), got {}",
                self.epsilon_trunc
            )));
        }
        if !(self.mod_freq_hz.is_finite() && self.mod_freq_hz > 0.0) {
            return Err(domain("mod_freq_hz must be positive"));
        }
        Ok(())
    }

    /// Half-width `N` of the scattering window.
    pub fn window(&self) -> usize {
        truncation_order(self.delta, self.epsilon_trunc)
    }

    fn check_resonance(&self, fsr_hz: f64) -> Result<()> {
        if (self.mod_freq_hz - fsr_hz).abs() > 1e-9 * fsr_hz.abs() {
            return Err(Error::Resonance {
                modulator_hz: self.mod_freq_hz,
                fsr_hz,
            });
        }
        Ok(())
    }
}

/// `P_n = J_n(delta)^2` for a single photon, `n` in `[-N, N]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SinglePhotonDistribution {
    pub n_min: i64,
    pub n_max: i64,
    pub probs: Vec<f64>,
}

impl SinglePhotonDistribution {
    pub fn get(&self, n: i64) -> f64 {
        if n < self.n_min || n > self.n_max {
            0.0
        } else {
            self.probs[(n - self.n_min) as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

pub fn single_photon_distribution(config: &ModulatorConfig) -> Result<SinglePhotonDistribution> {
    config.validate()?;
    let n = config.window() as i64;
    let row = bessel_row(config.delta, -n, n)?;
    Ok(SinglePhotonDistribution {
        n_min: -n,
        n_max: n,
        probs: row.values.iter().map(|v| v * v).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsiMeta {
    pub d: usize,
    pub delta: f64,
    pub profile: String,
}

/// Coincidence probabilities `C[j, k]` on a rectangular window, stored row-major
/// with signal mode `j` indexing rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsiMatrix {
    pub j_min: i64,
    pub j_max: i64,
    pub k_min: i64,
    pub k_max: i64,
    pub values: Vec<f64>,
    pub meta: JsiMeta,
}

impl JsiMatrix {
    pub fn rows(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    pub fn cols(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    /// `C[j, k]`, zero outside the window.
    #[inline]
    pub fn get(&self, j: i64, k: i64) -> f64 {
        if j < self.j_min || j > self.j_max || k < self.k_min || k > self.k_max {
            return 0.0;
        }
        self.values[(j - self.j_min) as usize * self.cols() + (k - self.k_min) as usize]
    }

    /// `(j, k, C[j, k])` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64, f64)> + '_ {
        let cols = self.cols();
        self.values.iter().enumerate().map(move |(i, &c)| {
            (
                self.j_min + (i / cols) as i64,
                self.k_min + (i % cols) as i64,
                c,
            )
        })
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max_entry(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn with_profile(mut self, description: impl Into<String>) -> Self {
        self.meta.profile = description.into();
        self
    }
}

struct Window {
    n: i64,
    d: i64,
}

impl Window {
    fn new(d: usize, config: &ModulatorConfig) -> Self {
        Window {
            n: config.window() as i64,
            d: d as i64,
        }
    }

    fn j_range(&self) -> (i64, i64) {
        (1 - self.n, self.d + self.n)
    }

    fn k_range(&self) -> (i64, i64) {
        (-self.d - self.n, self.n - 1)
    }

    /// Bessel orders reached by `j - m` and `k + m` over the window.
    fn bessel(&self, delta: f64) -> Result<BesselRow> {
        let reach = self.d + self.n - 1;
        bessel_row(delta, -reach, reach)
    }

    fn fill(&self, meta: JsiMeta, cell: impl Fn(i64, i64) -> f64 + Sync) -> JsiMatrix {
        let (j_min, j_max) = self.j_range();
        let (k_min, k_max) = self.k_range();
        let cols = (k_max - k_min + 1) as usize;
        let rows = (j_max - j_min + 1) as usize;
        let mut values = vec![0.0; rows * cols];
        // cells are independent, so the split does not change any value
        values
            .par_chunks_mut(cols)
            .enumerate()
            .for_each(|(r, row)| {
                let j = j_min + r as i64;
                for (c, slot) in row.iter_mut().enumerate() {
                    *slot = cell(j, k_min + c as i64);
                }
            });
        JsiMatrix {
            j_min,
            j_max,
            k_min,
            k_max,
            values,
            meta,
        }
    }
}

/// Joint spectral intensity of `state` after the modulator.
pub fn biphoton_jsi(state: &BfcState, config: &ModulatorConfig) -> Result<JsiMatrix> {
    state.validate()?;
    config.validate()?;
    config.check_resonance(state.fsr_hz)?;
    let window = Window::new(state.d, config);
    let row = window.bessel(config.delta)?;
    let amps = &state.amplitudes;
    let meta = JsiMeta {
        d: state.d,
        delta: config.delta,
        profile: "explicit amplitudes".into(),
    };
    Ok(window.fill(meta, |j, k| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in amps.iter().enumerate() {
            let m = i as i64 + 1;
            acc += c * (row.get(j - m) * row.get(k + m));
        }
        acc.norm_sqr()
    }))
}

/// [`biphoton_jsi`] of the maximally entangled `d`-pair state with `profile`.
pub fn profile_jsi(
    d: usize,
    profile: &SpectralPhaseProfile,
    config: &ModulatorConfig,
) -> Result<JsiMatrix> {
    let state = make_maximal_state(d, profile)?.with_fsr(config.mod_freq_hz);
    Ok(biphoton_jsi(&state, config)?.with_profile(profile.describe()))
}

/// Antidiagonal cell `C[j, -j]` of the fermionic walk, where the relative
/// phases cancel: `(1/d) (sum_m J_{j-m}^2)^2`.
pub fn fermionic_antidiagonal_closed_form(
    d: usize,
    config: &ModulatorConfig,
    j: i64,
) -> Result<f64> {
    if d < 1 {
        return Err(domain("entanglement dimension d must be >= 1"));
    }
    config.validate()?;
    let d = d as i64;
    let row = bessel_row(config.delta, j - d, j - 1)?;
    let s: f64 = (1..=d).map(|m| row.get(j - m).powi(2)).sum();
    Ok(s * s / d as f64)
}

/// Incoherent mixture of the `d` pairs `|m, -m>`: probabilities are averaged,
/// amplitudes never interfere.
pub fn incoherent_jsi(d: usize, config: &ModulatorConfig) -> Result<JsiMatrix> {
    if d < 1 {
        return Err(domain("entanglement dimension d must be >= 1"));
    }
    config.validate()?;
    let window = Window::new(d, config);
    let row = window.bessel(config.delta)?;
    let weight = 1.0 / d as f64;
    let meta = JsiMeta {
        d,
        delta: config.delta,
        profile: "incoherent".into(),
    };
    Ok(window.fill(meta, |j, k| {
        let mut acc = 0.0;
        for m in 1..=d as i64 {
            let a = row.get(j - m) * row.get(k + m);
            acc += a * a;
        }
        weight * acc
    }))
}

/// Square matrix over the symmetric mode axis `[-L, L]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayMatrix {
    pub axis_min: i64,
    pub axis_max: i64,
    pub values: Vec<f64>,
}

impl DisplayMatrix {
    pub fn size(&self) -> usize {
        (self.axis_max - self.axis_min + 1) as usize
    }

    pub fn get(&self, a: i64, b: i64) -> f64 {
        let n = self.size();
        self.values[(a - self.axis_min) as usize * n + (b - self.axis_min) as usize]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// `D[a, b] = C[a, b] + C[b, a]`: a coincidence between two detectors does
/// not tell which photon was the signal. Sums to twice the JSI total.
pub fn symmetrized_display(jsi: &JsiMatrix) -> DisplayMatrix {
    let half = [jsi.j_min, jsi.j_max, jsi.k_min, jsi.k_max]
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or(0);
    let n = (2 * half + 1) as usize;
    let mut values = vec![0.0; n * n];
    for (r, row) in values.chunks_mut(n).enumerate() {
        let a = r as i64 - half;
        for (c, slot) in row.iter_mut().enumerate() {
            let b = c as i64 - half;
            *slot = jsi.get(a, b) + jsi.get(b, a);
        }
    }
    DisplayMatrix {
        axis_min: -half,
        axis_max: half,
        values,
    }
}
