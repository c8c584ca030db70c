//! Transport statistics of a walk: net energy transfer `u = j + k`, its
//! moments, confinement to the antidiagonal, parameter sweeps and Poisson
//! count sampling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bessel::DEFAULT_TRUNCATION;
use crate::error::{domain, Result};
use crate::state::SpectralPhaseProfile;
use crate::walk::{profile_jsi, JsiMatrix, ModulatorConfig, SinglePhotonDistribution};

/// Energy of one mode shift at 25 GHz, in joules.
pub const H_NU_JOULES: f64 = 1.656e-23;

/// `P(u)` over consecutive integer shifts `u_min ..= u_max` (units of `h nu`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferDistribution {
    pub u_min: i64,
    pub u_max: i64,
    pub probs: Vec<f64>,
}

impl TransferDistribution {
    pub fn get(&self, u: i64) -> f64 {
        if u < self.u_min || u > self.u_max {
            0.0
        } else {
            self.probs[(u - self.u_min) as usize]
        }
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

impl From<&SinglePhotonDistribution> for TransferDistribution {
    fn from(p: &SinglePhotonDistribution) -> Self {
        TransferDistribution {
            u_min: p.n_min,
            u_max: p.n_max,
            probs: p.probs.clone(),
        }
    }
}

/// Re-bins `C[j, k]` by `u = j + k`.
pub fn transfer_distribution(jsi: &JsiMatrix) -> TransferDistribution {
    let u_min = jsi.j_min + jsi.k_min;
    let u_max = jsi.j_max + jsi.k_max;
    let mut probs = vec![0.0; (u_max - u_min + 1) as usize];
    for (j, k, c) in jsi.cells() {
        probs[(j + k - u_min) as usize] += c;
    }
    TransferDistribution {
        u_min,
        u_max,
        probs,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sigma: f64,
}

fn integer_moments(weights: impl Iterator<Item = (f64, f64)>) -> Moments {
    let (mut m1, mut m2) = (0.0, 0.0);
    for (x, p) in weights {
        m1 += x * p;
        m2 += x * x * p;
    }
    Moments {
        mean: m1,
        sigma: (m2 - m1 * m1).max(0.0).sqrt(),
    }
}

pub fn moments(dist: &TransferDistribution) -> Moments {
    // pair u with -u so a symmetric distribution has an exactly zero mean
    let mean = {
        let mut acc = 0.0;
        let top = dist.u_max.max(-dist.u_min);
        for u in 1..=top {
            acc += u as f64 * (dist.get(u) - dist.get(-u));
        }
        acc
    };
    let second: f64 = (dist.u_min..=dist.u_max)
        .map(|u| (u * u) as f64 * dist.get(u))
        .sum();
    Moments {
        mean,
        sigma: (second - mean * mean).max(0.0).sqrt(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfinementMetrics {
    /// Probability of zero net energy transfer, `sum_{j+k=0} C[j, k]`.
    pub antidiag_mass: f64,
    /// Spread of `u = j + k`.
    pub sigma_u: f64,
    /// Spread of `v = j - k`.
    pub sigma_v: f64,
}

pub fn confinement_metrics(jsi: &JsiMatrix) -> ConfinementMetrics {
    let antidiag_mass = jsi
        .cells()
        .filter(|&(j, k, _)| j + k == 0)
        .map(|c| c.2)
        .sum();
    let sigma_u = moments(&transfer_distribution(jsi)).sigma;
    let sigma_v = integer_moments(jsi.cells().map(|(j, k, c)| ((j - k) as f64, c))).sigma;
    ConfinementMetrics {
        antidiag_mass,
        sigma_u,
        sigma_v,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Delta,
    Dimension,
}

impl SweepAxis {
    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Delta => "delta",
            SweepAxis::Dimension => "d",
        }
    }
}

/// Mean and spread of the energy transfer along one parameter axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub mean: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Captured probability per point, for normalization checks.
    #[serde(default)]
    pub mass: Vec<f64>,
    /// `delta / sqrt(2)` per point; depth sweeps only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub single_photon_sigma: Option<Vec<f64>>,
}

impl SweepTable {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn transfer_moments(
    d: usize,
    profile: &SpectralPhaseProfile,
    delta: f64,
    epsilon: f64,
) -> Result<(Moments, f64)> {
    let jsi = profile_jsi(
        d,
        profile,
        &ModulatorConfig::new(delta).with_epsilon(epsilon),
    )?;
    let dist = transfer_distribution(&jsi);
    Ok((moments(&dist), dist.total()))
}

fn collect(axis: SweepAxis, values: Vec<f64>, points: Vec<(Moments, f64)>) -> SweepTable {
    SweepTable {
        axis,
        values,
        mean: points.iter().map(|p| p.0.mean).collect(),
        sigma: points.iter().map(|p| p.0.sigma).collect(),
        mass: points.iter().map(|p| p.1).collect(),
        single_photon_sigma: None,
    }
}

/// Transfer statistics of the `d`-pair state at each modulation depth.
pub fn sweep_depth(profile: &SpectralPhaseProfile, d: usize, deltas: &[f64]) -> Result<SweepTable> {
    sweep_depth_with(profile, d, deltas, DEFAULT_TRUNCATION)
}

/// [`sweep_depth`] with an explicit truncation tolerance.
pub fn sweep_depth_with(
    profile: &SpectralPhaseProfile,
    d: usize,
    deltas: &[f64],
    epsilon: f64,
) -> Result<SweepTable> {
    if let Some(bad) = deltas.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
        return Err(domain(format!(
            "sweep depth {bad} is not a finite non-negative number"
        )));
    }
    let points = deltas
        .par_iter()
        .map(|&delta| transfer_moments(d, profile, delta, epsilon))
        .collect::<Result<Vec<_>>>()?;
    let mut table = collect(SweepAxis::Delta, deltas.to_vec(), points);
    table.single_photon_sigma = Some(
        deltas
            .iter()
            .map(|x| x / std::f64::consts::SQRT_2)
            .collect(),
    );
    Ok(table)
}

/// Transfer statistics at fixed depth for each entanglement dimension.
pub fn sweep_dimension(
    profile: &SpectralPhaseProfile,
    delta: f64,
    dims: &[usize],
) -> Result<SweepTable> {
    sweep_dimension_with(profile, delta, dims, DEFAULT_TRUNCATION)
}

pub fn sweep_dimension_with(
    profile: &SpectralPhaseProfile,
    delta: f64,
    dims: &[usize],
    epsilon: f64,
) -> Result<SweepTable> {
    if dims.contains(&0) {
        return Err(domain("sweep dimensions must be >= 1"));
    }
    let points = dims
        .par_iter()
        .map(|&d| transfer_moments(d, profile, delta, epsilon))
        .collect::<Result<Vec<_>>>()?;
    Ok(collect(
        SweepAxis::Dimension,
        dims.iter().map(|&d| d as f64).collect(),
        points,
    ))
}

/// Integer coincidence counts on the window of a [`JsiMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountMatrix {
    pub j_min: i64,
    pub j_max: i64,
    pub k_min: i64,
    pub k_max: i64,
    pub counts: Vec<u64>,
}

impl CountMatrix {
    pub fn cols(&self) -> usize {
        (self.k_max - self.k_min + 1) as usize
    }

    pub fn get(&self, j: i64, k: i64) -> u64 {
        if j < self.j_min || j > self.j_max || k < self.k_min || k > self.k_max {
            return 0;
        }
        self.counts[(j - self.j_min) as usize * self.cols() + (k - self.k_min) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Draws each cell independently from `Poisson(total_counts * C[j, k])`.
///
/// Cell `i` (row-major) uses its own ChaCha8 stream `i` under `seed`, so the
/// result depends only on `(jsi, total_counts, seed)`.
pub fn poisson_sample(jsi: &JsiMatrix, total_counts: f64, seed: u64) -> Result<CountMatrix> {
    if !(total_counts.is_finite() && total_counts > 0.0) {
        return Err(domain(format!(
            "total_counts must be positive, got {total_counts}"
        )));
    }
    let counts = jsi
        .values
        .par_iter()
        .enumerate()
        .map(|(i, &c)| {
            let lambda = total_counts * c;
            if lambda <= 0.0 {
                return Ok(0);
            }
            let dist = Poisson::new(lambda)
                .map_err(|e| domain(format!("cell {i}: poisson rate {lambda}: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            Ok(dist.sample(&mut rng) as u64)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CountMatrix {
        j_min: jsi.j_min,
        j_max: jsi.j_max,
        k_min: jsi.k_min,
        k_max: jsi.k_max,
        counts,
    })
}
