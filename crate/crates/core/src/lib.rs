//! Continuous quantum walks of frequency-bin entangled photon pairs driven by
//! an electro-optic phase modulator.
//!
//! A phase modulator running at the comb spacing couples every frequency bin
//! to all others with Bessel-function amplitudes, so the modulation depth acts
//! as a continuously tunable walk depth. This crate evaluates the resulting
//! single-photon and two-photon output statistics:
//!
//! * [`bessel`]: `J_n(delta)` rows and truncation windows.
//! * [`state`]: maximally entangled `d`-pair input states with a spectral phase.
//! * [`walk`]: joint spectral intensities, coherent and incoherent.
//! * [`analysis`]: energy-transfer statistics, sweeps and count sampling.
//! * [`export`]: CSV and PGM artifacts.

pub mod analysis;
pub mod bessel;
pub mod error;
pub mod export;
pub mod state;
pub mod walk;

pub use analysis::{
    confinement_metrics, moments, poisson_sample, sweep_depth, sweep_depth_with, sweep_dimension,
    sweep_dimension_with, transfer_distribution, ConfinementMetrics, CountMatrix, Moments,
    SweepAxis, SweepTable, TransferDistribution,
};
pub use bessel::{bessel_j, bessel_row, truncation_order, BesselRow};
pub use error::{Error, Result};
pub use state::{make_maximal_state, BfcState, Phase, ProfileKind, SpectralPhaseProfile};
pub use walk::{
    biphoton_jsi, fermionic_antidiagonal_closed_form, incoherent_jsi, profile_jsi,
    single_photon_distribution, symmetrized_display, DisplayMatrix, JsiMatrix, JsiMeta,
    ModulatorConfig, SinglePhotonDistribution,
};

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
