//! Workloads shared by the benchmarks: the parameter points behind the
//! reproduction figures.

pub use bfc_walk_core::{ModulatorConfig, SpectralPhaseProfile};

/// `(name, d, profile, delta)` for the JSI benchmarks.
pub fn jsi_cases() -> Vec<(&'static str, usize, SpectralPhaseProfile, f64)> {
    vec![
        ("bosonic_d8_4.6", 8, SpectralPhaseProfile::bosonic(), 4.6),
        (
            "fermionic_d8_6.1",
            8,
            SpectralPhaseProfile::fermionic(),
            6.1,
        ),
        (
            "quadratic_d16_2",
            16,
            SpectralPhaseProfile::quadratic(0.0, 0.0, 0.1),
            2.0,
        ),
        ("bosonic_d8_200", 8, SpectralPhaseProfile::bosonic(), 200.0),
        (
            "anyonic_d16_200",
            16,
            SpectralPhaseProfile::anyonic(),
            200.0,
        ),
    ]
}

pub fn depth_grid() -> Vec<f64> {
    (0..=12).map(|i| 0.5 * i as f64).collect()
}
