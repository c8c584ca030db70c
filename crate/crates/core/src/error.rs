use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The modulator drive does not match the comb spacing of the state.
    #[error("resonance mismatch: modulator at {modulator_hz} Hz, comb spacing {fsr_hz} Hz")]
    Resonance { modulator_hz: f64, fsr_hz: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
