use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value for `{0}`")]
    NonFinite(&'static str),

    #[error("ket is not normalized (norm² = {0})")]
    Unnormalized(f64),

    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("matrix has a negative eigenvalue {0:e}")]
    NotPositive(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("matrix is not X-shaped (largest off-X entry {0:e})")]
    NotXState(f64),

    #[error("exciton energy is required for instantaneous frequencies")]
    MissingExcitonEnergy,

    #[error("half-wave voltages are equal ({0} V); no differential phase")]
    DegenerateHalfWave(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("failed to parse density matrix: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}
