use thiserror::Error;

/// Errors shared by every module of the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("operator size mismatch: {left} vs {right} sites")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("dense realization refused: {n_sites} sites exceeds the {max}-site guard")]
    CapacityExceeded { n_sites: u32, max: u32 },

    #[error("site index {index} out of range 1..={n_sites}")]
    SiteOutOfRange { index: u32, n_sites: u32 },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("invalid initial-state spec: {0}")]
    InvalidSpec(String),

    #[error("first-order zero mode is resonant: denominator {denominator} vanishes ({detail})")]
    Resonant {
        denominator: &'static str,
        detail: String,
    },

    #[error("unsupported regime for this backend: {0}")]
    UnsupportedRegime(String),

    #[error("spectral resolution too coarse: {0}")]
    Resolution(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("time-series length mismatch: {0}")]
    LengthMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
