use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported excitation sector {0}: only sectors 0, 1 and 2 are modelled")]
    UnsupportedSector(usize),

    #[error("basis state {state} is not in excitation sector {sector}")]
    StateNotInSector { state: String, sector: usize },

    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("invalid parameter `{field}`: {detail}")]
    InvalidParams { field: &'static str, detail: String },

    #[error("inconsistent operator set: {0}")]
    Inconsistent(String),

    #[error("phase undefined: diagonal entry {index} of E_000 has modulus {modulus:.3e}")]
    PhaseUndefined { index: usize, modulus: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("integration failure at t = {time}: {detail}")]
    IntegrationFailure { time: f64, detail: String },

    #[error("config error in `{field}`: {detail}")]
    Config { field: String, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            detail: detail.into(),
        }
    }

    /// Short stable identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnsupportedSector(_) => "unsupported_sector",
            Error::StateNotInSector { .. } => "state_not_in_sector",
            Error::Domain { .. } => "domain",
            Error::InvalidParams { .. } => "invalid_params",
            Error::Inconsistent(_) => "inconsistent",
            Error::PhaseUndefined { .. } => "phase_undefined",
            Error::InvalidState(_) => "invalid_state",
            Error::IntegrationFailure { .. } => "integration_failure",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
