use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration is not strictly increasing: {0:?}")]
    Unordered(Vec<i64>),

    #[error("table too small: {0}")]
    TableTooSmall(String),

    #[error("quadrature did not converge after {nodes} nodes (last delta {delta:e})")]
    QuadratureNotConverged { nodes: usize, delta: f64 },

    #[error("imaginary residue {residue:e} exceeds tolerance {tolerance:e}")]
    ImaginaryResidue { residue: f64, tolerance: f64 },

    #[error("near-critical z: minimum root gap {gap:e}")]
    NearCritical { gap: f64 },

    #[error("root iteration did not converge after {sweeps} sweeps (max residual {residual:e})")]
    RootsNotConverged { sweeps: usize, residual: f64 },

    #[error("contour radius sensitivity {delta:e} exceeds tolerance {tolerance:e}")]
    RadiusSensitivity { delta: f64, tolerance: f64 },

    #[error("ODE solution blew up near x = {x}")]
    BlowUp { x: f64 },

    #[error("state space of {states} states exceeds the limit {limit}")]
    StateSpaceTooLarge { states: usize, limit: usize },

    #[error("replica {replica} failed: {message}")]
    Replica { replica: u64, message: String },

    #[error("serialization: {0}")]
    Serde(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
