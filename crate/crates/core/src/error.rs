use thiserror::Error;

/// Errors raised by the force library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForceError {
    /// An argument or parameter lies outside its physical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A function was evaluated exactly on one of its poles.
    #[error("singular point: {0}")]
    Singular(String),

    /// The adaptive integrator ran out of budget before meeting its tolerance.
    #[error("quadrature did not converge after {evals} evaluations (value {value:e}, error estimate {error:e})")]
    Nonconverged { value: f64, error: f64, evals: u64 },

    /// The requested formulation/sector pair has no printed formula.
    #[error("unsupported combination: {0}")]
    Unsupported(String),

    /// A ratio was requested whose denominator is below the absolute floor.
    #[error("indeterminate ratio: denominator {denominator:e} is below floor {floor:e}")]
    Indeterminate { denominator: f64, floor: f64 },
}

pub type Result<T> = std::result::Result<T, ForceError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(ForceError::Domain(msg.into()))
}
