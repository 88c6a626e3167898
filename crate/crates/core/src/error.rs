use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Result would leave the representable range of `f64`.
    #[error("range error: {0}")]
    Range(String),

    #[error("degenerate simplex: |det A| = {determinant:e} is below the threshold {threshold:e}")]
    Degenerate { determinant: f64, threshold: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("vertex {index} has norm {norm} and lies outside the unit ball")]
    NotInBall { index: usize, norm: f64 },

    #[error(
        "dimension {n} exceeds the sign-pattern budget (max {max}); use the sphere-sampling oracle instead"
    )]
    Budget { n: usize, max: usize },

    /// An internal identity that must hold did not; indicates a numerical bug.
    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("lower bound violated: norm {norm} < gamma* {gamma_star} (slack {slack:e})")]
    BoundViolated {
        norm: f64,
        gamma_star: f64,
        slack: f64,
    },

    #[error("malformed simplex file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
