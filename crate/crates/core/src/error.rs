use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input parameters violate a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A numerical invariant was violated beyond its tolerance.
    #[error("invariant `{what}` violated: residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Invariant {
        what: String,
        residual: f64,
        tolerance: f64,
    },

    #[error("Pfaffian requires an even dimension, got {0}")]
    OddDimension(usize),

    #[error("system too large for dense evaluation: n = {n} exceeds {max}")]
    TooLarge { n: usize, max: usize },

    #[error("mean stabilizer-space weight {mean:.3e} is below 10x its standard error {stderr:.3e}")]
    InsufficientStatistics { mean: f64, stderr: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invariant(what: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Error::Invariant {
            what: what.into(),
            residual,
            tolerance,
        }
    }

    /// True for failures that signal a numerical breach rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Invariant { .. } | Error::InsufficientStatistics { .. }
        )
    }
}

/// Fails with [`Error::Invariant`] when `residual > tolerance` (or NaN).
pub(crate) fn check(what: &str, residual: f64, tolerance: f64) -> Result<()> {
    if residual <= tolerance {
        Ok(())
    } else {
        Err(Error::invariant(what, residual, tolerance))
    }
}
