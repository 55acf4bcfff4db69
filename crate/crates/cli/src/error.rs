use multiphoton_core::Error as ModelError;
use thiserror::Error;

use crate::sweep::Violation;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Validation(String),

    #[error("grid must be strictly increasing with at least two points (got {0:?})")]
    GridNotIncreasing(Vec<f64>),

    #[error("{source} (at {vary} = {value})")]
    Model {
        vary: &'static str,
        value: f64,
        #[source]
        source: ModelError,
    },

    #[error("bound violated: {0}")]
    BoundViolated(Box<Violation>),

    #[error("config file: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SweepError {
    /// Process exit code: 2 for bad input, 3 for a violated bound, 4 for
    /// numerical pathology.
    pub fn exit_code(&self) -> i32 {
        match self {
            SweepError::Validation(_) | SweepError::GridNotIncreasing(_) | SweepError::Config(_) => 2,
            SweepError::Model { source, .. } if source.is_numerical() => 4,
            SweepError::Model { .. } => 2,
            SweepError::BoundViolated(_) => 3,
            SweepError::Io(_) => 1,
        }
    }
}
