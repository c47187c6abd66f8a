//! File ingestion, reports and rendering behind the `apollo` binary.

pub mod bench;
pub mod format;
pub mod input;
pub mod plot;
pub mod solve;
pub mod vertices;

use apollo_core::Tolerances;

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{0}")]
    Guard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Guard(_) => 4,
            CliError::Unsupported(_) => 5,
        }
    }
}

impl From<apollo_core::Error> for CliError {
    fn from(e: apollo_core::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Default tolerances, with `--tolerance` replacing the residual and
/// deduplication bounds.
pub fn tolerances(tolerance: Option<f64>) -> CliResult<Tolerances> {
    let base = Tolerances::default();
    match tolerance {
        None => Ok(base),
        Some(t) => Ok(Tolerances::new(base.singular_rel, t, t)?),
    }
}
