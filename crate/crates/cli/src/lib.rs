//! Library half of the `cfriend` binary: spec-file parsing, report
//! rendering and the subcommand drivers. Kept separate from `main.rs` so the
//! integration tests can call the drivers directly.

pub mod commands;
pub mod report;
pub mod spec_file;

use thiserror::Error;

use cfriend::polytope::PolytopeError;
use cfriend::tensor::TensorError;
use cfriend::wigner::WignerError;

/// Exit status for bad input: unreadable files, malformed specs, bad flags.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when the run completed but one of its checks failed.
pub const EXIT_CHECK_FAILED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Spec(#[from] spec_file::SpecError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Wigner(#[from] WignerError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Spec(_) => EXIT_USAGE,
            // numerical trouble inside a run is an invariant violation
            CliError::Tensor(_) | CliError::Wigner(_) | CliError::Polytope(_) => EXIT_CHECK_FAILED,
        }
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
