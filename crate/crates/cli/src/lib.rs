//! Verification pipeline behind the `modinv` binary.
//!
//! `verify` builds the group from an instance description, checks the
//! semidirect splitting, constructs the candidate generators of the
//! invariant ring and runs the degree/Jacobian criterion, optionally
//! confirmed degree by degree against an exact fixed-space computation.
//! `selftest` runs the exhaustive identity suites.

pub mod config;
pub mod pipeline;
pub mod report;
pub mod selftest;

pub use config::{Instance, VerifyConfig};
pub use pipeline::{run_verify, verify_instance, FailedCheck};
pub use report::VerificationReport;
pub use selftest::{run_selftest, Scope, SuiteResult};

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] modinv_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Core(_) | CliError::Io(_) => EXIT_FAILED,
        }
    }
}
