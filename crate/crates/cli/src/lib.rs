//! Runner behind the `bergman` command: config loading, family dispatch and output files.

// `!(x < y)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod sweep;

pub use config::{Family, Precision, Resolved, RunConfig, SweepParam};
pub use error::CliError;
pub use run::{run, FamilyOutcome, RunOutcome, Summary};
pub use sweep::{sweep, SweepOutcome};

/// Thread cap from `BERGMAN_SEED_THREADS`; `None` when unset.
pub fn thread_limit() -> Result<Option<usize>, CliError> {
    match std::env::var("BERGMAN_SEED_THREADS") {
        Err(_) => Ok(None),
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("BERGMAN_SEED_THREADS must be a positive integer, got {text:?}"))),
        },
    }
}
