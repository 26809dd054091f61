//! Command-line front end for `edgestat-core`: tables, sampling experiments,
//! convergence suites and identity checks, with CSV/JSON output and
//! reproduction manifests.

pub mod cli;
pub mod config;
pub mod output;
pub mod parallel;
pub mod verify;

pub use cli::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] edgestat_core::Error),
}

impl CliError {
    /// 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        use edgestat_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Domain { .. } | E::Index { .. } | E::Config(_)) => 2,
            _ => 1,
        }
    }
}
