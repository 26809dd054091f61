use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{what}: argument {value} outside the supported domain")]
    Domain { what: &'static str, value: f64 },

    #[error("index {index} exceeds the supported maximum {max}")]
    Index { index: usize, max: usize },

    #[error("determinant not converged under node doubling: {coarse} vs {fine}")]
    Accuracy { coarse: f64, fine: f64 },

    #[error("sampler stalled at point {drawn} of {total}: {accepted} accepted out of {proposals} proposals")]
    SamplerStall {
        drawn: usize,
        total: usize,
        proposals: u64,
        accepted: u64,
    },

    #[error("cutoff violation: |y[{index}]| = {value} is not below w_c = {wc}")]
    Cutoff { index: usize, value: f64, wc: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("convergence trend failed:\n{0}")]
    Trend(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64) -> Error {
    Error::Domain { what, value }
}
