use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (estimate {estimate:e}, error bound {error_bound:e})"
    )]
    NotConverged {
        estimate: f64,
        error_bound: f64,
        subdivisions: usize,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// The detected signal power implied by the energy budget is negative:
    /// the squeezing and thermal photons alone exceed the available energy.
    #[error("infeasible energy budget: signal power {signal_power:e} < 0 at n̄ = {n_mean}")]
    InfeasibleBudget { n_mean: f64, signal_power: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: cannot parse {text:?} as a real number")]
    Parse {
        path: PathBuf,
        line: usize,
        text: String,
    },

    #[error("{0}: no samples")]
    EmptyInput(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
