use thiserror::Error;

/// Errors raised by the numerical kernel, channel handling and equalizers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: String, actual: String },

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("rank-one update is numerically degenerate (|1 + v^H G^-1 v| = {0:e})")]
    Degenerate(f64),

    #[error("channel is in the {actual} domain, expected {expected}")]
    Domain {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("cannot place {users} users in a {sector_deg} degree sector with {separation_deg} degree separation")]
    Placement {
        users: usize,
        sector_deg: f64,
        separation_deg: f64,
    },

    #[error("pilot matrix is not unitary (max deviation {0:e})")]
    Pilot(f64),

    #[error("channel matrix is rank deficient; rho = 0 requires full column rank")]
    Rank,

    #[error("every beam is already in the support")]
    SupportExhausted,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("search failed: {0}")]
    SearchFailed(String),

    #[error("channel file, line {line}: {message}")]
    ChannelFile { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(expected: impl ToString, actual: impl ToString) -> Error {
    Error::Dimension {
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}
