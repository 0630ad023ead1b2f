use std::fmt;

use thiserror::Error;

/// Named rank values recorded by an existence check, e.g. `("rank_t(S*T)", 5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTuple(pub Vec<(String, usize)>);

impl fmt::Display for RankTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(name, r)| format!("{name}={r}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("singular operand: {0}")]
    Singular(String),

    #[error("real-origin stack left imaginary residue {residue:.3e} above cleanup tolerance {tolerance:.3e}")]
    RealnessViolated { residue: f64, tolerance: f64 },

    #[error("matrix is not block-circulant: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotBlockCirculant { deviation: f64, tolerance: f64 },

    #[error("existence condition failed: ranks {ranks}")]
    ExistenceFailed { ranks: RankTuple },

    #[error("Fourier slices have non-uniform numerical ranks {ranks:?}")]
    NonUniformRank { ranks: Vec<usize> },

    #[error("target rank {k} outside 1..={max}")]
    InvalidRank { k: usize, max: usize },

    #[error("t-index {index} exceeds 1, group inverse does not exist")]
    IndexTooLarge { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular value decomposition did not converge")]
    NoConvergence,

    #[error("malformed .t3 data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn existence(ranks: &[(&str, usize)]) -> Self {
        Error::ExistenceFailed { ranks: RankTuple(ranks.iter().map(|(n, r)| (n.to_string(), *r)).collect()) }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ExistenceFailed { .. } => 3,
            Error::Singular(_) | Error::NonUniformRank { .. } | Error::IndexTooLarge { .. } => 4,
            Error::DimensionMismatch(_) | Error::InvalidParameter(_) | Error::InvalidRank { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
