use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("degenerate delay profile: {0}")]
    DegenerateProfile(String),

    #[error("power allocation uses {used} but the budget is {budget}")]
    Budget { used: f64, budget: f64 },

    #[error("unsupported dimension {0}; only 2 and 3 are handled")]
    UnsupportedDimension(usize),

    #[error("input {index} is linearly dependent on the preceding inputs")]
    Dependence { index: usize },

    #[error("correlation matrix is rank deficient (smallest eigenvalue {0:e})")]
    RankDeficient(f64),

    #[error("eigensolver did not converge within {0} sweeps")]
    NoConvergence(usize),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Dependence { .. } | Error::RankDeficient(_) | Error::NoConvergence(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
