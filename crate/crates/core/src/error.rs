use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vector or tensor product whose dimension falls outside {2, 4, 8}.
    #[error("unsupported dimension {dim} (supported: 2, 4, 8)")]
    Size { dim: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:e})")]
    NotPsd { eigenvalue: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("non-finite value in input")]
    NotFinite,

    /// A scalar parameter outside its admissible range.
    #[error("{parameter} = {value} is out of range: {bound}")]
    Domain { parameter: &'static str, value: f64, bound: &'static str },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("branch {outcome} has probability {probability:e}; its receiver state is undefined")]
    DegenerateBranch { outcome: &'static str, probability: f64 },
}
