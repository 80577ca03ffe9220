use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{quantity} = {value} is outside its domain ({expected})")]
    Domain {
        quantity: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid sweep request: {0}")]
    InvalidRequest(String),

    #[error("state is already in the boosted frame; only a single boost is modelled")]
    AlreadyBoosted,

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("density matrix has eigenvalue {0:e} below the admissible floor")]
    NegativeEigenvalue(f64),

    #[error("unknown figure id `{0}` (expected one of 1a, 1b, 1c, 3a, 3b, 3c)")]
    UnknownFigure(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(quantity: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        quantity,
        value,
        expected,
    }
}
