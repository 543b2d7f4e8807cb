use thiserror::Error;

/// Errors raised by the model builders, engines and parsers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("site {0} does not exist on this lattice")]
    MissingSite(String),

    #[error("memory budget exceeded: {needed} basis states requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("incompatible topology: {0}")]
    IncompatibleTopology(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("model is frustrated: {0}")]
    Frustrated(String),

    #[error("seed configuration violates face terms at {}", .0.join(", "))]
    SeedViolatesFace(Vec<String>),

    #[error("seed configuration is annihilated by the vertex terms")]
    SeedAnnihilated,

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("path exceeds lattice: {0}")]
    PathExceedsLattice(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}
