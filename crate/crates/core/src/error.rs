use thiserror::Error;

/// Errors raised by `brc-core`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("rates carry different units ({0} vs {1})")]
    MixedUnits(String, String),

    #[error("unknown link `{0}` (expected one of y1, y2, z1, z2, z1y1, z2y2)")]
    UnknownLink(String),

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("elimination produced {rows} rows, above the limit of {limit}")]
    ResourceLimit { rows: usize, limit: usize },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
