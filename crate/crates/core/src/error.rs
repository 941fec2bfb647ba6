use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("non-invertible series: leading coefficient {0} is not a unit")]
    NonInvertible(String),
    #[error("inverse of an exact series needs a finite truncation order")]
    UnboundedInverse,
    #[error("ill-posed product: {0}")]
    IllPosedProduct(String),
    #[error("malformed summand: {0}")]
    MalformedSummand(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("limit did not stabilize: {0}")]
    NoStabilization(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
