//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by field construction, geometric constructions and the
/// verification harness.
///
/// The variants are deliberately coarse: they distinguish the conditions a
/// caller can act on (bad input data, a violated statement hypothesis, a
/// request outside the supported desk-scale range) rather than every internal
/// failure site.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// The field description is malformed (non-prime characteristic, size
    /// overflow, reducible modulus, ...).
    #[error("invalid field spec: {0}")]
    InvalidFieldSpec(String),

    /// An argument violates the documented precondition of an operation,
    /// e.g. three points that are not collinear passed to a subline
    /// constructor.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The parameters do not satisfy the hypotheses of the requested
    /// statement (for example `q >= n` or `n` composite).
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// The request is valid mathematically but outside the supported
    /// desk-scale configuration.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed serialized data.
    #[error("serialization: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
