use thiserror::Error;

pub type Result<T> = std::result::Result<T, GldpcError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GldpcError {
    #[error("invalid code length {length}: {reason}")]
    InvalidLength { length: usize, reason: &'static str },

    #[error("invalid Hamming length {0}: length + 1 must be a power of two >= 4")]
    InvalidHammingLength(usize),

    #[error("enumeration refused: dimension {dimension} exceeds the limit of {limit}")]
    EnumerationLimit { dimension: usize, limit: usize },

    #[error("inconsistent weight enumerator: {0}")]
    InconsistentWef(String),

    #[error("invalid parity-check matrix: {0}")]
    InvalidParityMatrix(String),

    #[error("invalid check-node mixture: {0}")]
    InvalidMixture(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("alpha = {alpha} is outside the domain (0, {alpha_max})")]
    Domain { alpha: f64, alpha_max: f64 },

    #[error("rate {0} is outside (0, 1)")]
    RateDomain(f64),

    #[error(
        "divisibility violation at N = {n}: {quantity} = {value} is not an integer; \
         nearest feasible N is {suggested_n}"
    )]
    Divisibility {
        n: usize,
        quantity: String,
        value: String,
        suggested_n: usize,
    },

    #[error("check-node type {0} has no explicit parity-check matrix")]
    MissingParity(usize),

    #[error("code dimension {dimension} exceeds k_limit = {limit}; minimum distance not enumerated")]
    DimensionLimit { dimension: usize, limit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("spec file: {0}")]
    SpecFile(String),
}
