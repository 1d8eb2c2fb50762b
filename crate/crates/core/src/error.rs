use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaborError {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("undersampled system cannot be a frame (p = {p} > q = {q})")]
    Undersampled { p: usize, q: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("lattice mismatch between operands")]
    LatticeMismatch,
    #[error("not a frame: smallest eigenvalue {min:e} vs largest {max:e}")]
    NotAFrame { min: f64, max: f64 },
    #[error("iterand lost frame property")]
    LostFrameProperty,
    #[error("dense path limited to L <= {limit}, got L = {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("no sufficiently real and even eigenvector (best score {score:.4})")]
    NoSymmetricEigenvector { score: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("insufficient data for order estimate")]
    InsufficientData,
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, GaborError>;
