//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The Jacobi index has determinant zero, so the operators that need
    /// `m^{-1}` (the heat operator, the normalized elliptic raising
    /// operators, and everything built from them) are unavailable.
    #[error("Jacobi index is singular")]
    SingularIndex,

    #[error("matrix is not half-integral: {0}")]
    NotHalfIntegral(String),

    #[error("weight mismatch: expected {expected}, found {found}")]
    WeightMismatch { expected: i64, found: i64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),

    #[error("affine scale factor must be nonzero")]
    ZeroScale,

    /// Raised whenever `k - d > h/2` fails; the message names a
    /// non-positive eigenvalue of a lowering-raising ladder when one is
    /// responsible.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("depth {found} exceeds bound {bound}")]
    DepthExceeded { found: u32, bound: u32 },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("lattice rank {0} is odd; integral weight requires even rank")]
    OddRank(usize),

    #[error("truncation bound {0} too large")]
    TruncationTooLarge(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
