use thiserror::Error;

/// Errors raised by the computations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular Gram matrix")]
    Singular,

    #[error("characteristic 2: diagonalization is undefined, use symplectic_basis")]
    CharacteristicTwo,

    #[error("not alternating")]
    NotAlternating,

    #[error("no diagonal skew-quadratic forms")]
    DiagonalSkewQuadratic,

    #[error("odd rank {0}: a Lagrangian needs even rank")]
    OddRank(usize),

    #[error("order check requires finite groups")]
    InfiniteGroup,

    #[error("use witt_q_decompose; W(Q) is infinitely generated")]
    RationalWittGroup,

    #[error("lattice is not integral")]
    NotIntegral,

    #[error("dyadic dévissage not supported: the 2-primary part is not elementary")]
    DyadicDevissage,

    #[error("insufficient ring data: {0}")]
    InsufficientRingData(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("incompatible coefficients: {0}")]
    Coefficients(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed input rather than by the
    /// mathematics of a well-formed request.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Io(_) | Error::InvalidArgument(_))
    }
}
