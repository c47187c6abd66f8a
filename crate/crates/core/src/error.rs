use thiserror::Error;

/// Errors raised by the kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} balls for dimension {dimension}, got {got}")]
    WrongCount {
        dimension: usize,
        expected: usize,
        got: usize,
    },
    #[error("ball {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("balls {first} and {second} are concentric")]
    ConcentricPair { first: usize, second: usize },
    #[error("ball {index} has a non-finite coordinate or radius")]
    NonFinite { index: usize },
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },
    #[error("invalid tolerances: {0}")]
    InvalidTolerance(&'static str),
    #[error("sign set has {got} entries, expected {expected}")]
    SignCount { expected: usize, got: usize },
    #[error("sign entries must be +1 or -1, got {0}")]
    InvalidSign(i32),
    #[error("matrix shape mismatch: {0}")]
    Shape(&'static str),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("difference-vector matrix V is singular (rank {rank} of {dimension})")]
    SubDimensional { rank: usize, dimension: usize },
    #[error("quadratic has no solutions (a = b = 0, c != 0)")]
    DegenerateQuadratic,
    #[error("lifted difference vectors are linearly dependent")]
    DegenerateNormal,
    #[error("root classification requires non-negative generator radii")]
    RequiresNonNegativeRadii,
    #[error("matrix U is singular; no sub-dimensional solution")]
    USingular,
    #[error("rank(V) = {rank} is below d - 1 = {}", dimension - 1)]
    RankTooLow { rank: usize, dimension: usize },
    #[error("configuration is full rank; the sub-dimensional solver does not apply")]
    NotSubDimensional,
    #[error("sign-set enumeration supports d <= {max}, got {got}")]
    TooManySignSets { max: usize, got: usize },
    #[error("determinant is exactly zero")]
    SingularExact,
    #[error("radicand is negative")]
    NegativeRadicand,
    #[error("selected root is not real")]
    ImaginaryRoot,
}

pub type Result<T> = std::result::Result<T, Error>;
