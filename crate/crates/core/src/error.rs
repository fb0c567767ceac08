use thiserror::Error;

/// Errors raised across the crate.
///
/// Input errors describe the invariant that was violated; consistency
/// errors mean two independent routes to the same quantity disagreed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("matrix dimension {0} outside supported range 1..=9")]
    Dimension(usize),

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("polynomial degree {0} exceeds 4")]
    PolynomialDegree(usize),

    #[error("tolerance field `{0}` must be strictly positive")]
    Tolerance(&'static str),

    #[error("expected {expected} numbers, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("entry w[{row}][{col}] = {value} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("{kind} {index} sums to {sum}, expected {expected}")]
    NotDoublyStochastic {
        kind: &'static str,
        index: usize,
        sum: f64,
        expected: f64,
    },

    #[error("declared w = {declared} does not match the row sums {actual}")]
    DeclaredSum { declared: f64, actual: f64 },

    #[error("gauge condition violated: d + e + f = {0}")]
    Gauge(f64),

    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },

    #[error("epsilon parameters must be strictly positive, got {0:?}")]
    Epsilon([f64; 3]),

    #[error("point {0:?} is not in the probability simplex")]
    NotInSimplex([f64; 3]),

    #[error("point {0:?} must be strictly interior")]
    NotInterior([f64; 3]),

    #[error("finite-difference step {0} outside [1e-6, 1e-2]")]
    Step(f64),

    #[error("empty index set")]
    EmptyIndexSet,

    #[error("z[{index}] = {z} vanishes at x[{index}] = {x}")]
    Singular { index: usize, x: f64, z: f64 },

    #[error("W is block diagonal (index {0} decouples); the singular boundary is excluded")]
    BlockDiagonal(usize),

    #[error("sufficient decomposability condition does not hold")]
    NotDecomposableBySplit,

    #[error("invalid grid axis `{0}`: expected `value` or `start:stop:count`")]
    GridSpec(String),

    #[error("sweep grid is empty")]
    EmptyGrid,

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Failures of the second kind signal a bug rather than bad input.
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
