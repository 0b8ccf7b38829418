use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is singular (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("matrix is not symmetric (asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("state space must contain at least one state")]
    EmptyStateSpace,
    #[error("duplicate state label {0:?}")]
    DuplicateLabel(String),
    #[error("negative entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("row {row} sums to {sum}, not 1")]
    RowSumViolation { row: usize, sum: f64 },
    #[error("state index {index} out of range for {n} states")]
    StateOutOfRange { index: usize, n: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("linear system for class {class} is singular")]
    SingularSystem { class: usize },
    #[error("bad convex weights: {0}")]
    BadWeights(String),
    #[error("distribution is not stationary (residual {residual:e})")]
    NotStationary { residual: f64 },
    #[error("transition matrix is not diagonalizable")]
    NotDiagonalizable,
    #[error("chain is not recurrent")]
    NotRecurrent,
    #[error("cycle enumeration is limited to {limit} states, got {n}")]
    TooManyStates { n: usize, limit: usize },
    #[error("vertex {vertex} has zero out-degree")]
    ZeroOutDegree { vertex: usize },
    #[error("vertex {vertex} has zero degree")]
    ZeroDegree { vertex: usize },
    #[error("weight matrix is not symmetric")]
    NotUndirected,
    #[error("quadratic form routes disagree: {matrix} vs {edge_sum}")]
    FormulaMismatch { matrix: f64, edge_sum: f64 },
    #[error("graph Fourier transform needs all {n} eigenvectors, have {k}")]
    IncompleteBasis { k: usize, n: usize },
    #[error("stationary distribution must be strictly positive (state {state})")]
    NotPositiveStationary { state: usize },
    #[error("chain is not absorbing")]
    NotAbsorbing,
    #[error("damping factor {0} outside [0, 1]")]
    BadAlpha(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::NoConvergence { .. }
                | Error::SingularSystem { .. }
                | Error::FormulaMismatch { .. }
        )
    }
}
