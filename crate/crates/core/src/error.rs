use thiserror::Error;

/// Errors raised by matrix construction, eigenanalysis, splitting and bounding.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix order must be at least 1")]
    EmptyMatrix,

    #[error("matrix order {0} exceeds the supported maximum of {max}", max = crate::MAX_ORDER)]
    TooLarge(usize),

    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric: entries ({row}, {col}) and ({col}, {row}) differ by {deviation:e}")]
    Asymmetric {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("negative weight {weight:e} on {what}")]
    NegativeWeight { what: String, weight: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is indefinite: eigenvalue {eigenvalue:e} is below -{zero_tol:e}")]
    IndefiniteMatrix { eigenvalue: f64, zero_tol: f64 },

    #[error("all eigenvalues are below the zero threshold {zero_tol:e}")]
    ZeroMatrix { zero_tol: f64 },

    #[error(
        "null spaces differ: dimensions {dim_a} and {dim_b}, largest principal angle {angle:e}"
    )]
    NullSpaceMismatch {
        dim_a: usize,
        dim_b: usize,
        angle: f64,
    },

    #[error(
        "restriction of the right-hand matrix to the null-space complement is numerically singular"
    )]
    SingularRestriction,

    #[error("row {row} sums to {sum:e}; the splitting needs A·1 = 0")]
    NonzeroRowSums { row: usize, sum: f64 },

    #[error("largest diagonal entry {max_diagonal:e} is not positive")]
    ZeroDiagonal { max_diagonal: f64 },

    #[error(
        "left matrix is nonzero on the null space of the right matrix (residual {residual:e})"
    )]
    Unsupported { residual: f64 },

    #[error("source edge ({0}, {1}) has positive weight but no path")]
    MissingPath(usize, usize),

    #[error("source vertex {0} has positive excess but the host has none there")]
    MissingExcessSupport(usize),

    #[error("invalid path for edge ({edge_i}, {edge_j}): {reason}")]
    InvalidPath {
        edge_i: usize,
        edge_j: usize,
        reason: String,
    },

    #[error("degenerate probe pair: {0}")]
    DegenerateProbe(String),

    #[error("probe vector is not orthogonal to the null space (inner product {inner:e})")]
    ProbeNotOrthogonal { inner: f64 },

    #[error("matrix rank {rank} is below the required 2")]
    RankTooLow { rank: usize },

    #[error("triangle nodes are collinear (twice signed area {twice_area:e})")]
    DegenerateTriangle { twice_area: f64 },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("PSD certificate at tau = {tau} contradicts the measured pencil [{lambda_min:e}, {lambda_max:e}]")]
    CertificateInconsistent {
        tau: f64,
        lambda_min: f64,
        lambda_max: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
