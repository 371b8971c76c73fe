use thiserror::Error;

/// A failed witness check, carrying the offending point(s).
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// `A_x` is empty although the witness claims the nonempty variant.
    EmptySection { x: usize },
    /// `(x, 0)` is missing although the witness claims the diagonal variant.
    MissingDiagonal { x: usize },
    /// A section or vector entry sits outside the declared support.
    OutsideSupport { x: usize, y: usize },
    /// `#(A_x △ A_y) < eps · #(A_x ∩ A_y)` fails on a tested pair.
    Ratio { x: usize, y: usize, ratio: f64, eps: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::EmptySection { x } => write!(f, "section A_{x} is empty"),
            Violation::MissingDiagonal { x } => write!(f, "diagonal marker ({x}, 0) missing from A_{x}"),
            Violation::OutsideSupport { x, y } => write!(f, "pair ({x}, {y}) lies outside the support"),
            Violation::Ratio { x, y, ratio, eps } => {
                write!(f, "ratio {ratio} on pair ({x}, {y}) is not below {eps}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("operands live on different spaces")]
    SpaceMismatch,
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point label `{0}`")]
    UnknownLabel(String),
    #[error("point id {id} out of range for a space of {len} points")]
    OutOfRange { id: usize, len: usize },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("random regular graph: {0}")]
    RandomGraph(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("witness violation: {0}")]
    Violation(Violation),
    #[error("vector for point {x} is not a unit vector (norm {norm})")]
    NotUnit { x: usize, norm: f64 },
    #[error("kernel is not Hermitian at ({x}, {y}), defect {defect}")]
    NotHermitian { x: usize, y: usize, defect: f64 },
    #[error("kernel is not positive semidefinite: min eigenvalue {min_eig} below -{tol}")]
    NotPsd { min_eig: f64, tol: f64 },
    #[error("degenerate kernel: vector for point {x} vanishes")]
    DegenerateKernel { x: usize },
    #[error("displacement {value} on pair ({x}, {y}) is not below {bound}")]
    Displacement { x: usize, y: usize, value: f64, bound: f64 },
    #[error("no discretization grid up to m = {cap} works (offending point {x})")]
    Discretization { x: usize, cap: u64 },
    #[error("operator is zero")]
    ZeroOperator,
    #[error("amplification chain vanishes at step j = {j}")]
    Degenerate { j: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("bound violated: {0}")]
    Inequality(String),
    #[error("power iteration did not converge after {iterations} iterations (residual {residual})")]
    PowerIteration { iterations: usize, residual: f64 },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Violation(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status: 1 for a failed check, 2 for bad input or
    /// configuration, 3 for a numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Violation(_) | Error::Displacement { .. } => 1,
            Error::Inequality(_)
            | Error::PowerIteration { .. }
            | Error::NotPsd { .. }
            | Error::DegenerateKernel { .. }
            | Error::Discretization { .. }
            | Error::Degenerate { .. } => 3,
            _ => 2,
        }
    }
}
