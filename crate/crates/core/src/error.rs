use thiserror::Error;

/// Errors produced by the solvers, the relation search and the CLI plumbing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The level-set angle `2π/κ − arccos x` left `[0, π]`, or the chain ran past `x = 1`.
    #[error("chain step out of branch (kappa={kappa}, E={energy}, x={x})")]
    OutOfBranch { kappa: u32, energy: f64, x: f64 },

    #[error("no sign change of the closure residual on J_2 (kappa={kappa}, n={n})")]
    NoRoot { kappa: u32, n: u32 },

    #[error("root refinement stalled after {iterations} iterations (kappa={kappa}, n={n})")]
    NonConvergence { kappa: u32, n: u32, iterations: usize },

    #[error("no integer relation of degree <= {max_degree} passes the residual test")]
    NoRelation { max_degree: usize },

    #[error("value carries {have} bits but the relation search needs {need}")]
    InsufficientPrecision { have: usize, need: usize },

    #[error("numerical nullspace has dimension {nullity}, expected 1")]
    AmbiguousNullspace { nullity: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown dataset source '{0}'")]
    UnknownSource(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
