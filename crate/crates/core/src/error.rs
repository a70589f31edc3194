use std::io;

/// Errors produced by mesh construction, assembly and the solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular to working precision (pivot {pivot})")]
    SingularMatrix { pivot: usize },

    #[error("relaxation block {block} is singular")]
    SingularBlock { block: usize },

    #[error("cell {cell} is degenerate (Jacobian determinant {det:e})")]
    DegenerateCell { cell: usize, det: f64 },

    #[error("division bin {bin} received no degrees of freedom")]
    EmptyBin { bin: usize },

    #[error("stabilization rule {rule} does not cover region {region}")]
    UnknownRegion { rule: &'static str, region: String },

    #[error("node {node} carries conflicting Dirichlet values {first} and {second}")]
    ConflictingDirichlet { node: usize, first: f64, second: f64 },

    #[error("fine node {0} has no parent cell")]
    MissingParent(usize),

    #[error("case {0} has no analytic solution")]
    NoAnalyticSolution(&'static str),

    #[error("sparse factorization failed: {0}")]
    Factorization(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
