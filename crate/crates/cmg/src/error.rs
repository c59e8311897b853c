//! Error type shared across the solver.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({i}, {j}) out of range for {n} vertices")]
    EdgeOutOfRange { i: usize, j: usize, n: usize },

    #[error("edge ({i}, {j}) has nonpositive weight {w}")]
    NonpositiveWeight { i: usize, j: usize, w: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("zero or missing diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },

    #[error("zero vector where a nonzero vector is required")]
    ZeroVector,

    #[error("graph is disconnected ({components} components); the Fiedler vector is defined for connected graphs only")]
    Disconnected { components: usize },

    #[error("graph has {n} vertices; need at least 2 for a second eigenpair")]
    GraphTooSmall { n: usize },

    #[error("iterate collapsed to zero after deflation")]
    IterateCollapsed,

    #[error("aggregate index {index} out of range for {count} aggregates")]
    AggregateOutOfRange { index: usize, count: usize },

    #[error("sequence of length {len} is not a permutation of 0..{len}")]
    NotAPermutation { len: usize },

    #[error("matrix is not symmetric: entries ({i}, {j}) and ({j}, {i}) differ by {diff}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("dense oracle limited to {max} rows, got {n}")]
    OracleScaleExceeded { n: usize, max: usize },

    #[error("Jacobi eigensolver did not converge within {sweeps} sweeps")]
    JacobiNoConvergence { sweeps: usize },

    #[error("unknown coarse solver '{name}'; available: {available}")]
    UnknownCoarseSolver { name: String, available: String },

    #[error("invalid solver configuration: {reason}")]
    InvalidConfig { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
