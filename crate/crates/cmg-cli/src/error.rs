//! CLI-side errors and their process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("line {line}: complex matrices are not supported")]
    Complex { line: usize },

    #[error("general matrix is not numerically symmetric at ({i}, {j}); |difference| = {delta:e}")]
    Asymmetric { i: usize, j: usize, delta: f64 },
}

impl GraphIoError {
    pub fn malformed(line: usize, reason: impl Into<String>) -> Self {
        GraphIoError::Malformed { line, reason: reason.into() }
    }
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Input(#[from] GraphIoError),

    #[error("{0}")]
    Solver(#[from] cmg::Error),

    #[error("benchmark failed at size {m}: {source}")]
    Bench { m: usize, source: cmg::Error },

    #[error("cannot write output: {0}")]
    Output(std::io::Error),
}

/// Exit codes: 0 success, 2 bad arguments, 3 unreadable or malformed input,
/// 4 disconnected graph, 5 solver failure.
pub fn exit_code(err: &AppError) -> i32 {
    match err {
        AppError::Input(_) | AppError::Output(_) => 3,
        AppError::Solver(cmg::Error::Disconnected { .. }) => 4,
        AppError::Solver(cmg::Error::InvalidConfig { .. })
        | AppError::Solver(cmg::Error::UnknownCoarseSolver { .. }) => 2,
        AppError::Bench { .. } | AppError::Solver(_) => 5,
    }
}
