use thiserror::Error;

use crate::moments::SolvabilityReport;
use crate::solvers::ParameterRange;

/// Errors raised by moment-problem construction, checks and solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid moment sequence: {0}")]
    InvalidSequence(String),

    #[error("Hankel section out of range: shift {shift} + 2*size {size} exceeds {max}")]
    IndexOutOfRange { shift: usize, size: usize, max: usize },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    /// The Hankel matrix has numerical rank `rank` < `dim`.
    #[error("degenerate Hankel matrix: numerical rank {rank} of {dim}")]
    Degenerate { rank: usize, dim: usize },

    #[error("{0} is singular")]
    Singular(&'static str),

    #[error("{what} vanishes at {at}")]
    Pole { what: &'static str, at: f64 },

    #[error("boundary case: {0}")]
    Boundary(String),

    #[error("not solvable: {reason}")]
    Unsolvable {
        reason: String,
        report: Option<Box<SolvabilityReport>>,
    },

    #[error("parameter {value} outside admissible range {range}")]
    OutOfRange {
        value: f64,
        range: Box<ParameterRange>,
    },

    #[error("trinomial range {formula} disagrees with spectral scan {scan}")]
    ConventionsMismatch {
        formula: Box<ParameterRange>,
        scan: Box<ParameterRange>,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn unsolvable(report: SolvabilityReport) -> Self {
        Error::Unsolvable {
            reason: format!("failing {}", report.failing().join(", ")),
            report: Some(Box::new(report)),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
