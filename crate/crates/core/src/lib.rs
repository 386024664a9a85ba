//! Truncated moment problems: solvability checks and canonical solutions for
//! the Stieltjes, Hausdorff, gap-Hamburger and local problems.

pub mod cli;
pub mod error;
pub mod extensions;
pub mod linalg;
pub mod measure;
pub mod moments;
pub mod oracle;
pub mod orthopoly;
pub mod poly;
pub mod solvers;

pub use error::{Error, Result};
pub use measure::DiscreteMeasure;
pub use moments::{MomentSequence, SolvabilityReport};
pub use orthopoly::OrthoPolySystem;
pub use solvers::{LocalProblem, ParameterRange};

/// Default relative tolerance for positivity and rank decisions.
pub const DEFAULT_TOL: f64 = 1e-10;
