//! Piecewise-linear type-1 fuzzy numbers stored as finitely many α-cuts.
//!
//! A [`PiecewiseMF`] keeps one closed interval per stored α-level. Between two
//! stored levels the cut endpoints move linearly, which makes the membership
//! function piecewise linear and lets addition, positive scaling and weighted
//! averages be computed level by level with interval arithmetic.

mod arithmetic;
mod interval;
mod knots;
mod levels;
pub mod oracle;
mod piecewise;

pub use arithmetic::{add, scale, weighted_average};
pub use interval::Interval;
pub use knots::KnotProfile;
pub use levels::AlphaLevels;
pub use piecewise::PiecewiseMF;

/// Tolerance for level equality and nestedness checks.
pub const TOLERANCE: f64 = 1e-9;

/// Tolerance used by [`PiecewiseMF::compress`].
pub const COMPRESS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuzzyError {
    #[error("invalid alpha levels: {0}")]
    InvalidLevels(String),
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("cut at level {upper} is not contained in the cut at level {lower}")]
    NotNested { lower: f64, upper: f64 },
    #[error("expected {expected} cuts, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("knot profile is not a fuzzy number: {0}")]
    NotFuzzyNumber(String),
}

pub type Result<T, E = FuzzyError> = std::result::Result<T, E>;
