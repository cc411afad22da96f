//! Deck-of-cards construction of interval type-2 fuzzy membership functions,
//! piecewise-linear fuzzy arithmetic, admissible orders and multi-criteria
//! ranking.

pub mod compute;
pub mod elicitation;
pub mod fuzzy;
pub mod io;
pub mod it2;
pub mod mcdm;
pub mod ratio;
pub mod rational;
pub mod solvers;

use serde::Serialize;

/// How a failure should be reported to a caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    /// The input is malformed or violates a precondition.
    Validation,
    /// The request is well formed but not allowed in the current phase.
    Protocol,
    /// A bug or an unexpected solver outcome.
    Internal,
}

impl solvers::SolverError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            solvers::SolverError::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Validation,
        }
    }
}

impl elicitation::ElicitationError {
    pub fn kind(&self) -> ErrorKind {
        use elicitation::ElicitationError as E;
        match self {
            E::Protocol { .. } => ErrorKind::Protocol,
            E::Internal(_) => ErrorKind::Internal,
            E::Solver(s) => s.kind(),
            _ => ErrorKind::Validation,
        }
    }
}
