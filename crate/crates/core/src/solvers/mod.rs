//! Exact solvers for the two small optimization problems of the elicitation
//! procedure. Everything is computed over rationals.

mod abs_lp;
mod int_alloc;
mod simplex;

pub use abs_lp::{solve_abs_lp, AbsTerm, LinearConstraint, LpProblem, LpSolution, Relation};
pub use int_alloc::{solve_int_alloc, IntAllocProblem, IntAllocation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("problem is infeasible")]
    Infeasible,
    #[error("internal solver failure: {0}")]
    Internal(String),
}
