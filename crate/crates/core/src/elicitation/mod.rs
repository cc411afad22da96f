//! The deck-of-cards elicitation procedure: card chains, ratio tables and
//! their adjustment, core and support bisection, side construction, type-2
//! envelopes and the dialogue state machine.

mod cards;
mod core_support;
mod envelope;
pub mod session;
mod sides;
mod table;

pub use cards::{
    enumerate_chains, label_values, nonnormalized_values, normalize, tuple_to_cards,
    weights_from_cards, CardChain, CardGap, ValueScale, DEFAULT_ENUMERATION_CAP,
};
pub use core_support::{
    core_support_step, Boundary, CoreSupport, CoreSupportSearch, Probe, ProbeAnswer, SearchStep,
    DEFAULT_RESOLUTION,
};
pub use envelope::envelope_it2;
pub use sides::{assemble, build_t1_side, uniform_breakpoints, Side, SideFragment};
pub use table::{
    adjust_values, cards_from_values, ratio_table, Adjustment, CardFit, Orientation, RatioEntry,
    RatioTable,
};

use crate::fuzzy::FuzzyError;
use crate::solvers::SolverError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ElicitationError {
    #[error("the chain has interval gaps; enumerate the chains first")]
    MustEnumerate,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{count} chains exceed the enumeration cap of {cap}")]
    TooManyChains { count: u128, cap: u64 },
    #[error("precision 10^-{m} cannot separate coordinates {} and {index}; use a larger m", index - 1)]
    NeedsLargerM { index: usize, m: u32 },
    #[error("inconsistent answer for {boundary:?}: {message}; restart that boundary")]
    Inconsistent { boundary: Boundary, message: String },
    #[error("event {got} is not allowed in phase {phase}; expected one of {expected:?}")]
    Protocol {
        phase: String,
        expected: Vec<String>,
        got: String,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = ElicitationError> = std::result::Result<T, E>;
