//! State enumeration and the expectation-transformer semantics.

mod eval;
mod expectation;
mod refine;
mod space;
mod wp;

pub use eval::{eval_arith, eval_pred, EvalError};
pub use expectation::Expectation;
pub use refine::{check_refinement_refute, Verdict};
pub use space::{enumerate_states, SpaceError, StateSpace, DEFAULT_STATE_LIMIT};
pub use wp::{SemanticsError, Transformer, DEFAULT_FUEL};
