//! Rabin's choice-coordination algorithm: the concrete algorithm with a
//! simulator, a truncated explicit MDP of it, and a finite abstraction that
//! tracks boards and notepads only relative to each other.

mod concrete;
mod explore;
mod report;
mod sim;
mod slot;
mod truncated;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use concrete::{conj, Convention, Move, RabinState, Side, Tourist};
pub use report::{rewards, run_queries, truncated_reward_bounds, CurvePoint, Report, SplitResult};
pub use sim::{check_invariants, simulate, InvariantReport, Scheduler, Trace};
pub use slot::{abstract_mdp, AbstractModel, AbstractState, Desc, Pos, Queue};
pub use truncated::{truncated_mdp, TruncatedModel, TruncatedState, DEFAULT_STATE_LIMIT};

use crate::mdp::MdpError;

/// Initial configuration: a fixed split of tourists between the two places,
/// or every split of `N` tourists, chosen demonically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    Split(u32, u32),
    AllSplits(u32),
}

impl Init {
    pub fn splits(&self) -> Vec<(u32, u32)> {
        match *self {
            Init::Split(a, b) => alloc::vec![(a, b)],
            Init::AllSplits(n) => (0..=n).map(|a| (a, n - a)).collect(),
        }
    }

    pub fn tourists(&self) -> u32 {
        match *self {
            Init::Split(a, b) => a + b,
            Init::AllSplits(n) => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RabinError {
    StateLimit(usize),
    CapTooSmall(u32),
    Invariant(String),
    Mdp(MdpError),
}

impl fmt::Display for RabinError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RabinError::StateLimit(n) => write!(f, "state space exceeds {n} states"),
            RabinError::CapTooSmall(c) => write!(f, "board cap {c} is below 2"),
            RabinError::Invariant(m) => write!(f, "abstraction invariant violated: {m}"),
            RabinError::Mdp(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RabinError {}

impl From<MdpError> for RabinError {
    fn from(e: MdpError) -> Self {
        RabinError::Mdp(e)
    }
}
