//! Explicit-state MDPs: extraction from loop-form models, quotients by a
//! partition, bounded reachability and expected total reward.

mod check;
mod extract;
mod model;
mod quotient;
mod solve;

pub use check::{
    expected_reward, expected_reward_with, pbounded, pbounded_curve, pbounded_curve_f64, prob1a, prob1e, QueryResult,
    RewardStructure, Value, DEFAULT_MAX_SWEEPS, DEFAULT_RESIDUAL,
};
pub use extract::{extract_mdp, DEFAULT_ACTION_CAP};
pub use model::{is_deterministic, normalize, Distribution, Mdp, MdpError};
pub use quotient::quotient_mdp;
