use alloc::vec::Vec;

use num_traits::One;

use super::concrete::{Convention, RabinState};
use super::explore::explore;
use super::{Init, RabinError};
use crate::mdp::Mdp;
use crate::rational::Rational;

/// Default cap on explicitly constructed states.
pub const DEFAULT_STATE_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TruncatedState {
    Concrete(RabinState),
    /// Absorbing; stands for every state with a number above the cap.
    Overflow,
}

/// Concrete MDP restricted to numbers `≤ cap`.
#[derive(Debug, Clone)]
pub struct TruncatedModel {
    pub mdp: Mdp,
    pub states: Vec<TruncatedState>,
    /// Breadth-first distance from the initial states.
    pub depth: Vec<u32>,
    pub overflow: Option<usize>,
    pub convention: Convention,
}

impl TruncatedModel {
    pub fn target(&self) -> Vec<bool> {
        self.states.iter().map(|s| matches!(s, TruncatedState::Concrete(c) if c.is_target())).collect()
    }

    /// True when the overflow state is reachable within the model.
    pub fn truncated(&self) -> bool {
        self.overflow.is_some()
    }
}

/// Builds the concrete MDP of the algorithm with all numbers bounded by
/// `cap`; a step producing a larger number goes to the overflow state.
/// Since one step raises any number by at most 3, bounded queries with
/// horizon `T` are exact when `cap ≥ 3T + 3`. Pads of tourists that have
/// decided are never read again and are stored as 0.
pub fn truncated_mdp(init: Init, cap: u32, conv: Convention, limit: usize) -> Result<TruncatedModel, RabinError> {
    if cap < 2 {
        return Err(RabinError::CapTooSmall(cap));
    }
    let starts = init.splits().into_iter().map(|(a, b)| TruncatedState::Concrete(RabinState::initial(a, b))).collect();
    let ex = explore(
        starts,
        limit,
        |s| {
            let TruncatedState::Concrete(c) = s else {
                return Ok(alloc::vec![alloc::vec![(TruncatedState::Overflow, Rational::one())]]);
            };
            let moves = c.moves(conv);
            if moves.is_empty() {
                return Ok(alloc::vec![alloc::vec![(s.clone(), Rational::one())]]);
            }
            Ok(moves
                .into_iter()
                .map(|mv| {
                    c.step(mv, conv)
                        .into_iter()
                        .map(|(mut t, p)| {
                            t.lin.iter_mut().chain(t.rin.iter_mut()).for_each(|x| *x = 0);
                            if t.max_value() > cap {
                                (TruncatedState::Overflow, p)
                            } else {
                                (TruncatedState::Concrete(t), p)
                            }
                        })
                        .collect()
                })
                .collect())
        },
        RabinError::StateLimit,
    )?;
    let initial = (0..init.splits().len()).collect();
    let overflow = ex.states.iter().position(|s| *s == TruncatedState::Overflow);
    let mdp = Mdp::new(ex.actions, initial)?;
    let model = TruncatedModel { mdp, states: ex.states, depth: ex.depth, overflow, convention: conv };
    let target = model.target();
    let fresh = model.states.iter().map(|s| matches!(s, TruncatedState::Concrete(c) if c.fresh)).collect();
    let over = model.states.iter().map(|s| *s == TruncatedState::Overflow).collect();
    let mdp = model.mdp.clone().with_label("target", target)?.with_label("round_start", fresh)?.with_label("overflow", over)?;
    Ok(TruncatedModel { mdp, ..model })
}
