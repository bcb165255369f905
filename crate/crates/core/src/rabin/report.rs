use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::concrete::Convention;
use super::slot::abstract_mdp;
use super::{Init, RabinError};
use crate::lang::Opt;
use crate::mdp::{expected_reward, pbounded_curve, Mdp, RewardStructure, Value};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePoint {
    pub t: u64,
    pub pmin: Rational,
    pub pmax: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitResult {
    pub a: u32,
    pub b: u32,
    pub rmin: Value,
    pub rmax: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub tourists: u32,
    pub convention: Convention,
    pub states: usize,
    pub transitions: usize,
    /// Reachable abstract states whose boards fit none of the three slots.
    pub unslotted: usize,
    pub curve: Vec<CurvePoint>,
    pub rmin: Value,
    pub rmax: Value,
    pub splits: Vec<SplitResult>,
}

/// Reward 1 on non-target states that start a round. Under the step
/// convention every state starts a round.
pub fn rewards(m: &Mdp) -> RewardStructure {
    let target = m.label("target").expect("target label");
    let start = m.label("round_start").expect("round_start label");
    let r = (0..m.len())
        .map(|s| if start[s] && !target[s] { Rational::one() } else { Rational::zero() })
        .collect();
    RewardStructure::new(r).expect("non-negative")
}

fn pick(values: impl Iterator<Item = Value>, opt: Opt) -> Value {
    match opt {
        Opt::Min => values.min(),
        Opt::Max => values.max(),
    }
    .expect("at least one initial state")
}

/// Bounded termination curve `P{min,max}=? [true U<=T target]` for
/// `T = 0..=t_max`, and `R{min,max}=? [F target]`, on the abstract model.
/// The initial split is demonic: minimizing queries take the worst split,
/// maximizing ones the best; each split is also reported on its own.
pub fn run_queries(init: Init, t_max: u64, conv: Convention, limit: usize) -> Result<Report, RabinError> {
    let model = abstract_mdp(init, conv, limit)?;
    let m = &model.mdp;
    let target = model.target();
    let init_states = m.initial().to_vec();
    let lo = pbounded_curve(m, &target, t_max, Opt::Min);
    let hi = pbounded_curve(m, &target, t_max, Opt::Max);
    let curve = (0..=t_max)
        .map(|t| {
            let row = t as usize;
            CurvePoint {
                t,
                pmin: init_states.iter().map(|&s| lo[row][s].clone()).min().expect("initial state"),
                pmax: init_states.iter().map(|&s| hi[row][s].clone()).max().expect("initial state"),
            }
        })
        .collect();
    let rw = rewards(m);
    let rmin = expected_reward(m, &target, &rw, Opt::Min)?;
    let rmax = expected_reward(m, &target, &rw, Opt::Max)?;
    let splits = init
        .splits()
        .into_iter()
        .zip(&init_states)
        .map(|((a, b), &s)| SplitResult { a, b, rmin: rmin.values[s].clone(), rmax: rmax.values[s].clone() })
        .collect();
    Ok(Report {
        tourists: init.tourists(),
        convention: conv,
        states: m.len(),
        transitions: m.transition_count(),
        unslotted: model.states.iter().filter(|s| s.slot().is_none()).count(),
        curve,
        rmin: pick(init_states.iter().map(|&s| rmin.values[s].clone()), Opt::Min),
        rmax: pick(init_states.iter().map(|&s| rmax.values[s].clone()), Opt::Max),
        splits,
    })
}

/// Expected rounds on the truncated concrete model with the overflow state
/// counted as reaching the target for free. Every path agrees with the
/// concrete algorithm until it overflows, so both values are lower bounds
/// on the concrete `(Rmin, Rmax)`, and they grow towards them with the cap.
pub fn truncated_reward_bounds(init: Init, cap: u32, conv: Convention, limit: usize) -> Result<(Value, Value), RabinError> {
    let model = super::truncated::truncated_mdp(init, cap, conv, limit)?;
    let m = &model.mdp;
    let mut target = model.target();
    if let Some(o) = model.overflow {
        target[o] = true;
    }
    let rw = rewards(m);
    let lo = expected_reward(m, &target, &rw, Opt::Min)?;
    let hi = expected_reward(m, &target, &rw, Opt::Max)?;
    let init_states = m.initial();
    Ok((
        pick(init_states.iter().map(|&s| lo.values[s].clone()), Opt::Min),
        pick(init_states.iter().map(|&s| hi.values[s].clone()), Opt::Max),
    ))
}
