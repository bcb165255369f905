use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::model::{Distribution, Mdp, MdpError};
use super::solve::evaluate_policy;
use crate::lang::Opt;
use crate::rational::{one, to_f64, Rational};

/// Residual at which floating value iteration stops.
pub const DEFAULT_RESIDUAL: f64 = 1e-9;
/// Cap on floating value-iteration sweeps.
pub const DEFAULT_MAX_SWEEPS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Value {
    Finite(Rational),
    Infinite,
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Finite(r) => to_f64(r),
            Value::Infinite => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Value::Finite(r) => Some(r),
            Value::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinite)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(r) => write!(f, "{r}"),
            Value::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub values: Vec<Value>,
    /// True when every finite value is an exact rational.
    pub exact: bool,
    /// Value-iteration sweeps plus policy-improvement rounds.
    pub iterations: u64,
    /// Final floating residual; 0 for purely exact computations.
    pub residual: f64,
}

impl QueryResult {
    fn exact(values: Vec<Rational>, iterations: u64) -> Self {
        QueryResult { values: values.into_iter().map(Value::Finite).collect(), exact: true, iterations, residual: 0.0 }
    }

    /// Optimum over `states` (e.g. the initial states), where `opt` picks
    /// the adversary's preferred start.
    pub fn optimum(&self, states: &[usize], opt: Opt) -> Option<&Value> {
        let it = states.iter().map(|&s| &self.values[s]);
        match opt {
            Opt::Min => it.min(),
            Opt::Max => it.max(),
        }
    }
}

/// Non-negative per-state reward, collected on leaving the state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewardStructure(Vec<Rational>);

impl RewardStructure {
    /// `None` if some reward is negative.
    pub fn new(values: Vec<Rational>) -> Option<Self> {
        values.iter().all(|r| *r >= Rational::zero()).then_some(RewardStructure(values))
    }

    pub fn constant(n: usize, r: Rational) -> Self {
        assert!(r >= Rational::zero(), "negative reward");
        RewardStructure(alloc::vec![r; n])
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }
}

fn expect(d: &Distribution, v: &[Rational]) -> Rational {
    d.iter().fold(Rational::zero(), |acc, (t, p)| acc + p * &v[*t])
}

fn better(opt: Opt, a: &Rational, b: &Rational) -> bool {
    match opt {
        Opt::Min => a < b,
        Opt::Max => a > b,
    }
}

/// One step of `V ↦ [target] + [¬target]·opt_a Σ p·V`.
fn bounded_step(m: &Mdp, target: &[bool], v: &[Rational], opt: Opt) -> Vec<Rational> {
    (0..m.len())
        .map(|s| {
            if target[s] {
                return one();
            }
            let mut best: Option<Rational> = None;
            for d in m.actions(s) {
                let x = expect(d, v);
                if best.as_ref().is_none_or(|b| better(opt, &x, b)) {
                    best = Some(x);
                }
            }
            best.expect("every state has an action")
        })
        .collect()
}

/// `P{min,max}=? [true U<=horizon target]` by exact backward recursion.
pub fn pbounded(m: &Mdp, target: &[bool], horizon: u64, opt: Opt) -> QueryResult {
    let mut v: Vec<Rational> = target.iter().map(|&b| if b { one() } else { Rational::zero() }).collect();
    for _ in 0..horizon {
        v = bounded_step(m, target, &v, opt);
    }
    QueryResult::exact(v, horizon)
}

/// Bounded-until values for every horizon `0..=horizon`; entry `t` is the
/// vector for horizon `t`.
pub fn pbounded_curve(m: &Mdp, target: &[bool], horizon: u64, opt: Opt) -> Vec<Vec<Rational>> {
    let mut v: Vec<Rational> = target.iter().map(|&b| if b { one() } else { Rational::zero() }).collect();
    let mut out = Vec::with_capacity(horizon as usize + 1);
    for _ in 0..horizon {
        let next = bounded_step(m, target, &v, opt);
        out.push(core::mem::replace(&mut v, next));
    }
    out.push(v);
    out
}

/// Same recursion in floating point, for models too large for exact
/// arithmetic to be practical.
pub fn pbounded_curve_f64(m: &Mdp, target: &[bool], horizon: u64, opt: Opt) -> Vec<Vec<f64>> {
    let probs: Vec<Vec<Vec<(usize, f64)>>> =
        m.all_actions().iter().map(|a| a.iter().map(|d| d.iter().map(|(t, p)| (*t, to_f64(p))).collect()).collect()).collect();
    let mut v: Vec<f64> = target.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    let mut out = Vec::with_capacity(horizon as usize + 1);
    for _ in 0..horizon {
        let next: Vec<f64> = (0..m.len())
            .map(|s| {
                if target[s] {
                    return 1.0;
                }
                let vals = probs[s].iter().map(|d| d.iter().map(|(t, p)| p * v[*t]).sum::<f64>());
                match opt {
                    Opt::Min => vals.fold(f64::INFINITY, f64::min),
                    Opt::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect();
        out.push(core::mem::replace(&mut v, next));
    }
    out.push(v);
    out
}

/// States from which some adversary reaches `target` with probability 1.
pub fn prob1e(m: &Mdp, target: &[bool]) -> Vec<bool> {
    let pre = m.predecessors();
    let mut u = alloc::vec![true; m.len()];
    loop {
        // states that can reach the target using only actions inside `u`
        let mut r = target.to_vec();
        let mut queue: Vec<usize> = (0..m.len()).filter(|&s| r[s]).collect();
        while let Some(t) = queue.pop() {
            for &s in &pre[t] {
                if r[s] || !u[s] {
                    continue;
                }
                let ok = m
                    .actions(s)
                    .iter()
                    .any(|d| d.iter().all(|(x, _)| u[*x]) && d.iter().any(|(x, _)| r[*x]));
                if ok {
                    r[s] = true;
                    queue.push(s);
                }
            }
        }
        if r == u {
            return u;
        }
        u = r;
    }
}

/// States from which every adversary reaches `target` with probability 1.
pub fn prob1a(m: &Mdp, target: &[bool]) -> Vec<bool> {
    // prob0e: largest set of non-target states with an action staying inside
    let mut z: Vec<bool> = target.iter().map(|&b| !b).collect();
    loop {
        let next: Vec<bool> = (0..m.len())
            .map(|s| z[s] && m.actions(s).iter().any(|d| d.iter().all(|(t, _)| z[*t])))
            .collect();
        if next == z {
            break;
        }
        z = next;
    }
    // everything that can reach prob0e without passing through the target
    let pre = m.predecessors();
    let mut bad = z;
    let mut queue: Vec<usize> = (0..m.len()).filter(|&s| bad[s]).collect();
    while let Some(t) = queue.pop() {
        for &s in &pre[t] {
            if !bad[s] && !target[s] {
                bad[s] = true;
                queue.push(s);
            }
        }
    }
    bad.iter().map(|&b| !b).collect()
}

/// Policy that reaches the target with probability 1 from every state of
/// `good`, built by backward attraction using actions inside `good`.
fn attractor_policy(m: &Mdp, target: &[bool], good: &[bool]) -> Vec<usize> {
    let mut policy = alloc::vec![0usize; m.len()];
    let mut done = target.to_vec();
    loop {
        let mut changed = false;
        for s in 0..m.len() {
            if done[s] || !good[s] {
                continue;
            }
            if let Some(a) = m
                .actions(s)
                .iter()
                .position(|d| d.iter().all(|(t, _)| good[*t]) && d.iter().any(|(t, _)| done[*t]))
            {
                policy[s] = a;
                done[s] = true;
                changed = true;
            }
        }
        if !changed {
            return policy;
        }
    }
}

/// Does `policy` reach the target with probability 1 from every solved state?
fn is_proper(m: &Mdp, policy: &[usize], target: &[bool], solve: &[bool]) -> bool {
    let mut pre = alloc::vec![Vec::new(); m.len()];
    for s in (0..m.len()).filter(|&s| solve[s]) {
        for (t, _) in &m.actions(s)[policy[s]] {
            pre[*t].push(s);
        }
    }
    let mut reach = target.to_vec();
    let mut queue: Vec<usize> = (0..m.len()).filter(|&s| reach[s]).collect();
    while let Some(t) = queue.pop() {
        for &s in &pre[t] {
            if !reach[s] {
                reach[s] = true;
                queue.push(s);
            }
        }
    }
    (0..m.len()).all(|s| !solve[s] || reach[s])
}

/// `R{min,max}=? [F target]`.
///
/// States that cannot be driven to the target with probability 1 (min) or
/// that some adversary keeps away from it with positive probability (max)
/// get `∞`. The rest is approximated by floating value iteration, whose
/// greedy policy then seeds exact policy iteration: each round solves the
/// policy's linear system in rationals and switches only on strict exact
/// improvement, so the final values are exact and optimal over memoryless
/// policies that reach the target.
pub fn expected_reward(m: &Mdp, target: &[bool], rewards: &RewardStructure, opt: Opt) -> Result<QueryResult, MdpError> {
    expected_reward_with(m, target, rewards, opt, DEFAULT_RESIDUAL, DEFAULT_MAX_SWEEPS)
}

pub fn expected_reward_with(
    m: &Mdp,
    target: &[bool],
    rewards: &RewardStructure,
    opt: Opt,
    residual: f64,
    max_sweeps: u64,
) -> Result<QueryResult, MdpError> {
    if !target.iter().any(|&b| b) {
        return Err(MdpError::EmptyTarget);
    }
    let n = m.len();
    let r = rewards.values();
    let finite = match opt {
        Opt::Min => prob1e(m, target),
        Opt::Max => prob1a(m, target),
    };
    let solve: Vec<bool> = (0..n).map(|s| finite[s] && !target[s]).collect();
    // actions that keep the target reachable with probability 1
    let allowed: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            if !solve[s] {
                return Vec::new();
            }
            (0..m.actions(s).len()).filter(|&a| m.actions(s)[a].iter().all(|(t, _)| finite[*t])).collect()
        })
        .collect();

    // floating value iteration (Jacobi)
    let fr: Vec<f64> = r.iter().map(to_f64).collect();
    let fp: Vec<Vec<Vec<(usize, f64)>>> = m
        .all_actions()
        .iter()
        .map(|acts| acts.iter().map(|d| d.iter().map(|(t, p)| (*t, to_f64(p))).collect()).collect())
        .collect();
    let q = |s: usize, a: usize, v: &[f64]| fr[s] + fp[s][a].iter().map(|(t, p)| p * v[*t]).sum::<f64>();
    let mut v = alloc::vec![0.0f64; n];
    let mut sweeps = 0u64;
    let mut res = f64::INFINITY;
    while sweeps < max_sweeps && res > residual {
        let next: Vec<f64> = (0..n)
            .map(|s| {
                if !solve[s] {
                    return 0.0;
                }
                let vals = allowed[s].iter().map(|&a| q(s, a, &v));
                match opt {
                    Opt::Min => vals.fold(f64::INFINITY, f64::min),
                    Opt::Max => vals.fold(f64::NEG_INFINITY, f64::max),
                }
            })
            .collect();
        res = next.iter().zip(&v).map(|(a, b)| libm::fabs(a - b)).fold(0.0, f64::max);
        v = next;
        sweeps += 1;
    }

    let mut policy = alloc::vec![0usize; n];
    for s in (0..n).filter(|&s| solve[s]) {
        let mut best = allowed[s][0];
        for &a in &allowed[s][1..] {
            let (x, y) = (q(s, a, &v), q(s, best, &v));
            if matches!(opt, Opt::Min) && x < y || matches!(opt, Opt::Max) && x > y {
                best = a;
            }
        }
        policy[s] = best;
    }
    if matches!(opt, Opt::Min) && !is_proper(m, &policy, target, &solve) {
        policy = attractor_policy(m, target, &finite);
    }

    // exact policy iteration
    let mut values = alloc::vec![Rational::zero(); n];
    let mut rounds = 0u64;
    loop {
        rounds += 1;
        let chosen: Vec<&[(usize, Rational)]> = (0..n).map(|s| m.actions(s)[policy[s]].as_slice()).collect();
        evaluate_policy(&chosen, r, &solve, &mut values);
        let mut changed = false;
        for s in (0..n).filter(|&s| solve[s]) {
            let mut best = values[s].clone();
            for &a in &allowed[s] {
                let x = &r[s] + expect(&m.actions(s)[a], &values);
                if better(opt, &x, &best) {
                    best = x;
                    policy[s] = a;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let out = (0..n)
        .map(|s| if finite[s] { Value::Finite(values[s].clone()) } else { Value::Infinite })
        .collect();
    Ok(QueryResult { values: out, exact: true, iterations: sweeps + rounds, residual: if sweeps == 0 { 0.0 } else { res } })
}
