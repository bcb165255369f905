use alloc::collections::VecDeque;
use alloc::vec::Vec;
use core::hash::Hash;

use hashbrown::HashMap;

use crate::mdp::{normalize, Distribution};
use crate::rational::Rational;

pub(crate) struct Explored<S> {
    pub states: Vec<S>,
    pub depth: Vec<u32>,
    pub actions: Vec<Vec<Distribution>>,
}

/// Breadth-first construction from `init`. States are numbered in discovery
/// order, initial states first. `None` from `succ` on an over-limit state
/// count is reported as `Err(limit)`.
pub(crate) fn explore<S, E>(
    init: Vec<S>,
    limit: usize,
    mut succ: impl FnMut(&S) -> Result<Vec<Vec<(S, Rational)>>, E>,
    over_limit: impl Fn(usize) -> E,
) -> Result<Explored<S>, E>
where
    S: Clone + Eq + Hash,
{
    let mut index: HashMap<S, usize> = HashMap::new();
    let mut states = Vec::new();
    let mut depth = Vec::new();
    let mut queue = VecDeque::new();
    for s in init {
        if !index.contains_key(&s) {
            index.insert(s.clone(), states.len());
            queue.push_back(states.len());
            states.push(s);
            depth.push(0);
        }
    }
    let mut actions: Vec<Vec<Distribution>> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let here = states[i].clone();
        let mut acts = Vec::new();
        for outcome in succ(&here)? {
            let mut dist = Vec::with_capacity(outcome.len());
            for (t, p) in outcome {
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if states.len() >= limit {
                            return Err(over_limit(limit));
                        }
                        let j = states.len();
                        index.insert(t.clone(), j);
                        states.push(t);
                        depth.push(depth[i] + 1);
                        queue.push_back(j);
                        j
                    }
                };
                dist.push((j, p));
            }
            acts.push(normalize(dist));
        }
        // BFS pops in index order, so `actions[i]` lines up with state `i`
        debug_assert_eq!(actions.len(), i);
        actions.push(acts);
    }
    Ok(Explored { states, depth, actions })
}
