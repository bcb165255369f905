use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::semantics::{eval_pred, EvalError, Expectation, SemanticsError, StateSpace, Transformer};
use crate::lang::{Pred, Stmt};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedPredicate {
    pub text: String,
    pub pred: Pred,
}

/// The predicate set Φ inducing an abstraction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PredicateSet {
    preds: Vec<NamedPredicate>,
}

impl PredicateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, pred: Pred) {
        let text = pred.to_string();
        self.preds.push(NamedPredicate { text, pred });
    }

    pub fn len(&self) -> usize {
        self.preds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, NamedPredicate> {
        self.preds.iter()
    }

    pub fn get(&self, i: usize) -> &NamedPredicate {
        &self.preds[i]
    }

    /// Φ ∪ Φ′, keeping the order of first occurrence.
    pub fn union(&self, other: &PredicateSet) -> PredicateSet {
        let mut out = self.clone();
        for p in &other.preds {
            if !out.preds.iter().any(|q| q.pred == p.pred) {
                out.preds.push(p.clone());
            }
        }
        out
    }
}

impl FromIterator<Pred> for PredicateSet {
    fn from_iter<T: IntoIterator<Item = Pred>>(iter: T) -> Self {
        let mut s = PredicateSet::new();
        for p in iter {
            s.push(p);
        }
        s
    }
}

/// One equivalence class of `∼_Φ`, identified by its Φ truth vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cube {
    pub signature: Vec<bool>,
    pub states: Vec<usize>,
}

/// Disjoint, exhaustive cover of the state space by non-empty cubes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cubes: Vec<Cube>,
    cube_of: Vec<usize>,
}

impl Partition {
    /// Builds a partition from a block label per state. Block order is by
    /// first appearance of the label in the label order (`Ord` on `K`).
    pub fn from_labels<K: Ord + Clone>(labels: &[K], signature: impl Fn(&K) -> Vec<bool>) -> Self {
        let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
        for (s, k) in labels.iter().enumerate() {
            groups.entry(k.clone()).or_default().push(s);
        }
        let mut cube_of = alloc::vec![0; labels.len()];
        let cubes = groups
            .into_iter()
            .enumerate()
            .map(|(ci, (k, states))| {
                for &s in &states {
                    cube_of[s] = ci;
                }
                Cube { signature: signature(&k), states }
            })
            .collect();
        Partition { cubes, cube_of }
    }

    pub fn singletons(n: usize) -> Self {
        let labels: Vec<usize> = (0..n).collect();
        Partition::from_labels(&labels, |_| Vec::new())
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn cube_of(&self, state: usize) -> usize {
        self.cube_of[state]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.cube_of
    }

    pub fn state_count(&self) -> usize {
        self.cube_of.len()
    }

    /// `[c]` for cube `c`.
    pub fn indicator(&self, cube: usize) -> Expectation {
        Expectation::indicator(&self.cube_of.iter().map(|&c| c == cube).collect::<Vec<_>>())
    }

    /// True when `bits` is a union of cubes.
    pub fn respects(&self, bits: &[bool]) -> bool {
        self.cubes.iter().all(|c| c.states.iter().all(|&s| bits[s] == bits[c.states[0]]))
    }
}

/// `cubes.Φ`: classes of the Φ truth vector, non-empty ones only, ordered
/// lexicographically by truth vector with true before false.
pub fn cubes(phi: &PredicateSet, space: &StateSpace) -> Result<Partition, EvalError> {
    let labels = (0..space.len())
        .map(|s| {
            let vals = space.valuation(s);
            phi.iter().map(|p| eval_pred(&p.pred, space, &vals).map(|b| !b)).collect::<Result<Vec<bool>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Partition::from_labels(&labels, |k| k.iter().map(|b| !b).collect()))
}

/// `cubed_Φ.e`: on every cube, the infimum of `e` over the cube. This is the
/// greatest expectation below `e` that is constant on cubes.
pub fn cubed(e: &Expectation, part: &Partition) -> Expectation {
    let mins: Vec<_> = part
        .cubes()
        .iter()
        .map(|c| c.states.iter().map(|&s| &e[s]).min().expect("cubes are non-empty").clone())
        .collect();
    (0..e.len()).map(|s| mins[part.cube_of(s)].clone()).collect()
}

pub fn is_cubed(e: &Expectation, part: &Partition) -> bool {
    part.cubes().iter().all(|c| c.states.iter().all(|&s| e[s] == e[c.states[0]]))
}

/// `wp_Φ.prog.e = cubed_Φ.(wp.prog.e)`. Fuel exhaustion is propagated with
/// the cubed lower bound.
pub fn wp_abs(t: &Transformer<'_>, prog: &Stmt, e: &Expectation, part: &Partition) -> Result<Expectation, SemanticsError> {
    match t.wp(prog, e) {
        Ok(w) => Ok(cubed(&w, part)),
        Err(SemanticsError::FuelExhausted { lower_bound, iterations }) => {
            Err(SemanticsError::FuelExhausted { lower_bound: cubed(&lower_bound, part), iterations })
        }
        Err(other) => Err(other),
    }
}
