use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// Successor distribution, sorted by successor with no zero entries.
pub type Distribution = Vec<(usize, Rational)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MdpError {
    NoActions { state: usize },
    SuccessorOutOfRange { state: usize, successor: usize },
    NotADistribution { state: usize, action: usize, total: Rational },
    NegativeProbability { state: usize },
    InitialOutOfRange { state: usize },
    LabelLength { label: String, found: usize },
    /// The program is not `do G -> body od` with a loop-free body.
    NotLoopForm,
    NestedLoop,
    TooManyActions { state: usize, cap: usize },
    UnknownVariable(String),
    EmptyTarget,
}

impl fmt::Display for MdpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MdpError::NoActions { state } => write!(f, "state {state} has no actions"),
            MdpError::SuccessorOutOfRange { state, successor } => {
                write!(f, "state {state} has successor {successor} out of range")
            }
            MdpError::NotADistribution { state, action, total } => {
                write!(f, "action {action} of state {state} sums to {total}, not 1")
            }
            MdpError::NegativeProbability { state } => write!(f, "state {state} has a negative probability"),
            MdpError::InitialOutOfRange { state } => write!(f, "initial state {state} out of range"),
            MdpError::LabelLength { label, found } => write!(f, "label `{label}` has {found} entries"),
            MdpError::NotLoopForm => f.write_str("model is not of the form `do G -> body od`"),
            MdpError::NestedLoop => f.write_str("loop body contains a nested loop"),
            MdpError::TooManyActions { state, cap } => {
                write!(f, "state {state} resolves to more than {cap} demonic actions")
            }
            MdpError::UnknownVariable(v) => write!(f, "undeclared variable `{v}`"),
            MdpError::EmptyTarget => f.write_str("target set is empty"),
        }
    }
}

impl core::error::Error for MdpError {}

/// Sorts by successor, sums repeated successors and drops zero entries.
pub fn normalize(dist: impl IntoIterator<Item = (usize, Rational)>) -> Distribution {
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (t, p) in dist {
        *acc.entry(t).or_insert_with(Rational::zero) += p;
    }
    acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// Finite MDP with exact rational transition probabilities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mdp {
    actions: Vec<Vec<Distribution>>,
    initial: Vec<usize>,
    labels: BTreeMap<String, Vec<bool>>,
    names: Option<Vec<String>>,
}

impl Mdp {
    /// Validates and normalizes. Duplicate distributions within a state are
    /// merged, keeping first occurrence order.
    pub fn new(actions: Vec<Vec<Distribution>>, initial: Vec<usize>) -> Result<Self, MdpError> {
        let n = actions.len();
        let mut merged = Vec::with_capacity(n);
        for (s, acts) in actions.into_iter().enumerate() {
            if acts.is_empty() {
                return Err(MdpError::NoActions { state: s });
            }
            let mut out: Vec<Distribution> = Vec::with_capacity(acts.len());
            for (a, d) in acts.into_iter().enumerate() {
                if d.iter().any(|(_, p)| *p < Rational::zero()) {
                    return Err(MdpError::NegativeProbability { state: s });
                }
                let d = normalize(d);
                if let Some(&(t, _)) = d.iter().find(|(t, _)| *t >= n) {
                    return Err(MdpError::SuccessorOutOfRange { state: s, successor: t });
                }
                let total: Rational = d.iter().map(|(_, p)| p).sum();
                if !total.is_one() {
                    return Err(MdpError::NotADistribution { state: s, action: a, total });
                }
                if !out.contains(&d) {
                    out.push(d);
                }
            }
            merged.push(out);
        }
        if let Some(&s) = initial.iter().find(|&&s| s >= n) {
            return Err(MdpError::InitialOutOfRange { state: s });
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Ok(Mdp { actions: merged, initial, labels: BTreeMap::new(), names: None })
    }

    pub fn with_label(mut self, name: &str, bits: Vec<bool>) -> Result<Self, MdpError> {
        if bits.len() != self.len() {
            return Err(MdpError::LabelLength { label: name.into(), found: bits.len() });
        }
        self.labels.insert(name.into(), bits);
        Ok(self)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.len(), "one name per state");
        self.names = Some(names);
        self
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn actions(&self, state: usize) -> &[Distribution] {
        &self.actions[state]
    }

    pub fn all_actions(&self) -> &[Vec<Distribution>] {
        &self.actions
    }

    pub fn transition_count(&self) -> usize {
        self.actions.iter().flatten().map(Vec::len).sum()
    }

    pub fn action_count(&self) -> usize {
        self.actions.iter().map(Vec::len).sum()
    }

    pub fn label(&self, name: &str) -> Option<&[bool]> {
        self.labels.get(name).map(Vec::as_slice)
    }

    pub fn labels(&self) -> &BTreeMap<String, Vec<bool>> {
        &self.labels
    }

    pub fn name(&self, state: usize) -> Option<&str> {
        self.names.as_ref().map(|n| n[state].as_str())
    }

    /// Every state has exactly one action.
    pub fn is_deterministic(&self) -> bool {
        self.actions.iter().all(|a| a.len() == 1)
    }

    /// Predecessor lists over all actions.
    pub(crate) fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pre = alloc::vec![Vec::new(); self.len()];
        for (s, acts) in self.actions.iter().enumerate() {
            for d in acts {
                for &(t, _) in d {
                    if pre[t].last() != Some(&s) {
                        pre[t].push(s);
                    }
                }
            }
        }
        pre
    }
}

pub fn is_deterministic(m: &Mdp) -> bool {
    m.is_deterministic()
}
