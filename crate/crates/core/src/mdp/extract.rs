use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use super::model::{normalize, Distribution, Mdp, MdpError};
use crate::lang::{Model, Pred, Stmt, StmtKind};
use crate::rational::Rational;
use crate::semantics::{eval_arith, eval_pred, StateSpace};

/// Default cap on demonic resolutions per state.
pub const DEFAULT_ACTION_CAP: usize = 1 << 12;

struct Extractor<'a> {
    space: &'a StateSpace,
    sink: usize,
    cap: usize,
    state: usize,
}

impl Extractor<'_> {
    fn dirac(t: usize) -> Vec<Distribution> {
        alloc::vec![alloc::vec![(t, Rational::one())]]
    }

    fn check(&self, outs: Vec<Distribution>) -> Result<Vec<Distribution>, MdpError> {
        let mut uniq: Vec<Distribution> = Vec::with_capacity(outs.len());
        for d in outs {
            if !uniq.contains(&d) {
                uniq.push(d);
            }
        }
        if uniq.len() > self.cap {
            return Err(MdpError::TooManyActions { state: self.state, cap: self.cap });
        }
        Ok(uniq)
    }

    fn guard(&self, g: &Pred, s: usize) -> Option<bool> {
        eval_pred(g, self.space, &self.space.valuation(s)).ok()
    }

    /// All distributions over final states (plus the sink for abort) that
    /// the body can produce from `s`, one per resolution of its demonic
    /// choices. Choices in a sequel may depend on the intermediate state.
    fn outcomes(&self, prog: &Stmt, s: usize) -> Result<Vec<Distribution>, MdpError> {
        if s == self.sink {
            return Ok(Self::dirac(s));
        }
        let space = self.space;
        match &prog.kind {
            StmtKind::Skip => Ok(Self::dirac(s)),
            StmtKind::Abort => Ok(Self::dirac(self.sink)),
            StmtKind::Assign(var, rhs) => {
                let vi = space.var_index(var).ok_or_else(|| MdpError::UnknownVariable(String::from(var.as_str())))?;
                let mut vals = space.valuation(s);
                let t = match eval_arith(rhs, space, &vals).ok().and_then(|v| space.vars()[vi].fit(v)) {
                    Some(v) => {
                        vals[vi] = v;
                        space.index_of(&vals).expect("fitted value is in range")
                    }
                    None => self.sink,
                };
                Ok(Self::dirac(t))
            }
            StmtKind::Seq(a, b) => {
                let mut cache: BTreeMap<usize, Vec<Distribution>> = BTreeMap::new();
                let mut out = Vec::new();
                for first in self.outcomes(a, s)? {
                    let mut partial: Vec<Vec<(usize, Rational)>> = alloc::vec![Vec::new()];
                    for (t, p) in &first {
                        if !cache.contains_key(t) {
                            cache.insert(*t, self.outcomes(b, *t)?);
                        }
                        let seconds = &cache[t];
                        if partial.len().saturating_mul(seconds.len()) > self.cap.saturating_mul(16) {
                            return Err(MdpError::TooManyActions { state: self.state, cap: self.cap });
                        }
                        let mut next = Vec::with_capacity(partial.len() * seconds.len());
                        for acc in &partial {
                            for d in seconds {
                                let mut v = acc.clone();
                                v.extend(d.iter().map(|(u, q)| (*u, p * q)));
                                next.push(v);
                            }
                        }
                        partial = next;
                    }
                    out.extend(partial.into_iter().map(normalize));
                    if out.len() > self.cap.saturating_mul(16) {
                        return Err(MdpError::TooManyActions { state: self.state, cap: self.cap });
                    }
                }
                self.check(out)
            }
            StmtKind::Prob(p, a, b) => {
                let q = Rational::one() - p;
                let left = self.outcomes(a, s)?;
                let right = self.outcomes(b, s)?;
                if left.len().saturating_mul(right.len()) > self.cap.saturating_mul(16) {
                    return Err(MdpError::TooManyActions { state: self.state, cap: self.cap });
                }
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in &left {
                    for r in &right {
                        out.push(normalize(
                            l.iter().map(|(t, x)| (*t, p * x)).chain(r.iter().map(|(t, x)| (*t, &q * x))),
                        ));
                    }
                }
                self.check(out)
            }
            StmtKind::Demonic(a, b) => {
                let mut out = self.outcomes(a, s)?;
                out.extend(self.outcomes(b, s)?);
                self.check(out)
            }
            StmtKind::If(g, a, b) => match self.guard(g, s) {
                Some(true) => self.outcomes(a, s),
                Some(false) => self.outcomes(b, s),
                None => Ok(Self::dirac(self.sink)),
            },
            StmtKind::Loop(..) => Err(MdpError::NestedLoop),
        }
    }
}

/// Builds the MDP of a loop-form model `do G -> body od`: one MDP step is one
/// loop iteration. States failing `G` get a single self-loop. Abort, undefined
/// expressions and out-of-domain assignments lead to an extra absorbing
/// state (index `space.len()`, label `abort`), which is added only when
/// reachable. Every program state is initial. Labels: `guard`, `abort`.
pub fn extract_mdp(model: &Model, space: &StateSpace, action_cap: usize) -> Result<Mdp, MdpError> {
    let (guard, body) = match &model.program.kind {
        StmtKind::Loop(g, body) => (g, body),
        _ => return Err(MdpError::NotLoopForm),
    };
    if !body.is_loop_free() {
        return Err(MdpError::NestedLoop);
    }
    let mut unknown = None;
    model.program.for_each_var(&mut |v| {
        if unknown.is_none() && space.var_index(v).is_none() {
            unknown = Some(String::from(v));
        }
    });
    if let Some(v) = unknown {
        return Err(MdpError::UnknownVariable(v));
    }

    let n = space.len();
    let mut ex = Extractor { space, sink: n, cap: action_cap, state: 0 };
    let mut actions = Vec::with_capacity(n + 1);
    let mut guard_bits = Vec::with_capacity(n + 1);
    for s in 0..n {
        ex.state = s;
        let g = ex.guard(guard, s);
        guard_bits.push(g == Some(true));
        actions.push(match g {
            Some(true) => ex.outcomes(body, s)?,
            Some(false) => Extractor::dirac(s),
            None => Extractor::dirac(n),
        });
    }
    let uses_sink = actions.iter().flatten().flatten().any(|&(t, _)| t == n);
    let mut abort_bits = alloc::vec![false; n];
    if uses_sink {
        actions.push(Extractor::dirac(n));
        guard_bits.push(false);
        abort_bits.push(true);
    }
    let mut names: Vec<String> = (0..n).map(|s| space.describe(s)).collect();
    if uses_sink {
        names.push(String::from("abort"));
    }
    Mdp::new(actions, (0..n).collect())?
        .with_label("guard", guard_bits)?
        .with_label("abort", abort_bits)
        .map(|m| m.with_names(names))
}
