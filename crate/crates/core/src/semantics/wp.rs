use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use super::eval::{eval_arith, eval_pred};
use super::expectation::Expectation;
use super::space::StateSpace;
use crate::lang::{Pred, Stmt, StmtKind};
use crate::rational::{one, Rational};

/// Default bound on Kleene iterations per loop.
pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    UnknownVariable(String),
    /// Some loop did not reach an exact fixed point within the fuel. The
    /// partial result is still a lower bound on the true pre-expectation.
    FuelExhausted { lower_bound: Expectation, iterations: u64 },
    SpaceMismatch { expected: usize, found: usize },
}

impl fmt::Display for SemanticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemanticsError::UnknownVariable(v) => write!(f, "undeclared variable `{v}`"),
            SemanticsError::FuelExhausted { iterations, .. } => {
                write!(f, "loop iteration did not converge after {iterations} iterations (result is a lower bound)")
            }
            SemanticsError::SpaceMismatch { expected, found } => {
                write!(f, "expectation has {found} entries, state space has {expected}")
            }
        }
    }
}

impl core::error::Error for SemanticsError {}

impl SemanticsError {
    /// The sound lower bound carried by a fuel-exhaustion error.
    pub fn lower_bound(&self) -> Option<&Expectation> {
        match self {
            SemanticsError::FuelExhausted { lower_bound, .. } => Some(lower_bound),
            _ => None,
        }
    }
}

/// Computes weakest pre-expectations over one enumerated state space.
#[derive(Debug, Clone)]
pub struct Transformer<'a> {
    space: &'a StateSpace,
    fuel: u64,
}

/// Tracks whether any loop stopped on fuel rather than an exact fixed point.
#[derive(Default)]
struct Budget {
    exhausted_after: Option<u64>,
}

/// Per-state guard value; `None` where evaluating the guard is undefined.
fn guard_values(g: &Pred, space: &StateSpace) -> Vec<Option<bool>> {
    (0..space.len()).map(|s| eval_pred(g, space, &space.valuation(s)).ok()).collect()
}

impl<'a> Transformer<'a> {
    pub fn new(space: &'a StateSpace) -> Self {
        Transformer { space, fuel: DEFAULT_FUEL }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn space(&self) -> &'a StateSpace {
        self.space
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    fn precheck(&self, prog: &Stmt, post: &Expectation) -> Result<(), SemanticsError> {
        if post.len() != self.space.len() {
            return Err(SemanticsError::SpaceMismatch { expected: self.space.len(), found: post.len() });
        }
        let mut missing = None;
        prog.for_each_var(&mut |v| {
            if missing.is_none() && self.space.var_index(v).is_none() {
                missing = Some(String::from(v));
            }
        });
        match missing {
            Some(v) => Err(SemanticsError::UnknownVariable(v)),
            None => Ok(()),
        }
    }

    fn finish(value: Expectation, budget: Budget) -> Result<Expectation, SemanticsError> {
        match budget.exhausted_after {
            None => Ok(value),
            Some(iterations) => Err(SemanticsError::FuelExhausted { lower_bound: value, iterations }),
        }
    }

    /// `wp.prog.post`.
    pub fn wp(&self, prog: &Stmt, post: &Expectation) -> Result<Expectation, SemanticsError> {
        self.precheck(prog, post)?;
        let mut budget = Budget::default();
        let value = self.go(prog, post, &mut budget);
        Self::finish(value, budget)
    }

    /// Probability-style bounded loop query: the expected value of `post` on
    /// exit when the loop `do guard -> body od` runs at most `k` iterations.
    ///
    /// `X_0 = [¬G]·E`, `X_{i+1} = [¬G]·E + [G]·wp.body.X_i`; returns `X_k`.
    pub fn wp_bounded_loop(
        &self,
        guard: &Pred,
        body: &Stmt,
        post: &Expectation,
        k: u64,
    ) -> Result<Expectation, SemanticsError> {
        let wrapped = Stmt::looping(guard.clone(), body.clone());
        self.precheck(&wrapped, post)?;
        let g = guard_values(guard, self.space);
        let mut budget = Budget::default();
        let mut x = self.step(&g, post, &Expectation::zero(post.len()), body, &mut budget, true);
        for _ in 0..k {
            x = self.step(&g, post, &x, body, &mut budget, false);
        }
        Self::finish(x, budget)
    }

    /// The first `n` Kleene iterates of a loop, starting from the zero expectation.
    pub fn kleene_iterates(
        &self,
        guard: &Pred,
        body: &Stmt,
        post: &Expectation,
        n: usize,
    ) -> Result<Vec<Expectation>, SemanticsError> {
        let wrapped = Stmt::looping(guard.clone(), body.clone());
        self.precheck(&wrapped, post)?;
        let g = guard_values(guard, self.space);
        let mut budget = Budget::default();
        let mut out = Vec::with_capacity(n);
        let mut x = Expectation::zero(post.len());
        for _ in 0..n {
            x = self.step(&g, post, &x, body, &mut budget, false);
            out.push(x.clone());
        }
        match budget.exhausted_after {
            None => Ok(out),
            Some(iterations) => Err(SemanticsError::FuelExhausted { lower_bound: x, iterations }),
        }
    }

    /// One application of `X ↦ [¬G]·E + [G]·wp.body.X`. With `exit_only`
    /// the body term is dropped, giving `[¬G]·E`.
    fn step(
        &self,
        g: &[Option<bool>],
        post: &Expectation,
        x: &Expectation,
        body: &Stmt,
        budget: &mut Budget,
        exit_only: bool,
    ) -> Expectation {
        let inner = if exit_only { None } else { Some(self.go(body, x, budget)) };
        g.iter()
            .enumerate()
            .map(|(s, gv)| match gv {
                Some(false) => post[s].clone(),
                Some(true) => inner.as_ref().map_or_else(Rational::zero, |w| w[s].clone()),
                None => Rational::zero(),
            })
            .collect()
    }

    fn go(&self, prog: &Stmt, post: &Expectation, budget: &mut Budget) -> Expectation {
        let space = self.space;
        match &prog.kind {
            StmtKind::Skip => post.clone(),
            StmtKind::Abort => Expectation::zero(post.len()),
            StmtKind::Assign(var, rhs) => {
                let vi = space.var_index(var).expect("prechecked");
                let decl = &space.vars()[vi];
                let stride = space.stride(vi) as i64;
                (0..space.len())
                    .map(|s| {
                        let vals = space.valuation(s);
                        // undefined or out-of-domain results behave as abort
                        match eval_arith(rhs, space, &vals).ok().and_then(|v| decl.fit(v)) {
                            Some(v) => post[(s as i64 + (v - vals[vi]) * stride) as usize].clone(),
                            None => Rational::zero(),
                        }
                    })
                    .collect()
            }
            StmtKind::Seq(a, b) => {
                let mid = self.go(b, post, budget);
                self.go(a, &mid, budget)
            }
            StmtKind::Prob(p, a, b) => {
                let wa = self.go(a, post, budget);
                let wb = self.go(b, post, budget);
                let q = one() - p;
                wa.zip_with(&wb, |x, y| p * x + &q * y)
            }
            StmtKind::Demonic(a, b) => {
                let wa = self.go(a, post, budget);
                let wb = self.go(b, post, budget);
                wa.min(&wb)
            }
            StmtKind::If(g, a, b) => {
                let gv = guard_values(g, space);
                let wa = self.go(a, post, budget);
                let wb = self.go(b, post, budget);
                gv.iter()
                    .enumerate()
                    .map(|(s, v)| match v {
                        Some(true) => wa[s].clone(),
                        Some(false) => wb[s].clone(),
                        None => Rational::zero(),
                    })
                    .collect()
            }
            StmtKind::Loop(g, body) => {
                let gv = guard_values(g, space);
                let mut x = Expectation::zero(post.len());
                let mut iterations = 0u64;
                loop {
                    let next = self.step(&gv, post, &x, body, budget, false);
                    if next == x {
                        return x;
                    }
                    x = next;
                    iterations += 1;
                    if iterations >= self.fuel {
                        let prev = budget.exhausted_after.unwrap_or(0);
                        budget.exhausted_after = Some(prev.max(iterations));
                        return x;
                    }
                }
            }
        }
    }
}
