//! Random pGCL programs, predicate sets and expectations, and the algebraic
//! laws the abstract transformer must satisfy on them.

use std::fmt;

use probabs_core::abstraction::{check_info_preserving, cubed, cubes, is_cubed, wp_abs, Partition, PredicateSet};
use probabs_core::lang::{Arith, ArithOp, CmpOp, Pred, Stmt, VarDecl};
use probabs_core::rational::{int, rat, Rational};
use probabs_core::semantics::{enumerate_states, Expectation, SemanticsError, Transformer};
use proptest::prelude::*;
use proptest::sample::select;

/// Kleene iterations allowed per loop before a case is discarded.
pub const FUEL: u64 = 500;

#[derive(Debug, Clone)]
pub struct Case {
    pub decls: Vec<VarDecl>,
    pub p: Stmt,
    pub q: Stmt,
    pub phi: Vec<Pred>,
    pub extra: Vec<Pred>,
    pub e: Vec<Rational>,
    pub e2: Vec<Rational>,
    pub alpha: Rational,
    pub prob: Rational,
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Stats {
    pub checked: usize,
    pub discarded: usize,
    pub ip_p: usize,
    pub ip_both: usize,
}

pub enum Outcome {
    Checked,
    Discarded,
}

#[derive(Debug)]
pub struct Violation(pub String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

const NAMES: [&str; 3] = ["x", "y", "z"];

fn probs() -> Vec<Rational> {
    vec![int(0), rat(1, 4), rat(1, 3), rat(1, 2), rat(2, 3), rat(3, 4), int(1)]
}

fn values() -> Vec<Rational> {
    vec![int(0), int(0), rat(1, 3), rat(1, 2), int(1), int(1), rat(3, 2), int(2)]
}

fn arith(vars: Vec<String>, total: bool) -> BoxedStrategy<Arith> {
    let leaf = prop_oneof![(0i64..4).prop_map(Arith::Num), select(vars).prop_map(|v| Arith::var(&v))];
    let mut ops = vec![ArithOp::Add, ArithOp::Sub, ArithOp::Mul];
    if !total {
        ops.extend([ArithOp::Div, ArithOp::Mod]);
    }
    leaf.prop_recursive(2, 6, 2, move |inner| {
        (select(ops.clone()), inner.clone(), inner)
            .prop_map(|(op, a, b)| Arith::bin(op, a, b))
    })
    .boxed()
}

/// With `total`, no division, so the predicate is defined everywhere.
fn pred(vars: Vec<String>, total: bool) -> BoxedStrategy<Pred> {
    let atom = (select(CmpOp::ALL.to_vec()), arith(vars.clone(), total), arith(vars, total))
        .prop_map(|(op, a, b)| Pred::cmp(op, a, b));
    let leaf = prop_oneof![8 => atom, 1 => Just(Pred::True), 1 => Just(Pred::False)];
    leaf.prop_recursive(2, 4, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Pred::negation),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Pred::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Pred::or(a, b)),
        ]
    })
    .boxed()
}

/// Programs of depth at most 6 over `vars`.
pub fn program(vars: Vec<String>) -> BoxedStrategy<Stmt> {
    let assign = (select(vars.clone()), arith(vars.clone(), false)).prop_map(|(v, e)| Stmt::assign(&v, e));
    let leaf = prop_oneof![6 => assign, 2 => Just(Stmt::skip()), 1 => Just(Stmt::abort())];
    leaf.prop_recursive(5, 24, 2, move |inner| {
        prop_oneof![
            4 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::seq(a, b)),
            4 => (select(probs()), inner.clone(), inner.clone()).prop_map(|(p, a, b)| Stmt::prob(p, a, b)),
            2 => (inner.clone(), inner.clone()).prop_map(|(a, b)| Stmt::demonic(a, b)),
            3 => (pred(vars.clone(), false), inner.clone(), inner.clone()).prop_map(|(g, a, b)| Stmt::ite(g, a, b)),
            1 => (pred(vars.clone(), false), inner).prop_map(|(g, b)| Stmt::looping(g, b)),
        ]
    })
    .boxed()
}

fn phi(vars: Vec<String>, decls: Vec<VarDecl>) -> BoxedStrategy<Vec<Pred>> {
    // every valuation its own cube, so every program is information-preserving
    let fine: Vec<Pred> = decls
        .iter()
        .flat_map(|d| (d.lo..=d.hi).map(move |v| Pred::cmp(CmpOp::Eq, Arith::var(&d.name), Arith::Num(v))))
        .collect();
    prop_oneof![
        6 => prop::collection::vec(pred(vars, true), 0..=3),
        1 => Just(Vec::new()),
        1 => Just(fine),
    ]
    .boxed()
}

pub fn case() -> BoxedStrategy<Case> {
    let decls = prop::collection::vec((1i64..=3, any::<bool>()), 1..=3).prop_map(|ds| {
        ds.into_iter().enumerate().map(|(i, (hi, wrap))| VarDecl::new(NAMES[i], 0, hi, wrap)).collect::<Vec<_>>()
    });
    decls
        .prop_flat_map(|decls| {
            let vars: Vec<String> = decls.iter().map(|d| d.name.clone()).collect();
            (
                Just(decls.clone()),
                program(vars.clone()),
                program(vars.clone()),
                phi(vars.clone(), decls),
                prop::collection::vec(pred(vars, true), 0..=2),
                prop::collection::vec(select(values()), 64),
                prop::collection::vec(select(values()), 64),
                select(vec![int(0), rat(1, 2), int(1), int(3), rat(7, 4)]),
                select(probs()),
            )
        })
        .prop_map(|(decls, p, q, phi, extra, e, e2, alpha, prob)| Case { decls, p, q, phi, extra, e, e2, alpha, prob })
        .boxed()
}

fn le(a: &Expectation, b: &Expectation, law: &str) -> Result<(), Violation> {
    if a.le(b) {
        Ok(())
    } else {
        Err(Violation(format!("{law}: {:?} is not below {:?}", a.values(), b.values())))
    }
}

fn eq(a: &Expectation, b: &Expectation, law: &str) -> Result<(), Violation> {
    if a == b {
        Ok(())
    } else {
        Err(Violation(format!("{law}: {:?} differs from {:?}", a.values(), b.values())))
    }
}

fn cubed_ok(e: &Expectation, part: &Partition, law: &str) -> Result<(), Violation> {
    if is_cubed(e, part) {
        Ok(())
    } else {
        Err(Violation(format!("{law}: {:?} is not cubed", e.values())))
    }
}

/// Checks every law on one case. Cases where some loop does not reach an
/// exact fixed point within [`FUEL`] iterations are discarded.
pub fn check(case: &Case, stats: &mut Stats) -> Result<Outcome, Violation> {
    match check_inner(case, stats) {
        Err(Failure::Fuel) => {
            stats.discarded += 1;
            Ok(Outcome::Discarded)
        }
        Err(Failure::Law(v)) => Err(v),
        Ok(()) => {
            stats.checked += 1;
            Ok(Outcome::Checked)
        }
    }
}

enum Failure {
    Fuel,
    Law(Violation),
}

impl From<Violation> for Failure {
    fn from(v: Violation) -> Self {
        Failure::Law(v)
    }
}

impl From<SemanticsError> for Failure {
    fn from(e: SemanticsError) -> Self {
        match e {
            SemanticsError::FuelExhausted { .. } => Failure::Fuel,
            other => Failure::Law(Violation(format!("unexpected error: {other}"))),
        }
    }
}

fn check_inner(case: &Case, stats: &mut Stats) -> Result<(), Failure> {
    let space = enumerate_states(&case.decls).expect("small space");
    let n = space.len();
    let t = Transformer::new(&space).with_fuel(FUEL);
    let phi: PredicateSet = case.phi.iter().cloned().collect();
    let finer = phi.union(&case.extra.iter().cloned().collect());
    let part = cubes(&phi, &space).expect("predicates over declared variables");
    let part2 = cubes(&finer, &space).expect("predicates over declared variables");
    let e = Expectation::from_values(case.e[..n].to_vec());
    let e2 = Expectation::from_values(case.e2[..n].to_vec());
    let (p, q) = (&case.p, &case.q);
    let wa = |prog: &Stmt, x: &Expectation| wp_abs(&t, prog, x, &part);

    // cubed: reductive, idempotent, monotone
    let ce = cubed(&e, &part);
    le(&ce, &e, "cubed reductive")?;
    eq(&cubed(&ce, &part), &ce, "cubed idempotent")?;
    let upper = e.max(&e2);
    le(&ce, &cubed(&upper, &part), "cubed monotone")?;

    // abstract transformer against the concrete one
    let wp_e = t.wp(p, &e)?;
    let abs_e = wa(p, &e)?;
    le(&abs_e, &wp_e, "wp_abs below wp")?;
    le(&abs_e, &wp_abs(&t, p, &e, &part2)?, "finer abstraction is no less precise")?;
    let abs_e2 = wa(p, &e2)?;
    le(&abs_e.add(&abs_e2), &wa(p, &e.add(&e2))?, "superadditivity")?;
    eq(&abs_e.scale(&case.alpha), &wa(p, &e.scale(&case.alpha))?, "scaling")?;
    let one = Expectation::constant(n, int(1));
    le(&abs_e.monus(&one), &wa(p, &e.monus(&one))?, "truncated subtraction")?;

    // cubed expectations are closed under +, max and min
    let c2 = cubed(&e2, &part);
    cubed_ok(&ce.add(&c2), &part, "sum of cubed")?;
    cubed_ok(&ce.max(&c2), &part, "max of cubed")?;
    cubed_ok(&ce.min(&c2), &part, "min of cubed")?;

    // program operators
    let abs_q = wa(q, &e)?;
    eq(&wa(&Stmt::demonic(p.clone(), q.clone()), &e)?, &abs_e.min(&abs_q), "demonic choice")?;
    let inner = wa(q, &e)?;
    let composed = wa(p, &inner)?;
    let seq = wa(&Stmt::seq(p.clone(), q.clone()), &e)?;
    le(&composed, &seq, "sequential composition")?;
    let pr = &case.prob;
    let mix = abs_e.scale(pr).add(&abs_q.scale(&(int(1) - pr)));
    let choice = wa(&Stmt::prob(pr.clone(), p.clone(), q.clone()), &e)?;
    le(&mix, &choice, "probabilistic choice")?;

    // exactness and compositionality on information-preserving components
    let ip = |prog: &Stmt| check_info_preserving(&t, prog, &phi).map(|r| r.verdict.is_preserving());
    let p_ip = match ip(p) {
        Ok(v) => v,
        Err(probabs_core::abstraction::AbstractionError::Semantics(e)) => return Err(e.into()),
        Err(_) => false,
    };
    if p_ip {
        stats.ip_p += 1;
        for x in [&ce, &c2] {
            eq(&wa(p, x)?, &t.wp(p, x)?, "exact on cubed expectations")?;
        }
        let q_ip = match ip(q) {
            Ok(v) => v,
            Err(probabs_core::abstraction::AbstractionError::Semantics(e)) => return Err(e.into()),
            Err(_) => false,
        };
        if q_ip {
            stats.ip_both += 1;
            let seq_c = wa(&Stmt::seq(p.clone(), q.clone()), &ce)?;
            eq(&wa(p, &wa(q, &ce)?)?, &seq_c, "preserving sequential composition")?;
            let mix_c = wa(p, &ce)?.scale(pr).add(&wa(q, &ce)?.scale(&(int(1) - pr)));
            eq(&mix_c, &wa(&Stmt::prob(pr.clone(), p.clone(), q.clone()), &ce)?, "preserving probabilistic choice")?;
        }
    }
    Ok(())
}
