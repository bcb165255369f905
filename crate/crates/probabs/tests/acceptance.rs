//! Acceptance run: one PASS/FAIL line per criterion, details indented below
//! it. The test fails if any criterion fails.

#[allow(dead_code)]
#[path = "../../core/tests/support/corpus.rs"]
mod corpus;
#[allow(dead_code)]
#[path = "../../core/tests/support/laws.rs"]
mod laws;

use std::cell::RefCell;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use probabs_core::abstraction::{check_info_preserving, cubes, recheck_witness, wp_abs, PredicateSet};
use probabs_core::lang::{parse_expectation, parse_model, parse_predicate, Model, Opt, Pred, Stmt, StmtKind};
use probabs_core::mdp::{extract_mdp, pbounded, quotient_mdp, Mdp, DEFAULT_ACTION_CAP};
use probabs_core::rabin::{
    abstract_mdp, check_invariants, run_queries, simulate, truncated_mdp, truncated_reward_bounds,
    AbstractState, Convention, Init, RabinState, Scheduler, TruncatedState, DEFAULT_STATE_LIMIT,
};
use probabs_core::rational::to_f64;
use probabs_core::semantics::{enumerate_states, eval_pred, Expectation, StateSpace, Transformer};
use proptest::test_runner::{Config, TestCaseError, TestRunner};

const INC: &str = include_str!("../../../models/inc.pgcl");
const TWO_FLIP: &str = include_str!("../../../models/two_flip.pgcl");

/// Lines collected for one criterion.
#[derive(Default)]
struct Log {
    lines: Vec<String>,
    failed: bool,
}

impl Log {
    fn info(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.lines.push(format!("{} {what}", if ok { "ok:      " } else { "MISMATCH:" }));
        self.failed |= !ok;
    }
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn(&mut Log),
}

fn load(src: &str) -> (Model, StateSpace) {
    let m = parse_model(src).unwrap();
    let s = enumerate_states(&m.decls).unwrap();
    (m, s)
}

fn exp(text: &str, space: &StateSpace) -> Expectation {
    Expectation::eval(&parse_expectation(text).unwrap(), space).unwrap()
}

fn show(e: &Expectation) -> String {
    format!("({})", e.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "))
}

fn phi(preds: &[&str]) -> PredicateSet {
    preds.iter().map(|p| parse_predicate(p).unwrap()).collect()
}

/// The MDP of a straight-line program, one step per run, and its quotient by
/// the cubes of `phi`.
fn quotient_of(model: &Model, space: &StateSpace, phi: &PredicateSet) -> Mdp {
    let looped = Model { decls: model.decls.clone(), program: Stmt::looping(Pred::True, model.program.clone()) };
    let m = extract_mdp(&looped, space, DEFAULT_ACTION_CAP).unwrap();
    let part = cubes(phi, space).unwrap();
    quotient_mdp(&m, part.assignment(), part.len()).unwrap()
}

fn worked_examples(log: &mut Log) {
    let (inc, space) = load(INC);
    let t = Transformer::new(&space);
    let p = &inc.program;
    let even = phi(&["x = 0 | x = 2"]);
    let part = cubes(&even, &space).unwrap();

    let mut eq = |name: &str, got: Expectation, want: Expectation| {
        log.check(got == want, format!("{name}: got {}, expected {}", show(&got), show(&want)));
    };
    eq("wp(inc, [x=1]) = [x=0|x=2]/2", t.wp(p, &exp("[x=1]", &space)).unwrap(), exp("[x=0|x=2]/2", &space));
    eq(
        "wp(inc, [x=0|x=2]) = [x=0|x=3]/2 + [x=1]",
        t.wp(p, &exp("[x=0|x=2]", &space)).unwrap(),
        exp("[x=0|x=3]/2 + [x=1]", &space),
    );
    eq(
        "wp_abs(inc, [x=0|x=2]) = [x=1|x=3]/2",
        wp_abs(&t, p, &exp("[x=0|x=2]", &space), &part).unwrap(),
        exp("[x=1|x=3]/2", &space),
    );
    eq(
        "wp_abs(inc, [x=1|x=3]) = [x=0|x=2]/2",
        wp_abs(&t, p, &exp("[x=1|x=3]", &space), &part).unwrap(),
        exp("[x=0|x=2]/2", &space),
    );

    let twice = Stmt::seq(p.clone(), p.clone());
    let post = exp("[x=0|x=2]", &space);
    let whole = wp_abs(&t, &twice, &post, &part).unwrap();
    let stepwise = wp_abs(&t, p, &wp_abs(&t, p, &post, &part).unwrap(), &part).unwrap();
    eq("wp_abs(inc;inc, [even]) = 3/4[even] + 1/4[odd]", whole.clone(), exp("3/4*[x=0|x=2] + 1/4*[x=1|x=3]", &space));
    eq("wp_abs(inc, wp_abs(inc, [even])) = [even]/4", stepwise.clone(), exp("[x=0|x=2]/4", &space));
    let lower = exp("3/4*[x=0|x=2]", &space);
    log.check(
        lower.le(&whole) && stepwise.le(&whole) && stepwise != whole,
        "3[even]/4 <= wp_abs(inc;inc) and the stepwise value is strictly below it",
    );

    let (flip, fspace) = load(TWO_FLIP);
    let ft = Transformer::new(&fspace);
    let eqxy = phi(&["x = y"]);
    let r = check_info_preserving(&ft, &flip.program, &eqxy).unwrap();
    log.check(r.verdict.is_preserving(), "twoFlip with {x = y} is preserving");
    let r = check_info_preserving(&t, p, &even).unwrap();
    // inc has no demonic choice, so its only component is the program itself
    let rechecked = r.witness().map(|(_, w)| recheck_witness(&t, p, &even, w).unwrap());
    log.check(!r.verdict.is_preserving() && rechecked == Some(true), "inc with {x=0|x=2} is not preserving, witness re-checks");
    log.check(quotient_of(&flip, &fspace, &eqxy).is_deterministic(), "twoFlip quotient is deterministic");
    log.check(!quotient_of(&inc, &space, &even).is_deterministic(), "inc quotient is nondeterministic");
}

fn property_suite(log: &mut Log) {
    let mut runner = TestRunner::new(Config { cases: 300, failure_persistence: None, ..Config::default() });
    let stats = RefCell::new(laws::Stats::default());
    let res = runner.run(&laws::case(), |c| {
        laws::check(&c, &mut stats.borrow_mut()).map(|_| ()).map_err(|v| TestCaseError::fail(v.0))
    });
    let s = stats.into_inner();
    log.info(format!("{s:?}"));
    match res {
        Ok(()) => log.check(true, "zero law violations"),
        Err(e) => log.check(false, format!("violation: {e}")),
    }
    log.check(s.checked >= 200, format!("{} randomized models checked (need 200)", s.checked));
    log.check(s.ip_p > 0 && s.ip_both > 0, "information-preserving subset exercised (exactness and composition laws)");
}

fn oracle(log: &mut Log) {
    let mut compared = 0usize;
    let mut bad = 0usize;
    for (name, src) in corpus::LOOP_MODELS {
        let (model, space) = load(src);
        let StmtKind::Loop(guard, body) = &model.program.kind else { unreachable!() };
        let mdp = extract_mdp(&model, &space, DEFAULT_ACTION_CAP).unwrap();
        let t = Transformer::new(&space);
        let exits: Vec<bool> = (0..space.len()).map(|s| eval_pred(guard, &space, &space.valuation(s)) == Ok(false)).collect();
        let mut posts: Vec<Vec<bool>> = (0..space.len()).map(|s| (0..space.len()).map(|u| u == s).collect()).collect();
        posts.push(vec![true; space.len()]);
        for post in posts {
            let e = Expectation::indicator(&post);
            let mut target: Vec<bool> = (0..space.len()).map(|s| exits[s] && post[s]).collect();
            target.resize(mdp.len(), false);
            for k in 0..=8 {
                let w = t.wp_bounded_loop(guard, body, &e, k).unwrap();
                let p = pbounded(&mdp, &target, k, Opt::Min);
                for s in 0..space.len() {
                    compared += 1;
                    if p.values[s].finite() != Some(&w[s]) {
                        bad += 1;
                        log.info(format!("{name} k={k} {}: wp {} vs mdp {}", space.describe(s), w[s], p.values[s]));
                    }
                }
            }
        }
    }
    log.check(bad == 0, format!("wp_bounded_loop = Pmin bounded reachability at {compared} (model, post, k, state) points"));

    let mut exercised = Vec::new();
    let mut qbad = 0usize;
    for (name, preds) in corpus::CANDIDATE_PHI {
        let src = corpus::LOOP_MODELS.iter().find(|(n, _)| n == name).unwrap().1;
        let (model, space) = load(src);
        let StmtKind::Loop(guard, body) = &model.program.kind else { unreachable!() };
        let ps = phi(preds);
        let part = cubes(&ps, &space).unwrap();
        let gbits: Vec<bool> = (0..space.len()).map(|s| eval_pred(guard, &space, &space.valuation(s)) == Ok(true)).collect();
        let t = Transformer::new(&space);
        if !part.respects(&gbits) || !check_info_preserving(&t, body, &ps).unwrap().verdict.is_preserving() {
            continue;
        }
        exercised.push(format!("{name} {preds:?}"));
        let mdp = extract_mdp(&model, &space, DEFAULT_ACTION_CAP).unwrap();
        let mut block_of = part.assignment().to_vec();
        let mut blocks = part.len();
        if mdp.len() > space.len() {
            block_of.push(blocks);
            blocks += 1;
        }
        let q = quotient_mdp(&mdp, &block_of, blocks).unwrap();
        for mask in 0u32..(1 << part.len()) {
            let conc: Vec<bool> = (0..mdp.len()).map(|s| s < space.len() && mask >> block_of[s] & 1 == 1).collect();
            let abs: Vec<bool> = (0..blocks).map(|b| b < part.len() && mask >> b & 1 == 1).collect();
            for opt in [Opt::Min, Opt::Max] {
                for k in 0..=8 {
                    let c = pbounded(&mdp, &conc, k, opt);
                    let a = pbounded(&q, &abs, k, opt);
                    qbad += (0..mdp.len()).filter(|&s| c.values[s] != a.values[block_of[s]]).count();
                }
            }
        }
    }
    log.info(format!("preserving cases with the guard a union of cubes: {exercised:?}"));
    log.check(!exercised.is_empty() && qbad == 0, format!("quotient values equal concrete values ({qbad} mismatches)"));
}

fn rabin_invariants(log: &mut Log) {
    let scheds = [Scheduler::UniformRandom, Scheduler::RoundRobin, Scheduler::Adversarial];
    for n in [2u32, 3] {
        let (mut gap2, mut gap3, mut count, mut unfinished, mut max_gap) = (0, 0, 0, 0, 0);
        let mut example = None;
        for i in 0..10_000u64 {
            let a = (i % (n as u64 + 1)) as u32;
            let tr = simulate(a, n - a, scheds[(i % 3) as usize], i, 100_000, Convention::Step);
            let inv = check_invariants(&tr);
            if !inv.gap_over_2.is_empty() {
                gap2 += 1;
                if example.is_none() {
                    let s: &RabinState = &tr.states[inv.gap_over_2[0]];
                    example = Some(format!("trace {i} step {}: L = {}, R = {}", inv.gap_over_2[0], s.board_l, s.board_r));
                }
            }
            gap3 += !inv.gap_over_3.is_empty() as usize;
            count += !inv.count_changed.is_empty() as usize;
            unfinished += !tr.terminated as usize;
            max_gap = max_gap.max(tr.states.iter().map(|s| s.gap().abs()).max().unwrap());
        }
        log.check(gap2 == 0, format!("N={n}: |L-R| <= 2 violated in {gap2} of 10000 traces (max |L-R| = {max_gap})"));
        if let Some(e) = example {
            log.info(format!("  first violation: {e}"));
        }
        log.check(count == 0, format!("N={n}: tourist count conserved in every trace ({count} violations)"));
        log.info(format!("  N={n}: |L-R| <= 3 violated in {gap3} traces; {unfinished} traces unfinished"));
    }
    for (a, b) in [(1, 0), (0, 1)] {
        let ok = scheds.iter().all(|&s| {
            let t = simulate(a, b, s, 1, 100, Convention::Step);
            t.terminated && t.steps() == 2
        });
        log.check(ok, format!("single tourist at split ({a},{b}) terminates in exactly 2 steps"));
    }
}

fn soundness(log: &mut Log) {
    let mut worst = 0.0f64;
    let mut points = 0;
    for n in [2u32, 3] {
        for conv in [Convention::Step, Convention::Sweep] {
            let abs = abstract_mdp(Init::AllSplits(n), conv, DEFAULT_STATE_LIMIT).unwrap();
            let at = abs.target();
            for t in 0..=10u64 {
                let conc = truncated_mdp(Init::AllSplits(n), 3 * t as u32 + 3, conv, DEFAULT_STATE_LIMIT).unwrap();
                let ct = conc.target();
                for opt in [Opt::Min, Opt::Max] {
                    let c = pbounded(&conc.mdp, &ct, t, opt);
                    let a = pbounded(&abs.mdp, &at, t, opt);
                    for (sa, sb) in Init::AllSplits(n).splits() {
                        let ci = conc.states.iter().position(|s| *s == TruncatedState::Concrete(RabinState::initial(sa, sb))).unwrap();
                        let ai = abs.states.iter().position(|s| *s == AbstractState::initial(sa, sb)).unwrap();
                        let d = (c.values[ci].to_f64() - a.values[ai].to_f64()).abs();
                        worst = worst.max(d);
                        points += 1;
                        if d > 1e-6 {
                            log.info(format!("N={n} {conv:?} T={t} {opt} split ({sa},{sb}): {} vs {}", c.values[ci], a.values[ai]));
                        }
                    }
                }
            }
        }
    }
    log.check(worst <= 1e-6, format!("abstract = truncated (cap 3T+3) at {points} points, max difference {worst:e}"));

    for n in [2u32, 3] {
        for conv in [Convention::Step, Convention::Sweep] {
            let r = run_queries(Init::AllSplits(n), 60, conv, DEFAULT_STATE_LIMIT).unwrap();
            let monotone = r.curve.windows(2).all(|w| w[0].pmin <= w[1].pmin);
            let reach = r.curve.iter().find(|c| to_f64(&c.pmin) > 0.99).map(|c| c.t);
            log.check(
                monotone && reach.is_some(),
                format!("N={n} {conv:?}: Pmin curve non-decreasing, exceeds 0.99 at T = {reach:?}"),
            );
        }
    }
}

/// Expected-rounds values the abstract model is compared against.
const TABLE: [(u32, &str, &str); 2] = [(2, "2", "7"), (3, "2", "11")];

fn table(log: &mut Log) {
    let mut matching = Vec::new();
    let mut cross_ok = true;
    for conv in [Convention::Step, Convention::Sweep] {
        let mut all = true;
        for (n, rmin, rmax) in TABLE {
            let r = run_queries(Init::AllSplits(n), 10, conv, DEFAULT_STATE_LIMIT).unwrap();
            let (lo, hi) = truncated_reward_bounds(Init::AllSplits(n), 33, conv, DEFAULT_STATE_LIMIT).unwrap();
            let hit = r.rmin.to_string() == rmin && r.rmax.to_string() == rmax;
            all &= hit;
            log.info(format!(
                "{conv:?} N={n}: Rmin = {}, Rmax = {} (target {rmin}, {rmax}); truncated cap 33 lower bounds {:.6}, {:.6}",
                r.rmin,
                r.rmax,
                lo.to_f64(),
                hi.to_f64()
            ));
            for s in &r.splits {
                log.info(format!("    split ({},{}): Rmin = {}, Rmax = {}", s.a, s.b, s.rmin, s.rmax));
            }
            let close = |b: f64, v: f64| b <= v + 1e-12 && v - b < 1e-3;
            cross_ok &= close(lo.to_f64(), r.rmin.to_f64()) && close(hi.to_f64(), r.rmax.to_f64());
        }
        if all {
            matching.push(conv);
        }
    }
    log.check(cross_ok, "truncated lower bounds converge to the abstract values (gap < 1e-3 at cap 33)");
    if matching.is_empty() {
        log.info("no convention reproduces the target table; outcome (b): values of both conventions reported above");
    } else {
        log.info(format!("outcome (a): {matching:?} reproduces the target table"));
    }
}

#[test]
fn acceptance() {
    let criteria = [
        Criterion { name: "worked-example exactness", budget: Duration::from_secs(1), run: worked_examples },
        Criterion { name: "property suite", budget: Duration::from_secs(120), run: property_suite },
        Criterion { name: "transformer/MDP oracle equivalence", budget: Duration::from_secs(60), run: oracle },
        Criterion { name: "Rabin invariants", budget: Duration::from_secs(60), run: rabin_invariants },
        Criterion { name: "Rabin abstraction soundness", budget: Duration::from_secs(300), run: soundness },
        Criterion { name: "expected-rounds table (both conventions)", budget: Duration::from_secs(300), run: table },
    ];
    let mut failed = Vec::new();
    for c in criteria {
        let mut log = Log::default();
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)(&mut log)));
        let elapsed = start.elapsed();
        if outcome.is_err() {
            log.check(false, "panicked");
        }
        log.check(elapsed <= c.budget, format!("runtime {:.2?} within {:?}", elapsed, c.budget));
        println!("{} {}", if log.failed { "FAIL" } else { "PASS" }, c.name);
        for l in &log.lines {
            println!("    {l}");
        }
        if log.failed {
            failed.push(c.name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
