mod support;

use probabs_core::abstraction::{check_info_preserving, cubes, PredicateSet};
use probabs_core::lang::{parse_model, parse_predicate, Opt, StmtKind};
use probabs_core::mdp::{extract_mdp, pbounded, quotient_mdp, Value, DEFAULT_ACTION_CAP};
use probabs_core::rational::Rational;
use probabs_core::semantics::{enumerate_states, eval_pred, Expectation, Transformer};
use support::corpus::{CANDIDATE_PHI, LOOP_MODELS};

fn finite(v: &Value) -> Rational {
    v.finite().expect("bounded queries are finite").clone()
}

#[test]
fn bounded_loop_matches_mdp_for_every_post_state() {
    for (name, src) in LOOP_MODELS {
        let model = parse_model(src).unwrap();
        let space = enumerate_states(&model.decls).unwrap();
        let StmtKind::Loop(guard, body) = &model.program.kind else { panic!("{name} is not loop-form") };
        let mdp = extract_mdp(&model, &space, DEFAULT_ACTION_CAP).unwrap();
        let t = Transformer::new(&space);
        let exits: Vec<bool> =
            (0..space.len()).map(|s| eval_pred(guard, &space, &space.valuation(s)) == Ok(false)).collect();
        // every point-mass post-expectation, plus termination itself
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
                    assert_eq!(w[s], finite(&p.values[s]), "{name}, k = {k}, state {}", space.describe(s));
                }
            }
        }
    }
}

#[test]
fn quotient_is_exact_for_preserving_bodies() {
    let mut exercised = 0;
    for (name, preds) in CANDIDATE_PHI {
        let src = LOOP_MODELS.iter().find(|(n, _)| n == name).unwrap().1;
        let model = parse_model(src).unwrap();
        let space = enumerate_states(&model.decls).unwrap();
        let StmtKind::Loop(_, body) = &model.program.kind else { unreachable!() };
        let phi: PredicateSet = preds.iter().map(|p| parse_predicate(p).unwrap()).collect();
        let t = Transformer::new(&space);
        if !check_info_preserving(&t, body, &phi).unwrap().verdict.is_preserving() {
            continue;
        }
        exercised += 1;
        println!("preserving: {name} {preds:?}");
        let mdp = extract_mdp(&model, &space, DEFAULT_ACTION_CAP).unwrap();
        let part = cubes(&phi, &space).unwrap();
        let mut block_of = part.assignment().to_vec();
        let mut blocks = part.len();
        if mdp.len() > space.len() {
            block_of.push(blocks);
            blocks += 1;
        }
        let q = quotient_mdp(&mdp, &block_of, blocks).unwrap();
        // every cube-constant target: each subset of cubes
        for mask in 0u32..(1 << part.len()) {
            let concrete: Vec<bool> = (0..mdp.len()).map(|s| s < space.len() && mask >> block_of[s] & 1 == 1).collect();
            let abstract_: Vec<bool> = (0..blocks).map(|b| b < part.len() && mask >> b & 1 == 1).collect();
            for opt in [Opt::Min, Opt::Max] {
                for k in 0..=8 {
                    let c = pbounded(&mdp, &concrete, k, opt);
                    let a = pbounded(&q, &abstract_, k, opt);
                    for (s, &b) in block_of.iter().enumerate() {
                        assert_eq!(c.values[s], a.values[b], "{name} {preds:?} k={k} {opt} mask={mask}");
                    }
                }
            }
        }
    }
    assert!(exercised >= 3, "only {exercised} preserving cases");
}

#[test]
fn quotient_loses_precision_without_preservation() {
    let model = parse_model(LOOP_MODELS[0].1).unwrap();
    let space = enumerate_states(&model.decls).unwrap();
    let mdp = extract_mdp(&model, &space, DEFAULT_ACTION_CAP).unwrap();
    let phi: PredicateSet = ["x = 3"].iter().map(|p| parse_predicate(p).unwrap()).collect();
    let part = cubes(&phi, &space).unwrap();
    let q = quotient_mdp(&mdp, part.assignment(), part.len()).unwrap();
    let x3 = part.cube_of(3);
    let concrete: Vec<bool> = (0..4).map(|s| s == 3).collect();
    let abstract_: Vec<bool> = (0..part.len()).map(|b| b == x3).collect();
    let c = pbounded(&mdp, &concrete, 2, Opt::Min);
    let a = pbounded(&q, &abstract_, 2, Opt::Min);
    assert!((0..4).any(|s| c.values[s] != a.values[part.cube_of(s)]));
    assert!(!q.is_deterministic());
}
