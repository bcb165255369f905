use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::model::{normalize, Distribution, Mdp, MdpError};

/// Lifts `m` to blocks: block `b` gets every action of every member state,
/// with successor probabilities summed per block; duplicates are merged. A
/// label holds on a block when it holds on all its members.
///
/// Panics if `block_of` is shorter than the state count or mentions a block
/// `>= blocks`, or if some block has no member.
pub fn quotient_mdp(m: &Mdp, block_of: &[usize], blocks: usize) -> Result<Mdp, MdpError> {
    assert_eq!(block_of.len(), m.len(), "one block per state");
    let mut actions: Vec<Vec<Distribution>> = alloc::vec![Vec::new(); blocks];
    for s in 0..m.len() {
        let b = block_of[s];
        for d in m.actions(s) {
            let lifted = normalize(d.iter().map(|(t, p)| (block_of[*t], p.clone())));
            if !actions[b].contains(&lifted) {
                actions[b].push(lifted);
            }
        }
    }
    let initial = m.initial().iter().map(|&s| block_of[s]).collect();
    let mut q = Mdp::new(actions, initial)?;
    let labels: BTreeMap<_, _> = m
        .labels()
        .iter()
        .map(|(name, bits)| {
            let mut lifted = alloc::vec![true; blocks];
            for (s, &bit) in bits.iter().enumerate() {
                lifted[block_of[s]] &= bit;
            }
            (name.clone(), lifted)
        })
        .collect();
    for (name, bits) in labels {
        q = q.with_label(&name, bits)?;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abstraction::{cubes, PredicateSet};
    use crate::lang::{parse_model, parse_predicate};
    use crate::mdp::{extract_mdp, DEFAULT_ACTION_CAP};
    use crate::rational::{int, rat};
    use crate::semantics::enumerate_states;
    use alloc::vec;

    fn quotient(src: &str, preds: &[&str]) -> Mdp {
        let m = parse_model(src).unwrap();
        let space = enumerate_states(&m.decls).unwrap();
        let mdp = extract_mdp(&m, &space, DEFAULT_ACTION_CAP).unwrap();
        let phi: PredicateSet = preds.iter().map(|p| parse_predicate(p).unwrap()).collect();
        let part = cubes(&phi, &space).unwrap();
        quotient_mdp(&mdp, part.assignment(), part.len()).unwrap()
    }

    #[test]
    fn inc_quotient_is_nondeterministic() {
        let q = quotient("var x:0..3 wrap; do true -> x := x/2 [1/2] x := x+1 od", &["x=0 | x=2"]);
        // block 0 = even, block 1 = odd
        assert_eq!(q.actions(0), &[vec![(0, rat(1, 2)), (1, rat(1, 2))], vec![(1, int(1))]]);
        assert!(!q.is_deterministic());
    }

    #[test]
    fn two_flip_quotient_is_deterministic() {
        let src = "var x:0..1; var y:0..1; do true -> (x := 0 [1/2] x := 1); (y := 0 [1/2] y := 1) od";
        let q = quotient(src, &["x=y"]);
        assert_eq!(q.len(), 2);
        assert!(q.is_deterministic());
        assert_eq!(q.actions(0), &[vec![(0, rat(1, 2)), (1, rat(1, 2))]]);
    }

    #[test]
    fn singleton_quotient_is_identity() {
        let m = parse_model("var x:0..3 wrap; do x != 2 -> x := x/2 [1/3] x := x+1 od").unwrap();
        let space = enumerate_states(&m.decls).unwrap();
        let mdp = extract_mdp(&m, &space, DEFAULT_ACTION_CAP).unwrap();
        let ids: Vec<usize> = (0..mdp.len()).collect();
        let q = quotient_mdp(&mdp, &ids, mdp.len()).unwrap();
        assert_eq!(q.all_actions(), mdp.all_actions());
        assert_eq!(q.labels(), mdp.labels());
    }
}
