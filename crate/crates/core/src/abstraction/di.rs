use alloc::vec::Vec;

use super::ip::{check_info_preserving, AbstractionError, IpReport};
use super::partition::PredicateSet;
use crate::lang::{Arith, CmpOp, Pred, Stmt, VarDecl};
use crate::semantics::Transformer;

/// Ψ: every comparison `x Θ y` between distinct declared variables, reduced
/// to one representative per predicate up to negation and symmetry. The
/// representatives are `x = y` (for x declared before y) and `x < y`.
pub fn di_predicates(decls: &[VarDecl], relations: &[CmpOp]) -> PredicateSet {
    // (is_less, a, b) with a, b declaration indices
    let mut keys: Vec<(bool, usize, usize)> = Vec::new();
    for i in 0..decls.len() {
        for j in 0..decls.len() {
            if i == j {
                continue;
            }
            for &op in relations {
                let key = match op {
                    CmpOp::Eq | CmpOp::Ne => (false, i.min(j), i.max(j)),
                    CmpOp::Lt | CmpOp::Ge => (true, i, j),
                    CmpOp::Gt | CmpOp::Le => (true, j, i),
                };
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
    }
    keys.into_iter()
        .map(|(less, a, b)| {
            let op = if less { CmpOp::Lt } else { CmpOp::Eq };
            Pred::cmp(op, Arith::var(&decls[a].name), Arith::var(&decls[b].name))
        })
        .collect()
}

/// Checks data independence: information preservation against Ψ built from
/// every declared variable and every comparison.
pub fn check_data_independent(t: &Transformer<'_>, prog: &Stmt) -> Result<IpReport, AbstractionError> {
    let psi = di_predicates(t.space().vars(), &CmpOp::ALL);
    check_info_preserving(t, prog, &psi)
}
