use alloc::vec::Vec;

use super::expectation::Expectation;
use super::wp::{SemanticsError, Transformer};
use crate::lang::Stmt;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `wp.P.E ≤ wp.Q.E` fails at `state` for the witness `E`.
    Refuted {
        witness: Expectation,
        /// Index into the caller's extra witnesses, `None` for a generated point indicator.
        extra_index: Option<usize>,
        state: usize,
        wp_p: Rational,
        wp_q: Rational,
    },
    /// No witness separates the programs. This is not a refinement proof.
    NotRefuted { witnesses_checked: usize },
}

/// Searches for an expectation showing `P ⋢ Q`. Generated witnesses are the
/// indicators of each single state; `extras` are tried afterwards.
pub fn check_refinement_refute(
    t: &Transformer<'_>,
    p: &Stmt,
    q: &Stmt,
    extras: &[Expectation],
) -> Result<Verdict, SemanticsError> {
    let n = t.space().len();
    let generated = (0..n).map(|i| {
        let mut bits = alloc::vec![false; n];
        bits[i] = true;
        (None, Expectation::indicator(&bits))
    });
    let extra = extras.iter().enumerate().map(|(i, e)| (Some(i), e.clone()));
    let mut checked = 0;
    for (extra_index, e) in generated.chain(extra).collect::<Vec<_>>() {
        checked += 1;
        let wp_p = t.wp(p, &e)?;
        let wp_q = t.wp(q, &e)?;
        if let Some(state) = (0..n).find(|&s| wp_p[s] > wp_q[s]) {
            return Ok(Verdict::Refuted {
                witness: e,
                extra_index,
                state,
                wp_p: wp_p[state].clone(),
                wp_q: wp_q[state].clone(),
            });
        }
    }
    Ok(Verdict::NotRefuted { witnesses_checked: checked })
}
