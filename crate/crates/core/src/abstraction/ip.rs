use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::partition::{cubed, cubes, is_cubed, Partition, PredicateSet};
use crate::lang::Stmt;
use crate::rational::Rational;
use crate::semantics::{EvalError, Expectation, SemanticsError, StateSpace, Transformer};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbstractionError {
    Semantics(SemanticsError),
    Eval(EvalError),
    /// A component still contains demonic choice below its top level.
    NotDecomposable { component: String },
}

impl fmt::Display for AbstractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbstractionError::Semantics(e) => write!(f, "{e}"),
            AbstractionError::Eval(e) => write!(f, "{e}"),
            AbstractionError::NotDecomposable { component } => write!(
                f,
                "component `{component}` contains nested demonic choice; rewrite the program as a top-level \
                 choice `P1 [] P2 [] ...` of deterministic components"
            ),
        }
    }
}

impl core::error::Error for AbstractionError {}

impl From<SemanticsError> for AbstractionError {
    fn from(e: SemanticsError) -> Self {
        AbstractionError::Semantics(e)
    }
}

impl From<EvalError> for AbstractionError {
    fn from(e: EvalError) -> Self {
        AbstractionError::Eval(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IpVerdict {
    Preserving,
    NotPreserving,
}

impl IpVerdict {
    pub fn is_preserving(self) -> bool {
        self == IpVerdict::Preserving
    }
}

/// A state where `wp.prog.[·]` differs from its cubed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDiff {
    pub state: usize,
    pub valuation: String,
    pub wp: Rational,
    pub cubed: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateCheck {
    pub index: usize,
    pub text: String,
    pub cubed: bool,
    pub differing: Vec<StateDiff>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeCheck {
    pub signature: Vec<bool>,
    pub preserved: bool,
    pub differing: Vec<StateDiff>,
}

/// Evidence of a violation: either a predicate of Φ or a cube whose
/// pre-expectation under the component is not cubed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Predicate { index: usize, text: String, differing: Vec<StateDiff> },
    Cube { signature: Vec<bool>, differing: Vec<StateDiff> },
}

impl Witness {
    pub fn differing(&self) -> &[StateDiff] {
        match self {
            Witness::Predicate { differing, .. } | Witness::Cube { differing, .. } => differing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    pub program: String,
    pub verdict: IpVerdict,
    pub fast_path_passed: bool,
    pub predicates: Vec<PredicateCheck>,
    pub cubes: Vec<CubeCheck>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IpReport {
    pub verdict: IpVerdict,
    pub predicates: Vec<String>,
    pub cube_count: usize,
    pub components: Vec<ComponentReport>,
}

impl IpReport {
    /// The first component witness, if any.
    pub fn witness(&self) -> Option<(usize, &Witness)> {
        self.components.iter().enumerate().find_map(|(i, c)| c.witness.as_ref().map(|w| (i, w)))
    }
}

fn diffs(space: &StateSpace, w: &Expectation, c: &Expectation) -> Vec<StateDiff> {
    (0..w.len())
        .filter(|&s| w[s] != c[s])
        .map(|s| StateDiff { state: s, valuation: space.describe(s), wp: w[s].clone(), cubed: c[s].clone() })
        .collect()
}

fn check_component(
    t: &Transformer<'_>,
    prog: &Stmt,
    phi: &PredicateSet,
    part: &Partition,
) -> Result<ComponentReport, AbstractionError> {
    let space = t.space();
    let mut predicates = Vec::with_capacity(phi.len());
    for (index, p) in phi.iter().enumerate() {
        let w = t.wp(prog, &Expectation::of_pred(&p.pred, space)?)?;
        let c = cubed(&w, part);
        let differing = diffs(space, &w, &c);
        predicates.push(PredicateCheck { index, text: p.text.clone(), cubed: differing.is_empty(), differing });
    }
    let fast_path_passed = predicates.iter().all(|p| p.cubed);

    let mut cube_checks = Vec::with_capacity(part.len());
    for (ci, cube) in part.cubes().iter().enumerate() {
        let w = t.wp(prog, &part.indicator(ci))?;
        let c = cubed(&w, part);
        let differing = diffs(space, &w, &c);
        cube_checks.push(CubeCheck { signature: cube.signature.clone(), preserved: differing.is_empty(), differing });
    }
    let preserving = cube_checks.iter().all(|c| c.preserved);

    let witness = if preserving {
        None
    } else if let Some(p) = predicates.iter().find(|p| !p.cubed) {
        Some(Witness::Predicate { index: p.index, text: p.text.clone(), differing: p.differing.clone() })
    } else {
        let c = cube_checks.iter().find(|c| !c.preserved).expect("some cube failed");
        Some(Witness::Cube { signature: c.signature.clone(), differing: c.differing.clone() })
    };

    Ok(ComponentReport {
        program: prog.to_string(),
        verdict: if preserving { IpVerdict::Preserving } else { IpVerdict::NotPreserving },
        fast_path_passed,
        predicates,
        cubes: cube_checks,
        witness,
    })
}

/// Checks whether the abstraction induced by `phi` is information-preserving
/// for `prog`: `wp.prog.[c]` must be cubed for every cube `c`.
///
/// A top-level demonic choice is split into its operands and each operand is
/// checked on its own; the verdict is the conjunction. Operands must be free
/// of demonic choice.
pub fn check_info_preserving(
    t: &Transformer<'_>,
    prog: &Stmt,
    phi: &PredicateSet,
) -> Result<IpReport, AbstractionError> {
    let components = prog.demonic_components();
    if let Some(bad) = components.iter().find(|c| !c.is_deterministic()) {
        return Err(AbstractionError::NotDecomposable { component: bad.to_string() });
    }
    let part = cubes(phi, t.space())?;
    let reports = components
        .into_iter()
        .map(|c| check_component(t, c, phi, &part))
        .collect::<Result<Vec<_>, _>>()?;
    let verdict = if reports.iter().all(|r| r.verdict.is_preserving()) {
        IpVerdict::Preserving
    } else {
        IpVerdict::NotPreserving
    };
    Ok(IpReport {
        verdict,
        predicates: phi.iter().map(|p| p.text.clone()).collect(),
        cube_count: part.len(),
        components: reports,
    })
}

/// Recomputes a witness from scratch against `component` and confirms it is a
/// genuine violation with exactly the reported values.
pub fn recheck_witness(
    t: &Transformer<'_>,
    component: &Stmt,
    phi: &PredicateSet,
    witness: &Witness,
) -> Result<bool, AbstractionError> {
    let space = t.space();
    let part = cubes(phi, space)?;
    let post = match witness {
        Witness::Predicate { index, .. } => match phi.iter().nth(*index) {
            Some(p) => Expectation::of_pred(&p.pred, space)?,
            None => return Ok(false),
        },
        Witness::Cube { signature, .. } => match part.cubes().iter().position(|c| &c.signature == signature) {
            Some(ci) => part.indicator(ci),
            None => return Ok(false),
        },
    };
    let w = t.wp(component, &post)?;
    if is_cubed(&w, &part) {
        return Ok(false);
    }
    let c = cubed(&w, &part);
    Ok(witness.differing() == diffs(space, &w, &c).as_slice())
}
