use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;
use crate::rational::is_probability;
use crate::semantics::{eval_arith, eval_pred, EvalError, StateSpace, DEFAULT_STATE_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagnostic {
    pub line: u32,
    pub col: u32,
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(span: Span, message: String) -> Self {
        Diagnostic { line: span.line, col: span.col, severity: Severity::Error, message }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.col, sev, self.message)
    }
}

/// Static checks on a parsed model. An empty result means the model is safe
/// to hand to every transformer and model-checking entry point.
///
/// Domain and division checks are exact: they run a forward reachability
/// analysis over the enumerated state space, starting from every state.
pub fn validate_model(m: &Model) -> Vec<Diagnostic> {
    let mut out = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for d in &m.decls {
        if !seen.insert(d.name.as_str()) {
            out.insert(Diagnostic::error(d.span, format!("variable `{}` declared twice", d.name)));
        }
        if d.lo > d.hi {
            out.insert(Diagnostic::error(d.span, format!("empty domain {}..{} for `{}`", d.lo, d.hi, d.name)));
        }
    }
    let declared = |v: &str| m.decls.iter().any(|d| d.name == v);
    let mut structural_ok = out.is_empty();
    check_static(&m.program, &declared, &mut out, &mut structural_ok);

    if structural_ok {
        match StateSpace::with_limit(&m.decls, DEFAULT_STATE_LIMIT) {
            Ok(space) => {
                let all = alloc::vec![true; space.len()];
                let mut flow = Flow { space: &space, diags: &mut out };
                flow.post(&m.program, all);
            }
            Err(e) => {
                out.insert(Diagnostic {
                    line: 1,
                    col: 1,
                    severity: Severity::Warning,
                    message: format!("domain checks skipped: {e}"),
                });
            }
        }
    }
    out.into_iter().collect()
}

fn check_static(
    s: &Stmt,
    declared: &impl Fn(&str) -> bool,
    out: &mut BTreeSet<Diagnostic>,
    ok: &mut bool,
) {
    let mut undeclared = |v: &str, out: &mut BTreeSet<Diagnostic>| {
        if !declared(v) {
            *ok = false;
            out.insert(Diagnostic::error(s.span, format!("undeclared variable `{v}`")));
        }
    };
    match &s.kind {
        StmtKind::Skip | StmtKind::Abort => {}
        StmtKind::Assign(v, e) => {
            undeclared(v, out);
            let mut names = Vec::new();
            e.for_each_var(&mut |n| names.push(n));
            for n in names {
                undeclared(n, out);
            }
        }
        StmtKind::Prob(p, a, b) => {
            if !is_probability(p) {
                out.insert(Diagnostic::error(s.span, format!("probability {p} is outside [0, 1]")));
            }
            check_static(a, declared, out, ok);
            check_static(b, declared, out, ok);
        }
        StmtKind::Seq(a, b) | StmtKind::Demonic(a, b) => {
            check_static(a, declared, out, ok);
            check_static(b, declared, out, ok);
        }
        StmtKind::If(g, a, b) => {
            let mut names = Vec::new();
            g.for_each_var(&mut |n| names.push(n));
            for n in names {
                undeclared(n, out);
            }
            check_static(a, declared, out, ok);
            check_static(b, declared, out, ok);
        }
        StmtKind::Loop(g, body) => {
            let mut names = Vec::new();
            g.for_each_var(&mut |n| names.push(n));
            for n in names {
                undeclared(n, out);
            }
            check_static(body, declared, out, ok);
        }
    }
}

/// Forward collecting semantics over state sets (as bit vectors).
struct Flow<'a> {
    space: &'a StateSpace,
    diags: &'a mut BTreeSet<Diagnostic>,
}

fn union(a: &mut [bool], b: &[bool]) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x |= y;
    }
}

impl Flow<'_> {
    fn report(&mut self, span: Span, message: String) {
        self.diags.insert(Diagnostic::error(span, message));
    }

    fn split(&mut self, g: &Pred, span: Span, pre: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let n = self.space.len();
        let (mut yes, mut no) = (alloc::vec![false; n], alloc::vec![false; n]);
        for s in (0..n).filter(|&s| pre[s]) {
            match eval_pred(g, self.space, &self.space.valuation(s)) {
                Ok(true) => yes[s] = true,
                Ok(false) => no[s] = true,
                Err(e) => {
                    let msg = format!("guard `{g}` is undefined ({e}) in reachable state {}", self.space.describe(s));
                    self.report(span, msg);
                }
            }
        }
        (yes, no)
    }

    fn post(&mut self, s: &Stmt, pre: Vec<bool>) -> Vec<bool> {
        let n = self.space.len();
        match &s.kind {
            StmtKind::Skip => pre,
            StmtKind::Abort => alloc::vec![false; n],
            StmtKind::Assign(var, rhs) => {
                let vi = self.space.var_index(var).expect("names checked");
                let decl = self.space.vars()[vi].clone();
                let mut out = alloc::vec![false; n];
                let mut reported = false;
                for st in (0..n).filter(|&i| pre[i]) {
                    let mut vals = self.space.valuation(st);
                    let v = match eval_arith(rhs, self.space, &vals) {
                        Ok(v) => v,
                        Err(e @ (EvalError::DivisionByZero | EvalError::Overflow)) => {
                            if !reported {
                                let msg = format!("`{var} := {rhs}` fails ({e}) in reachable state {}", self.space.describe(st));
                                self.report(s.span, msg);
                                reported = true;
                            }
                            continue;
                        }
                        Err(EvalError::UnknownVariable(_)) => unreachable!("names checked"),
                    };
                    match decl.fit(v) {
                        Some(v) => {
                            vals[vi] = v;
                            out[self.space.index_of(&vals).expect("in domain")] = true;
                        }
                        None => {
                            if !reported {
                                let msg = format!(
                                    "`{var} := {rhs}` yields {v}, outside {}..{} (declare `wrap` or guard it), from reachable state {}",
                                    decl.lo,
                                    decl.hi,
                                    self.space.describe(st)
                                );
                                self.report(s.span, msg);
                                reported = true;
                            }
                        }
                    }
                }
                out
            }
            StmtKind::Seq(a, b) => {
                let mid = self.post(a, pre);
                self.post(b, mid)
            }
            StmtKind::Prob(_, a, b) | StmtKind::Demonic(a, b) => {
                let mut x = self.post(a, pre.clone());
                let y = self.post(b, pre);
                union(&mut x, &y);
                x
            }
            StmtKind::If(g, a, b) => {
                let (yes, no) = self.split(g, s.span, &pre);
                let mut x = self.post(a, yes);
                let y = self.post(b, no);
                union(&mut x, &y);
                x
            }
            StmtKind::Loop(g, body) => {
                let mut head = pre;
                loop {
                    let (yes, _) = self.split(g, s.span, &head);
                    let after = self.post(body, yes);
                    let mut next = head.clone();
                    union(&mut next, &after);
                    if next == head {
                        break;
                    }
                    head = next;
                }
                self.split(g, s.span, &head).1
            }
        }
    }
}
