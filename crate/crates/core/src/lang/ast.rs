use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::rational::Rational;

/// Source position (1-based). Spans never take part in equality, so two
/// ASTs compare equal whenever they have the same shape and contents.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl core::hash::Hash for Span {
    fn hash<H: core::hash::Hasher>(&self, _state: &mut H) {}
}

impl core::fmt::Display for Span {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
    /// Assignments reduce modulo the domain size instead of leaving it.
    pub wrap: bool,
    pub span: Span,
}

impl VarDecl {
    pub fn new(name: &str, lo: i64, hi: i64, wrap: bool) -> Self {
        VarDecl { name: name.into(), lo, hi, wrap, span: Span::default() }
    }

    pub fn size(&self) -> u64 {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }

    /// Brings `v` into the domain: wraps when allowed, otherwise `None` if out of range.
    pub fn fit(&self, v: i64) -> Option<i64> {
        if (self.lo..=self.hi).contains(&v) {
            Some(v)
        } else if self.wrap {
            let size = self.hi - self.lo + 1;
            Some(self.lo + (v - self.lo).rem_euclid(size))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Arith {
    Num(i64),
    Var(String),
    Neg(Box<Arith>),
    Bin(ArithOp, Box<Arith>, Box<Arith>),
}

impl Arith {
    pub fn var(name: &str) -> Self {
        Arith::Var(name.into())
    }

    pub fn bin(op: ArithOp, a: Arith, b: Arith) -> Self {
        Arith::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Arith::Num(_) => {}
            Arith::Var(v) => f(v),
            Arith::Neg(a) => a.for_each_var(f),
            Arith::Bin(_, a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge];

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Pred {
    True,
    False,
    Cmp(CmpOp, Arith, Arith),
    Not(Box<Pred>),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
}

impl Pred {
    pub fn cmp(op: CmpOp, a: Arith, b: Arith) -> Self {
        Pred::Cmp(op, a, b)
    }

    pub fn negation(p: Pred) -> Self {
        Pred::Not(Box::new(p))
    }

    pub fn and(a: Pred, b: Pred) -> Self {
        Pred::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Pred, b: Pred) -> Self {
        Pred::Or(Box::new(a), Box::new(b))
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Pred::True | Pred::False => {}
            Pred::Cmp(_, a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            Pred::Not(p) => p.for_each_var(f),
            Pred::And(a, b) | Pred::Or(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Skip,
    Abort,
    Assign(String, Arith),
    Seq(Box<Stmt>, Box<Stmt>),
    /// Left branch with probability `p`, right branch with `1 - p`.
    Prob(Rational, Box<Stmt>, Box<Stmt>),
    Demonic(Box<Stmt>, Box<Stmt>),
    If(Pred, Box<Stmt>, Box<Stmt>),
    Loop(Pred, Box<Stmt>),
}

impl Stmt {
    pub fn new(kind: StmtKind) -> Self {
        Stmt { kind, span: Span::default() }
    }

    pub fn skip() -> Self {
        Stmt::new(StmtKind::Skip)
    }

    pub fn abort() -> Self {
        Stmt::new(StmtKind::Abort)
    }

    pub fn assign(var: &str, e: Arith) -> Self {
        Stmt::new(StmtKind::Assign(var.into(), e))
    }

    pub fn seq(a: Stmt, b: Stmt) -> Self {
        Stmt::new(StmtKind::Seq(Box::new(a), Box::new(b)))
    }

    pub fn prob(p: Rational, a: Stmt, b: Stmt) -> Self {
        Stmt::new(StmtKind::Prob(p, Box::new(a), Box::new(b)))
    }

    pub fn demonic(a: Stmt, b: Stmt) -> Self {
        Stmt::new(StmtKind::Demonic(Box::new(a), Box::new(b)))
    }

    pub fn ite(g: Pred, a: Stmt, b: Stmt) -> Self {
        Stmt::new(StmtKind::If(g, Box::new(a), Box::new(b)))
    }

    pub fn looping(g: Pred, body: Stmt) -> Self {
        Stmt::new(StmtKind::Loop(g, Box::new(body)))
    }

    /// No demonic choice anywhere in the tree.
    pub fn is_deterministic(&self) -> bool {
        match &self.kind {
            StmtKind::Skip | StmtKind::Abort | StmtKind::Assign(..) => true,
            StmtKind::Demonic(..) => false,
            StmtKind::Seq(a, b) | StmtKind::Prob(_, a, b) | StmtKind::If(_, a, b) => {
                a.is_deterministic() && b.is_deterministic()
            }
            StmtKind::Loop(_, body) => body.is_deterministic(),
        }
    }

    pub fn is_loop_free(&self) -> bool {
        match &self.kind {
            StmtKind::Skip | StmtKind::Abort | StmtKind::Assign(..) => true,
            StmtKind::Loop(..) => false,
            StmtKind::Seq(a, b)
            | StmtKind::Prob(_, a, b)
            | StmtKind::Demonic(a, b)
            | StmtKind::If(_, a, b) => a.is_loop_free() && b.is_loop_free(),
        }
    }

    /// Splits a top-level chain of demonic choices into its operands.
    pub fn demonic_components(&self) -> Vec<&Stmt> {
        let mut out = Vec::new();
        fn walk<'a>(s: &'a Stmt, out: &mut Vec<&'a Stmt>) {
            match &s.kind {
                StmtKind::Demonic(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                _ => out.push(s),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match &self.kind {
            StmtKind::Skip | StmtKind::Abort => {}
            StmtKind::Assign(v, e) => {
                f(v);
                e.for_each_var(f);
            }
            StmtKind::Seq(a, b) | StmtKind::Prob(_, a, b) | StmtKind::Demonic(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
            StmtKind::If(g, a, b) => {
                g.for_each_var(f);
                a.for_each_var(f);
                b.for_each_var(f);
            }
            StmtKind::Loop(g, body) => {
                g.for_each_var(f);
                body.for_each_var(f);
            }
        }
    }
}

/// A parsed model: variable declarations and the program body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    pub decls: Vec<VarDecl>,
    pub program: Stmt,
}

/// Expectation expression; evaluates to a non-negative rational per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpExpr {
    Const(Rational),
    Indicator(Pred),
    Add(Box<ExpExpr>, Box<ExpExpr>),
    /// Truncated subtraction `(a - b) ⊔ 0`.
    Monus(Box<ExpExpr>, Box<ExpExpr>),
    Mul(Box<ExpExpr>, Box<ExpExpr>),
    Div(Box<ExpExpr>, Box<ExpExpr>),
    Max(Box<ExpExpr>, Box<ExpExpr>),
    Min(Box<ExpExpr>, Box<ExpExpr>),
}

impl ExpExpr {
    pub fn indicator(p: Pred) -> Self {
        ExpExpr::Indicator(p)
    }

    pub fn scaled(alpha: Rational, e: ExpExpr) -> Self {
        ExpExpr::Mul(Box::new(ExpExpr::Const(alpha)), Box::new(e))
    }

    pub fn for_each_var<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            ExpExpr::Const(_) => {}
            ExpExpr::Indicator(p) => p.for_each_var(f),
            ExpExpr::Add(a, b)
            | ExpExpr::Monus(a, b)
            | ExpExpr::Mul(a, b)
            | ExpExpr::Div(a, b)
            | ExpExpr::Max(a, b)
            | ExpExpr::Min(a, b) => {
                a.for_each_var(f);
                b.for_each_var(f);
            }
        }
    }
}
