//! Pretty-printing. Output re-parses to an equal AST.

use core::fmt::{self, Display, Formatter};

use super::ast::*;

fn arith_prec(e: &Arith) -> u8 {
    match e {
        Arith::Bin(ArithOp::Add | ArithOp::Sub, ..) => 1,
        Arith::Bin(..) => 2,
        Arith::Neg(_) => 3,
        Arith::Num(n) if *n < 0 => 3,
        Arith::Num(_) | Arith::Var(_) => 4,
    }
}

fn write_arith(f: &mut Formatter<'_>, e: &Arith, min_prec: u8) -> fmt::Result {
    let parens = arith_prec(e) < min_prec;
    if parens {
        f.write_str("(")?;
    }
    match e {
        Arith::Num(n) => write!(f, "{n}")?,
        Arith::Var(v) => f.write_str(v)?,
        Arith::Neg(a) => {
            f.write_str("-")?;
            // `-(3)` must not re-parse as the literal -3
            let min = if matches!(**a, Arith::Num(_)) { 5 } else { 3 };
            write_arith(f, a, min)?;
        }
        Arith::Bin(op, a, b) => {
            let p = arith_prec(e);
            let sym = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
                ArithOp::Div => "/",
                ArithOp::Mod => "%",
            };
            write_arith(f, a, p)?;
            write!(f, " {sym} ")?;
            write_arith(f, b, p + 1)?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for Arith {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_arith(f, self, 0)
    }
}

fn pred_prec(p: &Pred) -> u8 {
    match p {
        Pred::Or(..) => 1,
        Pred::And(..) => 2,
        Pred::Not(_) => 3,
        _ => 4,
    }
}

fn write_pred(f: &mut Formatter<'_>, p: &Pred, min_prec: u8) -> fmt::Result {
    let parens = pred_prec(p) < min_prec;
    if parens {
        f.write_str("(")?;
    }
    match p {
        Pred::True => f.write_str("true")?,
        Pred::False => f.write_str("false")?,
        Pred::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol())?,
        Pred::Not(a) => {
            f.write_str("!")?;
            write_pred(f, a, 3)?;
        }
        Pred::And(a, b) => {
            write_pred(f, a, 2)?;
            f.write_str(" & ")?;
            write_pred(f, b, 3)?;
        }
        Pred::Or(a, b) => {
            write_pred(f, a, 1)?;
            f.write_str(" | ")?;
            write_pred(f, b, 2)?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for Pred {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_pred(f, self, 0)
    }
}

fn stmt_prec(s: &Stmt) -> u8 {
    match s.kind {
        StmtKind::Seq(..) => 1,
        StmtKind::Demonic(..) => 2,
        StmtKind::Prob(..) => 3,
        _ => 4,
    }
}

fn write_stmt(f: &mut Formatter<'_>, s: &Stmt, min_prec: u8) -> fmt::Result {
    let parens = stmt_prec(s) < min_prec;
    if parens {
        f.write_str("(")?;
    }
    match &s.kind {
        StmtKind::Skip => f.write_str("skip")?,
        StmtKind::Abort => f.write_str("abort")?,
        StmtKind::Assign(v, e) => write!(f, "{v} := {e}")?,
        StmtKind::Seq(a, b) => {
            write_stmt(f, a, 2)?;
            f.write_str("; ")?;
            write_stmt(f, b, 1)?;
        }
        StmtKind::Demonic(a, b) => {
            write_stmt(f, a, 3)?;
            f.write_str(" [] ")?;
            write_stmt(f, b, 2)?;
        }
        StmtKind::Prob(p, a, b) => {
            write_stmt(f, a, 4)?;
            write!(f, " [{p}] ")?;
            write_stmt(f, b, 3)?;
        }
        StmtKind::If(g, a, b) => {
            write!(f, "if {g} then ")?;
            write_stmt(f, a, 0)?;
            f.write_str(" else ")?;
            write_stmt(f, b, 0)?;
            f.write_str(" fi")?;
        }
        StmtKind::Loop(g, body) => {
            write!(f, "do {g} -> ")?;
            write_stmt(f, body, 0)?;
            f.write_str(" od")?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for Stmt {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_stmt(f, self, 0)
    }
}

impl Display for VarDecl {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "var {}:{}..{}", self.name, self.lo, self.hi)?;
        if self.wrap {
            f.write_str(" wrap")?;
        }
        f.write_str(";")
    }
}

impl Display for Model {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        writeln!(f, "{}", self.program)
    }
}

fn exp_prec(e: &ExpExpr) -> u8 {
    match e {
        ExpExpr::Max(..) | ExpExpr::Min(..) => 1,
        ExpExpr::Add(..) | ExpExpr::Monus(..) => 2,
        ExpExpr::Mul(..) | ExpExpr::Div(..) => 3,
        _ => 4,
    }
}

fn write_exp(f: &mut Formatter<'_>, e: &ExpExpr, min_prec: u8) -> fmt::Result {
    let parens = exp_prec(e) < min_prec;
    if parens {
        f.write_str("(")?;
    }
    let p = exp_prec(e);
    let bin = |f: &mut Formatter<'_>, a: &ExpExpr, sym: &str, b: &ExpExpr| -> fmt::Result {
        write_exp(f, a, p)?;
        write!(f, " {sym} ")?;
        write_exp(f, b, p + 1)
    };
    match e {
        ExpExpr::Const(r) => {
            if r.is_integer() {
                write!(f, "{r}")?
            } else {
                write!(f, "({r})")?
            }
        }
        ExpExpr::Indicator(pr) => write!(f, "[{pr}]")?,
        ExpExpr::Add(a, b) => bin(f, a, "+", b)?,
        ExpExpr::Monus(a, b) => bin(f, a, "-", b)?,
        ExpExpr::Mul(a, b) => bin(f, a, "*", b)?,
        ExpExpr::Div(a, b) => bin(f, a, "/", b)?,
        ExpExpr::Max(a, b) => bin(f, a, "⊔", b)?,
        ExpExpr::Min(a, b) => bin(f, a, "⊓", b)?,
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

impl Display for ExpExpr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_exp(f, self, 0)
    }
}
