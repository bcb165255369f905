use alloc::format;
use core::fmt;

use super::ast::Pred;
use super::lexer::TokenKind;
use super::parser::{describe, ParseError, Parser};

/// Which way the adversary resolves nondeterminism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Opt {
    Min,
    Max,
}

impl fmt::Display for Opt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Opt::Min => "min",
            Opt::Max => "max",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryKind {
    /// `P{min,max}=? [true U<=T target]`
    BoundedUntil { horizon: u64 },
    /// `R{min,max}=? [F target]`, one unit of reward per step.
    ExpectedReward,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub kind: QueryKind,
    pub target: Pred,
    pub opt: Opt,
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            QueryKind::BoundedUntil { horizon } => {
                write!(f, "P{}=? [true U<={} ({})]", self.opt, horizon, self.target)
            }
            QueryKind::ExpectedReward => write!(f, "R{}=? [F ({})]", self.opt, self.target),
        }
    }
}

/// Parses `Pmin=? [true U<=10 (done=1)]` or `Rmax=? [F (done=1)]`.
pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    let mut p = Parser::new(text)?;
    let head = match p.peek().clone() {
        TokenKind::Ident(name) => name,
        other => return p.error(format!("expected Pmin, Pmax, Rmin or Rmax, found {}", describe(&other))),
    };
    let (reward, opt) = match head.as_str() {
        "Pmin" => (false, Opt::Min),
        "Pmax" => (false, Opt::Max),
        "Rmin" => (true, Opt::Min),
        "Rmax" => (true, Opt::Max),
        _ => return p.error(format!("unknown query operator `{head}`")),
    };
    p.bump();
    p.expect(&TokenKind::Eq, "`=?`")?;
    p.expect(&TokenKind::Question, "`=?`")?;
    p.expect(&TokenKind::LBracket, "`[`")?;
    let kind = if reward {
        match p.peek() {
            TokenKind::Ident(f) if f == "F" => {
                p.bump();
            }
            other => return p.error(format!("expected `F`, found {}", describe(other))),
        }
        QueryKind::ExpectedReward
    } else {
        p.expect(&TokenKind::True, "`true`")?;
        match p.peek() {
            TokenKind::Ident(u) if u == "U" => {
                p.bump();
            }
            other => return p.error(format!("expected `U`, found {}", describe(other))),
        }
        p.expect(&TokenKind::Le, "`<=`")?;
        if *p.peek() == TokenKind::Minus {
            return p.error("negative horizon");
        }
        let horizon = match *p.peek() {
            TokenKind::Int(n) => {
                p.bump();
                n as u64
            }
            ref other => return p.error(format!("expected horizon, found {}", describe(other))),
        };
        QueryKind::BoundedUntil { horizon }
    };
    let target = p.pred()?;
    p.expect(&TokenKind::RBracket, "`]`")?;
    p.expect_eof()?;
    Ok(Query { kind, target, opt })
}
