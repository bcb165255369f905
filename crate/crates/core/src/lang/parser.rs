use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    DuplicateDeclaration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ParseErrorKind::Lexical => "lexical error",
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::DuplicateDeclaration => "duplicate declaration",
        };
        write!(f, "{}: {}: {}", self.span, what, self.message)
    }
}

impl core::error::Error for ParseError {}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        let toks = tokenize(src).map_err(|e| ParseError {
            kind: ParseErrorKind::Lexical,
            span: e.span,
            message: e.message,
        })?;
        Ok(Parser { toks, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &TokenKind {
        &self.toks[self.pos].kind
    }

    fn peek_at(&self, offset: usize) -> &TokenKind {
        let i = (self.pos + offset).min(self.toks.len() - 1);
        &self.toks[i].kind
    }

    pub(crate) fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek() == kind {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { kind: ParseErrorKind::Syntax, span: self.span(), message: message.into() })
    }

    pub(crate) fn expect(&mut self, kind: &TokenKind, what: &str) -> PResult<Token> {
        if self.peek() == kind {
            Ok(self.bump())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    pub(crate) fn expect_eof(&self) -> PResult<()> {
        match self.peek() {
            TokenKind::Eof => Ok(()),
            other => self.error(format!("unexpected {} after end of input", describe(other))),
        }
    }

    fn ident(&mut self) -> PResult<(String, Span)> {
        let span = self.span();
        match self.peek().clone() {
            TokenKind::Ident(name) => {
                self.bump();
                Ok((name, span))
            }
            other => self.error(format!("expected identifier, found {}", describe(&other))),
        }
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let negative = self.eat(&TokenKind::Minus);
        match *self.peek() {
            TokenKind::Int(n) => {
                self.bump();
                Ok(if negative { -n } else { n })
            }
            ref other => self.error(format!("expected integer, found {}", describe(other))),
        }
    }

    // ---- models and statements ----

    fn decl(&mut self) -> PResult<VarDecl> {
        let span = self.span();
        self.expect(&TokenKind::Var, "`var`")?;
        let (name, _) = self.ident()?;
        self.expect(&TokenKind::Colon, "`:`")?;
        let lo = self.signed_int()?;
        self.expect(&TokenKind::DotDot, "`..`")?;
        let hi = self.signed_int()?;
        let wrap = self.eat(&TokenKind::Wrap);
        self.expect(&TokenKind::Semi, "`;` after declaration")?;
        Ok(VarDecl { name, lo, hi, wrap, span })
    }

    fn model(&mut self) -> PResult<Model> {
        let mut decls: Vec<VarDecl> = Vec::new();
        while *self.peek() == TokenKind::Var {
            let d = self.decl()?;
            if decls.iter().any(|e| e.name == d.name) {
                return Err(ParseError {
                    kind: ParseErrorKind::DuplicateDeclaration,
                    span: d.span,
                    message: format!("variable `{}` declared twice", d.name),
                });
            }
            decls.push(d);
        }
        let program = self.stmt()?;
        self.expect_eof()?;
        Ok(Model { decls, program })
    }

    fn ends_block(&self) -> bool {
        matches!(
            self.peek(),
            TokenKind::Eof | TokenKind::RParen | TokenKind::Fi | TokenKind::Od | TokenKind::Else
        )
    }

    pub(crate) fn stmt(&mut self) -> PResult<Stmt> {
        let mut items = Vec::new();
        items.push(self.demonic()?);
        while self.eat(&TokenKind::Semi) {
            if self.ends_block() {
                break;
            }
            items.push(self.demonic()?);
        }
        Ok(fold_right(items, |a, b| {
            let span = a.span;
            Stmt { kind: StmtKind::Seq(Box::new(a), Box::new(b)), span }
        }))
    }

    fn at_demonic_box(&self) -> bool {
        *self.peek() == TokenKind::LBracket && *self.peek_at(1) == TokenKind::RBracket
    }

    fn demonic(&mut self) -> PResult<Stmt> {
        let mut items = Vec::new();
        items.push(self.prob()?);
        while self.at_demonic_box() {
            self.bump();
            self.bump();
            items.push(self.prob()?);
        }
        Ok(fold_right(items, |a, b| {
            let span = a.span;
            Stmt { kind: StmtKind::Demonic(Box::new(a), Box::new(b)), span }
        }))
    }

    fn prob(&mut self) -> PResult<Stmt> {
        let left = self.atom()?;
        if *self.peek() == TokenKind::LBracket && !self.at_demonic_box() {
            self.bump();
            let p = self.probability()?;
            self.expect(&TokenKind::RBracket, "`]` after probability")?;
            let right = self.prob()?;
            let span = left.span;
            return Ok(Stmt { kind: StmtKind::Prob(p, Box::new(left), Box::new(right)), span });
        }
        Ok(left)
    }

    fn probability(&mut self) -> PResult<Rational> {
        match self.peek().clone() {
            TokenKind::Decimal(r) => {
                self.bump();
                Ok(r)
            }
            TokenKind::Int(n) => {
                self.bump();
                if self.eat(&TokenKind::Slash) {
                    match *self.peek() {
                        TokenKind::Int(0) => self.error("zero denominator in probability"),
                        TokenKind::Int(d) => {
                            self.bump();
                            Ok(crate::rational::rat(n, d))
                        }
                        ref other => self.error(format!("expected denominator, found {}", describe(other))),
                    }
                } else {
                    Ok(int(n))
                }
            }
            other => self.error(format!("expected probability literal, found {}", describe(&other))),
        }
    }

    fn atom(&mut self) -> PResult<Stmt> {
        let span = self.span();
        let kind = match self.peek().clone() {
            TokenKind::Skip => {
                self.bump();
                StmtKind::Skip
            }
            TokenKind::Abort => {
                self.bump();
                StmtKind::Abort
            }
            TokenKind::Ident(name) => {
                self.bump();
                self.expect(&TokenKind::Assign, "`:=`")?;
                StmtKind::Assign(name, self.arith()?)
            }
            TokenKind::LParen => {
                self.bump();
                let inner = self.stmt()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                return Ok(inner);
            }
            TokenKind::If => {
                self.bump();
                let g = self.pred()?;
                self.expect(&TokenKind::Then, "`then`")?;
                let a = self.stmt()?;
                let b = if self.eat(&TokenKind::Else) { self.stmt()? } else { Stmt { kind: StmtKind::Skip, span } };
                self.expect(&TokenKind::Fi, "`fi`")?;
                StmtKind::If(g, Box::new(a), Box::new(b))
            }
            TokenKind::Do => {
                self.bump();
                let g = self.pred()?;
                self.expect(&TokenKind::Arrow, "`->`")?;
                let body = self.stmt()?;
                self.expect(&TokenKind::Od, "`od`")?;
                StmtKind::Loop(g, Box::new(body))
            }
            other => return self.error(format!("expected statement, found {}", describe(&other))),
        };
        Ok(Stmt { kind, span })
    }

    // ---- arithmetic ----

    pub(crate) fn arith(&mut self) -> PResult<Arith> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => ArithOp::Add,
                TokenKind::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Arith::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> PResult<Arith> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => ArithOp::Mul,
                TokenKind::Slash => ArithOp::Div,
                TokenKind::Percent => ArithOp::Mod,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Arith::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> PResult<Arith> {
        if self.eat(&TokenKind::Minus) {
            if let TokenKind::Int(n) = *self.peek() {
                self.bump();
                return Ok(Arith::Num(-n));
            }
            return Ok(Arith::Neg(Box::new(self.unary()?)));
        }
        match self.peek().clone() {
            TokenKind::Int(n) => {
                self.bump();
                Ok(Arith::Num(n))
            }
            TokenKind::Ident(name) => {
                self.bump();
                Ok(Arith::Var(name))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.arith()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            other => self.error(format!("expected arithmetic expression, found {}", describe(&other))),
        }
    }

    // ---- predicates ----

    pub(crate) fn pred(&mut self) -> PResult<Pred> {
        let mut lhs = self.conj()?;
        while self.eat(&TokenKind::Or) {
            let rhs = self.conj()?;
            lhs = Pred::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> PResult<Pred> {
        let mut lhs = self.neg()?;
        while self.eat(&TokenKind::And) {
            let rhs = self.neg()?;
            lhs = Pred::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn neg(&mut self) -> PResult<Pred> {
        if self.eat(&TokenKind::Not) {
            return Ok(Pred::negation(self.neg()?));
        }
        match self.peek() {
            TokenKind::True => {
                self.bump();
                Ok(Pred::True)
            }
            TokenKind::False => {
                self.bump();
                Ok(Pred::False)
            }
            TokenKind::LParen => {
                let saved = self.pos;
                self.bump();
                if let Ok(p) = self.pred() {
                    if self.eat(&TokenKind::RParen) && cmp_op(self.peek()).is_none() {
                        return Ok(p);
                    }
                }
                self.pos = saved;
                self.comparison()
            }
            _ => self.comparison(),
        }
    }

    fn comparison(&mut self) -> PResult<Pred> {
        let a = self.arith()?;
        let Some(op) = cmp_op(self.peek()) else {
            return self.error(format!("expected comparison operator, found {}", describe(self.peek())));
        };
        self.bump();
        let b = self.arith()?;
        Ok(Pred::Cmp(op, a, b))
    }

    // ---- expectations ----

    pub(crate) fn expectation(&mut self) -> PResult<ExpExpr> {
        let mut lhs = self.exp_sum()?;
        loop {
            let join = match self.peek() {
                TokenKind::Join => true,
                TokenKind::Meet => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.exp_sum()?;
            lhs = if join {
                ExpExpr::Max(Box::new(lhs), Box::new(rhs))
            } else {
                ExpExpr::Min(Box::new(lhs), Box::new(rhs))
            };
        }
    }

    fn exp_sum(&mut self) -> PResult<ExpExpr> {
        let mut lhs = self.exp_term()?;
        loop {
            let add = match self.peek() {
                TokenKind::Plus => true,
                TokenKind::Minus => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.exp_term()?;
            lhs = if add {
                ExpExpr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExpExpr::Monus(Box::new(lhs), Box::new(rhs))
            };
        }
    }

    fn exp_term(&mut self) -> PResult<ExpExpr> {
        let mut lhs = self.exp_factor()?;
        loop {
            let mul = match self.peek() {
                TokenKind::Star => true,
                TokenKind::Slash => false,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.exp_factor()?;
            lhs = if mul {
                ExpExpr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExpExpr::Div(Box::new(lhs), Box::new(rhs))
            };
        }
    }

    fn exp_factor(&mut self) -> PResult<ExpExpr> {
        match self.peek().clone() {
            TokenKind::Int(n) => {
                self.bump();
                Ok(ExpExpr::Const(int(n)))
            }
            TokenKind::Decimal(r) => {
                self.bump();
                Ok(ExpExpr::Const(r))
            }
            TokenKind::LBracket => {
                self.bump();
                let p = self.pred()?;
                self.expect(&TokenKind::RBracket, "`]`")?;
                Ok(ExpExpr::Indicator(p))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expectation()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(e)
            }
            TokenKind::Ident(name) if name == "max" || name == "min" => {
                self.bump();
                self.expect(&TokenKind::LParen, "`(`")?;
                let a = self.expectation()?;
                self.expect(&TokenKind::Comma, "`,`")?;
                let b = self.expectation()?;
                self.expect(&TokenKind::RParen, "`)`")?;
                Ok(if name == "max" {
                    ExpExpr::Max(Box::new(a), Box::new(b))
                } else {
                    ExpExpr::Min(Box::new(a), Box::new(b))
                })
            }
            other => self.error(format!("expected expectation term, found {}", describe(&other))),
        }
    }
}

fn fold_right(mut items: Vec<Stmt>, join: impl Fn(Stmt, Stmt) -> Stmt) -> Stmt {
    let mut acc = items.pop().expect("at least one item");
    while let Some(prev) = items.pop() {
        acc = join(prev, acc);
    }
    acc
}

pub(crate) fn cmp_op(kind: &TokenKind) -> Option<CmpOp> {
    Some(match kind {
        TokenKind::Eq => CmpOp::Eq,
        TokenKind::Ne => CmpOp::Ne,
        TokenKind::Lt => CmpOp::Lt,
        TokenKind::Le => CmpOp::Le,
        TokenKind::Gt => CmpOp::Gt,
        TokenKind::Ge => CmpOp::Ge,
        _ => return None,
    })
}

pub(crate) fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Ident(s) => format!("identifier `{s}`"),
        TokenKind::Int(n) => format!("integer `{n}`"),
        TokenKind::Decimal(r) => format!("number `{r}`"),
        TokenKind::Eof => "end of input".into(),
        other => format!("`{}`", token_text(other)),
    }
}

fn token_text(kind: &TokenKind) -> &'static str {
    match kind {
        TokenKind::Var => "var",
        TokenKind::Wrap => "wrap",
        TokenKind::Skip => "skip",
        TokenKind::Abort => "abort",
        TokenKind::If => "if",
        TokenKind::Then => "then",
        TokenKind::Else => "else",
        TokenKind::Fi => "fi",
        TokenKind::Do => "do",
        TokenKind::Od => "od",
        TokenKind::True => "true",
        TokenKind::False => "false",
        TokenKind::Assign => ":=",
        TokenKind::Colon => ":",
        TokenKind::DotDot => "..",
        TokenKind::Semi => ";",
        TokenKind::Comma => ",",
        TokenKind::LParen => "(",
        TokenKind::RParen => ")",
        TokenKind::LBracket => "[",
        TokenKind::RBracket => "]",
        TokenKind::Arrow => "->",
        TokenKind::Question => "?",
        TokenKind::Plus => "+",
        TokenKind::Minus => "-",
        TokenKind::Star => "*",
        TokenKind::Slash => "/",
        TokenKind::Percent => "%",
        TokenKind::Eq => "=",
        TokenKind::Ne => "!=",
        TokenKind::Lt => "<",
        TokenKind::Le => "<=",
        TokenKind::Gt => ">",
        TokenKind::Ge => ">=",
        TokenKind::Not => "!",
        TokenKind::And => "&",
        TokenKind::Or => "|",
        TokenKind::Join => "⊔",
        TokenKind::Meet => "⊓",
        TokenKind::Ident(_) | TokenKind::Int(_) | TokenKind::Decimal(_) | TokenKind::Eof => "?",
    }
}

/// Parses a whole model: declarations followed by one program.
pub fn parse_model(text: &str) -> Result<Model, ParseError> {
    Parser::new(text)?.model()
}

/// Parses a bare program (no declarations).
pub fn parse_program(text: &str) -> Result<Stmt, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.stmt()?;
    p.expect_eof()?;
    Ok(s)
}

pub fn parse_predicate(text: &str) -> Result<Pred, ParseError> {
    let mut p = Parser::new(text)?;
    let pred = p.pred()?;
    p.expect_eof()?;
    Ok(pred)
}

pub fn parse_expectation(text: &str) -> Result<ExpExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expectation()?;
    p.expect_eof()?;
    Ok(e)
}
