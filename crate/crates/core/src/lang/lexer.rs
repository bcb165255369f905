use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::ast::Span;
use crate::rational::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Int(i64),
    Decimal(Rational),
    // keywords
    Var,
    Wrap,
    Skip,
    Abort,
    If,
    Then,
    Else,
    Fi,
    Do,
    Od,
    True,
    False,
    // punctuation
    Assign,
    Colon,
    DotDot,
    Semi,
    Comma,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Arrow,
    Question,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Not,
    And,
    Or,
    Join,
    Meet,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub span: Span,
    pub message: String,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: lexical error: {}", self.span, self.message)
    }
}

fn keyword(word: &str) -> Option<TokenKind> {
    Some(match word {
        "var" => TokenKind::Var,
        "wrap" => TokenKind::Wrap,
        "skip" => TokenKind::Skip,
        "abort" => TokenKind::Abort,
        "if" => TokenKind::If,
        "then" => TokenKind::Then,
        "else" => TokenKind::Else,
        "fi" => TokenKind::Fi,
        "do" => TokenKind::Do,
        "od" => TokenKind::Od,
        "true" => TokenKind::True,
        "false" => TokenKind::False,
        "not" => TokenKind::Not,
        "and" => TokenKind::And,
        "or" => TokenKind::Or,
        _ => return None,
    })
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LexError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let peek = chars.get(i + 1).copied();
        let advance = |n: usize, i: &mut usize, col: &mut u32| {
            *i += n;
            *col += n as u32;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '/' && peek == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let is_decimal = i + 1 < chars.len()
                && chars[i] == '.'
                && chars[i + 1].is_ascii_digit();
            if is_decimal {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            let text: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let kind = if is_decimal {
                TokenKind::Decimal(parse_rational(&text).expect("digits.digits parses"))
            } else {
                let n = text.parse::<i64>().map_err(|_| LexError {
                    span,
                    message: alloc::format!("integer literal `{text}` out of range"),
                })?;
                TokenKind::Int(n)
            };
            out.push(Token { kind, span });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            col += (i - start) as u32;
            let kind = keyword(&text).unwrap_or(TokenKind::Ident(text));
            out.push(Token { kind, span });
            continue;
        }
        let two = |a: char, b: char| c == a && peek == Some(b);
        let (kind, len) = if two(':', '=') {
            (TokenKind::Assign, 2)
        } else if two('.', '.') {
            (TokenKind::DotDot, 2)
        } else if two('-', '>') {
            (TokenKind::Arrow, 2)
        } else if two('<', '=') {
            (TokenKind::Le, 2)
        } else if two('>', '=') {
            (TokenKind::Ge, 2)
        } else if two('!', '=') {
            (TokenKind::Ne, 2)
        } else if two('=', '=') {
            (TokenKind::Eq, 2)
        } else if two('&', '&') {
            (TokenKind::And, 2)
        } else if two('|', '|') {
            (TokenKind::Or, 2)
        } else {
            let kind = match c {
                ':' => TokenKind::Colon,
                ';' => TokenKind::Semi,
                ',' => TokenKind::Comma,
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '[' => TokenKind::LBracket,
                ']' => TokenKind::RBracket,
                '?' => TokenKind::Question,
                '+' => TokenKind::Plus,
                '-' => TokenKind::Minus,
                '*' | '×' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '%' => TokenKind::Percent,
                '=' => TokenKind::Eq,
                '≠' => TokenKind::Ne,
                '<' => TokenKind::Lt,
                '≤' => TokenKind::Le,
                '>' => TokenKind::Gt,
                '≥' => TokenKind::Ge,
                '!' | '¬' => TokenKind::Not,
                '&' | '∧' => TokenKind::And,
                '|' | '∨' => TokenKind::Or,
                '⊔' => TokenKind::Join,
                '⊓' => TokenKind::Meet,
                '→' => TokenKind::Arrow,
                other => {
                    return Err(LexError {
                        span,
                        message: alloc::format!("unexpected character `{other}`"),
                    })
                }
            };
            (kind, 1)
        };
        advance(len, &mut i, &mut col);
        out.push(Token { kind, span });
    }
    out.push(Token { kind: TokenKind::Eof, span: Span { line, col } });
    Ok(out)
}
