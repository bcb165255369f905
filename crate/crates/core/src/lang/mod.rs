//! pGCL front end: AST, lexer, parser, pretty-printer and static validation.
//!
//! Grammar (informal):
//!
//! ```text
//! model    ::= decl* stmt
//! decl     ::= "var" IDENT ":" INT ".." INT ["wrap"] ";"
//! stmt     ::= demonic (";" demonic)* [";"]
//! demonic  ::= prob ("[]" prob)*              -- right nested
//! prob     ::= atom ["[" PROB "]" prob]       -- right nested
//! atom     ::= "skip" | "abort" | IDENT ":=" arith | "(" stmt ")"
//!            | "if" pred "then" stmt ["else" stmt] "fi"
//!            | "do" pred "->" stmt "od"
//! PROB     ::= INT ["/" INT] | DECIMAL
//! pred     ::= conj ("|" conj)* ;  conj ::= neg ("&" neg)*
//! neg      ::= "!" neg | "true" | "false" | "(" pred ")" | arith CMP arith
//! arith    ::= usual + - * / % with unary minus; "/" truncates toward zero
//! ```
//!
//! Expectations use `[pred]` brackets, rational constants, `+`, truncated
//! `-`, `*`, division by constants, `max(a, b)`/`min(a, b)` and the infix
//! lattice operators `⊔`/`⊓`.

mod ast;
mod lexer;
mod parser;
mod printer;
mod query;
mod validate;

pub use ast::*;
pub use lexer::{LexError, Token, TokenKind};
pub use parser::{parse_expectation, parse_model, parse_predicate, parse_program, ParseError};
pub use query::{parse_query, Opt, Query, QueryKind};
pub use validate::{validate_model, Diagnostic, Severity};
