use alloc::string::String;
use core::fmt;

use super::space::StateSpace;
use crate::lang::{Arith, ArithOp, Pred};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    UnknownVariable(String),
    DivisionByZero,
    Overflow,
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::UnknownVariable(v) => write!(f, "undeclared variable `{v}`"),
            EvalError::DivisionByZero => f.write_str("division by zero"),
            EvalError::Overflow => f.write_str("integer overflow"),
        }
    }
}

impl core::error::Error for EvalError {}

/// Evaluates `e` in the state given by `vals`. `/` and `%` truncate toward zero.
pub fn eval_arith(e: &Arith, space: &StateSpace, vals: &[i64]) -> Result<i64, EvalError> {
    Ok(match e {
        Arith::Num(n) => *n,
        Arith::Var(v) => {
            let i = space.var_index(v).ok_or_else(|| EvalError::UnknownVariable(v.clone()))?;
            vals[i]
        }
        Arith::Neg(a) => eval_arith(a, space, vals)?.checked_neg().ok_or(EvalError::Overflow)?,
        Arith::Bin(op, a, b) => {
            let x = eval_arith(a, space, vals)?;
            let y = eval_arith(b, space, vals)?;
            match op {
                ArithOp::Add => x.checked_add(y).ok_or(EvalError::Overflow)?,
                ArithOp::Sub => x.checked_sub(y).ok_or(EvalError::Overflow)?,
                ArithOp::Mul => x.checked_mul(y).ok_or(EvalError::Overflow)?,
                ArithOp::Div | ArithOp::Mod if y == 0 => return Err(EvalError::DivisionByZero),
                ArithOp::Div => x.checked_div(y).ok_or(EvalError::Overflow)?,
                ArithOp::Mod => x.checked_rem(y).ok_or(EvalError::Overflow)?,
            }
        }
    })
}

pub fn eval_pred(p: &Pred, space: &StateSpace, vals: &[i64]) -> Result<bool, EvalError> {
    Ok(match p {
        Pred::True => true,
        Pred::False => false,
        Pred::Cmp(op, a, b) => op.holds(eval_arith(a, space, vals)?, eval_arith(b, space, vals)?),
        Pred::Not(a) => !eval_pred(a, space, vals)?,
        Pred::And(a, b) => eval_pred(a, space, vals)? && eval_pred(b, space, vals)?,
        Pred::Or(a, b) => eval_pred(a, space, vals)? || eval_pred(b, space, vals)?,
    })
}
