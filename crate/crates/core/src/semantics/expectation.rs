use alloc::vec::Vec;
use core::ops::Index;

use num_traits::{Signed, Zero};

use super::eval::{eval_pred, EvalError};
use super::space::StateSpace;
use crate::lang::{ExpExpr, Pred};
use crate::rational::{monus, one, Rational};

/// Dense map from state index to a non-negative exact rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expectation(Vec<Rational>);

impl Expectation {
    pub fn from_values(values: Vec<Rational>) -> Self {
        Expectation(values)
    }

    pub fn constant(len: usize, value: Rational) -> Self {
        Expectation(alloc::vec![value; len])
    }

    pub fn zero(len: usize) -> Self {
        Expectation::constant(len, Rational::zero())
    }

    /// 0/1 expectation of a state set.
    pub fn indicator(bits: &[bool]) -> Self {
        Expectation(bits.iter().map(|&b| if b { one() } else { Rational::zero() }).collect())
    }

    pub fn of_pred(pred: &Pred, space: &StateSpace) -> Result<Self, EvalError> {
        let bits = pred_bits(pred, space)?;
        Ok(Expectation::indicator(&bits))
    }

    /// Pointwise evaluation of an expectation expression.
    pub fn eval(expr: &ExpExpr, space: &StateSpace) -> Result<Self, EvalError> {
        let n = space.len();
        Ok(match expr {
            ExpExpr::Const(c) => Expectation::constant(n, c.clone()),
            ExpExpr::Indicator(p) => Expectation::of_pred(p, space)?,
            ExpExpr::Add(a, b) => Self::eval(a, space)?.add(&Self::eval(b, space)?),
            ExpExpr::Monus(a, b) => Self::eval(a, space)?.monus(&Self::eval(b, space)?),
            ExpExpr::Mul(a, b) => Self::eval(a, space)?.zip_with(&Self::eval(b, space)?, |x, y| x * y),
            ExpExpr::Div(a, b) => {
                let d = Self::eval(b, space)?;
                if d.0.iter().any(Zero::is_zero) {
                    return Err(EvalError::DivisionByZero);
                }
                Self::eval(a, space)?.zip_with(&d, |x, y| x / y)
            }
            ExpExpr::Max(a, b) => Self::eval(a, space)?.max(&Self::eval(b, space)?),
            ExpExpr::Min(a, b) => Self::eval(a, space)?.min(&Self::eval(b, space)?),
        })
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        assert_eq!(self.len(), other.len(), "expectations over different spaces");
        Expectation(self.0.iter().zip(&other.0).map(|(a, b)| f(a, b)).collect())
    }

    pub fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Expectation(self.0.iter().map(f).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn monus(&self, other: &Self) -> Self {
        self.zip_with(other, monus)
    }

    pub fn scale(&self, alpha: &Rational) -> Self {
        self.map(|a| a * alpha)
    }

    pub fn max(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| if a >= b { a.clone() } else { b.clone() })
    }

    pub fn min(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| if a <= b { a.clone() } else { b.clone() })
    }

    /// Pointwise `≤`.
    pub fn le(&self, other: &Self) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    /// Largest entry (0 for an empty expectation).
    pub fn sup(&self) -> Rational {
        self.0.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Keeps `self` where `mask` holds and `other` elsewhere.
    pub fn select(mask: &[bool], then: &Self, otherwise: &Self) -> Self {
        Expectation(
            mask.iter()
                .zip(then.0.iter().zip(&otherwise.0))
                .map(|(&m, (a, b))| if m { a.clone() } else { b.clone() })
                .collect(),
        )
    }
}

impl Index<usize> for Expectation {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl FromIterator<Rational> for Expectation {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        Expectation(iter.into_iter().collect())
    }
}

pub(crate) fn pred_bits(pred: &Pred, space: &StateSpace) -> Result<Vec<bool>, EvalError> {
    (0..space.len()).map(|s| eval_pred(pred, space, &space.valuation(s))).collect()
}
