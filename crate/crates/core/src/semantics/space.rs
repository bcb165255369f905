use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::lang::VarDecl;

pub const DEFAULT_STATE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    TooLarge { limit: u64 },
    EmptyDomain(String),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::TooLarge { limit } => write!(f, "state space exceeds the limit of {limit} states"),
            SpaceError::EmptyDomain(v) => write!(f, "variable `{v}` has an empty domain"),
        }
    }
}

impl core::error::Error for SpaceError {}

/// Finite product of variable domains, enumerated lexicographically in
/// declaration order (the last variable varies fastest).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    vars: Vec<VarDecl>,
    strides: Vec<usize>,
    len: usize,
}

pub fn enumerate_states(decls: &[VarDecl]) -> Result<StateSpace, SpaceError> {
    StateSpace::with_limit(decls, DEFAULT_STATE_LIMIT)
}

impl StateSpace {
    pub fn with_limit(decls: &[VarDecl], limit: u64) -> Result<Self, SpaceError> {
        let mut strides = alloc::vec![0; decls.len()];
        let mut len: u64 = 1;
        for (i, d) in decls.iter().enumerate().rev() {
            if d.size() == 0 {
                return Err(SpaceError::EmptyDomain(d.name.clone()));
            }
            strides[i] = len as usize;
            len = len.checked_mul(d.size()).filter(|&n| n <= limit).ok_or(SpaceError::TooLarge { limit })?;
        }
        Ok(StateSpace { vars: decls.to_vec(), strides, len: len as usize })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn vars(&self) -> &[VarDecl] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn stride(&self, var: usize) -> usize {
        self.strides[var]
    }

    pub fn valuation(&self, index: usize) -> Vec<i64> {
        self.vars
            .iter()
            .zip(&self.strides)
            .map(|(d, &s)| d.lo + ((index / s) as u64 % d.size()) as i64)
            .collect()
    }

    /// Inverse of [`valuation`](Self::valuation); `None` if any value is out of its domain.
    pub fn index_of(&self, values: &[i64]) -> Option<usize> {
        if values.len() != self.vars.len() {
            return None;
        }
        let mut idx = 0;
        for ((d, &s), &v) in self.vars.iter().zip(&self.strides).zip(values) {
            if v < d.lo || v > d.hi {
                return None;
            }
            idx += (v - d.lo) as usize * s;
        }
        Some(idx)
    }

    /// `x=1,y=0` style rendering used in reports.
    pub fn describe(&self, index: usize) -> String {
        let vals = self.valuation(index);
        let parts: Vec<String> = self.vars.iter().zip(vals).map(|(d, v)| format!("{}={}", d.name, v)).collect();
        parts.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable() {
        let s = enumerate_states(&[VarDecl::new("x", 0, 3, false)]).unwrap();
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn lexicographic_order() {
        let s = enumerate_states(&[VarDecl::new("x", 0, 3, false), VarDecl::new("y", 0, 1, false)]).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.index_of(&[1, 0]), Some(2));
        for i in 0..s.len() {
            assert_eq!(s.index_of(&s.valuation(i)), Some(i));
        }
        assert_eq!(s.describe(3), "x=1,y=1");
    }

    #[test]
    fn no_declarations_gives_one_state() {
        let s = enumerate_states(&[]).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.valuation(0).is_empty());
    }

    #[test]
    fn limit_is_enforced() {
        let decls = [VarDecl::new("a", 0, 999, false), VarDecl::new("b", 0, 999, false)];
        assert_eq!(StateSpace::with_limit(&decls, 1000), Err(SpaceError::TooLarge { limit: 1000 }));
        assert!(StateSpace::with_limit(&decls, 1_000_000).is_ok());
    }
}
