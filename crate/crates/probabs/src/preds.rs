use std::fmt;

use probabs_core::abstraction::PredicateSet;
use probabs_core::lang::{parse_predicate, ParseError};

/// A predicates-file error, with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredsError {
    pub line: usize,
    pub error: ParseError,
}

impl fmt::Display for PredsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for PredsError {}

/// Parses one predicate per line. Blank lines and everything after `#`
/// are ignored.
pub fn parse_preds(text: &str) -> Result<PredicateSet, PredsError> {
    let mut set = PredicateSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let pred = parse_predicate(line).map_err(|error| PredsError { line: i + 1, error })?;
        set.push(pred);
    }
    Ok(set)
}
