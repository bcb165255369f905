//! Expectation-transformer semantics, predicate abstraction and MDP model
//! checking for a small probabilistic guarded-command language.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! anything touching the filesystem live in the `probabs` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod abstraction;
pub mod lang;
pub mod mdp;
pub mod rabin;
pub mod rational;
pub mod semantics;

pub use rational::Rational;
