//! Decision procedures for membership problems in finite permutation groups.
//!
//! The crate provides:
//!
//! * permutation arithmetic and Schreier-Sims subgroup membership ([`perm`], [`bsgs`]),
//! * straight-line programs as membership certificates ([`slp`]),
//! * grammars, automata, derivation trees and Horton-Strahler machinery ([`lang`]),
//! * a black-box group oracle model with a permutation-backed instantiation ([`blackbox`]),
//! * rational-subset membership over symmetric groups and the spanning-tree
//!   generator technique ([`rational`]),
//! * context-free membership via a subgroup fixed-point pipeline ([`cfm`]),
//! * subset-sum / knapsack / k-knapsack / 2-knapsack solvers ([`knapsack`]),
//! * executable hardness reductions with brute-force cross-checks ([`reductions`]),
//! * reductions between intersection non-emptiness and context-free
//!   membership ([`intersection`]),
//! * independent brute-force oracles used to cross-validate everything at
//!   desk scale ([`oracle`]), and seeded instance generators ([`gen`]).
//!
//! Throughout the crate permutations multiply **left to right**: `i^(ab) = (i^a)^b`.
//! Most libraries use the opposite convention, so this is worth keeping in mind
//! when comparing results. Points are 1-based in every file format and in all
//! printed cycle notation; internal indices are 0-based.

pub mod blackbox;
pub mod bsgs;
pub mod caps;
pub mod cfm;
pub mod error;
pub mod formats;
pub mod gen;
pub mod intersection;
pub mod knapsack;
pub mod lang;
pub mod oracle;
pub mod perm;
pub mod rational;
pub mod reductions;
pub mod slp;

pub use caps::Caps;
pub use error::{Error, Result};
pub use perm::Permutation;
