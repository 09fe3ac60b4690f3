//! Grammars, automata, derivation trees and Horton-Strahler machinery.

mod cfg;
mod dfa;
mod emptiness;
mod strahler;
mod tree;

pub use cfg::{Cfg, Prod, ProdRhs, Terminal};
pub use dfa::{is_group_dfa, letter_permutation, Dfa, GroupNfa};
pub use emptiness::{cfg_emptiness, productive_nonterminals};
pub use strahler::{
    check_cfg_k, check_cfg_k_exhaustive, count_acyclic_trees, enumerate_acyclic_trees,
    max_acyclic_hs,
};
pub use tree::{horton_strahler, BinTree, DerivationTree};
