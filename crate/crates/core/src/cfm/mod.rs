//! Context-free membership in symmetric groups through a subgroup fixed
//! point.
//!
//! For a CNF grammar over a finite group `G`, each nonterminal `A` carries
//! the subgroup of pairs `(u, v)` with `A` deriving `u A v`, living in
//! `G x G^op` (the second coordinate multiplies in reverse). Two operators
//! connect these subgroups with evaluated languages:
//!
//! * [`delta`] turns a subgroup tuple into the languages derivable through
//!   acyclic derivation trees whose nodes may be "sandwiched" by pairs from
//!   their nonterminal's subgroup;
//! * [`gamma`] turns a language tuple back into subgroups, by running the
//!   spanning-tree generator extraction on an automaton over `G x G^op`
//!   whose states are the nonterminals.
//!
//! Iterating `gamma . delta` from the trivial tuple reaches a fixed point
//! whose `delta` image is exactly the tuple of evaluated languages, which
//! decides membership. An independent Kleene fixpoint over explicit sets
//! ([`oracle_semantics`]) cross-checks every run.

mod pair;
mod pipeline;

pub use pair::GroupPair;
pub use pipeline::{
    cf_membership, cf_membership_certificate, delta, evaluate_decorated_tree, fixed_point, gamma,
    iteration_bound, loop_products, oracle_semantics, Certificate, FixedPoint, LanguageTuple,
    LoopWitness, SubgroupTuple,
};
