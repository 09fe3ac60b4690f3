//! Resource caps for the deterministic desk-scale decision procedures.
//!
//! Every procedure that realizes a nondeterministic guess by explicit search
//! is guarded by a cap. Exceeding a cap is a hard, distinct error
//! ([`crate::Error::CapExceeded`]), never a silent fallback.

/// Caps with conservative defaults. All fields are plain data so callers
/// (in particular the CLI) can override individual limits.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Maximum permutation degree for the breadth-first rational-membership
    /// search over (state, group element) pairs.
    pub max_bfs_degree: usize,
    /// Maximum permutation degree for the context-free membership pipeline
    /// and the Kleene language oracle.
    pub max_pipeline_degree: usize,
    /// Maximum number of distinct elements materialized by a brute-force
    /// closure (black-box closure, subgroup element enumeration, evaluated
    /// languages).
    pub max_closure: usize,
    /// Maximum ground-set size for the exact 3-hitting-set enumeration.
    pub max_x3hs_ground: usize,
    /// Maximum dimension of a zero-one matrix (Kronecker products build
    /// matrices of dimension degree squared).
    pub max_matrix_dim: usize,
    /// Maximum number of product-construction nonterminals in the Bar-Hillel
    /// oracle.
    pub max_product_nonterminals: usize,
    /// Maximum number of nonterminals for the subset-exponential dynamic
    /// programs over forbidden ancestor sets.
    pub max_dp_nonterminals: usize,
    /// Maximum number of solver states (index, partial product) visited by
    /// the knapsack-family searches.
    pub max_solver_states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_bfs_degree: 8,
            max_pipeline_degree: 5,
            max_closure: 100_000,
            max_x3hs_ground: 20,
            max_matrix_dim: 10_000,
            max_product_nonterminals: 200_000,
            max_dp_nonterminals: 20,
            max_solver_states: 10_000_000,
        }
    }
}

impl Caps {
    pub(crate) fn check(&self, what: &'static str, needed: u128, cap: usize) -> crate::Result<()> {
        if needed > cap as u128 {
            Err(crate::Error::CapExceeded {
                what,
                needed,
                cap: cap as u128,
            })
        } else {
            Ok(())
        }
    }
}
