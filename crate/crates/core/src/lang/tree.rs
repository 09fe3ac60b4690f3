//! Derivation trees and the Horton-Strahler number.

use crate::error::{Error, Result};
use crate::lang::cfg::{Cfg, ProdRhs, Terminal};

/// A derivation tree of a CNF grammar: inner nodes carry nonterminals, and a
/// node either expands by a binary production or derives a single terminal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DerivationTree {
    Leaf {
        nt: usize,
        term: Terminal,
    },
    Node {
        nt: usize,
        left: Box<DerivationTree>,
        right: Box<DerivationTree>,
    },
}

impl DerivationTree {
    pub fn nt(&self) -> usize {
        match self {
            DerivationTree::Leaf { nt, .. } | DerivationTree::Node { nt, .. } => *nt,
        }
    }

    /// Checks that every node applies a production of the grammar.
    pub fn validate(&self, g: &Cfg) -> Result<()> {
        match self {
            DerivationTree::Leaf { nt, term } => {
                let ok = g
                    .prods()
                    .iter()
                    .any(|p| p.lhs == *nt && matches!(&p.rhs, ProdRhs::Term(t) if t == term));
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!(
                        "no production {} -> {term}",
                        g.nt_name(*nt)
                    )))
                }
            }
            DerivationTree::Node { nt, left, right } => {
                let ok = g.prods().iter().any(|p| {
                    p.lhs == *nt
                        && matches!(p.rhs, ProdRhs::Pair(b, c) if b == left.nt() && c == right.nt())
                });
                if !ok {
                    return Err(Error::InvalidInput(format!(
                        "no production {} -> {} {}",
                        g.nt_name(*nt),
                        g.nt_name(left.nt()),
                        g.nt_name(right.nt())
                    )));
                }
                left.validate(g)?;
                right.validate(g)
            }
        }
    }

    /// True when no nonterminal repeats on any root-to-leaf path.
    pub fn is_acyclic(&self) -> bool {
        fn walk(t: &DerivationTree, path: &mut Vec<usize>) -> bool {
            let nt = t.nt();
            if path.contains(&nt) {
                return false;
            }
            path.push(nt);
            let ok = match t {
                DerivationTree::Leaf { .. } => true,
                DerivationTree::Node { left, right, .. } => walk(left, path) && walk(right, path),
            };
            path.pop();
            ok
        }
        walk(self, &mut Vec::new())
    }

    /// Strips terminal leaves, yielding the binary tree of nonterminal nodes.
    pub fn strip_terminals(&self) -> BinTree {
        match self {
            DerivationTree::Leaf { .. } => BinTree::Leaf,
            DerivationTree::Node { left, right, .. } => BinTree::Node(
                Box::new(left.strip_terminals()),
                Box::new(right.strip_terminals()),
            ),
        }
    }

    /// Nonterminal labels in preorder (used to index node decorations).
    pub fn preorder_nonterminals(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn walk(t: &DerivationTree, out: &mut Vec<usize>) {
            out.push(t.nt());
            if let DerivationTree::Node { left, right, .. } = t {
                walk(left, out);
                walk(right, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// The word of terminals at the leaves, left to right.
    pub fn yield_word(&self) -> Vec<Terminal> {
        let mut out = Vec::new();
        fn walk(t: &DerivationTree, out: &mut Vec<Terminal>) {
            match t {
                DerivationTree::Leaf { term, .. } => out.push(term.clone()),
                DerivationTree::Node { left, right, .. } => {
                    walk(left, out);
                    walk(right, out);
                }
            }
        }
        walk(self, &mut out);
        out
    }

    /// Number of nonterminal nodes in the tree.
    pub fn node_count(&self) -> usize {
        match self {
            DerivationTree::Leaf { .. } => 1,
            DerivationTree::Node { left, right, .. } => 1 + left.node_count() + right.node_count(),
        }
    }
}

/// A plain binary tree: what remains of a CNF derivation tree after removing
/// terminal-labelled leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BinTree {
    Leaf,
    Node(Box<BinTree>, Box<BinTree>),
}

impl BinTree {
    /// Perfect binary tree of the given height.
    pub fn perfect(height: usize) -> BinTree {
        if height == 0 {
            BinTree::Leaf
        } else {
            let sub = BinTree::perfect(height - 1);
            BinTree::Node(Box::new(sub.clone()), Box::new(sub))
        }
    }

    /// Left comb of the given height.
    pub fn comb(height: usize) -> BinTree {
        let mut t = BinTree::Leaf;
        for _ in 0..height {
            t = BinTree::Node(Box::new(t), Box::new(BinTree::Leaf));
        }
        t
    }

    /// Maximal number of edges on a root-to-leaf path.
    pub fn height(&self) -> usize {
        match self {
            BinTree::Leaf => 0,
            BinTree::Node(l, r) => 1 + l.height().max(r.height()),
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            BinTree::Leaf => 1,
            BinTree::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    pub fn nodes(&self) -> usize {
        match self {
            BinTree::Leaf => 1,
            BinTree::Node(l, r) => 1 + l.nodes() + r.nodes(),
        }
    }
}

/// The Horton-Strahler number of a binary tree: 0 on a single node; on an
/// inner node it is `1 + s` when both children have number `s`, and the
/// maximum of the two children's numbers otherwise.
pub fn horton_strahler(t: &BinTree) -> u32 {
    match t {
        BinTree::Leaf => 0,
        BinTree::Node(l, r) => {
            let (a, b) = (horton_strahler(l), horton_strahler(r));
            if a == b {
                a + 1
            } else {
                a.max(b)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_node_has_number_zero() {
        assert_eq!(horton_strahler(&BinTree::Leaf), 0);
    }

    #[test]
    fn perfect_tree_number_equals_height() {
        assert_eq!(horton_strahler(&BinTree::perfect(3)), 3);
    }

    #[test]
    fn comb_has_number_one() {
        assert_eq!(horton_strahler(&BinTree::comb(5)), 1);
    }

    fn random_bintree(rng: &mut rand_chacha::ChaCha8Rng, budget: usize) -> BinTree {
        use rand::Rng;
        if budget == 0 || rng.gen_bool(0.35) {
            BinTree::Leaf
        } else {
            BinTree::Node(
                Box::new(random_bintree(rng, budget / 2)),
                Box::new(random_bintree(rng, budget - 1 - budget / 2)),
            )
        }
    }

    proptest! {
        // with d the number of nodes on the longest root-to-leaf path:
        // leaf count <= d^hs and node count <= 2 * d^hs
        #[test]
        fn leaf_and_node_bounds(seed in 0u64..500) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let t = random_bintree(&mut rng, 40);
            let d = (t.height() + 1) as u64;
            let s = horton_strahler(&t);
            let bound = d.pow(s);
            prop_assert!(t.leaves() as u64 <= bound);
            prop_assert!(t.nodes() as u64 <= 2 * bound);
        }
    }

    #[test]
    fn acyclicity_detects_repeats() {
        let leaf = |nt| DerivationTree::Leaf {
            nt,
            term: Terminal::Letter("x".into()),
        };
        let cyclic = DerivationTree::Node {
            nt: 0,
            left: Box::new(leaf(0)),
            right: Box::new(leaf(1)),
        };
        assert!(!cyclic.is_acyclic());
        let acyclic = DerivationTree::Node {
            nt: 0,
            left: Box::new(leaf(1)),
            right: Box::new(leaf(2)),
        };
        assert!(acyclic.is_acyclic());
    }
}
