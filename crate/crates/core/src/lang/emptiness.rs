//! Grammar emptiness with acyclic witness trees.
//!
//! A CNF grammar has a nonempty language exactly when it has an acyclic
//! derivation tree, so the witness returned here is always acyclic: the
//! productive-nonterminal fixpoint assigns each nonterminal the round in
//! which it became productive, and the witness builder only uses productions
//! whose children became productive strictly earlier.

use crate::lang::cfg::{Cfg, ProdRhs};
use crate::lang::tree::DerivationTree;

/// Ranks of productive nonterminals: `rank[a] = Some(r)` when `a` first
/// became productive in round `r`.
pub fn productive_nonterminals(g: &Cfg) -> Vec<Option<usize>> {
    let n = g.nonterminal_count();
    let mut rank: Vec<Option<usize>> = vec![None; n];
    let mut round = 0;
    loop {
        let mut changed = false;
        for prod in g.prods() {
            if rank[prod.lhs].is_some() {
                continue;
            }
            let productive = match &prod.rhs {
                ProdRhs::Term(_) => true,
                ProdRhs::Pair(b, c) => {
                    matches!(rank[*b], Some(r) if r <= round)
                        && matches!(rank[*c], Some(r) if r <= round)
                }
            };
            if productive {
                rank[prod.lhs] = Some(round + 1);
                changed = true;
            }
        }
        if !changed {
            return rank;
        }
        round += 1;
    }
}

fn witness(g: &Cfg, rank: &[Option<usize>], a: usize) -> DerivationTree {
    let my_rank = rank[a].expect("witness only requested for productive nonterminals");
    // terminal production first; otherwise a binary production whose children
    // became productive strictly earlier (one exists by construction)
    if let Some((_, term)) = g.terminal_prods(a).next() {
        return DerivationTree::Leaf {
            nt: a,
            term: term.clone(),
        };
    }
    for (_, b, c) in g.binary_prods(a) {
        let (rb, rc) = (rank[b], rank[c]);
        if matches!(rb, Some(r) if r < my_rank) && matches!(rc, Some(r) if r < my_rank) {
            return DerivationTree::Node {
                nt: a,
                left: Box::new(witness(g, rank, b)),
                right: Box::new(witness(g, rank, c)),
            };
        }
    }
    unreachable!("productive nonterminal without a usable production")
}

/// Decides `L(G) != {}` and, when nonempty, returns one acyclic derivation
/// tree rooted at the start symbol.
pub fn cfg_emptiness(g: &Cfg) -> (bool, Option<DerivationTree>) {
    let rank = productive_nonterminals(g);
    match rank[g.start()] {
        None => (false, None),
        Some(_) => {
            let tree = witness(g, &rank, g.start());
            debug_assert!(tree.is_acyclic());
            debug_assert!(tree.validate(g).is_ok());
            (true, Some(tree))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::lang::Terminal;
    use crate::oracle::enumerate_words;

    #[test]
    fn single_terminal_production() {
        let g = Cfg::parse("start S\nprod S -> 'a'\n").unwrap();
        let (nonempty, tree) = cfg_emptiness(&g);
        assert!(nonempty);
        let tree = tree.unwrap();
        assert_eq!(tree.node_count(), 1);
        assert!(tree.validate(&g).is_ok());
    }

    #[test]
    fn self_recursion_only_is_empty() {
        let g = Cfg::parse("start S\nprod S -> S S\n").unwrap();
        let (nonempty, tree) = cfg_emptiness(&g);
        assert!(!nonempty);
        assert!(tree.is_none());
    }

    #[test]
    fn matches_bounded_word_search_on_random_grammars() {
        let mut rng = gen::rng_from_seed(23);
        let letters = [Terminal::Letter("a".into()), Terminal::Letter("b".into())];
        for _ in 0..120 {
            let g = gen::random_cnf_grammar(&mut rng, 4, 4, &letters);
            let (nonempty, tree) = cfg_emptiness(&g);
            let words = enumerate_words(&g, 12, 2_000_000).unwrap();
            assert_eq!(nonempty, !words.is_empty());
            if let Some(t) = tree {
                assert!(t.is_acyclic());
                assert!(t.validate(&g).is_ok());
                assert_eq!(t.nt(), g.start());
            }
        }
    }
}
