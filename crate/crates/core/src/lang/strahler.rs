//! Deciding whether every acyclic derivation tree of a grammar has bounded
//! Horton-Strahler number.
//!
//! The decision runs an exact dynamic program over pairs (nonterminal,
//! forbidden ancestor set): `achievable(A, F)` is the set of Horton-Strahler
//! numbers of complete acyclic derivation trees rooted at `A` that avoid the
//! nonterminals in `F`. A terminal production contributes 0; a binary
//! production `A -> B C` contributes `combine(s1, s2)` for achievable numbers
//! of the children with `A` added to the forbidden set, where
//! `combine(s, s) = s + 1` and `combine(s, t) = max(s, t)` otherwise.
//!
//! A certificate-style exhaustive check over explicitly enumerated trees is
//! kept as an independent oracle for tiny grammars: it enumerates complete
//! acyclic trees up to the node threshold and, past the threshold, partial
//! trees whose open leaves can be completed without reusing ancestors.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::lang::cfg::Cfg;
use crate::lang::emptiness::productive_nonterminals;
use crate::lang::tree::{horton_strahler, DerivationTree};

fn combine(s1: u32, s2: u32) -> u32 {
    if s1 == s2 {
        s1 + 1
    } else {
        s1.max(s2)
    }
}

struct Dp<'a> {
    g: &'a Cfg,
    memo: HashMap<(usize, u64), BTreeSet<u32>>,
}

impl<'a> Dp<'a> {
    fn achievable(&mut self, a: usize, forbidden: u64) -> BTreeSet<u32> {
        if let Some(hit) = self.memo.get(&(a, forbidden)) {
            return hit.clone();
        }
        let mut out = BTreeSet::new();
        if self.g.terminal_prods(a).next().is_some() {
            out.insert(0);
        }
        let child_forbidden = forbidden | (1 << a);
        for (_, b, c) in self.g.binary_prods(a).collect::<Vec<_>>() {
            if child_forbidden & (1 << b) != 0 || child_forbidden & (1 << c) != 0 {
                continue;
            }
            let left = self.achievable(b, child_forbidden);
            if left.is_empty() {
                continue;
            }
            let right = self.achievable(c, child_forbidden);
            for &s1 in &left {
                for &s2 in &right {
                    out.insert(combine(s1, s2));
                }
            }
        }
        self.memo.insert((a, forbidden), out.clone());
        out
    }
}

/// The maximum Horton-Strahler number over all complete acyclic derivation
/// trees rooted at the start symbol; `None` when no such tree exists.
pub fn max_acyclic_hs(g: &Cfg, caps: &crate::Caps) -> Result<Option<u32>> {
    caps.check(
        "forbidden-set dynamic program",
        g.nonterminal_count() as u128,
        caps.max_dp_nonterminals,
    )?;
    let mut dp = Dp {
        g,
        memo: HashMap::new(),
    };
    Ok(dp.achievable(g.start(), 0).into_iter().next_back())
}

/// Membership in the class of grammars whose acyclic derivation trees all
/// have Horton-Strahler number at most `k`. Grammars with no acyclic
/// derivation tree belong vacuously.
pub fn check_cfg_k(g: &Cfg, k: u32, caps: &crate::Caps) -> Result<bool> {
    if k < 1 {
        return Err(Error::InvalidInput(
            "class index k must be at least 1".into(),
        ));
    }
    Ok(match max_acyclic_hs(g, caps)? {
        None => true,
        Some(max) => max <= k,
    })
}

/// Visits every complete acyclic derivation tree rooted at `root`, erroring
/// out after `cap` trees. Returns the number of trees visited.
pub fn enumerate_acyclic_trees(
    g: &Cfg,
    root: usize,
    cap: u64,
    visit: &mut dyn FnMut(&DerivationTree),
) -> Result<u64> {
    fn all_trees(
        g: &Cfg,
        a: usize,
        forbidden: u64,
        cap: u64,
        count: &mut u64,
    ) -> Result<Vec<DerivationTree>> {
        let mut out = Vec::new();
        for (_, term) in g.terminal_prods(a) {
            out.push(DerivationTree::Leaf {
                nt: a,
                term: term.clone(),
            });
        }
        let child_forbidden = forbidden | (1 << a);
        for (_, b, c) in g.binary_prods(a) {
            if child_forbidden & (1 << b) != 0 || child_forbidden & (1 << c) != 0 {
                continue;
            }
            let lefts = all_trees(g, b, child_forbidden, cap, count)?;
            if lefts.is_empty() {
                continue;
            }
            let rights = all_trees(g, c, child_forbidden, cap, count)?;
            for l in &lefts {
                for r in &rights {
                    out.push(DerivationTree::Node {
                        nt: a,
                        left: Box::new(l.clone()),
                        right: Box::new(r.clone()),
                    });
                }
            }
        }
        *count += out.len() as u64;
        if *count > cap {
            return Err(Error::CapExceeded {
                what: "acyclic tree enumeration",
                needed: *count as u128,
                cap: cap as u128,
            });
        }
        Ok(out)
    }
    let mut scratch = 0;
    let trees = all_trees(g, root, 0, cap, &mut scratch)?;
    for t in &trees {
        debug_assert!(t.is_acyclic());
        visit(t);
    }
    Ok(trees.len() as u64)
}

/// Counts complete acyclic derivation trees rooted at the start symbol
/// without materializing them (useful as a guard before enumeration).
pub fn count_acyclic_trees(g: &Cfg, root: usize) -> u128 {
    fn count(g: &Cfg, a: usize, forbidden: u64, memo: &mut HashMap<(usize, u64), u128>) -> u128 {
        if let Some(&hit) = memo.get(&(a, forbidden)) {
            return hit;
        }
        let mut total: u128 = g.terminal_prods(a).count() as u128;
        let child_forbidden = forbidden | (1 << a);
        for (_, b, c) in g.binary_prods(a).collect::<Vec<_>>() {
            if child_forbidden & (1 << b) != 0 || child_forbidden & (1 << c) != 0 {
                continue;
            }
            total += count(g, b, child_forbidden, memo).saturating_mul(count(
                g,
                c,
                child_forbidden,
                memo,
            ));
        }
        memo.insert((a, forbidden), total);
        total
    }
    count(g, root, 0, &mut HashMap::new())
}

/// Partial acyclic derivation trees: open leaves are unexpanded nonterminals.
#[derive(Clone, Debug)]
enum PartialTree {
    Open(usize),
    Closed,
    Split(usize, Box<PartialTree>, Box<PartialTree>),
}

impl PartialTree {
    fn size(&self) -> usize {
        match self {
            PartialTree::Open(_) | PartialTree::Closed => 1,
            PartialTree::Split(_, l, r) => 1 + l.size() + r.size(),
        }
    }
}

/// Certificate-style membership check mirroring the two-case analysis:
/// a grammar is outside the class exactly when it has a small acyclic tree
/// with Horton-Strahler number above `k`, or any acyclic tree with more than
/// `2 |N|^k` nodes. The second case is detected through partial acyclic trees
/// with size in `(2|N|^k, 2|N|^k + 2]` whose open leaves admit acyclic
/// completions that avoid their ancestors.
pub fn check_cfg_k_exhaustive(g: &Cfg, k: u32, tree_cap: u64) -> Result<bool> {
    if k < 1 {
        return Err(Error::InvalidInput(
            "class index k must be at least 1".into(),
        ));
    }
    let n = g.nonterminal_count() as u64;
    let threshold = 2 * n.pow(k) as usize;

    // Case 1: a small complete acyclic tree with a large number.
    let mut violated = false;
    enumerate_acyclic_trees(g, g.start(), tree_cap, &mut |t| {
        if t.node_count() <= threshold && horton_strahler(&t.strip_terminals()) > k {
            violated = true;
        }
    })?;
    if violated {
        return Ok(false);
    }

    // Case 2: a partial acyclic tree just past the threshold, all of whose
    // open leaves can be completed without reusing ancestors.
    let mut found_partial = false;
    let mut stack_path: Vec<usize> = Vec::new();
    enumerate_partials(
        g,
        g.start(),
        &mut stack_path,
        threshold + 2,
        &mut |tree: &PartialTree| {
            let size = tree.size();
            if size > threshold && size <= threshold + 2 && open_leaves_completable(g, tree) {
                found_partial = true;
            }
        },
    );
    Ok(!found_partial)
}

/// Enumerates partial acyclic trees rooted at `a` (ancestors tracked in
/// `path`) with at most `max_size` nodes, invoking the visitor on each.
fn enumerate_partials(
    g: &Cfg,
    a: usize,
    path: &mut Vec<usize>,
    max_size: usize,
    visit: &mut dyn FnMut(&PartialTree),
) {
    fn expansions(g: &Cfg, a: usize, path: &mut Vec<usize>, budget: usize) -> Vec<PartialTree> {
        let mut out = vec![PartialTree::Open(a)];
        if g.terminal_prods(a).next().is_some() {
            out.push(PartialTree::Closed);
        }
        if budget < 3 {
            return out;
        }
        path.push(a);
        for (_, b, c) in g.binary_prods(a) {
            if path.contains(&b) || path.contains(&c) {
                continue;
            }
            let lefts = expansions(g, b, path, budget - 2);
            for l in lefts {
                let remaining = budget - 1 - l.size();
                let rights = expansions(g, c, path, remaining);
                for r in rights {
                    out.push(PartialTree::Split(a, Box::new(l.clone()), Box::new(r)));
                }
            }
        }
        path.pop();
        out
    }
    for t in expansions(g, a, path, max_size) {
        visit(&t);
    }
}

/// Every open leaf must derive some word using only nonterminals that did not
/// occur on its root path: emptiness of the ancestor-pruned subgrammar.
fn open_leaves_completable(g: &Cfg, tree: &PartialTree) -> bool {
    fn walk(g: &Cfg, t: &PartialTree, path: &mut Vec<usize>) -> bool {
        match t {
            PartialTree::Closed => true,
            PartialTree::Open(a) => subgrammar_nonempty(g, *a, path),
            PartialTree::Split(a, l, r) => {
                path.push(*a);
                let ok = walk(g, l, path) && walk(g, r, path);
                path.pop();
                ok
            }
        }
    }
    walk(g, tree, &mut Vec::new())
}

/// Nonemptiness of the subgrammar rooted at `a` with the strict ancestors
/// removed (productions touching them are dropped).
fn subgrammar_nonempty(g: &Cfg, a: usize, removed: &[usize]) -> bool {
    let pruned: Vec<_> = g
        .prods()
        .iter()
        .filter(|p| {
            if removed.contains(&p.lhs) {
                return false;
            }
            match p.rhs {
                crate::lang::cfg::ProdRhs::Pair(b, c) => {
                    !removed.contains(&b) && !removed.contains(&c)
                }
                _ => true,
            }
        })
        .cloned()
        .collect();
    let names = (0..g.nonterminal_count())
        .map(|i| g.nt_name(i).to_string())
        .collect();
    let sub = Cfg::new(names, a, pruned).expect("pruning preserves validity");
    productive_nonterminals(&sub)[a].is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::lang::Terminal;
    use crate::Caps;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn single_terminal_grammar_has_number_zero() {
        let g = Cfg::parse("start S\nprod S -> 'a'\n").unwrap();
        assert_eq!(max_acyclic_hs(&g, &caps()).unwrap(), Some(0));
    }

    #[test]
    fn two_leaf_grammar_has_number_one() {
        let g = Cfg::parse("start S\nprod S -> A B\nprod A -> 'a'\nprod B -> 'b'\n").unwrap();
        assert_eq!(max_acyclic_hs(&g, &caps()).unwrap(), Some(1));
    }

    #[test]
    fn empty_grammar_has_no_trees() {
        let g = Cfg::parse("start S\nprod S -> S S\n").unwrap();
        assert_eq!(max_acyclic_hs(&g, &caps()).unwrap(), None);
        assert!(check_cfg_k(&g, 1, &caps()).unwrap());
    }

    #[test]
    fn balanced_grammar_exceeds_class_one() {
        let text = "start S\nprod S -> A B\nprod A -> C D\nprod B -> E F\n\
                    prod C -> 'a'\nprod D -> 'a'\nprod E -> 'a'\nprod F -> 'a'\n";
        let g = Cfg::parse(text).unwrap();
        assert_eq!(max_acyclic_hs(&g, &caps()).unwrap(), Some(2));
        assert!(!check_cfg_k(&g, 1, &caps()).unwrap());
        assert!(check_cfg_k(&g, 2, &caps()).unwrap());
    }

    #[test]
    fn regular_grammar_in_class_one() {
        // right-linear shape: S -> a S' chains become A -> t B with t a letter
        let text = "start S\nprod S -> T S\nprod S -> 'a'\nprod T -> 'a'\n";
        let g = Cfg::parse(text).unwrap();
        assert!(check_cfg_k(&g, 1, &caps()).unwrap());
    }

    #[test]
    fn max_number_bounded_by_nonterminal_count() {
        let mut rng = gen::rng_from_seed(5);
        let letters = [Terminal::Letter("a".into())];
        for _ in 0..80 {
            let g = gen::random_cnf_grammar(&mut rng, 4, 5, &letters);
            if let Some(s) = max_acyclic_hs(&g, &caps()).unwrap() {
                assert!(s as usize <= g.nonterminal_count());
            }
        }
    }

    #[test]
    fn dp_matches_direct_enumeration() {
        let mut rng = gen::rng_from_seed(17);
        let letters = [Terminal::Letter("a".into()), Terminal::Letter("b".into())];
        for _ in 0..60 {
            let g = gen::random_cnf_grammar(&mut rng, 4, 4, &letters);
            if count_acyclic_trees(&g, g.start()) > 200_000 {
                continue;
            }
            let mut max_seen: Option<u32> = None;
            enumerate_acyclic_trees(&g, g.start(), 300_000, &mut |t| {
                let s = horton_strahler(&t.strip_terminals());
                max_seen = Some(max_seen.map_or(s, |m| m.max(s)));
            })
            .unwrap();
            assert_eq!(max_acyclic_hs(&g, &caps()).unwrap(), max_seen);
        }
    }

    #[test]
    fn dp_matches_certificate_search() {
        let mut rng = gen::rng_from_seed(29);
        let letters = [Terminal::Letter("a".into())];
        let mut checked = 0;
        while checked < 40 {
            let g = gen::random_cnf_grammar(&mut rng, 3, 4, &letters);
            if count_acyclic_trees(&g, g.start()) > 100_000 {
                continue;
            }
            for k in 1..=3 {
                assert_eq!(
                    check_cfg_k(&g, k, &caps()).unwrap(),
                    check_cfg_k_exhaustive(&g, k, 200_000).unwrap()
                );
            }
            checked += 1;
        }
    }

    #[test]
    fn emptiness_agrees_with_tree_existence() {
        // a maximal acyclic number exists exactly when the language does
        let mut rng = gen::rng_from_seed(37);
        let letters = [Terminal::Letter("a".into())];
        for _ in 0..80 {
            let g = gen::random_cnf_grammar(&mut rng, 4, 4, &letters);
            let (nonempty, _) = crate::lang::cfg_emptiness(&g);
            assert_eq!(nonempty, max_acyclic_hs(&g, &caps()).unwrap().is_some());
        }
    }

    #[test]
    fn rejects_k_zero() {
        let g = Cfg::parse("start S\nprod S -> 'a'\n").unwrap();
        assert!(check_cfg_k(&g, 0, &caps()).is_err());
        assert!(check_cfg_k_exhaustive(&g, 0, 100).is_err());
    }
}
