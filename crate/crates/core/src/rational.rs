//! Rational-subset membership over symmetric groups and the spanning-tree
//! subgroup-generator technique.
//!
//! An automaton whose unique initial state equals its unique final state
//! accepts a submonoid of the finite group, hence a subgroup. Such automata
//! are first trimmed to states that lie on a path through the initial state
//! and symmetrized with inverse transitions; a spanning tree of the resulting
//! undirected multigraph then yields one subgroup generator
//! `g_e = g_p * g * g_q^-1` per non-tree edge.
//!
//! The general membership decision is a breadth-first search over
//! (state, group element) pairs; for subgroup-form automata the spanning-tree
//! route provides an independent second method.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::bsgs::schreier_sims;
use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::lang::GroupNfa;
use crate::perm::Permutation;

/// An undirected edge of the symmetrized automaton: the transition pair
/// `{(p, g, q), (q, g^-1, p)}` stored with one chosen orientation.
#[derive(Clone, Debug)]
pub struct UndirEdge {
    pub p: usize,
    pub q: usize,
    pub label: Permutation,
}

/// Trimmed and symmetrized subgroup-form automaton.
#[derive(Clone, Debug)]
pub struct TrimmedGroupNfa {
    degree: usize,
    q0: usize,
    /// kept states in ascending order (always contains `q0`)
    states: Vec<usize>,
    /// all transitions, inverses included
    transitions: Vec<(usize, Permutation, usize)>,
    /// one entry per undirected edge, deterministic input order
    edges: Vec<UndirEdge>,
}

impl TrimmedGroupNfa {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn q0(&self) -> usize {
        self.q0
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn transitions(&self) -> &[(usize, Permutation, usize)] {
        &self.transitions
    }

    pub fn edges(&self) -> &[UndirEdge] {
        &self.edges
    }

    /// View as a plain automaton again (for language comparisons).
    pub fn to_nfa(&self) -> GroupNfa {
        GroupNfa::new(
            self.degree,
            self.states.iter().copied().max().unwrap_or(0) + 1,
            self.transitions.clone(),
            vec![self.q0],
            vec![self.q0],
        )
        .expect("trimmed automaton stays valid")
    }
}

/// Trims unreachable/non-co-reachable states and adds inverse transitions.
/// Requires a single state that is both initial and final. The evaluated
/// language is unchanged: for any kept transition there is a return path, so
/// each added inverse label was already spelled by some existing path.
pub fn trim_and_symmetrize(nfa: &GroupNfa) -> Result<TrimmedGroupNfa> {
    if nfa.initial().len() != 1 || nfa.finals() != nfa.initial() {
        return Err(Error::InvalidInput(
            "spanning-tree technique needs initial = final = {q0}".into(),
        ));
    }
    let q0 = nfa.initial()[0];
    let n = nfa.states();

    let mut forward = vec![false; n];
    let mut backward = vec![false; n];
    reach(
        n,
        nfa.transitions().iter().map(|(p, _, q)| (*p, *q)),
        q0,
        &mut forward,
    );
    reach(
        n,
        nfa.transitions().iter().map(|(p, _, q)| (*q, *p)),
        q0,
        &mut backward,
    );
    let kept: Vec<usize> = (0..n).filter(|&s| forward[s] && backward[s]).collect();

    // deduplicated transitions among kept states, input order
    let mut transitions: Vec<(usize, Permutation, usize)> = Vec::new();
    let mut seen: HashSet<(usize, Permutation, usize)> = HashSet::new();
    for (p, g, q) in nfa.transitions() {
        if forward[*p] && backward[*p] && forward[*q] && backward[*q] {
            let key = (*p, g.clone(), *q);
            if seen.insert(key.clone()) {
                transitions.push(key);
            }
        }
    }
    // add inverse transitions unless already present
    for i in 0..transitions.len() {
        let (p, g, q) = transitions[i].clone();
        let inv = (q, g.inverse(), p);
        if seen.insert(inv.clone()) {
            transitions.push(inv);
        }
    }

    // pair transitions into undirected edges: (p, g, q) matches (q, g^-1, p)
    let mut edges: Vec<UndirEdge> = Vec::new();
    let mut matched: HashSet<(usize, Permutation, usize)> = HashSet::new();
    for (p, g, q) in &transitions {
        let this = (*p, g.clone(), *q);
        if matched.contains(&this) {
            continue;
        }
        matched.insert(this);
        matched.insert((*q, g.inverse(), *p));
        edges.push(UndirEdge {
            p: *p,
            q: *q,
            label: g.clone(),
        });
    }

    Ok(TrimmedGroupNfa {
        degree: nfa.degree(),
        q0,
        states: kept,
        transitions,
        edges,
    })
}

fn reach(n: usize, arcs: impl Iterator<Item = (usize, usize)>, from: usize, out: &mut [bool]) {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (p, q) in arcs {
        adj[p].push(q);
    }
    let mut queue = VecDeque::from([from]);
    out[from] = true;
    while let Some(s) = queue.pop_front() {
        for &t in &adj[s] {
            if !out[t] {
                out[t] = true;
                queue.push_back(t);
            }
        }
    }
}

/// Subgroup generators from the non-tree edges of a breadth-first spanning
/// tree rooted at `q0`. `g_p` is the element spelled along the tree path from
/// `q0` to `p`; each non-tree edge `(p, g, q)` contributes `g_p * g * g_q^-1`.
pub fn spanning_tree_generators(t: &TrimmedGroupNfa) -> Vec<Permutation> {
    let degree = t.degree();
    // adjacency over undirected edges, scanned in input order
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in t.edges.iter().enumerate() {
        incident.entry(e.p).or_default().push(i);
        if e.p != e.q {
            incident.entry(e.q).or_default().push(i);
        }
    }
    let mut path: HashMap<usize, Permutation> = HashMap::new();
    let mut tree_edges: HashSet<usize> = HashSet::new();
    path.insert(t.q0, Permutation::identity(degree));
    let mut queue = VecDeque::from([t.q0]);
    while let Some(s) = queue.pop_front() {
        let g_s = path[&s].clone();
        for &ei in incident.get(&s).into_iter().flatten() {
            let e = &t.edges[ei];
            let (other, label) = if e.p == s {
                (e.q, e.label.clone())
            } else {
                (e.p, e.label.inverse())
            };
            if let std::collections::hash_map::Entry::Vacant(e) = path.entry(other) {
                tree_edges.insert(ei);
                e.insert(&g_s * &label);
                queue.push_back(other);
            }
        }
    }
    t.edges
        .iter()
        .enumerate()
        .filter(|(i, _)| !tree_edges.contains(i))
        .map(|(_, e)| {
            let g_p = &path[&e.p];
            let g_q_inv = path[&e.q].inverse();
            &(g_p * &e.label) * &g_q_inv
        })
        .collect()
}

/// All group elements spelled by accepting paths, by breadth-first search
/// over (state, element) pairs.
pub fn evaluated_language(nfa: &GroupNfa, caps: &Caps) -> Result<HashSet<Permutation>> {
    let reach = reachable_pairs(nfa, caps)?;
    let mut out = HashSet::new();
    for (state, g) in reach.keys() {
        if nfa.finals().contains(state) {
            out.insert(g.clone());
        }
    }
    Ok(out)
}

/// Decides whether the target is spelled by some accepting path; on success
/// also returns the label sequence of one witness path.
pub fn rational_membership(
    nfa: &GroupNfa,
    target: &Permutation,
    caps: &Caps,
) -> Result<(bool, Option<Vec<Permutation>>)> {
    if nfa.degree() != target.degree() {
        return Err(Error::DegreeMismatch(nfa.degree(), target.degree()));
    }
    let reach = reachable_pairs(nfa, caps)?;
    for f in nfa.finals() {
        let key = (*f, target.clone());
        if reach.contains_key(&key) {
            // walk parent pointers back to an initial pair
            let mut labels = Vec::new();
            let mut cur = key;
            while let Some(Some((prev, label))) = reach.get(&cur) {
                labels.push(label.clone());
                cur = prev.clone();
            }
            labels.reverse();
            return Ok((true, Some(labels)));
        }
    }
    Ok((false, None))
}

type ParentMap = HashMap<(usize, Permutation), Option<((usize, Permutation), Permutation)>>;

/// Breadth-first closure of (state, element) pairs with parent pointers.
/// The search always saturates the reachable space, since negative answers
/// need it anyway.
fn reachable_pairs(nfa: &GroupNfa, caps: &Caps) -> Result<ParentMap> {
    if nfa.degree() > caps.max_bfs_degree {
        return Err(Error::CapExceeded {
            what: "rational membership search degree",
            needed: nfa.degree() as u128,
            cap: caps.max_bfs_degree as u128,
        });
    }
    let mut adj: Vec<Vec<(Permutation, usize)>> = vec![Vec::new(); nfa.states()];
    for (p, g, q) in nfa.transitions() {
        adj[*p].push((g.clone(), *q));
    }
    let mut parents: ParentMap = HashMap::new();
    let mut queue: VecDeque<(usize, Permutation)> = VecDeque::new();
    for &s in nfa.initial() {
        let key = (s, Permutation::identity(nfa.degree()));
        if !parents.contains_key(&key) {
            parents.insert(key.clone(), None);
            queue.push_back(key);
        }
    }
    while let Some((state, g)) = queue.pop_front() {
        for (label, next_state) in &adj[state] {
            let next = (*next_state, &g * label);
            if !parents.contains_key(&next) {
                if parents.len() >= caps.max_closure {
                    return Err(Error::CapExceeded {
                        what: "rational membership search states",
                        needed: parents.len() as u128 + 1,
                        cap: caps.max_closure as u128,
                    });
                }
                parents.insert(next.clone(), Some(((state, g.clone()), label.clone())));
                queue.push_back(next);
            }
        }
    }
    Ok(parents)
}

/// Membership through the subgroup route: trim, symmetrize, extract
/// spanning-tree generators, then sift through a stabilizer chain.
pub fn subgroup_method_membership(
    nfa: &GroupNfa,
    target: &Permutation,
    _caps: &Caps,
) -> Result<bool> {
    let trimmed = trim_and_symmetrize(nfa)?;
    let gens = spanning_tree_generators(&trimmed);
    if gens.is_empty() {
        return Ok(target.is_identity());
    }
    schreier_sims(&gens)?.contains(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use num_bigint::BigUint;
    use rand::Rng;

    fn perm(degree: usize, s: &str) -> Permutation {
        Permutation::parse(degree, s).unwrap()
    }

    fn loop_nfa(degree: usize, labels: &[&str]) -> GroupNfa {
        let transitions = labels
            .iter()
            .map(|l| (0usize, perm(degree, l), 0usize))
            .collect();
        GroupNfa::new(degree, 1, transitions, vec![0], vec![0]).unwrap()
    }

    #[test]
    fn one_state_no_transitions_unchanged() {
        let nfa = GroupNfa::new(3, 1, vec![], vec![0], vec![0]).unwrap();
        let t = trim_and_symmetrize(&nfa).unwrap();
        assert_eq!(t.states(), &[0]);
        assert!(t.transitions().is_empty());
        assert!(spanning_tree_generators(&t).is_empty());
    }

    #[test]
    fn loop_gains_inverse_loop() {
        let nfa = loop_nfa(3, &["(1 2 3)"]);
        let t = trim_and_symmetrize(&nfa).unwrap();
        assert_eq!(t.transitions().len(), 2);
        assert!(t
            .transitions()
            .iter()
            .any(|(_, g, _)| g == &perm(3, "(1 3 2)")));
        // single undirected loop edge, generator is the label itself
        let gens = spanning_tree_generators(&t);
        assert_eq!(gens, vec![perm(3, "(1 2 3)")]);
    }

    #[test]
    fn two_state_cycle_generator() {
        // g forward, h back: the tree takes g, the unique non-tree edge
        // contributes g_1 * h * g_0^-1 = g * h
        let g = perm(4, "(1 2)");
        let h = perm(4, "(3 4)");
        let nfa = GroupNfa::new(
            4,
            2,
            vec![(0, g.clone(), 1), (1, h.clone(), 0)],
            vec![0],
            vec![0],
        )
        .unwrap();
        let t = trim_and_symmetrize(&nfa).unwrap();
        let gens = spanning_tree_generators(&t);
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0], &g * &h);
    }

    #[test]
    fn dead_end_state_is_trimmed() {
        // both edges point away from q0 with no return: state 1 goes away
        // and the language collapses to the identity
        let nfa = GroupNfa::new(
            4,
            2,
            vec![(0, perm(4, "(1 2)"), 1), (0, perm(4, "(3 4)"), 1)],
            vec![0],
            vec![0],
        )
        .unwrap();
        let t = trim_and_symmetrize(&nfa).unwrap();
        assert_eq!(t.states(), &[0]);
        assert!(spanning_tree_generators(&t).is_empty());
    }

    #[test]
    fn trimming_preserves_language_on_random_automata() {
        let mut rng = gen::rng_from_seed(41);
        let caps = Caps::default();
        for _ in 0..60 {
            let states = rng.gen_range(1..=5);
            let transitions = rng.gen_range(0..=7);
            let nfa = gen::random_group_nfa(&mut rng, 4, states, transitions, true);
            let before = evaluated_language(&nfa, &caps).unwrap();
            let t = trim_and_symmetrize(&nfa).unwrap();
            let after = evaluated_language(&t.to_nfa(), &caps).unwrap();
            assert_eq!(before, after);
        }
    }

    #[test]
    fn empty_word_automaton_and_parity_loop() {
        let caps = Caps::default();
        let nfa = GroupNfa::new(3, 1, vec![], vec![0], vec![0]).unwrap();
        assert!(
            rational_membership(&nfa, &Permutation::identity(3), &caps)
                .unwrap()
                .0
        );
        let nfa = loop_nfa(3, &["(1 2)"]);
        assert!(
            rational_membership(&nfa, &perm(3, "(1 2)"), &caps)
                .unwrap()
                .0
        );
        assert!(
            !rational_membership(&nfa, &perm(3, "(1 2 3)"), &caps)
                .unwrap()
                .0
        );
    }

    #[test]
    fn witness_word_spells_the_target() {
        let mut rng = gen::rng_from_seed(57);
        let caps = Caps::default();
        for _ in 0..40 {
            let nfa = gen::random_group_nfa(&mut rng, 4, 3, 5, true);
            let lang = evaluated_language(&nfa, &caps).unwrap();
            for target in lang.iter().take(3) {
                let (found, witness) = rational_membership(&nfa, target, &caps).unwrap();
                assert!(found);
                let mut acc = Permutation::identity(4);
                for label in witness.unwrap() {
                    acc = &acc * &label;
                }
                assert_eq!(&acc, target);
            }
        }
    }

    #[test]
    fn spanning_tree_subgroup_matches_bfs_language() {
        let mut rng = gen::rng_from_seed(63);
        let caps = Caps::default();
        for _ in 0..60 {
            let states = rng.gen_range(1..=4);
            let transitions = rng.gen_range(1..=6);
            let nfa = gen::random_group_nfa(&mut rng, 4, states, transitions, true);
            let lang = evaluated_language(&nfa, &caps).unwrap();
            let t = trim_and_symmetrize(&nfa).unwrap();
            let gens = spanning_tree_generators(&t);
            let order = if gens.is_empty() {
                BigUint::from(1u32)
            } else {
                schreier_sims(&gens).unwrap().order()
            };
            assert_eq!(order, BigUint::from(lang.len()));
            for g in lang.iter().take(5) {
                assert!(subgroup_method_membership(&nfa, g, &caps).unwrap());
            }
        }
    }

    #[test]
    fn membership_monotone_under_added_transitions() {
        let mut rng = gen::rng_from_seed(71);
        let caps = Caps::default();
        for _ in 0..40 {
            let nfa = gen::random_group_nfa(&mut rng, 4, 3, 4, true);
            let target = Permutation::identity(4);
            let before = rational_membership(&nfa, &target, &caps).unwrap().0;
            let mut trans = nfa.transitions().to_vec();
            trans.push((
                rng.gen_range(0..3),
                gen::random_permutation(&mut rng, 4),
                rng.gen_range(0..3),
            ));
            let bigger = GroupNfa::new(4, 3, trans, vec![0], vec![0]).unwrap();
            let after = rational_membership(&bigger, &target, &caps).unwrap().0;
            if before {
                assert!(after);
            }
        }
    }
}
