//! Seeded instance generators.
//!
//! All randomness flows from a single `u64` seed through ChaCha8, which has a
//! stable, documented stream across platforms, so generated instances are
//! byte-identical everywhere.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::knapsack::{ExponentDomain, KnapsackInstance};
use crate::lang::{Cfg, Dfa, GroupNfa, Prod, ProdRhs, Terminal};
use crate::perm::Permutation;
use crate::reductions::X3hsInstance;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform random permutation by Fisher-Yates.
pub fn random_permutation(rng: &mut ChaCha8Rng, degree: usize) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    images.shuffle(rng);
    Permutation::from_images(images).expect("shuffled image table is a bijection")
}

pub fn random_generator_set(rng: &mut ChaCha8Rng, degree: usize, n: usize) -> Vec<Permutation> {
    (0..n).map(|_| random_permutation(rng, degree)).collect()
}

/// Random grammar in Chomsky normal form over the given terminal pool.
/// Every nonterminal gets at least one production; shapes are chosen with a
/// bias towards terminal productions so languages stay nonempty often.
pub fn random_cnf_grammar(
    rng: &mut ChaCha8Rng,
    nonterminals: usize,
    extra_productions: usize,
    terminals: &[Terminal],
) -> Cfg {
    assert!(nonterminals >= 1 && !terminals.is_empty());
    let names: Vec<String> = (0..nonterminals)
        .map(|i| {
            let c = (b'S' + i as u8) as char;
            c.to_string()
        })
        .collect();
    let mut prods = Vec::new();
    let push_random = |rng: &mut ChaCha8Rng, lhs: usize, prods: &mut Vec<Prod>| {
        if rng.gen_bool(0.55) {
            let t = terminals[rng.gen_range(0..terminals.len())].clone();
            prods.push(Prod {
                lhs,
                rhs: ProdRhs::Term(t),
            });
        } else {
            prods.push(Prod {
                lhs,
                rhs: ProdRhs::Pair(
                    rng.gen_range(0..nonterminals),
                    rng.gen_range(0..nonterminals),
                ),
            });
        }
    };
    for lhs in 0..nonterminals {
        push_random(rng, lhs, &mut prods);
    }
    for _ in 0..extra_productions {
        let lhs = rng.gen_range(0..nonterminals);
        push_random(rng, lhs, &mut prods);
    }
    prods.sort_by_key(|p| p.lhs);
    let declared = terminals.iter().find_map(|t| match t {
        Terminal::Perm(p) => Some(p.degree()),
        Terminal::Letter(_) => None,
    });
    Cfg::new_with_degree(names, 0, prods, declared).expect("generated grammar is valid CNF")
}

/// Random grammar where every nonterminal has a terminal production plus a
/// given number of random binary productions: derivation trees stay plentiful
/// and branching, which the tree-enumeration suites need.
pub fn random_branchy_cnf_grammar(
    rng: &mut ChaCha8Rng,
    nonterminals: usize,
    binary_productions: usize,
    terminals: &[Terminal],
) -> Cfg {
    assert!(nonterminals >= 1 && !terminals.is_empty());
    let names: Vec<String> = (0..nonterminals)
        .map(|i| ((b'S' + i as u8) as char).to_string())
        .collect();
    let mut prods: Vec<Prod> = (0..nonterminals)
        .map(|lhs| Prod {
            lhs,
            rhs: ProdRhs::Term(terminals[rng.gen_range(0..terminals.len())].clone()),
        })
        .collect();
    for _ in 0..binary_productions {
        prods.push(Prod {
            lhs: rng.gen_range(0..nonterminals),
            rhs: ProdRhs::Pair(
                rng.gen_range(0..nonterminals),
                rng.gen_range(0..nonterminals),
            ),
        });
    }
    prods.sort_by_key(|p| p.lhs);
    let declared = terminals.iter().find_map(|t| match t {
        Terminal::Perm(p) => Some(p.degree()),
        Terminal::Letter(_) => None,
    });
    Cfg::new_with_degree(names, 0, prods, declared).expect("generated grammar is valid CNF")
}

/// Random pool of permutation terminals, always including the identity with
/// probability 1/2 so grammars can hit the identity target.
pub fn random_perm_terminals(rng: &mut ChaCha8Rng, degree: usize, n: usize) -> Vec<Terminal> {
    let mut pool: Vec<Terminal> = (0..n)
        .map(|_| Terminal::Perm(random_permutation(rng, degree)))
        .collect();
    if rng.gen_bool(0.5) {
        pool.push(Terminal::Perm(Permutation::identity(degree)));
    }
    pool
}

/// Random automaton over group-element labels. When `subgroup_form` is set,
/// state 0 is both the unique initial and the unique final state, so the
/// evaluated language is a subgroup.
pub fn random_group_nfa(
    rng: &mut ChaCha8Rng,
    degree: usize,
    states: usize,
    transitions: usize,
    subgroup_form: bool,
) -> GroupNfa {
    let trans: Vec<(usize, Permutation, usize)> = (0..transitions)
        .map(|_| {
            (
                rng.gen_range(0..states),
                random_permutation(rng, degree),
                rng.gen_range(0..states),
            )
        })
        .collect();
    let (initial, finals) = if subgroup_form {
        (vec![0], vec![0])
    } else {
        (
            vec![rng.gen_range(0..states)],
            vec![rng.gen_range(0..states)],
        )
    };
    GroupNfa::new(degree, states, trans, initial, finals).expect("generated automaton is valid")
}

/// Random group DFA: every letter acts as a random permutation of the states.
pub fn random_group_dfa(rng: &mut ChaCha8Rng, states: usize, letters: &[String]) -> Dfa {
    let maps: Vec<Vec<usize>> = letters
        .iter()
        .map(|_| {
            let p = random_permutation(rng, states);
            (0..states).map(|q| p.apply(q)).collect()
        })
        .collect();
    let finals_count = rng.gen_range(1..=states);
    let mut finals: Vec<usize> = (0..states).collect();
    finals.shuffle(rng);
    finals.truncate(finals_count);
    finals.sort_unstable();
    Dfa::new(
        states,
        letters.to_vec(),
        maps,
        rng.gen_range(0..states),
        finals,
    )
    .expect("generated DFA is valid")
}

/// Random DFA that is usually not a group DFA: letters act as arbitrary maps.
pub fn random_dfa(rng: &mut ChaCha8Rng, states: usize, letters: &[String]) -> Dfa {
    let maps: Vec<Vec<usize>> = letters
        .iter()
        .map(|_| (0..states).map(|_| rng.gen_range(0..states)).collect())
        .collect();
    Dfa::new(
        states,
        letters.to_vec(),
        maps,
        rng.gen_range(0..states),
        vec![rng.gen_range(0..states)],
    )
    .expect("generated DFA is valid")
}

/// Subset-sum instance with a planted solution: the target is the product of
/// a random sub-multiset of the factors.
pub fn planted_subset_sum(
    rng: &mut ChaCha8Rng,
    degree: usize,
    n: usize,
) -> (KnapsackInstance, Vec<u8>) {
    let factors = random_generator_set(rng, degree, n);
    let bits: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=1u8)).collect();
    let mut target = Permutation::identity(degree);
    for (bit, f) in bits.iter().zip(&factors) {
        if *bit == 1 {
            target = &target * f;
        }
    }
    (
        KnapsackInstance::new(target, factors, ExponentDomain::Binary, None)
            .expect("planted instance is degree consistent"),
        bits,
    )
}

/// Knapsack instance with a planted exponent vector.
pub fn planted_knapsack(
    rng: &mut ChaCha8Rng,
    degree: usize,
    n: usize,
) -> (KnapsackInstance, Vec<u64>) {
    let factors = random_generator_set(rng, degree, n);
    let exps: Vec<u64> = (0..n).map(|_| rng.gen_range(0..8u64)).collect();
    let mut target = Permutation::identity(degree);
    for (e, f) in exps.iter().zip(&factors) {
        target = &target * &f.power(*e as i64);
    }
    (
        KnapsackInstance::new(target, factors, ExponentDomain::Natural, None)
            .expect("planted instance is degree consistent"),
        exps,
    )
}

/// Unbiased subset-sum / knapsack instance: target drawn independently.
pub fn random_knapsack_instance(
    rng: &mut ChaCha8Rng,
    degree: usize,
    n: usize,
    domain: ExponentDomain,
) -> KnapsackInstance {
    KnapsackInstance::new(
        random_permutation(rng, degree),
        random_generator_set(rng, degree, n),
        domain,
        None,
    )
    .expect("random instance is degree consistent")
}

/// Random family of 3-element subsets of `{1..n}`, no repeats inside a set.
pub fn random_x3hs(rng: &mut ChaCha8Rng, n: usize, sets: usize) -> X3hsInstance {
    assert!(n >= 3);
    let triples: Vec<[usize; 3]> = (0..sets)
        .map(|_| {
            let mut pts: Vec<usize> = (1..=n).collect();
            pts.shuffle(rng);
            let mut t = [pts[0], pts[1], pts[2]];
            t.sort_unstable();
            t
        })
        .collect();
    X3hsInstance::new(n, triples).expect("distinct sampled points form a valid set")
}

/// X3HS instance with a planted hitting set: every triple meets the planted
/// set in exactly one point.
pub fn planted_x3hs(rng: &mut ChaCha8Rng, n: usize, sets: usize) -> (X3hsInstance, Vec<usize>) {
    assert!(n >= 3);
    let picked = rng.gen_range(1..=(n - 2).max(1));
    let mut pts: Vec<usize> = (1..=n).collect();
    pts.shuffle(rng);
    let hitting: Vec<usize> = {
        let mut h: Vec<usize> = pts[..picked].to_vec();
        h.sort_unstable();
        h
    };
    let outside: Vec<usize> = pts[picked..].to_vec();
    let triples: Vec<[usize; 3]> = (0..sets)
        .map(|_| {
            let inside = hitting[rng.gen_range(0..hitting.len())];
            let mut outs = outside.clone();
            outs.shuffle(rng);
            let mut t = [inside, outs[0], outs[1]];
            t.sort_unstable();
            t
        })
        .collect();
    (
        X3hsInstance::new(n, triples).expect("planted triples are valid"),
        hitting,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_permutation(&mut rng_from_seed(7), 9);
        let b = random_permutation(&mut rng_from_seed(7), 9);
        assert_eq!(a, b);
    }

    #[test]
    fn planted_x3hs_hits_each_set_once() {
        let mut rng = rng_from_seed(3);
        for _ in 0..20 {
            let (inst, hitting) = planted_x3hs(&mut rng, 6, 3);
            for set in inst.sets() {
                let hits = set.iter().filter(|p| hitting.contains(p)).count();
                assert_eq!(hits, 1);
            }
            let found = crate::reductions::solve_x3hs(&inst, &crate::Caps::default()).unwrap();
            assert!(found.is_some(), "planted instances must solve");
        }
    }
}
