//! Independent brute-force oracles.
//!
//! These routines cross-validate the main decision procedures at desk scale.
//! They deliberately avoid the data structures they are checking: group
//! closure here never touches a stabilizer chain, and the word enumeration
//! never consults the subgroup pipeline.

use std::collections::HashSet;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::knapsack::KnapsackInstance;
use crate::lang::{Cfg, ProdRhs, Terminal};
use crate::perm::Permutation;

/// Subgroup closure by repeated products, no stabilizer chain involved.
pub fn closure(generators: &[Permutation], cap: usize) -> Result<HashSet<Permutation>> {
    let degree = generators
        .first()
        .ok_or_else(|| Error::InvalidInput("closure of an empty generator list".into()))?
        .degree();
    let mut elems: HashSet<Permutation> = HashSet::new();
    let mut frontier: Vec<Permutation> = vec![Permutation::identity(degree)];
    elems.insert(Permutation::identity(degree));
    while let Some(e) = frontier.pop() {
        for g in generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
            let next = &e * g;
            if elems.insert(next.clone()) {
                if elems.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "brute-force closure",
                        needed: elems.len() as u128,
                        cap: cap as u128,
                    });
                }
                frontier.push(next);
            }
        }
    }
    Ok(elems)
}

pub fn closure_contains(generators: &[Permutation], a: &Permutation, cap: usize) -> Result<bool> {
    Ok(closure(generators, cap)?.contains(a))
}

/// Plain exhaustive sweep over all exponent tuples below the factor orders,
/// with no memoization: an independent reference for the knapsack solvers.
pub fn knapsack_sweep(inst: &KnapsackInstance, caps: &crate::Caps) -> Result<Option<Vec<u64>>> {
    let orders: Vec<u64> = inst
        .factors
        .iter()
        .map(|f| {
            f.order().to_u64().ok_or(Error::CapExceeded {
                what: "sweep factor order",
                needed: u128::MAX,
                cap: caps.max_solver_states as u128,
            })
        })
        .collect::<Result<_>>()?;
    let bound = if inst.domain == crate::knapsack::ExponentDomain::Binary {
        2u128.checked_pow(inst.factors.len() as u32)
    } else {
        orders
            .iter()
            .try_fold(1u128, |acc, &o| acc.checked_mul(o as u128))
    };
    match bound {
        Some(b) => caps.check("knapsack sweep size", b, caps.max_solver_states)?,
        None => {
            return Err(Error::CapExceeded {
                what: "knapsack sweep size",
                needed: u128::MAX,
                cap: caps.max_solver_states as u128,
            })
        }
    }
    let limit = |i: usize| -> u64 {
        if inst.domain == crate::knapsack::ExponentDomain::Binary {
            2
        } else {
            orders[i]
        }
    };
    let n = inst.factors.len();
    let mut exps = vec![0u64; n];
    loop {
        let mut acc = Permutation::identity(inst.degree());
        for (e, f) in exps.iter().zip(&inst.factors) {
            acc = &acc * &f.power(*e as i64);
        }
        if acc == inst.target {
            return Ok(Some(exps));
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == n {
                return Ok(None);
            }
            exps[i] += 1;
            if exps[i] < limit(i).max(1) {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

/// Transformation monoid generated by arbitrary maps on `{0..n}`, by
/// closure under composition (left to right), including the identity map.
pub fn transformation_monoid(
    maps: &[Vec<usize>],
    n: usize,
    cap: usize,
) -> Result<HashSet<Vec<usize>>> {
    let identity: Vec<usize> = (0..n).collect();
    let mut monoid: HashSet<Vec<usize>> = HashSet::new();
    monoid.insert(identity.clone());
    let mut frontier = vec![identity];
    while let Some(f) = frontier.pop() {
        for g in maps {
            let next: Vec<usize> = f.iter().map(|&i| g[i]).collect();
            if monoid.insert(next.clone()) {
                if monoid.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "transformation monoid closure",
                        needed: monoid.len() as u128,
                        cap: cap as u128,
                    });
                }
                frontier.push(next);
            }
        }
    }
    Ok(monoid)
}

/// Checks whether a transformation monoid is a group: the identity must act
/// as its neutral element and every element must have a two-sided inverse in
/// the monoid.
pub fn monoid_is_group(monoid: &HashSet<Vec<usize>>, n: usize) -> bool {
    let identity: Vec<usize> = (0..n).collect();
    monoid.iter().all(|f| {
        monoid.iter().any(|g| {
            let fg: Vec<usize> = f.iter().map(|&i| g[i]).collect();
            let gf: Vec<usize> = g.iter().map(|&i| f[i]).collect();
            fg == identity && gf == identity
        })
    })
}

/// Enumerates every word of `L(G)` up to the given length by bottom-up
/// dynamic programming over (nonterminal, length). The total number of
/// stored words across all table entries is capped.
pub fn enumerate_words(g: &Cfg, max_len: usize, cap: usize) -> Result<Vec<Vec<Terminal>>> {
    let n = g.nonterminal_count();
    // table[a][len] = words of exactly `len` derivable from nonterminal a
    let mut table: Vec<Vec<Vec<Vec<Terminal>>>> = vec![vec![Vec::new(); max_len + 1]; n];
    let mut stored = 0usize;
    for len in 1..=max_len {
        for a in 0..n {
            let mut words: HashSet<Vec<Terminal>> = HashSet::new();
            if len == 1 {
                for prod in g.prods() {
                    if prod.lhs == a {
                        if let ProdRhs::Term(t) = &prod.rhs {
                            words.insert(vec![t.clone()]);
                        }
                    }
                }
            } else {
                for prod in g.prods() {
                    if prod.lhs != a {
                        continue;
                    }
                    if let ProdRhs::Pair(b, c) = prod.rhs {
                        for split in 1..len {
                            for left in &table[b][split] {
                                for right in &table[c][len - split] {
                                    let mut w = left.clone();
                                    w.extend(right.iter().cloned());
                                    words.insert(w);
                                }
                            }
                        }
                    }
                }
            }
            stored += words.len();
            if stored > cap {
                return Err(Error::CapExceeded {
                    what: "bounded word enumeration",
                    needed: stored as u128,
                    cap: cap as u128,
                });
            }
            table[a][len] = words.into_iter().collect();
        }
    }
    let mut out = Vec::new();
    for entry in table[g.start()].iter().skip(1) {
        out.extend(entry.iter().cloned());
    }
    Ok(out)
}
