//! Reductions between intersection non-emptiness (group DFAs plus one CFG)
//! and context-free membership in symmetric groups, with a Bar-Hillel
//! product oracle as ground truth.

use crate::caps::Caps;
use crate::cfm::oracle_semantics;
use crate::error::{Error, Result};
use crate::lang::{
    is_group_dfa, letter_permutation, productive_nonterminals, Cfg, Dfa, Prod, ProdRhs, Terminal,
};
use crate::perm::Permutation;

/// Acceptance side of the intersection-to-membership reduction: the image
/// grammar's permutations act on the disjoint union of the DFA state sets,
/// and a word is accepted by every DFA exactly when the permutation it
/// evaluates to moves each initial point into its final set.
#[derive(Clone, Debug)]
pub struct AcceptancePredicate {
    /// per automaton: (initial point, final points), 0-based in the fused
    /// state numbering
    pub conditions: Vec<(usize, Vec<usize>)>,
}

impl AcceptancePredicate {
    pub fn satisfied_by(&self, pi: &Permutation) -> bool {
        self.conditions
            .iter()
            .all(|(q0, finals)| finals.contains(&pi.apply(*q0)))
    }
}

/// Replaces every letter of the grammar by the permutation it induces on the
/// fused state set of the group DFAs. State sets are disjointly renumbered in
/// input order. With zero automata the fused set degenerates to one point
/// and the predicate is vacuously true.
pub fn reduce_intersection_to_cfm(dfas: &[Dfa], g: &Cfg) -> Result<(Cfg, AcceptancePredicate)> {
    if g.degree().is_some() {
        return Err(Error::InvalidInput(
            "intersection grammar must use letter terminals".into(),
        ));
    }
    for d in dfas {
        if !is_group_dfa(d) {
            let culprit = d
                .letters()
                .iter()
                .find(|l| letter_permutation(d, l).is_err())
                .cloned()
                .unwrap_or_default();
            return Err(Error::NonGroupDfa(culprit));
        }
    }
    let total_states: usize = dfas.iter().map(|d| d.states()).sum();
    let degree = total_states.max(1);
    let mut offsets = Vec::with_capacity(dfas.len());
    let mut acc = 0;
    for d in dfas {
        offsets.push(acc);
        acc += d.states();
    }

    let letter_perm = |letter: &str| -> Result<Permutation> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        for (d, &off) in dfas.iter().zip(&offsets) {
            let li = d.letter_index(letter).ok_or_else(|| {
                Error::InvalidInput(format!("letter {letter:?} missing from some automaton"))
            })?;
            for s in 0..d.states() {
                images[off + s] = (off + d.step(s, li)) as u32;
            }
        }
        Permutation::from_images(images)
    };

    let names = (0..g.nonterminal_count())
        .map(|i| g.nt_name(i).to_string())
        .collect();
    let mut prods = Vec::with_capacity(g.prods().len());
    for p in g.prods() {
        let rhs = match &p.rhs {
            ProdRhs::Pair(b, c) => ProdRhs::Pair(*b, *c),
            ProdRhs::Term(Terminal::Letter(l)) => ProdRhs::Term(Terminal::Perm(letter_perm(l)?)),
            ProdRhs::Term(Terminal::Perm(_)) => unreachable!("degree checked above"),
        };
        prods.push(Prod { lhs: p.lhs, rhs });
    }
    let image = Cfg::new(names, g.start(), prods)?;
    let predicate = AcceptancePredicate {
        conditions: dfas
            .iter()
            .zip(&offsets)
            .map(|(d, &off)| {
                (
                    off + d.initial(),
                    d.finals().iter().map(|&f| off + f).collect(),
                )
            })
            .collect(),
    };
    Ok((image, predicate))
}

/// Decides intersection non-emptiness through the reduction: some
/// permutation in the image grammar's evaluated language must satisfy the
/// predicate. The evaluated language is enumerated explicitly (cap-guarded).
pub fn intersection_nonempty_via_cfm(dfas: &[Dfa], g: &Cfg, caps: &Caps) -> Result<bool> {
    let (image, predicate) = reduce_intersection_to_cfm(dfas, g)?;
    let langs = oracle_semantics(&image, caps)?;
    Ok(langs
        .entry(image.start())
        .iter()
        .any(|pi| predicate.satisfied_by(pi)))
}

/// Replaces every permutation terminal by a fresh letter and builds one
/// group DFA per point: all share the transition action of the letters on
/// `{1..m}`, automaton `i` starts and accepts at point `i`. The original
/// grammar derives the identity exactly when the letter grammar meets all
/// the automata.
pub fn reduce_cfm_to_intersection(g: &Cfg) -> Result<(Cfg, Vec<Dfa>)> {
    let degree = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("grammar must use permutation terminals".into()))?;
    let mut perms: Vec<Permutation> = Vec::new();
    let letter_of = |p: &Permutation, perms: &mut Vec<Permutation>| -> usize {
        match perms.iter().position(|q| q == p) {
            Some(i) => i,
            None => {
                perms.push(p.clone());
                perms.len() - 1
            }
        }
    };
    let names = (0..g.nonterminal_count())
        .map(|i| g.nt_name(i).to_string())
        .collect();
    let mut prods = Vec::with_capacity(g.prods().len());
    for p in g.prods() {
        let rhs = match &p.rhs {
            ProdRhs::Pair(b, c) => ProdRhs::Pair(*b, *c),
            ProdRhs::Term(Terminal::Perm(pi)) => {
                let li = letter_of(pi, &mut perms);
                ProdRhs::Term(Terminal::Letter(format!("a{}", li + 1)))
            }
            ProdRhs::Term(Terminal::Letter(l)) => {
                return Err(Error::InvalidInput(format!(
                    "unexpected letter terminal {l:?} in a permutation grammar"
                )))
            }
        };
        prods.push(Prod { lhs: p.lhs, rhs });
    }
    let letter_grammar = Cfg::new(names, g.start(), prods)?;
    let letters: Vec<String> = (1..=perms.len()).map(|i| format!("a{i}")).collect();
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|pi| (0..degree).map(|q| pi.apply(q)).collect())
        .collect();
    let dfas = (0..degree)
        .map(|i| Dfa::new(degree, letters.clone(), maps.clone(), i, vec![i]))
        .collect::<Result<Vec<_>>>()?;
    Ok((letter_grammar, dfas))
}

/// Ground truth for intersection non-emptiness: the simultaneous product
/// construction. Nonterminals of the product grammar are triples of a
/// nonterminal and two state tuples; the intersection is nonempty exactly
/// when some start triple from the joint initial to a joint final tuple is
/// productive.
pub fn barhillel_oracle(dfas: &[Dfa], g: &Cfg, caps: &Caps) -> Result<bool> {
    if g.degree().is_some() {
        return Err(Error::InvalidInput(
            "the product oracle works on letter grammars".into(),
        ));
    }
    let tuple_count: usize = dfas.iter().map(|d| d.states()).product();
    let product_nts = g
        .nonterminal_count()
        .checked_mul(tuple_count * tuple_count)
        .ok_or(Error::CapExceeded {
            what: "product construction size",
            needed: u128::MAX,
            cap: caps.max_product_nonterminals as u128,
        })?;
    caps.check(
        "product construction size",
        product_nts as u128,
        caps.max_product_nonterminals,
    )?;

    // state tuples enumerated mixed-radix; tuple id = sum state_i * radix_i
    let radices: Vec<usize> = dfas.iter().map(|d| d.states()).collect();
    let tuple_id = |states: &[usize]| -> usize {
        let mut id = 0;
        for (s, r) in states.iter().zip(&radices) {
            id = id * r + s;
        }
        id
    };
    let tuples: Vec<Vec<usize>> = {
        let mut all = vec![Vec::new()];
        for r in &radices {
            let mut next = Vec::with_capacity(all.len() * r);
            for t in &all {
                for s in 0..*r {
                    let mut t2 = t.clone();
                    t2.push(s);
                    next.push(t2);
                }
            }
            all = next;
        }
        all
    };

    let nt_id = |a: usize, from: usize, to: usize| (a * tuple_count + from) * tuple_count + to;
    let mut prods: Vec<Prod> = Vec::new();
    let dummy = Terminal::Letter("_".into());
    for p in g.prods() {
        match &p.rhs {
            ProdRhs::Term(Terminal::Letter(l)) => {
                for t in &tuples {
                    let mut image = Vec::with_capacity(t.len());
                    let mut ok = true;
                    for (d, &s) in dfas.iter().zip(t.iter()) {
                        match d.letter_index(l) {
                            Some(li) => image.push(d.step(s, li)),
                            None => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        prods.push(Prod {
                            lhs: nt_id(p.lhs, tuple_id(t), tuple_id(&image)),
                            rhs: ProdRhs::Term(dummy.clone()),
                        });
                    }
                }
            }
            ProdRhs::Term(Terminal::Perm(_)) => unreachable!("degree checked above"),
            ProdRhs::Pair(b, c) => {
                for from in 0..tuple_count {
                    for mid in 0..tuple_count {
                        for to in 0..tuple_count {
                            prods.push(Prod {
                                lhs: nt_id(p.lhs, from, to),
                                rhs: ProdRhs::Pair(nt_id(*b, from, mid), nt_id(*c, mid, to)),
                            });
                        }
                    }
                }
            }
        }
    }
    let names: Vec<String> = (0..product_nts).map(|i| format!("T{i}")).collect();
    let product = Cfg::new(names, 0, prods)?;
    let productive = productive_nonterminals(&product);

    let initial: Vec<usize> = dfas.iter().map(|d| d.initial()).collect();
    let from = tuple_id(&initial);
    // all joint final tuples
    let mut final_ids = vec![];
    for t in &tuples {
        if dfas
            .iter()
            .zip(t.iter())
            .all(|(d, s)| d.finals().contains(s))
        {
            final_ids.push(tuple_id(t));
        }
    }
    Ok(final_ids
        .iter()
        .any(|&to| productive[nt_id(g.start(), from, to)].is_some()))
}
