//! The subgroup fixed-point pipeline and its independent language oracle.

use std::collections::HashMap;
use std::collections::HashSet;

use num_bigint::BigUint;

use crate::bsgs::{schreier_sims, Bsgs};
use crate::caps::Caps;
use crate::cfm::pair::GroupPair;
use crate::error::{Error, Result};
use crate::lang::{Cfg, DerivationTree, GroupNfa, ProdRhs};
use crate::perm::Permutation;
use crate::rational::{spanning_tree_generators, trim_and_symmetrize};

/// Per-nonterminal subgroups of `G x G^op`, each held as a stabilizer chain
/// over the embedding into the symmetric group on `2m` points.
#[derive(Clone, Debug)]
pub struct SubgroupTuple {
    degree: usize,
    entries: Vec<Bsgs>,
}

impl SubgroupTuple {
    /// The tuple of trivial subgroups.
    pub fn trivial(nonterminals: usize, degree: usize) -> Self {
        let identity = Permutation::identity(2 * degree);
        let entries = (0..nonterminals)
            .map(|_| schreier_sims(std::slice::from_ref(&identity)).expect("identity chain"))
            .collect();
        SubgroupTuple { degree, entries }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, a: usize) -> &Bsgs {
        &self.entries[a]
    }

    pub fn order_of(&self, a: usize) -> BigUint {
        self.entries[a].order()
    }

    pub fn orders(&self) -> Vec<BigUint> {
        self.entries.iter().map(|b| b.order()).collect()
    }

    /// Strong generators of an entry, decoded back to pairs.
    pub fn pair_generators(&self, a: usize) -> Vec<GroupPair> {
        self.entries[a]
            .strong_generators()
            .iter()
            .map(|p| GroupPair::from_embedding(p).expect("entries preserve the blocks"))
            .collect()
    }

    pub fn contains_pair(&self, a: usize, pair: &GroupPair) -> Result<bool> {
        self.entries[a].contains(&pair.embed())
    }

    /// Builds a tuple from explicit pair generators per entry.
    pub fn from_pair_generators(degree: usize, gens: Vec<Vec<GroupPair>>) -> Result<Self> {
        let identity = Permutation::identity(2 * degree);
        let entries = gens
            .into_iter()
            .map(|pairs| {
                let mut embedded: Vec<Permutation> = pairs.iter().map(|p| p.embed()).collect();
                if embedded.is_empty() {
                    embedded.push(identity.clone());
                }
                schreier_sims(&embedded)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SubgroupTuple { degree, entries })
    }

    /// Componentwise inclusion, decided by generator containment.
    pub fn leq(&self, other: &SubgroupTuple) -> Result<bool> {
        for (mine, theirs) in self.entries.iter().zip(&other.entries) {
            for g in mine.strong_generators() {
                if !theirs.contains(g)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Componentwise equality: order equality plus generator containment in
    /// both directions.
    pub fn tuple_eq(&self, other: &SubgroupTuple) -> Result<bool> {
        for (mine, theirs) in self.entries.iter().zip(&other.entries) {
            if mine.order() != theirs.order() {
                return Ok(false);
            }
        }
        Ok(self.leq(other)? && other.leq(self)?)
    }
}

/// Per-nonterminal explicit subsets of the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageTuple {
    entries: Vec<HashSet<Permutation>>,
}

impl LanguageTuple {
    pub fn new(entries: Vec<HashSet<Permutation>>) -> Self {
        LanguageTuple { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, a: usize) -> &HashSet<Permutation> {
        &self.entries[a]
    }

    pub fn leq(&self, other: &LanguageTuple) -> bool {
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| a.is_subset(b))
    }
}

/// How one element of a delta entry was produced (for certificate
/// extraction).
#[derive(Clone, Debug)]
enum Prov {
    Leaf {
        prod: usize,
        pair: GroupPair,
    },
    Node {
        prod: usize,
        pair: GroupPair,
        left: Permutation,
        right: Permutation,
    },
}

/// One delta evaluation with memoized per-(nonterminal, forbidden ancestors)
/// element sets and provenance.
struct DeltaRun<'a> {
    g: &'a Cfg,
    s: &'a SubgroupTuple,
    caps: &'a Caps,
    memo: HashMap<(usize, u64), HashMap<Permutation, Prov>>,
}

impl<'a> DeltaRun<'a> {
    fn new(g: &'a Cfg, s: &'a SubgroupTuple, caps: &'a Caps) -> Result<Self> {
        let degree = g
            .degree()
            .ok_or_else(|| Error::InvalidInput("pipeline needs permutation terminals".into()))?;
        if degree != s.degree() {
            return Err(Error::DegreeMismatch(degree, s.degree()));
        }
        caps.check(
            "pipeline nonterminals",
            g.nonterminal_count() as u128,
            caps.max_dp_nonterminals,
        )?;
        Ok(DeltaRun {
            g,
            s,
            caps,
            memo: HashMap::new(),
        })
    }

    /// All sandwiched values `h1 x h2` over the subgroup of `a`, found as the
    /// orbit of `x` under the two-sided generator action, each value with one
    /// witnessing pair.
    fn sandwich(&self, a: usize, x: &Permutation) -> Vec<(Permutation, GroupPair)> {
        let gens = self.s.pair_generators(a);
        let degree = x.degree();
        let mut seen: HashMap<Permutation, GroupPair> = HashMap::new();
        seen.insert(x.clone(), GroupPair::identity(degree));
        let mut queue = vec![x.clone()];
        while let Some(y) = queue.pop() {
            let pair_y = seen[&y].clone();
            for gen in &gens {
                let z = &(&gen.left * &y) * &gen.right;
                if !seen.contains_key(&z) {
                    // y = h1 x h2, so z = (a h1) x (h2 b) with (a, b) the generator
                    let pair_z = gen.mul(&pair_y);
                    seen.insert(z.clone(), pair_z);
                    queue.push(z);
                }
            }
        }
        let mut values: Vec<(Permutation, GroupPair)> = seen.into_iter().collect();
        values.sort_by(|a, b| a.0.cmp(&b.0));
        values
    }

    fn ensure(&mut self, a: usize, forbidden: u64) -> Result<()> {
        if self.memo.contains_key(&(a, forbidden)) {
            return Ok(());
        }
        let mut out: HashMap<Permutation, Prov> = HashMap::new();
        for (prod_idx, term) in self.g.terminal_prods(a) {
            let base = self.g.perm_of(term)?;
            for (value, pair) in self.sandwich(a, base) {
                out.entry(value).or_insert(Prov::Leaf {
                    prod: prod_idx,
                    pair,
                });
            }
        }
        let child_forbidden = forbidden | (1 << a);
        let binaries: Vec<(usize, usize, usize)> = self.g.binary_prods(a).collect();
        for (prod_idx, b, c) in binaries {
            if child_forbidden & (1 << b) != 0 || child_forbidden & (1 << c) != 0 {
                continue;
            }
            self.ensure(b, child_forbidden)?;
            self.ensure(c, child_forbidden)?;
            let mut lefts: Vec<Permutation> =
                self.memo[&(b, child_forbidden)].keys().cloned().collect();
            let mut rights: Vec<Permutation> =
                self.memo[&(c, child_forbidden)].keys().cloned().collect();
            lefts.sort();
            rights.sort();
            // distinct child products, one witness split each (first in the
            // sorted sweep wins, keeping runs reproducible)
            let mut bases: HashMap<Permutation, (Permutation, Permutation)> = HashMap::new();
            let mut base_order: Vec<Permutation> = Vec::new();
            for l in &lefts {
                for r in &rights {
                    bases.entry(l * r).or_insert_with(|| {
                        base_order.push(l * r);
                        (l.clone(), r.clone())
                    });
                }
            }
            for base in base_order {
                let (l, r) = bases[&base].clone();
                for (value, pair) in self.sandwich(a, &base) {
                    out.entry(value).or_insert(Prov::Node {
                        prod: prod_idx,
                        pair,
                        left: l.clone(),
                        right: r.clone(),
                    });
                }
            }
            self.caps
                .check("delta entry size", out.len() as u128, self.caps.max_closure)?;
        }
        self.memo.insert((a, forbidden), out);
        Ok(())
    }

    fn language(&mut self) -> Result<LanguageTuple> {
        let mut entries = Vec::with_capacity(self.g.nonterminal_count());
        for a in 0..self.g.nonterminal_count() {
            self.ensure(a, 0)?;
            entries.push(self.memo[&(a, 0)].keys().cloned().collect());
        }
        Ok(LanguageTuple { entries })
    }

    /// Rebuilds one acyclic decorated derivation tree for a target value.
    fn witness(
        &self,
        a: usize,
        forbidden: u64,
        target: &Permutation,
    ) -> Option<(DerivationTree, Vec<GroupPair>)> {
        let prov = self.memo.get(&(a, forbidden))?.get(target)?;
        match prov {
            Prov::Leaf { prod, pair } => {
                let term = match &self.g.prods()[*prod].rhs {
                    ProdRhs::Term(t) => t.clone(),
                    ProdRhs::Pair(..) => unreachable!("leaf provenance stores a terminal rule"),
                };
                Some((DerivationTree::Leaf { nt: a, term }, vec![pair.clone()]))
            }
            Prov::Node {
                prod,
                pair,
                left,
                right,
            } => {
                let (b, c) = match self.g.prods()[*prod].rhs {
                    ProdRhs::Pair(b, c) => (b, c),
                    ProdRhs::Term(_) => unreachable!("node provenance stores a binary rule"),
                };
                let child_forbidden = forbidden | (1 << a);
                let (lt, ld) = self.witness(b, child_forbidden, left)?;
                let (rt, rd) = self.witness(c, child_forbidden, right)?;
                let mut decorations = vec![pair.clone()];
                decorations.extend(ld);
                decorations.extend(rd);
                Some((
                    DerivationTree::Node {
                        nt: a,
                        left: Box::new(lt),
                        right: Box::new(rt),
                    },
                    decorations,
                ))
            }
        }
    }
}

/// The languages derivable through acyclic derivation trees with sandwiching
/// pairs drawn from the given subgroup tuple.
pub fn delta(g: &Cfg, s: &SubgroupTuple, caps: &Caps) -> Result<LanguageTuple> {
    DeltaRun::new(g, s, caps)?.language()
}

/// The subgroup tuple generated by loops of the nonterminal automaton over
/// `G x G^op`: one automaton per nonterminal (initial = final = that
/// nonterminal), transitions labelled `(1, h)` towards a left child with the
/// right sibling deriving `h`, and `(g, 1)` towards a right child with the
/// left sibling deriving `g`. Trimming, symmetrizing and extracting
/// spanning-tree generators yields each entry.
pub fn gamma(g: &Cfg, t: &LanguageTuple, caps: &Caps) -> Result<SubgroupTuple> {
    let degree = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("pipeline needs permutation terminals".into()))?;
    caps.check(
        "pipeline nonterminals",
        g.nonterminal_count() as u128,
        caps.max_dp_nonterminals,
    )?;
    let n = g.nonterminal_count();
    let mut transitions: Vec<(usize, Permutation, usize)> = Vec::new();
    let sorted = |a: usize| {
        let mut v: Vec<Permutation> = t.entry(a).iter().cloned().collect();
        v.sort();
        v
    };
    for prod in g.prods() {
        if let ProdRhs::Pair(left, right) = prod.rhs {
            for h in sorted(right) {
                let pair = GroupPair::new(Permutation::identity(degree), h)?;
                transitions.push((prod.lhs, pair.embed(), left));
            }
            for gl in sorted(left) {
                let pair = GroupPair::new(gl, Permutation::identity(degree))?;
                transitions.push((prod.lhs, pair.embed(), right));
            }
        }
    }
    let identity2m = Permutation::identity(2 * degree);
    let mut entries = Vec::with_capacity(n);
    for a in 0..n {
        let nfa = GroupNfa::new(2 * degree, n, transitions.clone(), vec![a], vec![a])?;
        let trimmed = trim_and_symmetrize(&nfa)?;
        let mut gens = spanning_tree_generators(&trimmed);
        if gens.is_empty() {
            gens.push(identity2m.clone());
        }
        entries.push(schreier_sims(&gens)?);
    }
    Ok(SubgroupTuple { degree, entries })
}

/// Result of iterating `gamma . delta` to stability.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub tuple: SubgroupTuple,
    /// number of strictly growing iterations before the repeat
    pub iterations: usize,
    /// per-nonterminal subgroup orders after each iteration (starting with
    /// the trivial tuple)
    pub order_history: Vec<Vec<BigUint>>,
}

/// Iteration bound: twice the nonterminal count times `floor(log2 m!)`;
/// Lagrange bounds every strictly growing subgroup chain in `G x G^op`.
pub fn iteration_bound(nonterminals: usize, degree: usize) -> usize {
    let mut factorial = BigUint::from(1u32);
    for i in 2..=degree {
        factorial *= BigUint::from(i);
    }
    let log2 = (factorial.bits() as usize).saturating_sub(1);
    2 * nonterminals * log2
}

/// Iterates `gamma . delta` from the trivial tuple until the tuple repeats.
/// Exceeding the iteration bound is an internal invariant breach, as is any
/// non-monotone step.
pub fn fixed_point(g: &Cfg, caps: &Caps) -> Result<FixedPoint> {
    let degree = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("pipeline needs permutation terminals".into()))?;
    caps.check("pipeline degree", degree as u128, caps.max_pipeline_degree)?;
    let n = g.nonterminal_count();
    let bound = iteration_bound(n, degree);
    let mut tuple = SubgroupTuple::trivial(n, degree);
    let mut order_history = vec![tuple.orders()];
    let mut iterations = 0;
    loop {
        let languages = delta(g, &tuple, caps)?;
        let next = gamma(g, &languages, caps)?;
        if next.tuple_eq(&tuple)? {
            return Ok(FixedPoint {
                tuple,
                iterations,
                order_history,
            });
        }
        if !tuple.leq(&next)? {
            return Err(Error::InvariantBreach(
                "fixed-point iteration is not monotone".into(),
            ));
        }
        iterations += 1;
        if iterations > bound {
            return Err(Error::InvariantBreach(format!(
                "fixed point not reached within {bound} iterations"
            )));
        }
        order_history.push(next.orders());
        tuple = next;
    }
}

/// Context-free membership: is the target in the start entry of the delta
/// image of the fixed point?
pub fn cf_membership(g: &Cfg, target: &Permutation, caps: &Caps) -> Result<bool> {
    let degree = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("pipeline needs permutation terminals".into()))?;
    if target.degree() != degree {
        return Err(Error::DegreeMismatch(degree, target.degree()));
    }
    let fp = fixed_point(g, caps)?;
    let languages = delta(g, &fp.tuple, caps)?;
    Ok(languages.entry(g.start()).contains(target))
}

/// An accepted membership claim: an acyclic derivation tree and, for each
/// nonterminal node in preorder, the sandwiching pair drawn from that
/// nonterminal's fixed-point subgroup.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub tree: DerivationTree,
    pub decorations: Vec<GroupPair>,
}

/// Full run returning a checkable certificate on acceptance.
pub fn cf_membership_certificate(
    g: &Cfg,
    target: &Permutation,
    caps: &Caps,
) -> Result<(FixedPoint, Option<Certificate>)> {
    let degree = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("pipeline needs permutation terminals".into()))?;
    if target.degree() != degree {
        return Err(Error::DegreeMismatch(degree, target.degree()));
    }
    let fp = fixed_point(g, caps)?;
    let mut run = DeltaRun::new(g, &fp.tuple, caps)?;
    run.language()?;
    let cert = run
        .witness(g.start(), 0, target)
        .map(|(tree, decorations)| {
            debug_assert_eq!(
                evaluate_decorated_tree(g, &tree, &decorations, &fp.tuple)
                    .ok()
                    .as_ref(),
                Some(target)
            );
            Certificate { tree, decorations }
        });
    Ok((fp, cert))
}

/// Checks and evaluates a decorated acyclic derivation tree: every node's
/// pair must belong to its nonterminal's subgroup; a leaf deriving `g`
/// evaluates to `h1 g h2` and an inner node to `h1 l r h2`.
pub fn evaluate_decorated_tree(
    g: &Cfg,
    tree: &DerivationTree,
    decorations: &[GroupPair],
    s: &SubgroupTuple,
) -> Result<Permutation> {
    tree.validate(g)?;
    if !tree.is_acyclic() {
        return Err(Error::InvalidInput(
            "certificate tree repeats a nonterminal on a path".into(),
        ));
    }
    let nodes = tree.preorder_nonterminals();
    if nodes.len() != decorations.len() {
        return Err(Error::InvalidInput(format!(
            "expected {} decorations, got {}",
            nodes.len(),
            decorations.len()
        )));
    }
    fn eval(
        g: &Cfg,
        tree: &DerivationTree,
        decorations: &[GroupPair],
        idx: &mut usize,
        s: &SubgroupTuple,
    ) -> Result<Permutation> {
        let pair = &decorations[*idx];
        *idx += 1;
        if !s.contains_pair(tree.nt(), pair)? {
            return Err(Error::NotInGroup);
        }
        match tree {
            DerivationTree::Leaf { term, .. } => {
                let base = g.perm_of(term)?;
                Ok(&(&pair.left * base) * &pair.right)
            }
            DerivationTree::Node { left, right, .. } => {
                let l = eval(g, left, decorations, idx, s)?;
                let r = eval(g, right, decorations, idx, s)?;
                Ok(&(&(&pair.left * &l) * &r) * &pair.right)
            }
        }
    }
    let mut idx = 0;
    eval(g, tree, decorations, &mut idx, s)
}

/// Independent Kleene fixpoint: the least tuple of sets with
/// `L(A) ⊇ {g : A -> g}` and `L(A) ⊇ L(B) L(C)` for `A -> B C`.
pub fn oracle_semantics(g: &Cfg, caps: &Caps) -> Result<LanguageTuple> {
    let n = g.nonterminal_count();
    let mut sets: Vec<HashSet<Permutation>> = vec![HashSet::new(); n];
    for prod in g.prods() {
        if let ProdRhs::Term(t) = &prod.rhs {
            sets[prod.lhs].insert(g.perm_of(t)?.clone());
        }
    }
    loop {
        let mut grew = false;
        for prod in g.prods() {
            if let ProdRhs::Pair(b, c) = prod.rhs {
                let mut new: Vec<Permutation> = Vec::new();
                for l in &sets[b] {
                    for r in &sets[c] {
                        let prod_val = l * r;
                        if !sets[prod.lhs].contains(&prod_val) {
                            new.push(prod_val);
                        }
                    }
                }
                if !new.is_empty() {
                    grew = true;
                    let target = &mut sets[prod.lhs];
                    for v in new {
                        target.insert(v);
                    }
                    caps.check(
                        "language oracle entry size",
                        target.len() as u128,
                        caps.max_closure,
                    )?;
                }
            }
        }
        if !grew {
            return Ok(LanguageTuple { entries: sets });
        }
    }
}

/// A cycle through the binary-production graph: production `i` rewrites the
/// current nonterminal and `dirs[i]` picks the child followed next (`false`
/// for the left child, `true` for the right child). The path must return to
/// its anchor nonterminal.
#[derive(Clone, Debug)]
pub struct LoopWitness {
    pub prods: Vec<usize>,
    pub dirs: Vec<bool>,
}

impl LoopWitness {
    /// Checks the closure conditions and returns the anchor-consistent
    /// sequence of (left, right, followed-direction) triples.
    fn steps(&self, g: &Cfg, anchor: usize) -> Result<Vec<(usize, usize, bool)>> {
        if self.prods.len() != self.dirs.len() {
            return Err(Error::InvalidInput(
                "loop witness needs one direction per production".into(),
            ));
        }
        let mut current = anchor;
        let mut steps = Vec::new();
        for (&p, &d) in self.prods.iter().zip(&self.dirs) {
            let prod = g
                .prods()
                .get(p)
                .ok_or_else(|| Error::InvalidInput(format!("production {p} out of range")))?;
            if prod.lhs != current {
                return Err(Error::InvalidInput(format!(
                    "production {p} does not rewrite {}",
                    g.nt_name(current)
                )));
            }
            let (left, right) = match prod.rhs {
                ProdRhs::Pair(b, c) => (b, c),
                ProdRhs::Term(_) => {
                    return Err(Error::InvalidInput(
                        "loop witness may only use binary productions".into(),
                    ))
                }
            };
            current = if d { right } else { left };
            steps.push((left, right, d));
        }
        if current != anchor {
            return Err(Error::InvalidInput(
                "loop witness does not return to its anchor".into(),
            ));
        }
        Ok(steps)
    }
}

/// All pair products along a loop: step `i` contributes the sibling's
/// language on the coordinate it sandwiches (left siblings on the first
/// coordinate when the path goes right, right siblings on the second when
/// it goes left). Empty loops produce the identity pair.
pub fn loop_products(
    g: &Cfg,
    t: &LanguageTuple,
    witness: &LoopWitness,
    anchor: usize,
    cap: usize,
) -> Result<Vec<GroupPair>> {
    let degree = g
        .degree()
        .ok_or_else(|| Error::InvalidInput("pipeline needs permutation terminals".into()))?;
    let steps = witness.steps(g, anchor)?;
    let mut acc: Vec<GroupPair> = vec![GroupPair::identity(degree)];
    for (left, right, dir) in steps {
        let sibling = if dir { left } else { right };
        let mut next = Vec::new();
        for base in &acc {
            for w in t.entry(sibling) {
                let factor = if dir {
                    GroupPair::new(w.clone(), Permutation::identity(degree))?
                } else {
                    GroupPair::new(Permutation::identity(degree), w.clone())?
                };
                next.push(base.mul(&factor));
            }
        }
        next.sort_by(|a, b| (&a.left, &a.right).cmp(&(&b.left, &b.right)));
        next.dedup();
        if next.len() > cap {
            return Err(Error::CapExceeded {
                what: "loop product enumeration",
                needed: next.len() as u128,
                cap: cap as u128,
            });
        }
        acc = next;
    }
    Ok(acc)
}
