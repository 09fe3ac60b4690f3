//! Base and strong generating sets via the deterministic Schreier-Sims
//! algorithm.
//!
//! A [`Bsgs`] supports membership tests, order computation, element
//! enumeration and constructive membership (factoring a member as a
//! straight-line program over the strong generators). The construction is the
//! deterministic textbook variant: no randomization, so identical inputs
//! always yield identical chains.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::slp::{Slp, SlpDef};

/// One level of the stabilizer chain: the orbit of its base point under the
/// strong generators fixing all earlier base points, with coset
/// representatives and their generator words.
#[derive(Clone, Debug)]
struct Level {
    point: usize,
    /// indices into `Bsgs::strong` of the generators acting at this level
    gen_ids: Vec<usize>,
    /// orbit of `point` in discovery order
    orbit: Vec<usize>,
    /// coset representative `u` with `point^u = beta`
    transversal: HashMap<usize, Permutation>,
    /// the representative as a word of strong-generator indices (left to right)
    words: HashMap<usize, Vec<usize>>,
}

impl Level {
    fn new(point: usize) -> Self {
        Level {
            point,
            gen_ids: Vec::new(),
            orbit: Vec::new(),
            transversal: HashMap::new(),
            words: HashMap::new(),
        }
    }
}

/// Base and strong generating set for a permutation group.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

/// Runs the deterministic Schreier-Sims algorithm on a nonempty,
/// degree-consistent generator list.
pub fn schreier_sims(generators: &[Permutation]) -> Result<Bsgs> {
    let degree = match generators.first() {
        Some(g) => g.degree(),
        None => {
            return Err(Error::InvalidInput(
                "schreier_sims requires at least one generator".into(),
            ))
        }
    };
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
    }
    let mut bsgs = Bsgs {
        degree,
        strong: Vec::new(),
        levels: Vec::new(),
    };
    for g in generators {
        bsgs.insert(g.clone());
    }
    Ok(bsgs)
}

impl Bsgs {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    /// Group order: the product of the orbit sizes along the chain.
    pub fn order(&self) -> BigUint {
        let mut ord = BigUint::one();
        for level in &self.levels {
            ord *= BigUint::from(level.orbit.len());
        }
        ord
    }

    /// Membership by sifting through the stabilizer chain.
    pub fn contains(&self, a: &Permutation) -> Result<bool> {
        if a.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, a.degree()));
        }
        Ok(self.sift(a).0.is_identity())
    }

    /// Constructive membership: returns a straight-line program over the
    /// strong generators that evaluates to `a`.
    pub fn factor_as_slp(&self, a: &Permutation) -> Result<Slp> {
        if a.degree() != self.degree {
            return Err(Error::DegreeMismatch(self.degree, a.degree()));
        }
        let (residue, used) = self.sift(a);
        if !residue.is_identity() {
            return Err(Error::NotInGroup);
        }
        // a = u_{beta_k} ... u_{beta_1} with level 1 rightmost, so emit the
        // deepest representative's word first.
        let mut word: Vec<usize> = Vec::new();
        for &(level, beta) in used.iter().rev() {
            word.extend_from_slice(&self.levels[level].words[&beta]);
        }
        let mut defs: Vec<SlpDef> = Vec::new();
        let mut gen_def: HashMap<usize, usize> = HashMap::new();
        let mut acc: Option<usize> = None;
        for gid in word {
            let def_idx = *gen_def.entry(gid).or_insert_with(|| {
                defs.push(SlpDef::Gen(gid));
                defs.len() - 1
            });
            acc = Some(match acc {
                None => def_idx,
                Some(prev) => {
                    defs.push(SlpDef::Mul(prev, def_idx));
                    defs.len() - 1
                }
            });
        }
        Ok(Slp {
            defs,
            result: a.clone(),
        })
    }

    /// Enumerates all group elements as products of transversal
    /// representatives. Errors out if the order exceeds `cap`.
    pub fn elements(&self, cap: usize) -> Result<Vec<Permutation>> {
        if self.order() > BigUint::from(cap) {
            return Err(Error::CapExceeded {
                what: "group element enumeration",
                needed: self.order().try_into().unwrap_or(u128::MAX),
                cap: cap as u128,
            });
        }
        let mut elems = vec![Permutation::identity(self.degree)];
        // element = u^{(k-1)} ... u^{(0)}: accumulate from the deepest level
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(elems.len() * level.orbit.len());
            for e in &elems {
                for beta in &level.orbit {
                    next.push(e * &level.transversal[beta]);
                }
            }
            elems = next;
        }
        Ok(elems)
    }

    /// Sifts `a` through the chain. Returns the residue and the
    /// (level, orbit point) pairs whose representatives were stripped.
    fn sift(&self, a: &Permutation) -> (Permutation, Vec<(usize, usize)>) {
        let mut r = a.clone();
        let mut used = Vec::new();
        for (i, level) in self.levels.iter().enumerate() {
            let beta = r.apply(level.point);
            match level.transversal.get(&beta) {
                None => return (r, used),
                Some(u) => {
                    r = &r * &u.inverse();
                    used.push((i, beta));
                }
            }
        }
        (r, used)
    }

    /// Sifts starting at a given level (for Schreier generator verification).
    fn sift_from(&self, start: usize, a: &Permutation) -> (Permutation, usize) {
        let mut r = a.clone();
        for (i, level) in self.levels.iter().enumerate().skip(start) {
            let beta = r.apply(level.point);
            match level.transversal.get(&beta) {
                None => return (r, i),
                Some(u) => r = &r * &u.inverse(),
            }
        }
        (r, self.levels.len())
    }

    /// Adds one generator to the group, keeping the chain valid.
    fn insert(&mut self, g: Permutation) {
        let (residue, _) = self.sift(&g);
        if residue.is_identity() {
            return;
        }
        self.register(residue);
        self.close_chain();
    }

    /// Registers a new strong generator: extends the base if the generator
    /// fixes every current base point, assigns it to the levels whose base
    /// prefix it fixes, and refreshes the affected orbits.
    fn register(&mut self, r: Permutation) {
        debug_assert!(!r.is_identity());
        let fixes_all = self.levels.iter().all(|l| r.apply(l.point) == l.point);
        if fixes_all {
            let pt = (0..self.degree)
                .find(|&p| r.apply(p) != p)
                .expect("non-identity permutation moves a point");
            self.levels.push(Level::new(pt));
        }
        let gid = self.strong.len();
        self.strong.push(r);
        let r = &self.strong[gid];
        for level in self.levels.iter_mut() {
            level.gen_ids.push(gid);
            if r.apply(level.point) != level.point {
                break;
            }
        }
        for i in 0..self.levels.len() {
            self.recompute_orbit(i);
        }
    }

    /// Recomputes the orbit and transversal of one level by breadth-first
    /// search in generator order.
    fn recompute_orbit(&mut self, i: usize) {
        let point = self.levels[i].point;
        let gen_ids = self.levels[i].gen_ids.clone();
        let mut orbit = vec![point];
        let mut transversal = HashMap::new();
        let mut words = HashMap::new();
        transversal.insert(point, Permutation::identity(self.degree));
        words.insert(point, Vec::new());
        let mut head = 0;
        while head < orbit.len() {
            let beta = orbit[head];
            head += 1;
            for &gid in &gen_ids {
                let s = &self.strong[gid];
                let gamma = s.apply(beta);
                if !transversal.contains_key(&gamma) {
                    let u = &transversal[&beta] * s;
                    let mut w = words[&beta].clone();
                    w.push(gid);
                    orbit.push(gamma);
                    transversal.insert(gamma, u);
                    words.insert(gamma, w);
                }
            }
        }
        let level = &mut self.levels[i];
        level.orbit = orbit;
        level.transversal = transversal;
        level.words = words;
    }

    /// Verifies the Schreier condition at every level, registering failing
    /// residues until the chain is stable.
    fn close_chain(&mut self) {
        'outer: loop {
            for i in 0..self.levels.len() {
                let orbit = self.levels[i].orbit.clone();
                let gen_ids = self.levels[i].gen_ids.clone();
                for &beta in &orbit {
                    for &gid in &gen_ids {
                        let level = &self.levels[i];
                        let s = &self.strong[gid];
                        let gamma = s.apply(beta);
                        let schreier =
                            &(&level.transversal[&beta] * s) * &level.transversal[&gamma].inverse();
                        if schreier.is_identity() {
                            continue;
                        }
                        let (residue, _) = self.sift_from(i + 1, &schreier);
                        if !residue.is_identity() {
                            self.register(residue);
                            continue 'outer;
                        }
                    }
                }
            }
            return;
        }
    }
}

/// Greedy generator reduction: keeps each generator that strictly enlarges
/// the group generated so far (first witness wins). The result is a subset of
/// the input generating the same group, of size at most `log2(order)` since
/// every kept generator at least doubles the order.
pub fn reduce_generators(generators: &[Permutation]) -> Result<Vec<Permutation>> {
    let degree = match generators.first() {
        Some(g) => g.degree(),
        None => {
            return Err(Error::InvalidInput(
                "reduce_generators requires at least one generator".into(),
            ))
        }
    };
    let mut kept: Vec<Permutation> = Vec::new();
    let mut bsgs: Option<Bsgs> = None;
    for g in generators {
        if g.degree() != degree {
            return Err(Error::DegreeMismatch(degree, g.degree()));
        }
        if g.is_identity() {
            continue;
        }
        let in_group = match &bsgs {
            None => false,
            Some(b) => b.contains(g)?,
        };
        if !in_group {
            kept.push(g.clone());
            bsgs = Some(schreier_sims(&kept)?);
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_permutation;
    use crate::oracle;
    use crate::slp::eval_slp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(degree: usize, text: &str) -> Permutation {
        Permutation::parse(degree, text).unwrap()
    }

    #[test]
    fn transposition_generates_order_two() {
        let b = schreier_sims(&[s(2, "(1 2)")]).unwrap();
        assert_eq!(b.order(), BigUint::from(2u32));
    }

    #[test]
    fn symmetric_group_orders() {
        let b = schreier_sims(&[s(3, "(1 2)"), s(3, "(1 2 3)")]).unwrap();
        assert_eq!(b.order(), BigUint::from(6u32));
        let b = schreier_sims(&[s(4, "(1 2 3 4)"), s(4, "(1 2)")]).unwrap();
        assert_eq!(b.order(), BigUint::from(24u32));
    }

    #[test]
    fn order_matches_closure_enumeration_small() {
        let gens = [s(4, "(1 2 3 4)"), s(4, "(1 2)")];
        let closure = oracle::closure(&gens, 100).unwrap();
        let b = schreier_sims(&gens).unwrap();
        assert_eq!(BigUint::from(closure.len()), b.order());
        let mut elems = b.elements(100).unwrap();
        elems.sort();
        elems.dedup();
        assert_eq!(elems.len(), closure.len());
        assert!(elems.iter().all(|e| closure.contains(e)));
    }

    #[test]
    fn membership_basics() {
        let s3 = schreier_sims(&[s(3, "(1 2)"), s(3, "(1 2 3)")]).unwrap();
        assert!(s3.contains(&s(3, "(1 3)")).unwrap());
        let c3 = schreier_sims(&[s(3, "(1 2 3)")]).unwrap();
        assert!(!c3.contains(&s(3, "(1 2)")).unwrap());
        assert!(c3.contains(&Permutation::identity(3)).unwrap());
    }

    #[test]
    fn membership_agrees_with_closure_on_random_s6_groups() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let gens: Vec<Permutation> = (0..2).map(|_| random_permutation(&mut rng, 6)).collect();
            let closure = oracle::closure(&gens, 1000).unwrap();
            let b = schreier_sims(&gens).unwrap();
            for _ in 0..5 {
                let probe = random_permutation(&mut rng, 6);
                assert_eq!(b.contains(&probe).unwrap(), closure.contains(&probe));
            }
        }
    }

    #[test]
    fn membership_agrees_with_closure_up_to_order_5040() {
        // the full degree-7 group: closure enumeration at the 5040 scale
        let gens = [s(7, "(1 2)"), s(7, "(1 2 3 4 5 6 7)")];
        let closure = oracle::closure(&gens, 6000).unwrap();
        assert_eq!(closure.len(), 5040);
        let b = schreier_sims(&gens).unwrap();
        assert_eq!(b.order(), BigUint::from(5040u32));
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let probe = random_permutation(&mut rng, 7);
            assert_eq!(b.contains(&probe).unwrap(), closure.contains(&probe));
        }
        // a proper subgroup at the same degree
        let gens = [s(7, "(1 2 3)"), s(7, "(4 5 6 7)")];
        let closure = oracle::closure(&gens, 6000).unwrap();
        let b = schreier_sims(&gens).unwrap();
        assert_eq!(b.order(), BigUint::from(closure.len()));
        for _ in 0..50 {
            let probe = random_permutation(&mut rng, 7);
            assert_eq!(b.contains(&probe).unwrap(), closure.contains(&probe));
        }
    }

    #[test]
    fn trivial_group_from_identity_generators() {
        let b = schreier_sims(&[Permutation::identity(4), Permutation::identity(4)]).unwrap();
        assert_eq!(b.order(), BigUint::one());
        assert!(b.contains(&Permutation::identity(4)).unwrap());
        assert!(!b.contains(&s(4, "(1 2)")).unwrap());
    }

    #[test]
    fn factor_identity_is_empty_program() {
        let c3 = schreier_sims(&[s(3, "(1 2 3)")]).unwrap();
        let slp = c3.factor_as_slp(&Permutation::identity(3)).unwrap();
        assert!(slp.is_empty());
        assert!(eval_slp(&slp, c3.strong_generators())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn factor_cycle_square() {
        let c3 = schreier_sims(&[s(3, "(1 2 3)")]).unwrap();
        let target = s(3, "(1 3 2)");
        let slp = c3.factor_as_slp(&target).unwrap();
        assert_eq!(eval_slp(&slp, c3.strong_generators()).unwrap(), target);
        assert!(matches!(
            c3.factor_as_slp(&s(3, "(1 2)")),
            Err(Error::NotInGroup)
        ));
    }

    #[test]
    fn factor_random_members_of_random_subgroups() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut verified = 0;
        while verified < 200 {
            let gens: Vec<Permutation> = (0..2).map(|_| random_permutation(&mut rng, 6)).collect();
            let b = schreier_sims(&gens).unwrap();
            let elems = b.elements(1000).unwrap();
            for _ in 0..4 {
                let member = &elems[rand::Rng::gen_range(&mut rng, 0..elems.len())];
                let slp = b.factor_as_slp(member).unwrap();
                assert_eq!(&eval_slp(&slp, b.strong_generators()).unwrap(), member);
                verified += 1;
            }
        }
    }

    #[test]
    fn reduce_generators_drops_identities_and_duplicates() {
        let reduced =
            reduce_generators(&[Permutation::identity(3), Permutation::identity(3)]).unwrap();
        assert!(reduced.is_empty());
        let ten = vec![s(4, "(1 2)"); 10];
        assert_eq!(reduce_generators(&ten).unwrap().len(), 1);
    }

    #[test]
    fn reduce_generators_respects_log_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let gens: Vec<Permutation> = (0..12).map(|_| random_permutation(&mut rng, 6)).collect();
            let reduced = reduce_generators(&gens).unwrap();
            let before = schreier_sims(&gens).unwrap().order();
            if reduced.is_empty() {
                assert_eq!(before, BigUint::one());
                continue;
            }
            let after = schreier_sims(&reduced).unwrap().order();
            assert_eq!(before, after);
            // floor(log2(order)) = bits - 1 for order >= 2
            assert!((reduced.len() as u64) < before.bits());
        }
    }
}
