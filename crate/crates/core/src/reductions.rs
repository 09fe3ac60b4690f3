//! Executable hardness reductions with brute-force cross-checks.
//!
//! * exact 3-hitting set (X3HS) to subset sum over `Z_3^d`, and on into
//!   permutations via the componentwise 3-cycle embedding;
//! * X3HS to 3-knapsack over a direct product of symmetric and cyclic groups
//!   built from a deterministic assignment of odd primes;
//! * membership in a product `G H G` of abelian permutation groups to plain
//!   knapsack.
//!
//! Every reduction ships with desk-scale validators: solvability of the
//! image instance is compared against independent enumeration of the source.

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::knapsack::{ExponentDomain, KnapsackInstance};
use crate::perm::{direct_product, Permutation};

/// An exact 3-hitting-set instance: ground set `{1..n}` and a family of
/// 3-element subsets. A hitting set must meet every family member in exactly
/// one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X3hsInstance {
    n: usize,
    sets: Vec<[usize; 3]>,
}

impl X3hsInstance {
    pub fn new(n: usize, sets: Vec<[usize; 3]>) -> Result<Self> {
        for set in &sets {
            if set.iter().any(|&e| e == 0 || e > n) {
                return Err(Error::InvalidInput(format!(
                    "set {set:?} leaves the ground set 1..={n}"
                )));
            }
            if set[0] == set[1] || set[0] == set[2] || set[1] == set[2] {
                return Err(Error::InvalidInput(format!(
                    "set {set:?} repeats an element; members must have size 3"
                )));
            }
        }
        Ok(X3hsInstance { n, sets })
    }

    /// First line the ground-set size, then one triple per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| Error::Parse("empty hitting-set instance".into()))?
            .parse()
            .map_err(|_| Error::Parse("first line must be the ground-set size".into()))?;
        let mut sets = Vec::new();
        for line in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::Parse(format!("bad triple {line:?}")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 3 {
                return Err(Error::Parse(format!(
                    "triple {line:?} must have 3 elements"
                )));
            }
            sets.push([nums[0], nums[1], nums[2]]);
        }
        X3hsInstance::new(n, sets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sets(&self) -> &[[usize; 3]] {
        &self.sets
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for s in &self.sets {
            out.push_str(&format!("{} {} {}\n", s[0], s[1], s[2]));
        }
        out
    }

    pub fn is_hitting_set(&self, subset: &[usize]) -> bool {
        self.sets
            .iter()
            .all(|set| set.iter().filter(|e| subset.contains(e)).count() == 1)
    }
}

/// Exhaustive hitting-set search; returns the lexicographically least
/// solution as a sorted element list.
pub fn solve_x3hs(inst: &X3hsInstance, caps: &Caps) -> Result<Option<Vec<usize>>> {
    caps.check(
        "hitting-set ground size",
        inst.n as u128,
        caps.max_x3hs_ground,
    )?;
    let mut best: Option<Vec<usize>> = None;
    for mask in 0u64..(1 << inst.n) {
        let subset: Vec<usize> = (1..=inst.n).filter(|e| mask >> (e - 1) & 1 == 1).collect();
        if inst.is_hitting_set(&subset) && best.as_ref().is_none_or(|b| subset < *b) {
            best = Some(subset);
        }
    }
    Ok(best)
}

/// A vector over `Z_3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Z3Vector {
    entries: Vec<u8>,
}

impl Z3Vector {
    pub fn new(entries: Vec<u8>) -> Result<Self> {
        if entries.iter().any(|&e| e > 2) {
            return Err(Error::InvalidInput("entries must lie in {0, 1, 2}".into()));
        }
        Ok(Z3Vector { entries })
    }

    pub fn zero(dim: usize) -> Self {
        Z3Vector {
            entries: vec![0; dim],
        }
    }

    pub fn ones(dim: usize) -> Self {
        Z3Vector {
            entries: vec![1; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn add(&self, other: &Z3Vector) -> Z3Vector {
        Z3Vector {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| (a + b) % 3)
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }
}

/// The subset-sum image of a hitting-set instance over `Z_3^d`: item `i` has
/// a 1 in coordinate `j` exactly when `i` lies in the `j`-th set, and the
/// target is all ones. Binary combinations summing to the target correspond
/// exactly to hitting sets.
pub fn reduce_x3hs_to_subsetsum_z3(inst: &X3hsInstance) -> (Z3Vector, Vec<Z3Vector>) {
    let d = inst.sets.len();
    let items = (1..=inst.n)
        .map(|i| {
            let entries = inst
                .sets
                .iter()
                .map(|set| u8::from(set.contains(&i)))
                .collect();
            Z3Vector { entries }
        })
        .collect();
    (Z3Vector::ones(d), items)
}

/// Exhaustive binary subset-sum over `Z_3^d`.
pub fn z3_subset_sum_bruteforce(
    target: &Z3Vector,
    items: &[Z3Vector],
    caps: &Caps,
) -> Result<Option<Vec<u8>>> {
    caps.check(
        "vector subset-sum items",
        items.len() as u128,
        caps.max_x3hs_ground,
    )?;
    for mask in 0u64..(1 << items.len()) {
        let mut acc = Z3Vector::zero(target.dim());
        for (i, item) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = acc.add(item);
            }
        }
        if acc == *target {
            return Ok(Some(
                (0..items.len()).map(|i| (mask >> i & 1) as u8).collect(),
            ));
        }
    }
    Ok(None)
}

/// Componentwise embedding of `Z_3^d` into the symmetric group on `3d`
/// points: coordinate `e` of value `c` becomes the `c`-th power of the
/// 3-cycle on its block. An injective homomorphism.
pub fn embed_z3_in_sym(v: &Z3Vector) -> Permutation {
    let blocks: Vec<Permutation> = v
        .entries
        .iter()
        .map(|&c| {
            Permutation::cycle_on_prefix(3, 3)
                .expect("3-cycle of degree 3")
                .power(c as i64)
        })
        .collect();
    if blocks.is_empty() {
        Permutation::identity(0)
    } else {
        direct_product(&blocks)
    }
}

/// The explicit single cycle equal to the product of a length-`q` full cycle
/// followed by a length-`p` full cycle, for odd `q` with `p > q > 0`:
/// odd points up to `q - 2`, then `q`, then the even points up to `q - 1`,
/// then `q + 1 .. p`.
pub fn cycle_product_form(p: usize, q: usize) -> Result<Permutation> {
    if q.is_multiple_of(2) || q == 0 || p <= q {
        return Err(Error::InvalidInput(format!(
            "need odd q with p > q > 0, got p = {p}, q = {q}"
        )));
    }
    let mut points: Vec<usize> = (1..=q.saturating_sub(2)).step_by(2).collect();
    points.push(q);
    points.extend((2..=q.saturating_sub(1)).step_by(2));
    points.extend(q + 1..=p);
    let explicit = Permutation::from_cycles(p, &[points])?;
    let direct = &Permutation::cycle_on_prefix(p, q)? * &Permutation::cycle_on_prefix(p, p)?;
    debug_assert_eq!(explicit, direct);
    Ok(explicit)
}

/// Layout entry of one component block of the product group.
#[derive(Clone, Debug)]
pub struct BlockInfo {
    pub label: String,
    pub offset: usize,
    pub size: usize,
}

/// The assembled 3-knapsack image of a hitting-set instance.
#[derive(Clone, Debug)]
pub struct TripleKnapsackInstance {
    pub target: Permutation,
    pub factors: [Permutation; 3],
    pub report: StructureReport,
}

/// Component boundaries and assigned primes of the product group.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub ground_size: usize,
    pub family_size: usize,
    pub primes_p: Vec<usize>,
    pub primes_r: Vec<usize>,
    pub primes_q: Vec<usize>,
    pub max_p: usize,
    pub degree: usize,
    pub blocks: Vec<BlockInfo>,
}

fn first_odd_primes(count: usize) -> Vec<usize> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 3usize;
    while primes.len() < count {
        if (2..candidate)
            .take_while(|d| d * d <= candidate)
            .all(|d| !candidate.is_multiple_of(d))
        {
            primes.push(candidate);
        }
        candidate += 2;
    }
    primes
}

/// Deterministic prime assignment: of the first `2m + d` odd primes, the `m`
/// largest become `p_1 .. p_m` (ascending), the smallest `m` become
/// `r_1 .. r_m` and the middle `d` become `q_1 .. q_d`. Every `p` then
/// exceeds every `r` and every `q`.
pub fn assign_primes(m: usize, d: usize) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let primes = first_odd_primes(2 * m + d);
    let r = primes[..m].to_vec();
    let q = primes[m..m + d].to_vec();
    let p = primes[m + d..].to_vec();
    (p, r, q)
}

/// One full cycle of length `n` living inside a block of `size` points.
fn cycle_in(size: usize, n: usize) -> Permutation {
    Permutation::cycle_on_prefix(size, n).expect("cycle fits its block")
}

/// Additive value of a cyclic component realized as a cycle power.
fn cyclic_value(size: usize, value: i64) -> Permutation {
    cycle_in(size, size).power(value)
}

struct ProductBuilder {
    blocks: Vec<BlockInfo>,
    sizes: Vec<usize>,
}

impl ProductBuilder {
    fn new() -> Self {
        ProductBuilder {
            blocks: Vec::new(),
            sizes: Vec::new(),
        }
    }

    fn push(&mut self, label: String, size: usize) {
        let offset = self.sizes.iter().sum();
        self.blocks.push(BlockInfo {
            label,
            offset,
            size,
        });
        self.sizes.push(size);
    }

    fn assemble(&self, components: &[Permutation]) -> Permutation {
        assert_eq!(components.len(), self.sizes.len());
        direct_product(components)
    }
}

/// Builds the four elements of the 3-knapsack image. The target equals a
/// product `g_1^{z_1} g_2^{z_2} g_3^{z_3}` exactly when the source instance
/// has an exact hitting set.
pub fn reduce_x3hs_to_3knapsack(inst: &X3hsInstance) -> Result<TripleKnapsackInstance> {
    build_triple_knapsack(inst.n, inst.sets.clone())
}

/// Shared builder; also used for the degenerate single-pair soundness
/// testbed where the family repeats one element.
fn build_triple_knapsack(m: usize, sets: Vec<[usize; 3]>) -> Result<TripleKnapsackInstance> {
    if m == 0 {
        return Err(Error::InvalidInput("ground set must be nonempty".into()));
    }
    let d = sets.len();
    let (p, r, q) = assign_primes(m, d);
    let big_p = *p.last().expect("m >= 1");

    let mut builder = ProductBuilder::new();
    for j in 0..m {
        for (tag, size) in [
            ("sym_a", p[j]),
            ("sym_b", p[j]),
            ("cyc_p1", p[j]),
            ("cyc_p2", p[j]),
            ("cyc_r", r[j]),
        ] {
            builder.push(format!("element{}.{tag}", j + 1), size);
        }
    }
    for (i, &qi) in q.iter().enumerate() {
        for (tag, size) in [
            ("cyc_q", qi),
            ("sym_1", big_p),
            ("sym_2", big_p),
            ("sym_3", big_p),
        ] {
            builder.push(format!("set{}.{tag}", i + 1), size);
        }
    }

    let mut target = Vec::new();
    let mut f1 = Vec::new();
    let mut f2 = Vec::new();
    let mut f3 = Vec::new();
    for j in 0..m {
        let (pj, rj) = (p[j], r[j]);
        // two symmetric components of width p_j
        target.push(cycle_in(pj, rj));
        target.push(cycle_in(pj, rj));
        f1.push(cycle_in(pj, rj));
        f1.push(cycle_in(pj, pj).inverse());
        f2.push(cycle_in(pj, pj).inverse());
        f2.push(cycle_in(pj, rj));
        f3.push(&cycle_in(pj, pj) * &cycle_in(pj, rj));
        f3.push(&cycle_in(pj, pj) * &cycle_in(pj, rj));
        // two cyclic components mod p_j and one mod r_j
        target.push(cyclic_value(pj, 0));
        target.push(cyclic_value(pj, 0));
        target.push(cyclic_value(rj, 0));
        f1.push(cyclic_value(pj, 1));
        f1.push(cyclic_value(pj, 1));
        f1.push(cyclic_value(rj, 1));
        f2.push(cyclic_value(pj, -1));
        f2.push(cyclic_value(pj, 0));
        f2.push(cyclic_value(rj, -1));
        f3.push(cyclic_value(pj, 0));
        f3.push(cyclic_value(pj, -1));
        f3.push(cyclic_value(rj, 0));
    }
    for (i, set) in sets.iter().enumerate() {
        let qi = q[i];
        let a1 = p[set[0] - 1];
        let a2 = p[set[1] - 1];
        let a3 = p[set[2] - 1];
        // cyclic component mod q_i: every factor adds 1, so the exponents
        // must sum to 1 modulo q_i
        target.push(cyclic_value(qi, 1));
        f1.push(cyclic_value(qi, 1));
        f2.push(cyclic_value(qi, 1));
        f3.push(cyclic_value(qi, 1));
        // three symmetric components of width P
        target.push(Permutation::identity(big_p));
        target.push(Permutation::identity(big_p));
        target.push(Permutation::identity(big_p));
        f1.push(cycle_in(big_p, qi).inverse());
        f1.push(cycle_in(big_p, a2).inverse());
        f1.push(&cycle_in(big_p, qi) * &cycle_in(big_p, a3));
        f2.push(&cycle_in(big_p, qi) * &cycle_in(big_p, a1));
        f2.push(cycle_in(big_p, qi).inverse());
        f2.push(cycle_in(big_p, a3).inverse());
        f3.push(cycle_in(big_p, a1).inverse());
        f3.push(&cycle_in(big_p, qi) * &cycle_in(big_p, a2));
        f3.push(cycle_in(big_p, qi).inverse());
    }

    let degree: usize = builder.sizes.iter().sum();
    let report = StructureReport {
        ground_size: m,
        family_size: d,
        primes_p: p,
        primes_r: r,
        primes_q: q,
        max_p: big_p,
        degree,
        blocks: builder.blocks.clone(),
    };
    Ok(TripleKnapsackInstance {
        target: builder.assemble(&target),
        factors: [
            builder.assemble(&f1),
            builder.assemble(&f2),
            builder.assemble(&f3),
        ],
        report,
    })
}

/// The column-wise identity condition on the cyclic `q_i` components plus
/// the two symmetric-column constraints collapses to: some 0/1 labelling of
/// the ground set hits every family member exactly once (counting
/// multiplicity). Enumerating the labellings decides solvability.
pub fn triple_knapsack_solvable_residue(ground_size: usize, sets: &[[usize; 3]]) -> bool {
    for mask in 0u64..(1 << ground_size) {
        let sigma = |e: usize| (mask >> (e - 1) & 1) as usize;
        if sets
            .iter()
            .all(|set| sigma(set[0]) + sigma(set[1]) + sigma(set[2]) == 1)
        {
            return true;
        }
    }
    false
}

/// Chinese-remainder exponents witnessing a hitting set: modulo `p_j` all
/// three exponents take the indicator of `j`; modulo `r_j` the first two
/// take its complement; modulo `q_i` exponent `k` takes the indicator of the
/// `k`-th element of set `i`.
pub fn crt_exponents_for_hitting_set(
    inst: &X3hsInstance,
    report: &StructureReport,
    hitting_set: &[usize],
) -> [BigUint; 3] {
    let sigma = |e: usize| u64::from(hitting_set.contains(&e));
    let mut congruences: [Vec<(u64, u64)>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for j in 0..report.ground_size {
        let s = sigma(j + 1);
        for c in congruences.iter_mut() {
            c.push((s, report.primes_p[j] as u64));
        }
        congruences[0].push((1 - s, report.primes_r[j] as u64));
        congruences[1].push((1 - s, report.primes_r[j] as u64));
    }
    for (i, set) in inst.sets.iter().enumerate() {
        for k in 0..3 {
            congruences[k].push((sigma(set[k]), report.primes_q[i] as u64));
        }
    }
    congruences.map(|c| crt_coprime(&c))
}

/// CRT for pairwise coprime moduli.
fn crt_coprime(congruences: &[(u64, u64)]) -> BigUint {
    let mut residue = BigInt::zero();
    let mut modulus = BigInt::from(1);
    for &(a, m) in congruences {
        let (a, m) = (BigInt::from(a), BigInt::from(m));
        // solve residue + modulus * t = a (mod m)
        let e = num_integer::Integer::extended_gcd(&modulus, &m);
        debug_assert!(e.gcd == BigInt::from(1));
        let t = ((&a - &residue) * &e.x) % &m;
        residue = &residue + &modulus * t;
        modulus *= &m;
        residue = ((&residue % &modulus) + &modulus) % &modulus;
    }
    residue.to_biguint().expect("normalized to non-negative")
}

/// Verifies a claimed exponent triple by direct exponentiation.
pub fn verify_triple_knapsack(inst: &TripleKnapsackInstance, z: &[BigUint; 3]) -> bool {
    let mut acc = Permutation::identity(inst.target.degree());
    for (factor, exp) in inst.factors.iter().zip(z) {
        acc = &acc * &factor.power_big(&BigInt::from(exp.clone()));
    }
    acc == inst.target
}

/// The smallest soundness testbed: one ground element, one degenerate family
/// member repeating it, primes `(p, r, q) = (7, 3, 5)`, total degree 57. Its
/// residue system is unsolvable, so no exponent triple can work.
pub fn single_pair_subsystem() -> TripleKnapsackInstance {
    build_triple_knapsack(1, vec![[1, 1, 1]]).expect("fixed testbed builds")
}

/// The same subsystem without the family part: here both labellings of the
/// single element are admissible, so solutions exist.
pub fn single_element_subsystem() -> TripleKnapsackInstance {
    build_triple_knapsack(1, vec![]).expect("fixed testbed builds")
}

/// Membership in `G H G` for abelian `G = <gens_g>` and `H = <gens_h>` as a
/// knapsack instance: the factor list is `gens_g ++ gens_h ++ gens_g`, since
/// commuting generators let every member of an abelian group split into
/// generator powers.
pub fn reduce_product_membership_to_knapsack(
    gens_g: &[Permutation],
    gens_h: &[Permutation],
    s: &Permutation,
) -> Result<KnapsackInstance> {
    for (i, a) in gens_g.iter().enumerate() {
        for b in &gens_g[i + 1..] {
            if !a.commutes_with(b)? {
                return Err(Error::NonAbelian);
            }
        }
    }
    for (i, a) in gens_h.iter().enumerate() {
        for b in &gens_h[i + 1..] {
            if !a.commutes_with(b)? {
                return Err(Error::NonAbelian);
            }
        }
    }
    let mut factors = Vec::with_capacity(2 * gens_g.len() + gens_h.len());
    factors.extend_from_slice(gens_g);
    factors.extend_from_slice(gens_h);
    factors.extend_from_slice(gens_g);
    KnapsackInstance::new(s.clone(), factors, ExponentDomain::Natural, None)
}

/// Brute-force `G H G` membership by closure enumeration.
pub fn ghg_membership_bruteforce(
    gens_g: &[Permutation],
    gens_h: &[Permutation],
    s: &Permutation,
    cap: usize,
) -> Result<bool> {
    let degree = s.degree();
    let identity = vec![Permutation::identity(degree)];
    let g_set = crate::oracle::closure(if gens_g.is_empty() { &identity } else { gens_g }, cap)?;
    let h_set = crate::oracle::closure(if gens_h.is_empty() { &identity } else { gens_h }, cap)?;
    for g1 in &g_set {
        for h in &h_set {
            // s = g1 h g2  =>  g2 = (g1 h)^-1 s
            let needed = &(g1 * h).inverse() * s;
            if g_set.contains(&needed) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
