//! Exact solvers for subset sum, knapsack, k-knapsack and 2-knapsack over
//! permutations.
//!
//! The target is expressed as `a = a_1^{i_1} ... a_n^{i_n}` with exponents in
//! `{0, 1}` (subset sum) or arbitrary naturals (knapsack). Exponents never
//! need to reach an element's order, so the natural-domain search ranges over
//! `i_k < order(a_k)`. All solvers verify their own answers by direct
//! multiplication before returning.

mod matrix;

pub use matrix::{
    check_kronecker_equivalence, kron, kronecker_factors_commute, vec_of, ZeroOneMatrix,
};

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Whether exponents range over `{0, 1}` or all naturals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExponentDomain {
    Binary,
    Natural,
}

/// A knapsack-family instance.
#[derive(Clone, Debug)]
pub struct KnapsackInstance {
    pub target: Permutation,
    pub factors: Vec<Permutation>,
    pub domain: ExponentDomain,
    /// set when the instance arrived as a fixed-k problem
    pub fixed_k: Option<usize>,
}

impl KnapsackInstance {
    pub fn new(
        target: Permutation,
        factors: Vec<Permutation>,
        domain: ExponentDomain,
        fixed_k: Option<usize>,
    ) -> Result<Self> {
        for f in &factors {
            if f.degree() != target.degree() {
                return Err(Error::DegreeMismatch(target.degree(), f.degree()));
            }
        }
        if let Some(k) = fixed_k {
            if factors.len() != k {
                return Err(Error::InvalidInput(format!(
                    "fixed-k instance needs exactly {k} factors, got {}",
                    factors.len()
                )));
            }
        }
        Ok(KnapsackInstance {
            target,
            factors,
            domain,
            fixed_k,
        })
    }

    pub fn degree(&self) -> usize {
        self.target.degree()
    }

    pub fn check_binary(&self, bits: &[u8]) -> bool {
        let mut acc = Permutation::identity(self.degree());
        for (b, f) in bits.iter().zip(&self.factors) {
            if *b == 1 {
                acc = &acc * f;
            }
        }
        bits.len() == self.factors.len() && acc == self.target
    }

    pub fn check_natural(&self, exps: &[u64]) -> bool {
        let mut acc = Permutation::identity(self.degree());
        for (e, f) in exps.iter().zip(&self.factors) {
            acc = &acc * &f.power(*e as i64);
        }
        exps.len() == self.factors.len() && acc == self.target
    }
}

/// Subset sum by depth-first search over prefixes, memoizing failed
/// (index, prefix product) states. The zero branch is tried first, so the
/// returned assignment is the lexicographically least one.
pub fn solve_subset_sum(inst: &KnapsackInstance, caps: &Caps) -> Result<Option<Vec<u8>>> {
    if inst.domain != ExponentDomain::Binary {
        return Err(Error::InvalidInput(
            "subset sum needs the binary exponent domain".into(),
        ));
    }
    let mut failed: HashSet<(usize, Permutation)> = HashSet::new();
    let mut bits = vec![0u8; inst.factors.len()];
    let found = dfs_binary(
        inst,
        0,
        Permutation::identity(inst.degree()),
        &mut bits,
        &mut failed,
        caps,
    )?;
    if found {
        debug_assert!(inst.check_binary(&bits));
        Ok(Some(bits))
    } else {
        Ok(None)
    }
}

fn dfs_binary(
    inst: &KnapsackInstance,
    idx: usize,
    prefix: Permutation,
    bits: &mut [u8],
    failed: &mut HashSet<(usize, Permutation)>,
    caps: &Caps,
) -> Result<bool> {
    if idx == inst.factors.len() {
        return Ok(prefix == inst.target);
    }
    if failed.contains(&(idx, prefix.clone())) {
        return Ok(false);
    }
    if failed.len() >= caps.max_solver_states {
        return Err(Error::CapExceeded {
            what: "subset-sum solver states",
            needed: failed.len() as u128 + 1,
            cap: caps.max_solver_states as u128,
        });
    }
    bits[idx] = 0;
    if dfs_binary(inst, idx + 1, prefix.clone(), bits, failed, caps)? {
        return Ok(true);
    }
    bits[idx] = 1;
    if dfs_binary(
        inst,
        idx + 1,
        &prefix * &inst.factors[idx],
        bits,
        failed,
        caps,
    )? {
        return Ok(true);
    }
    bits[idx] = 0;
    failed.insert((idx, prefix));
    Ok(false)
}

/// Subset sum by meet in the middle: prefix products of the first half are
/// tabled, suffix products of the second half are matched against them.
pub fn solve_subset_sum_mitm(inst: &KnapsackInstance, caps: &Caps) -> Result<Option<Vec<u8>>> {
    if inst.domain != ExponentDomain::Binary {
        return Err(Error::InvalidInput(
            "subset sum needs the binary exponent domain".into(),
        ));
    }
    let n = inst.factors.len();
    let half = n / 2;
    caps.check(
        "meet-in-the-middle table",
        1u128 << half,
        caps.max_solver_states,
    )?;
    let mut table: std::collections::HashMap<Permutation, u64> = std::collections::HashMap::new();
    for mask in 0..(1u64 << half) {
        let mut acc = Permutation::identity(inst.degree());
        for (i, f) in inst.factors[..half].iter().enumerate() {
            if mask >> i & 1 == 1 {
                acc = &acc * f;
            }
        }
        table.entry(acc).or_insert(mask);
    }
    for mask in 0..(1u64 << (n - half)) {
        let mut suffix = Permutation::identity(inst.degree());
        for (i, f) in inst.factors[half..].iter().enumerate() {
            if mask >> i & 1 == 1 {
                suffix = &suffix * f;
            }
        }
        // prefix * suffix = target  =>  prefix = target * suffix^-1
        let wanted = &inst.target * &suffix.inverse();
        if let Some(&pmask) = table.get(&wanted) {
            let mut bits = vec![0u8; n];
            for (i, bit) in bits.iter_mut().enumerate().take(half) {
                *bit = (pmask >> i & 1) as u8;
            }
            for (i, bit) in bits.iter_mut().enumerate().skip(half) {
                *bit = (mask >> (i - half) & 1) as u8;
            }
            debug_assert!(inst.check_binary(&bits));
            return Ok(Some(bits));
        }
    }
    Ok(None)
}

/// Knapsack over natural exponents: depth-first over `i_k < order(a_k)` with
/// memoized failed (index, prefix) states. Powers of a factor repeat with
/// period `order(a_k)`, so the restriction loses no solutions.
pub fn solve_knapsack(inst: &KnapsackInstance, caps: &Caps) -> Result<Option<Vec<u64>>> {
    let orders: Vec<u64> = inst
        .factors
        .iter()
        .map(|f| {
            f.order().to_u64().ok_or(Error::CapExceeded {
                what: "knapsack factor order",
                needed: u128::MAX,
                cap: u64::MAX as u128,
            })
        })
        .collect::<Result<_>>()?;
    let mut failed: HashSet<(usize, Permutation)> = HashSet::new();
    let mut exps = vec![0u64; inst.factors.len()];
    let found = dfs_natural(
        inst,
        &orders,
        0,
        Permutation::identity(inst.degree()),
        &mut exps,
        &mut failed,
        caps,
    )?;
    if found {
        debug_assert!(inst.check_natural(&exps));
        Ok(Some(exps))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn dfs_natural(
    inst: &KnapsackInstance,
    orders: &[u64],
    idx: usize,
    prefix: Permutation,
    exps: &mut [u64],
    failed: &mut HashSet<(usize, Permutation)>,
    caps: &Caps,
) -> Result<bool> {
    if idx == inst.factors.len() {
        return Ok(prefix == inst.target);
    }
    if failed.contains(&(idx, prefix.clone())) {
        return Ok(false);
    }
    if failed.len() >= caps.max_solver_states {
        return Err(Error::CapExceeded {
            what: "knapsack solver states",
            needed: failed.len() as u128 + 1,
            cap: caps.max_solver_states as u128,
        });
    }
    let mut power = prefix.clone();
    for e in 0..orders[idx] {
        exps[idx] = e;
        if dfs_natural(inst, orders, idx + 1, power.clone(), exps, failed, caps)? {
            return Ok(true);
        }
        power = &power * &inst.factors[idx];
    }
    exps[idx] = 0;
    failed.insert((idx, prefix));
    Ok(false)
}

/// Least exponent `y >= 0` with `c^y = b`, or `None`. Each cycle of `c`
/// pins `y` modulo its length (fixed points of `c` must be fixed by `b`);
/// the congruences combine by the Chinese remainder theorem over non-coprime
/// moduli and the candidate is verified by exponentiation.
pub fn cyclic_dlog(c: &Permutation, b: &Permutation) -> Result<Option<BigUint>> {
    if c.degree() != b.degree() {
        return Err(Error::DegreeMismatch(c.degree(), b.degree()));
    }
    let mut residue = BigUint::zero();
    let mut modulus = BigUint::one();
    // fixed points of c must be fixed by b
    for p in 0..c.degree() {
        if c.apply(p) == p && b.apply(p) != p {
            return Ok(None);
        }
    }
    for cycle in c.cycles() {
        let len = BigUint::from(cycle.len());
        // position of b(cycle[0]) within the cycle gives y mod len
        let image = b.apply(cycle[0]);
        let Some(shift) = cycle.iter().position(|&q| q == image) else {
            return Ok(None);
        };
        match crt_merge(&residue, &modulus, &BigUint::from(shift), &len) {
            Some((r, m)) => {
                residue = r;
                modulus = m;
            }
            None => return Ok(None),
        }
    }
    let candidate = residue;
    if c.power_big(&BigInt::from(candidate.clone())) == *b {
        Ok(Some(candidate))
    } else {
        Ok(None)
    }
}

/// Merges `x = a mod m` and `x = b mod n` for arbitrary moduli; `None` when
/// inconsistent.
fn crt_merge(a: &BigUint, m: &BigUint, b: &BigUint, n: &BigUint) -> Option<(BigUint, BigUint)> {
    let (am, bm) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let (mi, ni) = (BigInt::from(m.clone()), BigInt::from(n.clone()));
    let e = mi.extended_gcd(&ni);
    let diff = &bm - &am;
    let (q, r) = diff.div_rem(&e.gcd);
    if !r.is_zero() {
        return None;
    }
    let lcm = (&mi * &ni) / &e.gcd;
    let x = (&am + (&e.x * q % (&lcm / &mi) * &mi)) % &lcm;
    let x = ((x % &lcm) + &lcm) % &lcm;
    Some((x.to_biguint().unwrap(), lcm.to_biguint().unwrap()))
}

/// 2-knapsack: iterates `x1 < order(a1)` and solves the remaining cyclic
/// membership `a2^{x2} = a1^{-x1} a` by discrete logarithm. The outer loop is
/// bounded by the first factor's order, polynomial per iteration.
pub fn solve_2_knapsack(
    a1: &Permutation,
    a2: &Permutation,
    a: &Permutation,
    caps: &Caps,
) -> Result<Option<(BigUint, BigUint)>> {
    if a1.degree() != a.degree() || a2.degree() != a.degree() {
        return Err(Error::DegreeMismatch(a1.degree(), a.degree()));
    }
    let order1 = a1.order().to_u64().ok_or(Error::CapExceeded {
        what: "2-knapsack outer order",
        needed: u128::MAX,
        cap: caps.max_solver_states as u128,
    })?;
    caps.check(
        "2-knapsack outer order",
        order1 as u128,
        caps.max_solver_states,
    )?;
    let inv1 = a1.inverse();
    let mut shifted = a.clone();
    for x1 in 0..order1 {
        if let Some(x2) = cyclic_dlog(a2, &shifted)? {
            let result = (BigUint::from(x1), x2);
            debug_assert_eq!(
                &(&a1.power(x1 as i64) * &a2.power_big(&BigInt::from(result.1.clone()))),
                a
            );
            return Ok(Some(result));
        }
        // next iteration needs a1^{-(x1+1)} a
        shifted = &inv1 * &shifted;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use rand::Rng;

    fn caps() -> Caps {
        Caps::default()
    }

    fn perm(degree: usize, s: &str) -> Permutation {
        Permutation::parse(degree, s).unwrap()
    }

    #[test]
    fn empty_instance_solves_identity_only() {
        let inst = KnapsackInstance::new(
            Permutation::identity(4),
            vec![],
            ExponentDomain::Binary,
            None,
        )
        .unwrap();
        assert_eq!(solve_subset_sum(&inst, &caps()).unwrap(), Some(vec![]));
        let inst =
            KnapsackInstance::new(perm(4, "(1 2)"), vec![], ExponentDomain::Binary, None).unwrap();
        assert_eq!(solve_subset_sum(&inst, &caps()).unwrap(), None);
    }

    #[test]
    fn two_disjoint_transpositions() {
        let inst = KnapsackInstance::new(
            perm(4, "(1 2)(3 4)"),
            vec![perm(4, "(1 2)"), perm(4, "(3 4)")],
            ExponentDomain::Binary,
            None,
        )
        .unwrap();
        assert_eq!(solve_subset_sum(&inst, &caps()).unwrap(), Some(vec![1, 1]));
        assert_eq!(
            solve_subset_sum_mitm(&inst, &caps()).unwrap(),
            Some(vec![1, 1])
        );
    }

    #[test]
    fn subset_sum_agrees_with_exhaustive_and_mitm() {
        let mut rng = gen::rng_from_seed(111);
        for round in 0..500 {
            let n = 1 + (round % 12);
            let inst = if round % 2 == 0 {
                gen::planted_subset_sum(&mut rng, 5, n).0
            } else {
                gen::random_knapsack_instance(&mut rng, 5, n, ExponentDomain::Binary)
            };
            // exhaustive reference in lexicographic order (first factor
            // most significant) to match the solver's zero-first search
            let mut expect = None;
            'sweep: for mask in 0..(1u64 << n) {
                let bits: Vec<u8> = (0..n).map(|i| (mask >> (n - 1 - i) & 1) as u8).collect();
                if inst.check_binary(&bits) {
                    expect = Some(bits);
                    break 'sweep;
                }
            }
            let got = solve_subset_sum(&inst, &caps()).unwrap();
            assert_eq!(got.is_some(), expect.is_some());
            if let Some(bits) = &got {
                assert!(inst.check_binary(bits));
                // the DFS answer is the lexicographically least solution,
                // which matches mask order
                assert_eq!(got, expect);
            }
            let mitm = solve_subset_sum_mitm(&inst, &caps()).unwrap();
            assert_eq!(mitm.is_some(), expect.is_some());
            if let Some(bits) = mitm {
                assert!(inst.check_binary(&bits));
            }
        }
    }

    #[test]
    fn knapsack_powers_of_single_factor() {
        let a1 = Permutation::cycle_on_prefix(5, 5).unwrap();
        let inst =
            KnapsackInstance::new(a1.power(2), vec![a1], ExponentDomain::Natural, None).unwrap();
        assert_eq!(solve_knapsack(&inst, &caps()).unwrap(), Some(vec![2]));
    }

    #[test]
    fn knapsack_detects_unreachable_target() {
        // commuting factors moving disjoint points can never build a 3-cycle
        // over the union of their supports
        let inst = KnapsackInstance::new(
            perm(5, "(1 2 3)"),
            vec![perm(5, "(1 2)"), perm(5, "(4 5)")],
            ExponentDomain::Natural,
            None,
        )
        .unwrap();
        assert_eq!(solve_knapsack(&inst, &caps()).unwrap(), None);
    }

    #[test]
    fn knapsack_agrees_with_exhaustive_enumeration() {
        let mut rng = gen::rng_from_seed(131);
        for round in 0..300 {
            let n = 1 + (round % 4);
            let inst = if round % 2 == 0 {
                gen::planted_knapsack(&mut rng, 4, n).0
            } else {
                gen::random_knapsack_instance(&mut rng, 4, n, ExponentDomain::Natural)
            };
            let orders: Vec<u64> = inst
                .factors
                .iter()
                .map(|f| f.order().to_u64().unwrap())
                .collect();
            let mut expect = false;
            let mut stack = vec![(0usize, Permutation::identity(4))];
            // exhaustive product sweep over all exponent tuples
            while let Some((idx, acc)) = stack.pop() {
                if idx == inst.factors.len() {
                    if acc == inst.target {
                        expect = true;
                        break;
                    }
                    continue;
                }
                let mut p = acc.clone();
                for _ in 0..orders[idx] {
                    stack.push((idx + 1, p.clone()));
                    p = &p * &inst.factors[idx];
                }
            }
            let got = solve_knapsack(&inst, &caps()).unwrap();
            assert_eq!(got.is_some(), expect);
            if let Some(exps) = got {
                assert!(inst.check_natural(&exps));
            }
        }
    }

    #[test]
    fn binary_restricted_knapsack_equals_subset_sum() {
        let mut rng = gen::rng_from_seed(151);
        for _ in 0..100 {
            let inst = gen::random_knapsack_instance(&mut rng, 5, 6, ExponentDomain::Binary);
            let ss = solve_subset_sum(&inst, &caps()).unwrap();
            // restrict the natural search to two values per factor by
            // exhaustive check over bit masks
            let mut binary_reachable = false;
            for mask in 0..(1u64 << 6) {
                let bits: Vec<u8> = (0..6).map(|i| (mask >> i & 1) as u8).collect();
                if inst.check_binary(&bits) {
                    binary_reachable = true;
                    break;
                }
            }
            assert_eq!(ss.is_some(), binary_reachable);
        }
    }

    #[test]
    fn dlog_basics() {
        let c = Permutation::cycle_on_prefix(5, 5).unwrap();
        assert_eq!(
            cyclic_dlog(&c, &Permutation::identity(5)).unwrap(),
            Some(BigUint::zero())
        );
        assert_eq!(
            cyclic_dlog(&c, &c.power(3)).unwrap(),
            Some(BigUint::from(3u32))
        );
        assert_eq!(cyclic_dlog(&c, &perm(5, "(1 2)")).unwrap(), None);
    }

    #[test]
    fn dlog_recovers_exponents_modulo_order() {
        let mut rng = gen::rng_from_seed(171);
        for _ in 0..200 {
            let c = gen::random_permutation(&mut rng, 8);
            let order = c.order().to_u64().unwrap();
            let y = rng.gen_range(0..3 * order.max(1));
            let b = c.power(y as i64);
            let got = cyclic_dlog(&c, &b).unwrap().expect("power is solvable");
            assert_eq!(got, BigUint::from(y % order));
        }
    }

    #[test]
    fn dlog_none_for_non_powers() {
        let mut rng = gen::rng_from_seed(181);
        let mut checked = 0;
        while checked < 50 {
            let c = gen::random_permutation(&mut rng, 6);
            let b = gen::random_permutation(&mut rng, 6);
            let order = c.order().to_u64().unwrap();
            let is_power = (0..order).any(|e| c.power(e as i64) == b);
            let got = cyclic_dlog(&c, &b).unwrap();
            assert_eq!(got.is_some(), is_power);
            checked += 1;
        }
    }

    #[test]
    fn two_knapsack_identity_and_disjoint() {
        let id = Permutation::identity(4);
        let (x1, x2) = solve_2_knapsack(&perm(4, "(1 2)"), &perm(4, "(3 4)"), &id, &caps())
            .unwrap()
            .unwrap();
        assert!(x1.is_zero() && x2.is_zero());
        let (x1, x2) = solve_2_knapsack(
            &perm(4, "(1 2)"),
            &perm(4, "(3 4)"),
            &perm(4, "(1 2)(3 4)"),
            &caps(),
        )
        .unwrap()
        .unwrap();
        assert_eq!((x1, x2), (BigUint::one(), BigUint::one()));
    }

    #[test]
    fn two_knapsack_agrees_with_general_solver() {
        let mut rng = gen::rng_from_seed(191);
        for _ in 0..200 {
            let a1 = gen::random_permutation(&mut rng, 6);
            let a2 = gen::random_permutation(&mut rng, 6);
            let a = gen::random_permutation(&mut rng, 6);
            let inst = KnapsackInstance::new(
                a.clone(),
                vec![a1.clone(), a2.clone()],
                ExponentDomain::Natural,
                Some(2),
            )
            .unwrap();
            let general = solve_knapsack(&inst, &caps()).unwrap();
            let direct = solve_2_knapsack(&a1, &a2, &a, &caps()).unwrap();
            assert_eq!(general.is_some(), direct.is_some());
            if let Some((x1, x2)) = direct {
                let value = &a1.power_big(&BigInt::from(x1)) * &a2.power_big(&BigInt::from(x2));
                assert_eq!(value, a);
            }
        }
    }
}
