//! Permutations on `{1..m}` with left-to-right composition.
//!
//! The composition convention is `i^(ab) = (i^a)^b`: in a product the left
//! factor acts first. Points are 0-based internally; the parser and printer
//! translate to the 1-based cycle notation used in files and documentation.

use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A permutation of `{1..m}` stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    /// The identity permutation of the given degree.
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from a 0-based image table, validating that it is
    /// a bijection.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let i = img as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidInput(format!(
                    "image table {images:?} is not a bijection"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of the given degree from disjoint cycles with
    /// 1-based points.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(Error::InvalidInput(format!(
                        "point {pt} out of range 1..={degree}"
                    )));
                }
                if used[pt - 1] {
                    return Err(Error::InvalidInput(format!(
                        "point {pt} appears twice in cycle notation"
                    )));
                }
                used[pt - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[pt - 1] = (next - 1) as u32;
            }
        }
        Ok(Permutation { images })
    }

    /// The full cycle `(1 2 ... n)` embedded at the start of `degree` points.
    pub fn cycle_on_prefix(degree: usize, n: usize) -> Result<Self> {
        if n > degree || n == 0 {
            return Err(Error::InvalidInput(format!(
                "cycle length {n} does not fit degree {degree}"
            )));
        }
        let cycle: Vec<usize> = (1..=n).collect();
        Permutation::from_cycles(degree, &[cycle])
    }

    /// Parses cycle notation such as `(1 2 3)(4 5)`. `()` denotes the
    /// identity. Points may be separated by spaces or commas.
    pub fn parse(degree: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            if !rest.starts_with('(') {
                return Err(Error::Parse(format!("expected '(' in {s:?}")));
            }
            let close = rest
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in {s:?}")))?;
            let inner = &rest[1..close];
            let points: Vec<usize> = inner
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point {t:?} in {s:?}")))
                })
                .collect::<Result<_>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = rest[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of a 0-based point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &img)| i as u32 == img)
    }

    /// Left-to-right product: `i^(self · other) = (i^self)^other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img as usize] = i as u32;
        }
        Permutation { images }
    }

    /// Disjoint cycle decomposition over 0-based points, fixed points omitted.
    /// Cycles start at their smallest point and are sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.apply(cur);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Order of the permutation: the lcm of its cycle lengths. Arbitrary
    /// precision, since the lcm overflows 64 bits well below degree 100.
    pub fn order(&self) -> BigUint {
        let mut ord = BigUint::one();
        for cycle in self.cycles() {
            ord = ord.lcm(&BigUint::from(cycle.len()));
        }
        ord
    }

    /// `self^e` for any integer exponent, reduced modulo the order.
    pub fn power_big(&self, e: &BigInt) -> Permutation {
        let ord = BigInt::from(self.order());
        let mut r = e.mod_floor(&ord);
        if r.is_negative() {
            r += &ord;
        }
        let mut exp = r.to_biguint().expect("non-negative after reduction");
        // square-and-multiply over the bits of the reduced exponent
        let mut acc = Permutation::identity(self.degree());
        let mut sq = self.clone();
        let two = BigUint::from(2u32);
        while !exp.is_zero() {
            if (&exp % &two).is_one() {
                acc = &acc * &sq;
            }
            sq = &sq * &sq;
            exp /= &two;
        }
        acc
    }

    /// `self^e` for machine-word exponents.
    pub fn power(&self, e: i64) -> Permutation {
        self.power_big(&BigInt::from(e))
    }

    /// Points moved by the permutation (0-based), ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.apply(i) != i).collect()
    }

    pub fn commutes_with(&self, other: &Permutation) -> Result<bool> {
        Ok(self.compose(other)? == other.compose(self)?)
    }
}

/// Left-to-right product. Panics on degree mismatch; use
/// [`Permutation::compose`] for the checked variant.
impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        assert_eq!(self.degree(), rhs.degree(), "degree mismatch in product");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| rhs.images[i as usize])
                .collect(),
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, pt) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", pt + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Embeds permutations on disjoint blocks into one permutation on the
/// concatenated point set; each factor acts on its own block of points.
pub fn direct_product(blocks: &[Permutation]) -> Permutation {
    let degree: usize = blocks.iter().map(|p| p.degree()).sum();
    let mut images = Vec::with_capacity(degree);
    let mut offset = 0u32;
    for p in blocks {
        images.extend(p.images().iter().map(|&i| i + offset));
        offset += p.degree() as u32;
    }
    Permutation { images }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn s(degree: usize, text: &str) -> Permutation {
        Permutation::parse(degree, text).unwrap()
    }

    #[test]
    fn identity_composes_neutrally() {
        let b = s(3, "(1 2)");
        assert_eq!(Permutation::identity(3).compose(&b).unwrap(), b);
        assert_eq!(b.compose(&Permutation::identity(3)).unwrap(), b);
    }

    #[test]
    fn left_to_right_composition() {
        // pointwise: i^(ab) = (i^a)^b
        let a = s(3, "(1 2 3)");
        let b = s(3, "(1 2)");
        assert_eq!(a.compose(&b).unwrap(), s(3, "(2 3)"));
    }

    #[test]
    fn full_cycle_product_small_case() {
        let q = Permutation::cycle_on_prefix(5, 3).unwrap();
        let p = Permutation::cycle_on_prefix(5, 5).unwrap();
        assert_eq!(q.compose(&p).unwrap(), s(5, "(1 3 2 4 5)"));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = s(3, "(1 2)");
        let b = s(4, "(1 2)");
        assert!(matches!(a.compose(&b), Err(Error::DegreeMismatch(3, 4))));
    }

    #[test]
    fn inverse_of_cycle() {
        assert_eq!(s(3, "(1 2 3)").inverse(), s(3, "(1 3 2)"));
        assert!(Permutation::identity(4).inverse().is_identity());
    }

    #[test]
    fn power_reduces_modulo_order() {
        let c5 = Permutation::cycle_on_prefix(5, 5).unwrap();
        assert!(c5.power(0).is_identity());
        assert!(c5.power(5).is_identity());
        assert_eq!(c5.power(7), c5.power(2));
        assert_eq!(c5.power(-1), c5.inverse());
    }

    #[test]
    fn order_is_lcm_of_cycle_lengths() {
        assert_eq!(Permutation::identity(5).order(), BigUint::from(1u32));
        assert_eq!(s(5, "(1 2)(3 4 5)").order(), BigUint::from(6u32));
        for p in [3usize, 5, 7, 11, 13] {
            let c = Permutation::cycle_on_prefix(p, p).unwrap();
            assert_eq!(c.order(), BigUint::from(p));
        }
    }

    #[test]
    fn parse_and_print_round_trip() {
        for text in ["()", "(1 2)", "(1 2 3)(4 5)", "(2 5)(3 4)"] {
            let p = s(5, text);
            assert_eq!(p, s(5, &p.to_string()));
        }
        assert_eq!(s(5, "(1,2,3)"), s(5, "(1 2 3)"));
        assert!(Permutation::parse(3, "(1 4)").is_err());
        assert!(Permutation::parse(3, "(1 1 2)").is_err());
        assert!(Permutation::parse(3, "(1 2").is_err());
    }

    #[test]
    fn direct_product_blocks() {
        let a = s(3, "(1 2 3)");
        let b = s(2, "(1 2)");
        let prod = direct_product(&[a, b]);
        assert_eq!(prod, s(5, "(1 2 3)(4 5)"));
    }

    proptest! {
        #[test]
        fn compose_associative_and_inverse_cancels(
            seed in 0u64..1000, degree in 1usize..9,
        ) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = crate::gen::random_permutation(&mut rng, degree);
            let b = crate::gen::random_permutation(&mut rng, degree);
            let c = crate::gen::random_permutation(&mut rng, degree);
            prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
            prop_assert!((&a * &a.inverse()).is_identity());
            prop_assert!((&a.inverse() * &a).is_identity());
        }

        #[test]
        fn power_matches_repeated_product(seed in 0u64..200, e in 0u32..40) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a = crate::gen::random_permutation(&mut rng, 8);
            let mut expect = Permutation::identity(8);
            for _ in 0..e {
                expect = &expect * &a;
            }
            prop_assert_eq!(a.power(e as i64), expect);
        }
    }

    #[test]
    fn order_exceeds_u64_for_large_degree() {
        // lcm of primes up to 101 on a degree-1060 permutation
        let primes: Vec<usize> = vec![
            2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
            89, 97, 101,
        ];
        let degree: usize = primes.iter().sum();
        let mut cycles = Vec::new();
        let mut next = 1;
        for &p in &primes {
            cycles.push((next..next + p).collect::<Vec<_>>());
            next += p;
        }
        let perm = Permutation::from_cycles(degree, &cycles).unwrap();
        let ord = perm.order();
        assert!(ord.to_u64().is_none(), "order {ord} should overflow u64");
        assert!(perm.power_big(&BigInt::from(ord)).is_identity());
    }
}
