//! Pairs over `G x G^op` and their embedding into a larger symmetric group.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// An element `(g, h)` of `G x G^op`: the first coordinate multiplies left to
/// right as usual, the second in reverse, so that
/// `(g1, h1) * (g2, h2) = (g1 g2, h2 h1)`.
///
/// Sandwiching a word `w` as `g w h` composes correctly under this product:
/// applying `(g1, h1)` then `(g2, h2)` wraps `w` into `g2 g1 w h1 h2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPair {
    pub left: Permutation,
    pub right: Permutation,
}

impl GroupPair {
    pub fn identity(degree: usize) -> Self {
        GroupPair {
            left: Permutation::identity(degree),
            right: Permutation::identity(degree),
        }
    }

    pub fn new(left: Permutation, right: Permutation) -> Result<Self> {
        if left.degree() != right.degree() {
            return Err(Error::DegreeMismatch(left.degree(), right.degree()));
        }
        Ok(GroupPair { left, right })
    }

    pub fn degree(&self) -> usize {
        self.left.degree()
    }

    /// Product with the reversed second coordinate.
    pub fn mul(&self, other: &GroupPair) -> GroupPair {
        GroupPair {
            left: &self.left * &other.left,
            right: &other.right * &self.right,
        }
    }

    pub fn inverse(&self) -> GroupPair {
        GroupPair {
            left: self.left.inverse(),
            right: self.right.inverse(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.left.is_identity() && self.right.is_identity()
    }

    /// Injective homomorphism into the symmetric group on `2m` points: the
    /// first coordinate acts on the first block; the reversed coordinate is
    /// carried through `h -> h^-1`, which inverts the multiplication order,
    /// onto the second block. This buys stabilizer-chain machinery for
    /// tuples of subgroups of `G x G^op`.
    pub fn embed(&self) -> Permutation {
        crate::perm::direct_product(&[self.left.clone(), self.right.inverse()])
    }

    /// Inverse of [`GroupPair::embed`] for permutations that respect the two
    /// blocks.
    pub fn from_embedding(p: &Permutation) -> Result<GroupPair> {
        if !p.degree().is_multiple_of(2) {
            return Err(Error::InvalidInput("embedding degree must be even".into()));
        }
        let m = p.degree() / 2;
        let mut left = Vec::with_capacity(m);
        let mut second = Vec::with_capacity(m);
        for i in 0..m {
            let li = p.apply(i);
            let ri = p.apply(m + i);
            if li >= m || ri < m {
                return Err(Error::InvalidInput(
                    "permutation does not preserve the two embedding blocks".into(),
                ));
            }
            left.push(li as u32);
            second.push((ri - m) as u32);
        }
        Ok(GroupPair {
            left: Permutation::from_images(left)?,
            right: Permutation::from_images(second)?.inverse(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle;

    #[test]
    fn pair_product_reverses_second_coordinate() {
        let a = GroupPair::new(
            Permutation::parse(3, "(1 2)").unwrap(),
            Permutation::parse(3, "(1 2 3)").unwrap(),
        )
        .unwrap();
        let b = GroupPair::new(
            Permutation::parse(3, "(1 3)").unwrap(),
            Permutation::parse(3, "(2 3)").unwrap(),
        )
        .unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.left, &a.left * &b.left);
        assert_eq!(prod.right, &b.right * &a.right);
    }

    #[test]
    fn embedding_is_homomorphism_exhaustively_degree_3() {
        let all: Vec<Permutation> = oracle::closure(
            &[
                Permutation::parse(3, "(1 2)").unwrap(),
                Permutation::parse(3, "(1 2 3)").unwrap(),
            ],
            10,
        )
        .unwrap()
        .into_iter()
        .collect();
        let mut images = std::collections::HashSet::new();
        for g1 in &all {
            for h1 in &all {
                let p1 = GroupPair::new(g1.clone(), h1.clone()).unwrap();
                images.insert(p1.embed());
                for g2 in &all {
                    for h2 in &all {
                        let p2 = GroupPair::new(g2.clone(), h2.clone()).unwrap();
                        assert_eq!(&p1.embed() * &p2.embed(), p1.mul(&p2).embed());
                    }
                }
            }
        }
        // injectivity: 36 distinct images
        assert_eq!(images.len(), 36);
    }

    #[test]
    fn embedding_round_trip_random_pairs() {
        let mut rng = gen::rng_from_seed(3);
        for _ in 0..50 {
            let pair = GroupPair::new(
                gen::random_permutation(&mut rng, 5),
                gen::random_permutation(&mut rng, 5),
            )
            .unwrap();
            assert_eq!(GroupPair::from_embedding(&pair.embed()).unwrap(), pair);
        }
    }

    #[test]
    fn pair_inverse_cancels() {
        let mut rng = gen::rng_from_seed(4);
        for _ in 0..20 {
            let pair = GroupPair::new(
                gen::random_permutation(&mut rng, 4),
                gen::random_permutation(&mut rng, 4),
            )
            .unwrap();
            assert!(pair.mul(&pair.inverse()).is_identity());
        }
    }
}
