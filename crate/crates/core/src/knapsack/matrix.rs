//! Zero-one matrices, Kronecker products and the vectorization identity used
//! by the 2-knapsack reformulation.
//!
//! `a1^{x1} a2^{x2} = a` holds exactly when
//! `(A2^T (x) I)^{x2} (I (x) A1)^{x1} vec(I) = vec(A)` over the corresponding
//! permutation matrices. With the row convention `M[i][j] = 1 iff j = i^a`,
//! matrix products follow the left-to-right group product.

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A square 0/1 matrix with bitset rows. Products are computed in the boolean
/// semiring; for permutation matrices this coincides with the integer
/// product, and those take a fast path through index composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroOneMatrix {
    dim: usize,
    words_per_row: usize,
    rows: Vec<u64>,
}

impl ZeroOneMatrix {
    pub fn zero(dim: usize) -> Self {
        let words_per_row = dim.div_ceil(64).max(1);
        ZeroOneMatrix {
            dim,
            words_per_row,
            rows: vec![0; words_per_row * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = ZeroOneMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    /// Permutation matrix with the row convention `M[i][j] = 1 iff j = i^a`.
    pub fn from_permutation(p: &Permutation) -> Self {
        let mut m = ZeroOneMatrix::zero(p.degree());
        for i in 0..p.degree() {
            m.set(i, p.apply(i), true);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = i * self.words_per_row + j / 64;
        if v {
            self.rows[w] |= 1 << (j % 64);
        } else {
            self.rows[w] &= !(1 << (j % 64));
        }
    }

    fn row_ones(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim).filter(move |&j| self.get(i, j))
    }

    /// Exactly one 1 per row and per column.
    pub fn is_permutation_matrix(&self) -> bool {
        self.to_permutation().is_some()
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        let mut images = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut ones = self.row_ones(i);
            let j = ones.next()?;
            if ones.next().is_some() {
                return None;
            }
            images.push(j as u32);
        }
        Permutation::from_images(images).ok()
    }

    pub fn transpose(&self) -> Self {
        let mut out = ZeroOneMatrix::zero(self.dim);
        for i in 0..self.dim {
            for j in self.row_ones(i) {
                out.set(j, i, true);
            }
        }
        out
    }

    /// Boolean matrix product; both operands square of equal dimension.
    /// Two permutation matrices multiply through index composition.
    pub fn mul(&self, other: &ZeroOneMatrix) -> Result<ZeroOneMatrix> {
        if self.dim != other.dim {
            return Err(Error::DegreeMismatch(self.dim, other.dim));
        }
        if let (Some(p), Some(q)) = (self.to_permutation(), other.to_permutation()) {
            // row convention makes matrix product match the group product
            return Ok(ZeroOneMatrix::from_permutation(&(&p * &q)));
        }
        let mut out = ZeroOneMatrix::zero(self.dim);
        for i in 0..self.dim {
            let out_row = i * self.words_per_row;
            for k in self.row_ones(i) {
                let other_row = k * other.words_per_row;
                for w in 0..self.words_per_row {
                    out.rows[out_row + w] |= other.rows[other_row + w];
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u64) -> Result<ZeroOneMatrix> {
        let mut acc = ZeroOneMatrix::identity(self.dim);
        let mut sq = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Boolean matrix-vector product, word-parallel over the row bitsets.
    pub fn apply_vec(&self, v: &[bool]) -> Vec<bool> {
        let mut vbits = vec![0u64; self.words_per_row];
        for (j, &b) in v.iter().enumerate() {
            if b {
                vbits[j / 64] |= 1 << (j % 64);
            }
        }
        (0..self.dim)
            .map(|i| {
                let row = &self.rows[i * self.words_per_row..(i + 1) * self.words_per_row];
                row.iter().zip(&vbits).any(|(r, v)| r & v != 0)
            })
            .collect()
    }
}

/// Kronecker product of square matrices: block `(i, j)` of the result is
/// `a[i][j] * b`.
pub fn kron(a: &ZeroOneMatrix, b: &ZeroOneMatrix, caps: &Caps) -> Result<ZeroOneMatrix> {
    let dim = a.dim().checked_mul(b.dim()).ok_or(Error::CapExceeded {
        what: "kronecker dimension",
        needed: u128::MAX,
        cap: caps.max_matrix_dim as u128,
    })?;
    caps.check("kronecker dimension", dim as u128, caps.max_matrix_dim)?;
    let mut out = ZeroOneMatrix::zero(dim);
    for i in 0..a.dim() {
        for j in a.row_ones(i) {
            for k in 0..b.dim() {
                for l in b.row_ones(k) {
                    out.set(i * b.dim() + k, j * b.dim() + l, true);
                }
            }
        }
    }
    Ok(out)
}

/// Column stacking: entry `(i, j)` lands at position `j * dim + i`.
pub fn vec_of(m: &ZeroOneMatrix) -> Vec<bool> {
    let mut out = vec![false; m.dim() * m.dim()];
    for i in 0..m.dim() {
        for j in m.row_ones(i) {
            out[j * m.dim() + i] = true;
        }
    }
    out
}

/// Builds the two commuting Kronecker factors for a 2-knapsack instance.
fn kron_factors(
    a1: &Permutation,
    a2: &Permutation,
    caps: &Caps,
) -> Result<(ZeroOneMatrix, ZeroOneMatrix)> {
    let m = a1.degree();
    let eye = ZeroOneMatrix::identity(m);
    let m2t = ZeroOneMatrix::from_permutation(a2).transpose();
    let m1 = ZeroOneMatrix::from_permutation(a1);
    let f2 = kron(&m2t, &eye, caps)?;
    let f1 = kron(&eye, &m1, caps)?;
    Ok((f2, f1))
}

/// Do the two factor matrices commute? They always should; exposed so suites
/// can assert it on every instance.
pub fn kronecker_factors_commute(a1: &Permutation, a2: &Permutation, caps: &Caps) -> Result<bool> {
    if a1.degree() != a2.degree() {
        return Err(Error::DegreeMismatch(a1.degree(), a2.degree()));
    }
    let (f2, f1) = kron_factors(a1, a2, caps)?;
    Ok(f2.mul(&f1)? == f1.mul(&f2)?)
}

/// The vectorized matrix identity for a claimed exponent pair: true exactly
/// when `a1^{x1} a2^{x2} = a`.
pub fn check_kronecker_equivalence(
    a1: &Permutation,
    a2: &Permutation,
    a: &Permutation,
    x1: u64,
    x2: u64,
    caps: &Caps,
) -> Result<bool> {
    if a1.degree() != a.degree() || a2.degree() != a.degree() {
        return Err(Error::DegreeMismatch(a1.degree(), a.degree()));
    }
    let (f2, f1) = kron_factors(a1, a2, caps)?;
    let start = vec_of(&ZeroOneMatrix::identity(a.degree()));
    let mid = f1.pow(x1)?.apply_vec(&start);
    let lhs = f2.pow(x2)?.apply_vec(&mid);
    Ok(lhs == vec_of(&ZeroOneMatrix::from_permutation(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use num_traits::ToPrimitive;
    use rand::Rng;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn kron_of_identities() {
        let i2 = ZeroOneMatrix::identity(2);
        assert_eq!(kron(&i2, &i2, &caps()).unwrap(), ZeroOneMatrix::identity(4));
    }

    #[test]
    fn vec_stacks_columns() {
        let i2 = ZeroOneMatrix::identity(2);
        assert_eq!(vec_of(&i2), vec![true, false, false, true]);
    }

    #[test]
    fn kron_of_permutation_matrices_is_permutation() {
        let mut rng = gen::rng_from_seed(211);
        for _ in 0..30 {
            let p = ZeroOneMatrix::from_permutation(&gen::random_permutation(&mut rng, 4));
            let q = ZeroOneMatrix::from_permutation(&gen::random_permutation(&mut rng, 3));
            assert!(kron(&p, &q, &caps()).unwrap().is_permutation_matrix());
        }
    }

    #[test]
    fn matrix_product_follows_group_product() {
        let mut rng = gen::rng_from_seed(221);
        for _ in 0..30 {
            let a = gen::random_permutation(&mut rng, 5);
            let b = gen::random_permutation(&mut rng, 5);
            let ma = ZeroOneMatrix::from_permutation(&a);
            let mb = ZeroOneMatrix::from_permutation(&b);
            assert_eq!(
                ma.mul(&mb).unwrap(),
                ZeroOneMatrix::from_permutation(&(&a * &b))
            );
        }
    }

    #[test]
    fn generic_boolean_product() {
        // non-permutation case exercises the bitset path
        let mut a = ZeroOneMatrix::zero(3);
        a.set(0, 0, true);
        a.set(0, 1, true);
        let mut b = ZeroOneMatrix::zero(3);
        b.set(1, 2, true);
        let ab = a.mul(&b).unwrap();
        assert!(ab.get(0, 2));
        assert!(!ab.get(1, 2));
    }

    #[test]
    fn trivial_kronecker_check() {
        let id = Permutation::identity(3);
        assert!(
            check_kronecker_equivalence(&id, &id, &Permutation::identity(3), 0, 0, &caps())
                .unwrap()
        );
    }

    #[test]
    fn kronecker_identity_matches_group_equation_exhaustively() {
        let mut rng = gen::rng_from_seed(231);
        for _ in 0..100 {
            let a1 = gen::random_permutation(&mut rng, 4);
            let a2 = gen::random_permutation(&mut rng, 4);
            let a = gen::random_permutation(&mut rng, 4);
            assert!(kronecker_factors_commute(&a1, &a2, &caps()).unwrap());
            let o1 = a1.order().to_u64().unwrap();
            let o2 = a2.order().to_u64().unwrap();
            for x1 in 0..o1 {
                for x2 in 0..o2 {
                    let direct = &a1.power(x1 as i64) * &a2.power(x2 as i64) == a;
                    let viamatrix =
                        check_kronecker_equivalence(&a1, &a2, &a, x1, x2, &caps()).unwrap();
                    assert_eq!(direct, viamatrix);
                }
            }
        }
    }

    #[test]
    fn kronecker_check_fails_on_perturbed_targets() {
        let mut rng = gen::rng_from_seed(241);
        for _ in 0..25 {
            let a1 = gen::random_permutation(&mut rng, 4);
            let a2 = gen::random_permutation(&mut rng, 4);
            let x1 = rng.gen_range(0..4);
            let x2 = rng.gen_range(0..4);
            let a = &a1.power(x1) * &a2.power(x2);
            assert!(
                check_kronecker_equivalence(&a1, &a2, &a, x1 as u64, x2 as u64, &caps()).unwrap()
            );
            let wrong = &a * &Permutation::parse(4, "(1 2)").unwrap();
            assert!(
                !check_kronecker_equivalence(&a1, &a2, &wrong, x1 as u64, x2 as u64, &caps())
                    .unwrap()
            );
        }
    }
}
