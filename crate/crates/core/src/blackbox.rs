//! Black-box group oracles.
//!
//! A black box hides a finite group behind bit-string names of a fixed code
//! length `b` and four oracles: validity of a name, product, inverse, and a
//! witness-based identity test of witness length `c`. An element may have
//! several names; the only equality available to a client is checking
//! `x * y^-1 = 1` through the identity oracle.
//!
//! [`PermutationBlackBox`] packs permutation image tables into bit strings
//! and optionally appends ignored redundancy bits so that every element has
//! multiple names. Its identity oracle is deterministic and ignores the
//! witness, which the interface still carries so that witness-requiring
//! boxes can implement the same trait.

use crate::bsgs::Bsgs;
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::slp::{Slp, SlpDef};

/// A bit-string name for a group element. Bit `i` lives in byte `i / 8` at
/// position `i % 8`.
pub type Code = Vec<u8>;

/// The oracle interface of a black-box group.
pub trait BlackBox {
    /// Code length `b` in bits.
    fn code_len(&self) -> usize;
    /// Witness length `c` in bits.
    fn witness_len(&self) -> usize;
    /// Does the bit string name a group element?
    fn valid(&self, x: &Code) -> bool;
    /// A name of the inverse (arbitrary output on invalid input).
    fn inv(&self, x: &Code) -> Code;
    /// A name of the product (arbitrary output on invalid input).
    fn prod(&self, x: &Code, y: &Code) -> Code;
    /// Does `x` name the identity, certified by the given witness? The
    /// element is the identity iff some witness makes this accept.
    fn id(&self, x: &Code, witness: &Code) -> bool;
}

/// Black box backed by a symmetric group of a given degree: names are packed
/// image tables, `b = m * ceil(log2 m)` bits plus one ignored field in
/// redundancy mode.
#[derive(Clone, Debug)]
pub struct PermutationBlackBox {
    degree: usize,
    field_bits: usize,
    redundancy: bool,
}

impl PermutationBlackBox {
    pub fn new(degree: usize, redundancy: bool) -> Self {
        assert!(degree >= 1, "black box needs a positive degree");
        let mut field_bits = 1;
        while (1usize << field_bits) < degree {
            field_bits += 1;
        }
        PermutationBlackBox {
            degree,
            field_bits,
            redundancy,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Canonical name: packed images, redundancy field zero.
    pub fn encode(&self, p: &Permutation) -> Code {
        assert_eq!(p.degree(), self.degree);
        let mut code = vec![0u8; self.code_len().div_ceil(8)];
        for (i, &img) in p.images().iter().enumerate() {
            write_field(
                &mut code,
                i * self.field_bits,
                self.field_bits,
                img as usize,
            );
        }
        code
    }

    /// A non-canonical name in redundancy mode: the ignored field carries a
    /// tag. With redundancy off this is the canonical name.
    pub fn encode_with_tag(&self, p: &Permutation, tag: usize) -> Code {
        let mut code = self.encode(p);
        if self.redundancy {
            let max = (1usize << self.field_bits) - 1;
            write_field(
                &mut code,
                self.degree * self.field_bits,
                self.field_bits,
                tag & max,
            );
        }
        code
    }

    pub fn decode(&self, code: &Code) -> Option<Permutation> {
        if code.len() != self.code_len().div_ceil(8) {
            return None;
        }
        // padding bits beyond the code length must be zero
        for bit in self.code_len()..code.len() * 8 {
            if read_bit(code, bit) {
                return None;
            }
        }
        let mut images = Vec::with_capacity(self.degree);
        for i in 0..self.degree {
            let v = read_field(code, i * self.field_bits, self.field_bits);
            if v >= self.degree {
                return None;
            }
            images.push(v as u32);
        }
        Permutation::from_images(images).ok()
    }
}

impl BlackBox for PermutationBlackBox {
    fn code_len(&self) -> usize {
        self.field_bits * (self.degree + usize::from(self.redundancy))
    }

    fn witness_len(&self) -> usize {
        1
    }

    fn valid(&self, x: &Code) -> bool {
        self.decode(x).is_some()
    }

    fn inv(&self, x: &Code) -> Code {
        match self.decode(x) {
            Some(p) => self.encode(&p.inverse()),
            None => vec![0u8; self.code_len().div_ceil(8)],
        }
    }

    fn prod(&self, x: &Code, y: &Code) -> Code {
        match (self.decode(x), self.decode(y)) {
            (Some(p), Some(q)) => self.encode(&(&p * &q)),
            _ => vec![0u8; self.code_len().div_ceil(8)],
        }
    }

    fn id(&self, x: &Code, _witness: &Code) -> bool {
        matches!(self.decode(x), Some(p) if p.is_identity())
    }
}

fn read_bit(code: &[u8], bit: usize) -> bool {
    code[bit / 8] >> (bit % 8) & 1 == 1
}

fn write_field(code: &mut [u8], start: usize, width: usize, value: usize) {
    for k in 0..width {
        let bit = start + k;
        if value >> k & 1 == 1 {
            code[bit / 8] |= 1 << (bit % 8);
        } else {
            code[bit / 8] &= !(1 << (bit % 8));
        }
    }
}

fn read_field(code: &[u8], start: usize, width: usize) -> usize {
    let mut v = 0;
    for k in 0..width {
        if read_bit(code, start + k) {
            v |= 1 << k;
        }
    }
    v
}

/// Verifies a subgroup-membership certificate through the oracles alone: the
/// straight-line program is evaluated with `prod`, the result is multiplied
/// by `inv(target)`, and the identity oracle must accept with the supplied
/// witness. Programs longer than `(b + 1)^2` are rejected as malformed
/// (a size bound every true member can meet), which is an error distinct
/// from a non-membership verdict.
pub fn bb_subgroup_verify(
    bb: &dyn BlackBox,
    target: &Code,
    generators: &[Code],
    cert: &Slp,
    witness: &Code,
) -> Result<bool> {
    let bound = (bb.code_len() + 1) * (bb.code_len() + 1);
    if cert.len() > bound {
        return Err(Error::CertificateTooLarge);
    }
    let mut values: Vec<Code> = Vec::with_capacity(cert.len());
    for (i, def) in cert.defs.iter().enumerate() {
        let v = match *def {
            SlpDef::Gen(g) => generators
                .get(g)
                .ok_or_else(|| Error::MalformedSlp(format!("generator index {g} out of range")))?
                .clone(),
            SlpDef::Mul(j, k) => {
                if j >= i || k >= i {
                    return Err(Error::MalformedSlp(format!(
                        "definition {i} references later definition ({j}, {k})"
                    )));
                }
                bb.prod(&values[j], &values[k])
            }
        };
        values.push(v);
    }
    let candidate = match values.last() {
        Some(v) => bb.prod(v, &bb.inv(target)),
        // the empty program claims the identity
        None => bb.inv(target),
    };
    Ok(bb.id(&candidate, witness))
}

/// Deterministic desk-scale subgroup membership through the oracles only:
/// breadth-first closure of the generators, with names canonicalized by a
/// product with the identity and equality decided by the identity oracle on
/// `x * y^-1`. Exceeding `cap` distinct elements is an error.
pub fn bb_exhaustive_decide(
    bb: &dyn BlackBox,
    target: &Code,
    generators: &[Code],
    cap: usize,
) -> Result<bool> {
    let witness: Code = vec![0u8; bb.witness_len().div_ceil(8).max(1)];
    // an identity name: g * g^-1 for any available element
    let seed = generators.first().unwrap_or(target);
    let identity = bb.prod(seed, &bb.inv(seed));
    let canon = |x: &Code| bb.prod(x, &identity);

    let equal = |x: &Code, y: &Code| bb.id(&bb.prod(x, &bb.inv(y)), &witness);

    let mut elements: Vec<Code> = Vec::new();
    let mut index: std::collections::HashMap<Code, usize> = std::collections::HashMap::new();
    let push = |elements: &mut Vec<Code>,
                index: &mut std::collections::HashMap<Code, usize>,
                x: Code|
     -> Result<bool> {
        if let Some(&i) = index.get(&x) {
            // bucket hit: confirm through the identity oracle, the only
            // equality the closure relies on
            if equal(&x, &elements[i]) {
                return Ok(false);
            }
        }
        if elements.len() >= cap {
            return Err(Error::CapExceeded {
                what: "black-box closure",
                needed: elements.len() as u128 + 1,
                cap: cap as u128,
            });
        }
        index.insert(x.clone(), elements.len());
        elements.push(x);
        Ok(true)
    };

    push(&mut elements, &mut index, canon(&identity))?;
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in generators {
            let next = canon(&bb.prod(&current, g));
            push(&mut elements, &mut index, next)?;
        }
    }
    let target_c = canon(target);
    Ok(elements.iter().any(|e| equal(e, &target_c)))
}

/// Builds the boxed generator names and a membership certificate for `a`
/// from a stabilizer chain over the same generators (convenience used by the
/// demo command and the test suites).
pub fn certificate_for(
    bb: &PermutationBlackBox,
    chain: &Bsgs,
    a: &Permutation,
) -> Result<(Slp, Vec<Code>)> {
    let slp = chain.factor_as_slp(a)?;
    let gens = chain
        .strong_generators()
        .iter()
        .map(|g| bb.encode(g))
        .collect();
    Ok((slp, gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bsgs::schreier_sims;
    use crate::gen;
    use crate::oracle;
    use rand::Rng;

    fn perm(degree: usize, s: &str) -> Permutation {
        Permutation::parse(degree, s).unwrap()
    }

    #[test]
    fn encode_decode_round_trip_all_of_s4() {
        for redundancy in [false, true] {
            let bb = PermutationBlackBox::new(4, redundancy);
            let all = oracle::closure(&[perm(4, "(1 2)"), perm(4, "(1 2 3 4)")], 100).unwrap();
            assert_eq!(all.len(), 24);
            for p in &all {
                assert_eq!(bb.decode(&bb.encode(p)).as_ref(), Some(p));
            }
        }
    }

    #[test]
    fn oracles_match_direct_computation_exhaustively() {
        // every oracle answer against direct permutation arithmetic, over
        // every group element, for degrees up to 5
        for m in 1..=5usize {
            let bb = PermutationBlackBox::new(m, false);
            let gens = if m == 1 {
                vec![Permutation::identity(1)]
            } else {
                vec![
                    Permutation::cycle_on_prefix(m, m).unwrap(),
                    Permutation::cycle_on_prefix(m, 2).unwrap(),
                ]
            };
            let elems: Vec<Permutation> =
                oracle::closure(&gens, 200).unwrap().into_iter().collect();
            let w = vec![0u8];
            for p in &elems {
                let x = bb.encode(p);
                assert!(bb.valid(&x));
                assert_eq!(bb.decode(&bb.inv(&x)), Some(p.inverse()));
                assert_eq!(bb.id(&x, &w), p.is_identity());
                for q in &elems {
                    let y = bb.encode(q);
                    assert_eq!(bb.decode(&bb.prod(&x, &y)), Some(p * q));
                }
            }
        }
    }

    #[test]
    fn invalid_names_rejected() {
        let bb = PermutationBlackBox::new(3, false);
        // all bit strings of the right byte length
        let len = bb.code_len().div_ceil(8);
        let mut valid_count = 0;
        for raw in 0..(1u32 << (len * 8).min(16)) {
            let code: Code = raw.to_le_bytes()[..len].to_vec();
            if bb.valid(&code) {
                valid_count += 1;
                assert!(bb.decode(&code).is_some());
            }
        }
        assert_eq!(valid_count, 6); // |S_3|
    }

    #[test]
    fn redundancy_mode_gives_multiple_names() {
        let bb = PermutationBlackBox::new(4, true);
        let p = perm(4, "(1 2 3)");
        let a = bb.encode_with_tag(&p, 0);
        let b = bb.encode_with_tag(&p, 1);
        assert_ne!(a, b);
        assert!(bb.valid(&a) && bb.valid(&b));
        // id accepts on x * y^-1 for any two names of the same element
        let w = vec![0u8];
        assert!(bb.id(&bb.prod(&a, &bb.inv(&b)), &w));
    }

    #[test]
    fn verify_accepts_one_step_certificate() {
        let bb = PermutationBlackBox::new(4, false);
        let g = perm(4, "(1 2 3)");
        let cert = Slp {
            defs: vec![SlpDef::Gen(0)],
            result: g.clone(),
        };
        let ok = bb_subgroup_verify(
            &bb,
            &bb.encode(&g),
            &[bb.encode(&g)],
            &cert,
            &[0u8].to_vec(),
        )
        .unwrap();
        assert!(ok);
    }

    #[test]
    fn verify_rejects_oversized_certificate() {
        let bb = PermutationBlackBox::new(2, false);
        let bound = (bb.code_len() + 1) * (bb.code_len() + 1);
        let g = perm(2, "(1 2)");
        let cert = Slp {
            defs: vec![SlpDef::Gen(0); bound + 1],
            result: g.clone(),
        };
        assert!(matches!(
            bb_subgroup_verify(&bb, &bb.encode(&g), &[bb.encode(&g)], &cert, &vec![0u8]),
            Err(Error::CertificateTooLarge)
        ));
    }

    #[test]
    fn verify_accepts_chain_certificates_and_rejects_corruptions() {
        let mut rng = gen::rng_from_seed(97);
        let bb = PermutationBlackBox::new(5, false);
        let bound = (bb.code_len() + 1) * (bb.code_len() + 1);
        let w = vec![0u8];
        let mut tested = 0;
        while tested < 60 {
            let gens = gen::random_generator_set(&mut rng, 5, 2);
            let chain = schreier_sims(&gens).unwrap();
            let elems = chain.elements(200).unwrap();
            let member = elems[rng.gen_range(0..elems.len())].clone();
            let (cert, boxed_gens) = certificate_for(&bb, &chain, &member).unwrap();
            assert!(cert.len() <= bound);
            let target = bb.encode(&member);
            assert!(bb_subgroup_verify(&bb, &target, &boxed_gens, &cert, &w).unwrap());

            // corrupt one definition; keep only mutations that change the value
            if cert.defs.is_empty() {
                tested += 1;
                continue;
            }
            let mut bad = cert.clone();
            let at = rng.gen_range(0..bad.defs.len());
            bad.defs[at] = match bad.defs[at] {
                SlpDef::Gen(g) => {
                    if boxed_gens.len() < 2 {
                        continue;
                    }
                    SlpDef::Gen((g + 1) % boxed_gens.len())
                }
                SlpDef::Mul(j, k) => SlpDef::Mul((j + 1) % at, k),
            };
            let mutated = Slp {
                defs: bad.defs.clone(),
                result: member.clone(),
            };
            if crate::slp::eval_slp(&mutated, chain.strong_generators()).unwrap() == member {
                continue;
            }
            assert!(!bb_subgroup_verify(&bb, &target, &boxed_gens, &bad, &w).unwrap());
            tested += 1;
        }
    }

    #[test]
    fn verify_never_accepts_a_non_member() {
        // any certificate for a target outside the subgroup must fail the
        // final identity check
        let mut rng = gen::rng_from_seed(103);
        let bb = PermutationBlackBox::new(5, false);
        let w = vec![0u8];
        let mut tested = 0;
        while tested < 100 {
            let gens = gen::random_generator_set(&mut rng, 5, 2);
            let chain = schreier_sims(&gens).unwrap();
            let outsider = gen::random_permutation(&mut rng, 5);
            if chain.contains(&outsider).unwrap() {
                continue;
            }
            let elems = chain.elements(200).unwrap();
            let member = elems[rng.gen_range(0..elems.len())].clone();
            let (cert, boxed) = certificate_for(&bb, &chain, &member).unwrap();
            let verdict =
                bb_subgroup_verify(&bb, &bb.encode(&outsider), &boxed, &cert, &w).unwrap();
            assert!(!verdict);
            tested += 1;
        }
    }

    #[test]
    fn exhaustive_decide_trivial_cases() {
        let bb = PermutationBlackBox::new(3, false);
        let id = bb.encode(&Permutation::identity(3));
        assert!(bb_exhaustive_decide(&bb, &id, std::slice::from_ref(&id), 100).unwrap());
        let c3 = bb.encode(&perm(3, "(1 2 3)"));
        let swap = bb.encode(&perm(3, "(1 2)"));
        assert!(!bb_exhaustive_decide(&bb, &swap, &[c3], 100).unwrap());
    }

    #[test]
    fn exhaustive_decide_matches_chain_membership() {
        let mut rng = gen::rng_from_seed(101);
        for redundancy in [false, true] {
            let bb = PermutationBlackBox::new(5, redundancy);
            for _ in 0..250 {
                let gens = gen::random_generator_set(&mut rng, 5, 2);
                let target = gen::random_permutation(&mut rng, 5);
                let chain = schreier_sims(&gens).unwrap();
                let boxed: Vec<Code> = gens
                    .iter()
                    .enumerate()
                    .map(|(i, g)| bb.encode_with_tag(g, i))
                    .collect();
                let expected = chain.contains(&target).unwrap();
                let got = bb_exhaustive_decide(&bb, &bb.encode_with_tag(&target, 7), &boxed, 1000)
                    .unwrap();
                assert_eq!(expected, got);
            }
        }
    }
}
