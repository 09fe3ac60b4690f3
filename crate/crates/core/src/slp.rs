//! Straight-line programs over a generating set.
//!
//! A program is a sequence of definitions; definition `i` is either a
//! reference to a generator or a product of two earlier definitions. Programs
//! serve as compressed membership certificates: they can be evaluated through
//! group oracles without ever materializing intermediate words.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// One definition of a straight-line program.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlpDef {
    /// Reference to a generator by index.
    Gen(usize),
    /// Product of two earlier definitions (indices strictly smaller than the
    /// definition's own position).
    Mul(usize, usize),
}

/// A straight-line program together with the element it claims to produce.
/// The empty program produces the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slp {
    pub defs: Vec<SlpDef>,
    pub result: Permutation,
}

impl Slp {
    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Checks that the program evaluates to its claimed result.
    pub fn verify(&self, generators: &[Permutation]) -> Result<bool> {
        Ok(eval_slp(self, generators)? == self.result)
    }
}

/// Evaluates a program over the given generators. The value of the program is
/// the value of its last definition; the empty program evaluates to the
/// identity (of the claimed result's degree).
pub fn eval_slp(slp: &Slp, generators: &[Permutation]) -> Result<Permutation> {
    let mut values: Vec<Permutation> = Vec::with_capacity(slp.defs.len());
    for (i, def) in slp.defs.iter().enumerate() {
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
                values[j].compose(&values[k])?
            }
        };
        values.push(v);
    }
    Ok(values
        .pop()
        .unwrap_or_else(|| Permutation::identity(slp.result.degree())))
}
