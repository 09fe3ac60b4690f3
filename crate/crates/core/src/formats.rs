//! Shared instance file formats.
//!
//! Every permutation list carries a degree header, since fixed points are
//! invisible in cycle notation. All points are 1-based on disk.

use crate::error::{Error, Result};
use crate::knapsack::{ExponentDomain, KnapsackInstance};
use crate::perm::Permutation;

/// Generator list:
///
/// ```text
/// degree 5
/// (1 2)
/// (1 2 3 4 5)
/// ```
pub fn parse_generators(text: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("degree ") {
            degree = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree line {line:?}")))?,
            );
        } else {
            let d = degree
                .ok_or_else(|| Error::Parse("permutation before the degree header".into()))?;
            gens.push(Permutation::parse(d, line)?);
        }
    }
    let degree = degree.ok_or_else(|| Error::Parse("missing degree header".into()))?;
    Ok((degree, gens))
}

pub fn write_generators(degree: usize, gens: &[Permutation]) -> String {
    let mut out = format!("degree {degree}\n");
    for g in gens {
        out.push_str(&format!("{g}\n"));
    }
    out
}

/// Knapsack-family instance:
///
/// ```text
/// degree 5
/// target (1 3)(2 4)
/// factor (1 2)
/// factor (3 4)
/// ```
pub fn parse_knapsack_instance(text: &str, domain: ExponentDomain) -> Result<KnapsackInstance> {
    let mut degree: Option<usize> = None;
    let mut target: Option<Permutation> = None;
    let mut factors = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("degree ") {
            degree = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad degree line {line:?}")))?,
            );
        } else if let Some(rest) = line.strip_prefix("target ") {
            let d = degree.ok_or_else(|| Error::Parse("target before degree header".into()))?;
            target = Some(Permutation::parse(d, rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("factor ") {
            let d = degree.ok_or_else(|| Error::Parse("factor before degree header".into()))?;
            factors.push(Permutation::parse(d, rest.trim())?);
        } else {
            return Err(Error::Parse(format!("unrecognized instance line {line:?}")));
        }
    }
    let target = target.ok_or_else(|| Error::Parse("missing target line".into()))?;
    KnapsackInstance::new(target, factors, domain, None)
}

pub fn write_knapsack_instance(inst: &KnapsackInstance) -> String {
    let mut out = format!("degree {}\ntarget {}\n", inst.degree(), inst.target);
    for f in &inst.factors {
        out.push_str(&format!("factor {f}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_round_trip() {
        let text = "degree 5\n(1 2)\n(1 2 3 4 5)\n";
        let (degree, gens) = parse_generators(text).unwrap();
        assert_eq!(degree, 5);
        assert_eq!(gens.len(), 2);
        assert_eq!(write_generators(degree, &gens), text);
        assert!(parse_generators("(1 2)\n").is_err());
    }

    #[test]
    fn instance_round_trip() {
        let text = "degree 5\ntarget (1 3)(2 4)\nfactor (1 2)\nfactor (3 4)\n";
        let inst = parse_knapsack_instance(text, ExponentDomain::Binary).unwrap();
        assert_eq!(inst.factors.len(), 2);
        assert_eq!(write_knapsack_instance(&inst), text);
        // identity fixed points survive the round trip via the degree header
        let text = "degree 7\ntarget ()\n";
        let inst = parse_knapsack_instance(text, ExponentDomain::Natural).unwrap();
        assert_eq!(inst.degree(), 7);
    }
}
