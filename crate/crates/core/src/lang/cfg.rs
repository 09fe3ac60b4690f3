//! Context-free grammars in Chomsky normal form.
//!
//! Terminals are either group elements of one declared degree or abstract
//! letters; the two kinds never mix within a grammar. The loader rejects
//! anything that is not in Chomsky normal form.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Terminal symbol: a permutation or an abstract letter.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminal {
    Perm(Permutation),
    Letter(String),
}

impl fmt::Display for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminal::Perm(p) => write!(f, "{p}"),
            Terminal::Letter(l) => write!(f, "'{l}'"),
        }
    }
}

impl fmt::Debug for Terminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Right-hand side of a production: `A -> B C` or `A -> a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProdRhs {
    Pair(usize, usize),
    Term(Terminal),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prod {
    pub lhs: usize,
    pub rhs: ProdRhs,
}

/// A grammar in Chomsky normal form. Nonterminals are identified by index
/// into the name table; the start symbol is one of them. Unreachable or
/// unproductive nonterminals are accepted.
#[derive(Clone, Debug)]
pub struct Cfg {
    names: Vec<String>,
    start: usize,
    prods: Vec<Prod>,
    degree: Option<usize>,
}

impl Cfg {
    pub fn new(names: Vec<String>, start: usize, prods: Vec<Prod>) -> Result<Self> {
        Cfg::new_with_degree(names, start, prods, None)
    }

    /// Like [`Cfg::new`] with an explicitly declared terminal degree, which
    /// must agree with any permutation terminals present. Grammars without
    /// terminal productions need the declaration to join the group pipeline.
    pub fn new_with_degree(
        names: Vec<String>,
        start: usize,
        prods: Vec<Prod>,
        declared: Option<usize>,
    ) -> Result<Self> {
        if names.is_empty() || start >= names.len() {
            return Err(Error::InvalidInput(
                "grammar needs a start symbol among its nonterminals".into(),
            ));
        }
        let mut degree: Option<usize> = None;
        let mut has_letters = false;
        for prod in &prods {
            if prod.lhs >= names.len() {
                return Err(Error::InvalidInput(format!(
                    "production references undeclared nonterminal {}",
                    prod.lhs
                )));
            }
            match &prod.rhs {
                ProdRhs::Pair(b, c) => {
                    if *b >= names.len() || *c >= names.len() {
                        return Err(Error::InvalidInput(
                            "production references undeclared nonterminal".into(),
                        ));
                    }
                }
                ProdRhs::Term(Terminal::Perm(p)) => match degree {
                    None => degree = Some(p.degree()),
                    Some(d) if d != p.degree() => return Err(Error::DegreeMismatch(d, p.degree())),
                    _ => {}
                },
                ProdRhs::Term(Terminal::Letter(_)) => has_letters = true,
            }
        }
        if has_letters && degree.is_some() {
            return Err(Error::InvalidInput(
                "grammar mixes permutation terminals with abstract letters".into(),
            ));
        }
        if let Some(d) = declared {
            match degree {
                Some(found) if found != d => return Err(Error::DegreeMismatch(d, found)),
                _ if has_letters => {
                    return Err(Error::InvalidInput(
                        "letter grammars take no degree header".into(),
                    ))
                }
                _ => degree = Some(d),
            }
        }
        Ok(Cfg {
            names,
            start,
            prods,
            degree,
        })
    }

    /// Parses the line-oriented grammar format:
    ///
    /// ```text
    /// degree 3           # only for permutation terminals
    /// start S
    /// prod S -> A B
    /// prod A -> (1 2 3)
    /// prod B -> 'x'      # abstract letter
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut degree: Option<usize> = None;
        let mut start_name: Option<String> = None;
        let mut raw_prods: Vec<(String, String)> = Vec::new();
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
            } else if let Some(rest) = line.strip_prefix("start ") {
                start_name = Some(rest.trim().to_string());
            } else if let Some(rest) = line.strip_prefix("prod ") {
                let (lhs, rhs) = rest
                    .split_once("->")
                    .ok_or_else(|| Error::Parse(format!("production without '->': {line:?}")))?;
                raw_prods.push((lhs.trim().to_string(), rhs.trim().to_string()));
            } else {
                return Err(Error::Parse(format!("unrecognized grammar line {line:?}")));
            }
        }
        let start_name =
            start_name.ok_or_else(|| Error::Parse("grammar file lacks a start line".into()))?;
        let mut names: Vec<String> = vec![start_name.clone()];
        let nt_id = |name: &str, names: &mut Vec<String>| -> usize {
            match names.iter().position(|n| n == name) {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            }
        };
        let mut prods = Vec::new();
        for (lhs_name, rhs_text) in raw_prods {
            let lhs = nt_id(&lhs_name, &mut names);
            let rhs = if rhs_text.starts_with('(') {
                let d = degree.ok_or_else(|| {
                    Error::Parse("permutation terminal without a degree header".into())
                })?;
                ProdRhs::Term(Terminal::Perm(Permutation::parse(d, &rhs_text)?))
            } else if rhs_text.starts_with('\'') {
                let letter = rhs_text
                    .strip_prefix('\'')
                    .and_then(|s| s.strip_suffix('\''))
                    .ok_or_else(|| Error::Parse(format!("bad letter terminal {rhs_text:?}")))?;
                ProdRhs::Term(Terminal::Letter(letter.to_string()))
            } else {
                let parts: Vec<&str> = rhs_text.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!(
                        "production must be binary or single-terminal, got {rhs_text:?}"
                    )));
                }
                let b = nt_id(parts[0], &mut names);
                let c = nt_id(parts[1], &mut names);
                ProdRhs::Pair(b, c)
            };
            prods.push(Prod { lhs, rhs });
        }
        Cfg::new_with_degree(names, 0, prods, degree)
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn prods(&self) -> &[Prod] {
        &self.prods
    }

    /// Declared degree when terminals are permutations.
    pub fn degree(&self) -> Option<usize> {
        self.degree
    }

    pub fn nt_name(&self, id: usize) -> &str {
        &self.names[id]
    }

    pub fn terminal_prods(&self, a: usize) -> impl Iterator<Item = (usize, &Terminal)> {
        self.prods.iter().enumerate().filter_map(move |(i, p)| {
            if p.lhs == a {
                if let ProdRhs::Term(t) = &p.rhs {
                    return Some((i, t));
                }
            }
            None
        })
    }

    pub fn binary_prods(&self, a: usize) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.prods.iter().enumerate().filter_map(move |(i, p)| {
            if p.lhs == a {
                if let ProdRhs::Pair(b, c) = p.rhs {
                    return Some((i, b, c));
                }
            }
            None
        })
    }

    /// The permutation a terminal production derives, for grammars over a
    /// group alphabet.
    pub fn perm_of<'a>(&self, t: &'a Terminal) -> Result<&'a Permutation> {
        match t {
            Terminal::Perm(p) => Ok(p),
            Terminal::Letter(l) => Err(Error::InvalidInput(format!(
                "grammar over letters (found {l:?}) where permutations were required"
            ))),
        }
    }

    /// Serializes back to the line-oriented format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(d) = self.degree {
            out.push_str(&format!("degree {d}\n"));
        }
        out.push_str(&format!("start {}\n", self.names[self.start]));
        for p in &self.prods {
            match &p.rhs {
                ProdRhs::Pair(b, c) => out.push_str(&format!(
                    "prod {} -> {} {}\n",
                    self.names[p.lhs], self.names[*b], self.names[*c]
                )),
                ProdRhs::Term(t) => out.push_str(&format!("prod {} -> {}\n", self.names[p.lhs], t)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_permutation_grammar() {
        let g = Cfg::parse("degree 3\nstart S\nprod S -> S S\nprod S -> (1 2 3)\n").unwrap();
        assert_eq!(g.nonterminal_count(), 1);
        assert_eq!(g.degree(), Some(3));
        assert_eq!(g.prods().len(), 2);
        let round = Cfg::parse(&g.to_text()).unwrap();
        assert_eq!(round.prods(), g.prods());
    }

    #[test]
    fn parse_letter_grammar() {
        let g = Cfg::parse("start S\nprod S -> A B\nprod A -> 'x'\nprod B -> 'y'\n").unwrap();
        assert_eq!(g.nonterminal_count(), 3);
        assert_eq!(g.degree(), None);
    }

    #[test]
    fn non_cnf_shapes_rejected() {
        assert!(Cfg::parse("start S\nprod S -> A\n").is_err());
        assert!(Cfg::parse("start S\nprod S -> A B C\n").is_err());
        assert!(Cfg::parse("degree 3\nstart S\nprod S -> (1 2) 'x'\n").is_err());
    }

    #[test]
    fn mixed_terminals_rejected() {
        let err = Cfg::parse("degree 2\nstart S\nprod S -> (1 2)\nprod S -> 'x'\n");
        assert!(err.is_err());
    }

    #[test]
    fn degree_required_for_permutations() {
        assert!(Cfg::parse("start S\nprod S -> (1 2)\n").is_err());
    }
}
