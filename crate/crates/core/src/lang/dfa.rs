//! Deterministic finite automata over letter alphabets and nondeterministic
//! automata labelled with group elements.

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A total DFA. States are `0..states`; `maps[letter][state]` is the
/// successor state.
#[derive(Clone, Debug)]
pub struct Dfa {
    states: usize,
    letters: Vec<String>,
    maps: Vec<Vec<usize>>,
    initial: usize,
    finals: Vec<usize>,
}

impl Dfa {
    pub fn new(
        states: usize,
        letters: Vec<String>,
        maps: Vec<Vec<usize>>,
        initial: usize,
        finals: Vec<usize>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(Error::InvalidInput(
                "automaton needs at least one state".into(),
            ));
        }
        if maps.len() != letters.len() {
            return Err(Error::InvalidInput(
                "every letter needs exactly one transition map".into(),
            ));
        }
        for map in &maps {
            if map.len() != states || map.iter().any(|&q| q >= states) {
                return Err(Error::InvalidInput(
                    "transition map must be total over the state set".into(),
                ));
            }
        }
        if initial >= states || finals.iter().any(|&f| f >= states) {
            return Err(Error::InvalidInput(
                "initial/final state out of range".into(),
            ));
        }
        Ok(Dfa {
            states,
            letters,
            maps,
            initial,
            finals,
        })
    }

    /// Parses the line-oriented DFA format (states are 1-based in files):
    ///
    /// ```text
    /// states 2
    /// initial 1
    /// final 1 2
    /// trans 1 a 2
    /// trans 2 a 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut states: Option<usize> = None;
        let mut initial: Option<usize> = None;
        let mut finals: Vec<usize> = Vec::new();
        let mut trans: Vec<(usize, String, usize)> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            match tok.next() {
                Some("states") => {
                    states = Some(parse_num(tok.next(), line)?);
                }
                Some("initial") => initial = Some(parse_num(tok.next(), line)? - 1),
                Some("final") => {
                    for t in tok {
                        finals.push(t.parse::<usize>().map_err(|_| bad(line))? - 1);
                    }
                }
                Some("trans") => {
                    let p: usize = parse_num(tok.next(), line)?;
                    let letter = tok.next().ok_or_else(|| bad(line))?.to_string();
                    let q: usize = parse_num(tok.next(), line)?;
                    trans.push((p - 1, letter, q - 1));
                }
                _ => return Err(bad(line)),
            }
        }
        let states = states.ok_or_else(|| Error::Parse("missing states line".into()))?;
        let initial = initial.ok_or_else(|| Error::Parse("missing initial line".into()))?;
        let mut letters: Vec<String> = Vec::new();
        for (_, l, _) in &trans {
            if !letters.contains(l) {
                letters.push(l.clone());
            }
        }
        let mut maps: Vec<Vec<Option<usize>>> = vec![vec![None; states]; letters.len()];
        for (p, l, q) in &trans {
            let li = letters.iter().position(|x| x == l).unwrap();
            if *p >= states || *q >= states {
                return Err(Error::Parse(format!(
                    "transition state out of range: {p} {q}"
                )));
            }
            if maps[li][*p].replace(*q).is_some() {
                return Err(Error::Parse(format!(
                    "duplicate transition for state {} letter {l:?}",
                    p + 1
                )));
            }
        }
        let maps: Vec<Vec<usize>> = maps
            .into_iter()
            .enumerate()
            .map(|(li, m)| {
                m.into_iter()
                    .enumerate()
                    .map(|(s, q)| {
                        q.ok_or_else(|| {
                            Error::Parse(format!(
                                "missing transition for state {} letter {:?}",
                                s + 1,
                                letters[li]
                            ))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(states, letters, maps, initial, finals)
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn letter_index(&self, letter: &str) -> Option<usize> {
        self.letters.iter().position(|l| l == letter)
    }

    pub fn step(&self, state: usize, letter_idx: usize) -> usize {
        self.maps[letter_idx][state]
    }

    pub fn map_of(&self, letter_idx: usize) -> &[usize] {
        &self.maps[letter_idx]
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        let mut q = self.initial;
        for &l in word {
            q = self.maps[l][q];
        }
        self.finals.contains(&q)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("states {}\ninitial {}\n", self.states, self.initial + 1);
        if !self.finals.is_empty() {
            out.push_str("final");
            for f in &self.finals {
                out.push_str(&format!(" {}", f + 1));
            }
            out.push('\n');
        }
        for (li, l) in self.letters.iter().enumerate() {
            for s in 0..self.states {
                out.push_str(&format!("trans {} {} {}\n", s + 1, l, self.maps[li][s] + 1));
            }
        }
        out
    }
}

/// A DFA is a group DFA exactly when every letter acts as a bijection on the
/// states: then the transformation monoid sits inside the symmetric group on
/// the states and, being a finite submonoid of a group, is a group. If some
/// letter merges two states, the monoid contains a non-invertible map next to
/// the identity and cannot be a group.
pub fn is_group_dfa(d: &Dfa) -> bool {
    (0..d.letters().len()).all(|li| {
        let mut seen = vec![false; d.states()];
        d.map_of(li)
            .iter()
            .all(|&q| !std::mem::replace(&mut seen[q], true))
    })
}

/// The permutation a letter induces on the states of a group DFA.
pub fn letter_permutation(d: &Dfa, letter: &str) -> Result<Permutation> {
    let li = d
        .letter_index(letter)
        .ok_or_else(|| Error::InvalidInput(format!("unknown letter {letter:?}")))?;
    let images: Vec<u32> = d.map_of(li).iter().map(|&q| q as u32).collect();
    Permutation::from_images(images).map_err(|_| Error::NonGroupDfa(letter.to_string()))
}

/// A nondeterministic automaton whose transition labels are group elements of
/// one common degree.
#[derive(Clone, Debug)]
pub struct GroupNfa {
    degree: usize,
    states: usize,
    transitions: Vec<(usize, Permutation, usize)>,
    initial: Vec<usize>,
    finals: Vec<usize>,
}

impl GroupNfa {
    pub fn new(
        degree: usize,
        states: usize,
        transitions: Vec<(usize, Permutation, usize)>,
        initial: Vec<usize>,
        finals: Vec<usize>,
    ) -> Result<Self> {
        if states == 0 {
            return Err(Error::InvalidInput(
                "automaton needs at least one state".into(),
            ));
        }
        for (p, g, q) in &transitions {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch(degree, g.degree()));
            }
            if *p >= states || *q >= states {
                return Err(Error::InvalidInput("transition state out of range".into()));
            }
        }
        if initial.is_empty() || initial.iter().chain(&finals).any(|&s| s >= states) {
            return Err(Error::InvalidInput(
                "automaton needs in-range initial states".into(),
            ));
        }
        Ok(GroupNfa {
            degree,
            states,
            transitions,
            initial,
            finals,
        })
    }

    /// Parses the line-oriented format with permutation labels:
    ///
    /// ```text
    /// degree 4
    /// states 2
    /// initial 1
    /// final 1
    /// trans 1 (1 2) 2
    /// trans 2 (3 4) 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut degree: Option<usize> = None;
        let mut states: Option<usize> = None;
        let mut initial: Vec<usize> = Vec::new();
        let mut finals: Vec<usize> = Vec::new();
        let mut trans: Vec<(usize, Permutation, usize)> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("degree ") {
                degree = Some(rest.trim().parse().map_err(|_| bad(line))?);
            } else if let Some(rest) = line.strip_prefix("states ") {
                states = Some(rest.trim().parse().map_err(|_| bad(line))?);
            } else if let Some(rest) = line.strip_prefix("initial ") {
                for t in rest.split_whitespace() {
                    initial.push(t.parse::<usize>().map_err(|_| bad(line))? - 1);
                }
            } else if let Some(rest) = line.strip_prefix("final ") {
                for t in rest.split_whitespace() {
                    finals.push(t.parse::<usize>().map_err(|_| bad(line))? - 1);
                }
            } else if let Some(rest) = line.strip_prefix("trans ") {
                let d = degree
                    .ok_or_else(|| Error::Parse("trans line before the degree header".into()))?;
                let open = rest.find('(').ok_or_else(|| bad(line))?;
                let close = rest.rfind(')').ok_or_else(|| bad(line))?;
                let p: usize = rest[..open].trim().parse().map_err(|_| bad(line))?;
                let label = Permutation::parse(d, &rest[open..=close])?;
                let q: usize = rest[close + 1..].trim().parse().map_err(|_| bad(line))?;
                trans.push((p - 1, label, q - 1));
            } else {
                return Err(bad(line));
            }
        }
        GroupNfa::new(
            degree.ok_or_else(|| Error::Parse("missing degree line".into()))?,
            states.ok_or_else(|| Error::Parse("missing states line".into()))?,
            trans,
            initial,
            finals,
        )
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn transitions(&self) -> &[(usize, Permutation, usize)] {
        &self.transitions
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn finals(&self) -> &[usize] {
        &self.finals
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("degree {}\nstates {}\n", self.degree, self.states);
        out.push_str("initial");
        for s in &self.initial {
            out.push_str(&format!(" {}", s + 1));
        }
        out.push('\n');
        if !self.finals.is_empty() {
            out.push_str("final");
            for s in &self.finals {
                out.push_str(&format!(" {}", s + 1));
            }
            out.push('\n');
        }
        for (p, g, q) in &self.transitions {
            out.push_str(&format!("trans {} {} {}\n", p + 1, g, q + 1));
        }
        out
    }
}

fn parse_num(tok: Option<&str>, line: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| bad(line))
}

fn bad(line: &str) -> Error {
    Error::Parse(format!("unrecognized line {line:?}"))
}
