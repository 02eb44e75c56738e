//! Words over an indexed alphabet and plain-text group presentations.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A generator index with an exponent sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn pos(gen: usize) -> Self {
        Letter { gen: gen as u32, inv: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen: gen as u32, inv: true }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    pub fn exponent(self) -> i64 {
        if self.inv {
            -1
        } else {
            1
        }
    }
}

/// A word in an indexed alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn power(gen: usize, n: usize) -> Self {
        Word(vec![Letter::pos(gen); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Exponent sum under the character sending every generator to 1.
    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| l.exponent()).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|l| !l.inv)
    }

    pub fn is_negative(&self) -> bool {
        self.0.iter().all(|l| l.inv)
    }

    pub fn free_reduce(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclic_reduce(&self) -> Word {
        let mut w = self.free_reduce().0;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inverse() {
            w.pop();
            w.remove(0);
        }
        Word(w)
    }

    /// Renders as space-separated tokens `g` / `g^-1`.
    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            s.push_str(&names[l.gen as usize]);
            if l.inv {
                s.push_str("^-1");
            }
        }
        s
    }

    /// Parses the output of [`Word::render`]; also accepts `g^1`.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let mut w = Word::new();
        for tok in text.split_whitespace() {
            let (name, inv) = match tok.split_once('^') {
                Some((n, "-1")) => (n, true),
                Some((n, "1")) => (n, false),
                Some(_) => return Err(Error::Parse(format!("bad exponent in `{tok}`"))),
                None => (tok, false),
            };
            let gen = names
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
            w.push(Letter { gen: gen as u32, inv });
        }
        Ok(w)
    }
}

/// A finite presentation with named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl Presentation {
    /// `generators: a b c` followed by one relator per line.
    pub fn to_text(&self) -> String {
        let mut s = String::from("generators:");
        for g in &self.generators {
            write!(s, " {g}").unwrap();
        }
        s.push('\n');
        for r in &self.relators {
            s.push_str(&r.render(&self.generators));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Presentation> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let head = lines
            .next()
            .ok_or_else(|| Error::Parse("empty presentation".into()))?;
        let gens = head
            .strip_prefix("generators:")
            .ok_or_else(|| Error::Parse("missing `generators:` line".into()))?;
        let generators: Vec<String> = gens.split_whitespace().map(str::to_string).collect();
        let relators = lines
            .map(|l| Word::parse(l, &generators))
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation { generators, relators })
    }

    /// Relators with nonzero exponent sum, if any.
    pub fn height_violations(&self) -> Vec<usize> {
        self.relators
            .iter()
            .enumerate()
            .filter(|(_, r)| r.exponent_sum() != 0)
            .map(|(i, _)| i)
            .collect()
    }
}
