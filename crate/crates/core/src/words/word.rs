use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u32,
    pub inverse: bool,
}

impl Letter {
    pub const fn new(generator: u32, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub const fn pos(generator: u32) -> Self {
        Self::new(generator, false)
    }

    pub const fn neg(generator: u32) -> Self {
        Self::new(generator, true)
    }

    pub fn inv(self) -> Self {
        Self::new(self.generator, !self.inverse)
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Freely reduced word in signed generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a word, freely reducing it.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self { letters: out }
    }

    pub fn generator(g: u32) -> Self {
        Self {
            letters: vec![Letter::pos(g)],
        }
    }

    /// From signed 1-based indices: `k` is generator `k−1`, `−k` its inverse.
    pub fn from_signed(indices: &[i32]) -> Self {
        Self::new(indices.iter().map(|&k| {
            assert_ne!(k, 0);
            Letter::new(k.unsigned_abs() - 1, k < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self {
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.letters.iter().chain(&other.letters).copied())
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn conjugate_by(&self, k: &Self) -> Self {
        k.mul(self).mul(&k.inverse())
    }

    /// Largest generator index used, plus one.
    pub fn generator_bound(&self) -> u32 {
        self.letters.iter().map(|l| l.generator + 1).max().unwrap_or(0)
    }

    /// Signed occurrence counts per generator.
    pub fn exponent_vector(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0; rank];
        for l in &self.letters {
            v[l.generator as usize] += l.sign();
        }
        v
    }

    /// Removes matching letter pairs from both ends.
    pub fn cyclically_reduce(&self) -> Self {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j > i + 1 && l[i] == l[j - 1].inv() {
            i += 1;
            j -= 1;
        }
        Self {
            letters: l[i..j].to_vec(),
        }
    }

    /// True when the two words are conjugate in the free group.
    pub fn is_free_conjugate(&self, other: &Self) -> bool {
        let a = self.cyclically_reduce();
        let b = other.cyclically_reduce();
        if a.len() != b.len() {
            return false;
        }
        if a.is_empty() {
            return true;
        }
        let doubled: Vec<Letter> = a.letters.iter().chain(&a.letters).copied().collect();
        doubled.windows(b.len()).any(|w| w == b.letters.as_slice())
    }
}

impl FromIterator<Letter> for GroupWord {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Self::new(iter)
    }
}

/// Stateless reduction.
pub fn free_reduce(w: &[Letter]) -> GroupWord {
    GroupWord::new(w.iter().copied())
}

/// Naming scheme for the textual word syntax.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Alphabet {
    /// `a1, b1, …, ag, bg` mapped to generators `0, 1, …, 2g−1`.
    Fiber,
    /// `x1, …, xn` mapped to `0, …, n−1`.
    Base,
}

impl Alphabet {
    pub fn name(self, generator: u32) -> String {
        match self {
            Alphabet::Fiber => {
                let handle = generator / 2 + 1;
                if generator % 2 == 0 {
                    format!("a{handle}")
                } else {
                    format!("b{handle}")
                }
            }
            Alphabet::Base => format!("x{}", generator + 1),
        }
    }

    pub fn parse_generator(self, name: &str) -> Result<u32> {
        let bad = || Error::Parse(format!("unknown generator `{name}`"));
        let (head, digits) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
        let k: u32 = digits.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        match (self, head) {
            (Alphabet::Fiber, "a") => Ok(2 * (k - 1)),
            (Alphabet::Fiber, "b") => Ok(2 * (k - 1) + 1),
            (Alphabet::Base, "x") => Ok(k - 1),
            _ => Err(bad()),
        }
    }

    /// Parses `a1*b1^-1*a2`; `1` or an empty string is the identity.
    pub fn parse_word(self, text: &str) -> Result<GroupWord> {
        let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() || text == "1" {
            return Ok(GroupWord::identity());
        }
        let mut letters = Vec::new();
        for token in text.split('*') {
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
                    (n, e)
                }
                None => (token, 1),
            };
            if name.is_empty() {
                return Err(Error::Parse(format!("empty factor in `{text}`")));
            }
            let g = self.parse_generator(name)?;
            let l = Letter::new(g, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(GroupWord::new(letters))
    }

    pub fn format_word(self, w: &GroupWord) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|l| {
                let n = self.name(l.generator);
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Alphabet::Fiber.format_word(self))
    }
}
