//! Reduced words in the free group on generators `g_1, ..., g_N`.
//!
//! Text form: one lowercase letter per generator (`a` = g_1, `b` = g_2, ...)
//! and the matching capital for its inverse, separated by spaces, e.g.
//! `"a b A"`. The identity is the empty string (`"1"` is also accepted).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank that still has a letter in the text form.
pub const MAX_TEXT_RANK: usize = 26;

/// A generator or its inverse: `+i` is `g_i`, `-i` is `g_i^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        assert!(generator >= 1, "generators are numbered from 1");
        let g = generator as i32;
        Letter(if inverse { -g } else { g })
    }

    pub fn generator(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// Position in the fixed order g_1 < g_1^{-1} < g_2 < g_2^{-1} < ...
    pub fn order_key(self) -> usize {
        2 * (self.generator() - 1) + usize::from(self.is_inverse())
    }

    /// All 2N letters in enumeration order.
    pub fn alphabet(rank: usize) -> Vec<Letter> {
        (1..=rank)
            .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
            .collect()
    }

    fn to_char(self) -> char {
        let c = (b'a' + (self.generator() - 1) as u8) as char;
        if self.is_inverse() {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }
}

/// A reduced word. Construction always reduces, so no value of this type
/// contains an adjacent letter/inverse pair.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g, false)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest generator index used, 0 for the identity.
    pub fn max_generator(&self) -> usize {
        self.0.iter().map(|l| l.generator()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Group product `self * other`, reduced.
    pub fn mul(&self, other: &Word) -> Word {
        let mut cancel = 0;
        while cancel < self.0.len()
            && cancel < other.0.len()
            && self.0[self.0.len() - 1 - cancel] == other.0[cancel].inverse()
        {
            cancel += 1;
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len() - 2 * cancel);
        out.extend_from_slice(&self.0[..self.0.len() - cancel]);
        out.extend_from_slice(&other.0[cancel..]);
        Word(out)
    }

    /// Appends one letter; the result is reduced.
    pub fn push(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        if v.last() == Some(&l.inverse()) {
            v.pop();
        } else {
            v.push(l);
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            if !c.is_ascii_alphabetic() {
                return Err(Error::Parse(format!("invalid letter {c:?} in word {s:?}")));
            }
            let g = (c.to_ascii_lowercase() as u8 - b'a') as usize + 1;
            letters.push(Letter::new(g, c.is_ascii_uppercase()));
        }
        Ok(Word::from_letters(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
