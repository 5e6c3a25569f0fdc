//! Words in a finitely generated free group: parsing, cyclic reduction,
//! exponent sums.
//!
//! The textual grammar is `[a-zA-Z]+`: a lowercase letter is a generator,
//! the corresponding uppercase letter is its inverse, so `abAB` is the
//! commutator of the first two generators. Up to 26 generators are
//! representable in text; the in-memory model allows any rank.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// A single generator or inverse generator. Generator indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    generator: u32,
    inverse: bool,
}

impl Letter {
    pub fn new(generator: u32, inverse: bool) -> Self {
        assert!(generator >= 1, "generator indices are 1-based");
        Letter { generator, inverse }
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn is_inverse(&self) -> bool {
        self.inverse
    }

    pub fn inverse(&self) -> Letter {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    fn from_char(ch: char, pos: usize) -> Result<Letter> {
        match ch {
            'a'..='z' => Ok(Letter::new(ch as u32 - 'a' as u32 + 1, false)),
            'A'..='Z' => Ok(Letter::new(ch as u32 - 'A' as u32 + 1, true)),
            _ => Err(Error::IllegalCharacter { ch, pos }),
        }
    }

    /// Textual form; only defined for generators 1..=26.
    pub fn to_char(&self) -> char {
        assert!(self.generator <= 26, "textual alphabet is capped at 26 generators");
        let base = if self.inverse { 'A' } else { 'a' };
        char::from_u32(base as u32 + self.generator - 1).unwrap()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Parse `[a-zA-Z]+` into a raw letter sequence. Case encodes inversion.
pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
    if text.is_empty() {
        return Err(Error::EmptyWord);
    }
    text.chars()
        .enumerate()
        .map(|(pos, ch)| Letter::from_char(ch, pos))
        .collect()
}

/// A cyclically reduced word of length at least 2.
///
/// Immutable once constructed; every consumer downstream relies on the
/// no-adjacent-inverse invariant, including across the wrap position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    letters: Vec<Letter>,
    rank: u32,
}

impl CyclicWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: len >= 2
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Letter at 1-based position `i` (indices wrap: 0 maps to `len`,
    /// `len + 1` maps to 1).
    pub fn letter(&self, i: usize) -> Letter {
        let l = self.len();
        self.letters[(i + l - 1) % l]
    }

    /// The cyclic permutation starting at 1-based position `start + 1`.
    pub fn rotated(&self, start: usize) -> CyclicWord {
        let l = self.len();
        let k = start % l;
        let mut letters = Vec::with_capacity(l);
        letters.extend_from_slice(&self.letters[k..]);
        letters.extend_from_slice(&self.letters[..k]);
        CyclicWord {
            letters,
            rank: self.rank,
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.letters {
            write!(f, "{}", letter)?;
        }
        Ok(())
    }
}

/// Freely reduce, then cancel inverse pairs across the wrap position until
/// the word is cyclically reduced. Returns the word and how many letters
/// were removed.
///
/// Words that reduce to fewer than two letters are rejected: the empty word
/// is the identity and a single letter cannot lie in the commutator
/// subgroup.
pub fn cyclically_reduce(raw: &[Letter]) -> Result<(CyclicWord, usize)> {
    if raw.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut stack: Vec<Letter> = Vec::with_capacity(raw.len());
    for &x in raw {
        if stack.last() == Some(&x.inverse()) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
    // Wrap cancellation: w = x u x^{-1} is conjugate to u.
    let mut lo = 0;
    let mut hi = stack.len();
    while hi - lo >= 2 && stack[lo] == stack[hi - 1].inverse() {
        lo += 1;
        hi -= 1;
    }
    let letters: Vec<Letter> = stack[lo..hi].to_vec();
    let removed = raw.len() - letters.len();
    match letters.len() {
        0 => Err(Error::ReducesToIdentity),
        1 => Err(Error::ReducesToSingleLetter),
        _ => {
            let rank = letters.iter().map(|x| x.generator()).max().unwrap();
            Ok((CyclicWord { letters, rank }, removed))
        }
    }
}

/// Parse and cyclically reduce in one step.
pub fn reduced_word(text: &str) -> Result<(CyclicWord, usize)> {
    cyclically_reduce(&parse_word(text)?)
}

/// Signed occurrence count per generator, for every generator up to the
/// word's rank. The word lies in the commutator subgroup iff all sums
/// vanish.
pub fn exponent_sums(word: &CyclicWord) -> BTreeMap<u32, i64> {
    let mut sums: BTreeMap<u32, i64> = (1..=word.rank()).map(|g| (g, 0)).collect();
    for letter in word.letters() {
        *sums.get_mut(&letter.generator()).unwrap() += if letter.is_inverse() { -1 } else { 1 };
    }
    sums
}

/// True iff every exponent sum is zero.
pub fn in_commutator_subgroup(word: &CyclicWord) -> bool {
    exponent_sums(word).values().all(|&s| s == 0)
}
