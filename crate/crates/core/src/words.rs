//! Symbol sequences over `{L, R}`.
//!
//! A [`Word`] lists one period `S_0 ... S_{n-1}` of a periodic itinerary.
//! Shifts, powers and the `X^k Y` family construction all return new words.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    L,
    R,
}

impl Symbol {
    pub fn flipped(self) -> Self {
        match self {
            Symbol::L => Symbol::R,
            Symbol::R => Symbol::L,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::L => 'L',
            Symbol::R => 'R',
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A nonempty finite word over `{L, R}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(symbols))
    }

    /// Parses a case-insensitive string such as `"RLR"`.
    pub fn parse(text: &str) -> Result<Self> {
        let symbols = text
            .chars()
            .enumerate()
            .map(|(pos, ch)| match ch.to_ascii_uppercase() {
                'L' => Ok(Symbol::L),
                'R' => Ok(Symbol::R),
                _ => Err(Error::InvalidSymbol { ch, pos }),
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    /// Symbol at index `i` of the periodic extension.
    pub fn at(&self, i: usize) -> Symbol {
        self.0[i % self.0.len()]
    }

    /// Number of `L` symbols.
    pub fn count_l(&self) -> usize {
        self.0.iter().filter(|&&s| s == Symbol::L).count()
    }

    /// True unless the word is a power `u^m` of a shorter word `u`.
    pub fn is_primitive(&self) -> bool {
        let n = self.len();
        (1..n)
            .filter(|d| n % d == 0)
            .all(|d| self.shift(d) != *self)
    }

    /// The `i`-th left shift permutation (rotation); `i` is taken mod the length.
    pub fn shift(&self, i: usize) -> Word {
        let mut symbols = self.0.clone();
        symbols.rotate_left(i % self.len());
        Word(symbols)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    pub fn power(&self, k: usize) -> Result<Word> {
        if k == 0 {
            return Err(Error::InvalidPower(k));
        }
        Ok(Word(self.0.repeat(k)))
    }

    /// `X^k Y`.
    pub fn family(x: &Word, y: &Word, k: usize) -> Result<Word> {
        Ok(x.power(k)?.concat(y))
    }

    /// Copy with the first symbol toggled.
    pub fn flip_first(&self) -> Word {
        let mut symbols = self.0.clone();
        symbols[0] = symbols[0].flipped();
        Word(symbols)
    }

    /// Prefix of length `len` (at least one symbol).
    pub fn prefix(&self, len: usize) -> Result<Word> {
        Word::new(self.0[..len.min(self.len())].to_vec())
    }

    /// Indices `i` where `(XY)_i != (YX)_i`.
    pub fn mismatch_indices(x: &Word, y: &Word) -> Vec<usize> {
        let xy = x.concat(y);
        let yx = y.concat(x);
        xy.0.iter()
            .zip(&yx.0)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(i, _)| i)
            .collect()
    }

    /// The second mismatch index, defined only when there are exactly two.
    pub fn alpha(x: &Word, y: &Word) -> Result<usize> {
        match Word::mismatch_indices(x, y).as_slice() {
            [_, alpha] => Ok(*alpha),
            other => Err(Error::MismatchCount(other.len())),
        }
    }

    pub fn is_rotation_of(&self, other: &Word) -> bool {
        self.len() == other.len() && (0..self.len()).any(|i| self.shift(i) == *other)
    }

    /// Lexicographically least rotation (with `L < R`).
    pub fn canonical_rotation(&self) -> Word {
        (0..self.len())
            .map(|i| self.shift(i))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("nonempty word")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Word::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// All primitive words of length `1..=max_len`, one representative per
/// rotation class (Lyndon words), generated with Duval's algorithm.
pub fn lyndon_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(Word(
            w.iter()
                .map(|&b| if b == 0 { Symbol::L } else { Symbol::R })
                .collect(),
        ));
        let m = w.len();
        while w.len() < max_len {
            let next = w[w.len() - m];
            w.push(next);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn parse_accepts_either_case() {
        assert_eq!(w("RLR").symbols(), &[Symbol::R, Symbol::L, Symbol::R]);
        assert_eq!(w("rlr"), w("RLR"));
        assert!(matches!(
            Word::parse("RXR"),
            Err(Error::InvalidSymbol { ch: 'X', pos: 1 })
        ));
        assert!(matches!(Word::parse(""), Err(Error::EmptyWord)));
    }

    #[test]
    fn primitivity() {
        assert!(w("RLR").is_primitive());
        assert!(!w("RLRL").is_primitive());
        assert!(w("L").is_primitive());
        assert!(!w("LLL").is_primitive());
    }

    #[test]
    fn shifts() {
        assert_eq!(w("LLLRR").shift(2), w("LRRLL"));
        assert_eq!(w("RLR").shift(0), w("RLR"));
        assert_eq!(w("RLR").shift(3), w("RLR"));
    }

    #[test]
    fn family_construction() {
        let x = w("RLR");
        assert_eq!(Word::family(&x, &w("LR"), 1).unwrap(), w("RLRLR"));
        let s2 = Word::family(&x, &w("LR"), 2).unwrap();
        assert_eq!(s2, w("RLRRLRLR"));
        assert_eq!(s2.len(), 3 * 2 + 2);
        assert_eq!(Word::family(&x, &w("RR"), 1).unwrap(), w("RLRRR"));
        assert!(matches!(
            Word::family(&x, &w("LR"), 0),
            Err(Error::InvalidPower(0))
        ));
    }

    #[test]
    fn flip_first_toggles_and_is_involution() {
        assert_eq!(w("LR").flip_first(), w("RR"));
        assert_eq!(w("RLR").flip_first(), w("LLR"));
        assert_eq!(w("RLLR").flip_first().flip_first(), w("RLLR"));
    }

    #[test]
    fn mismatches() {
        assert_eq!(Word::mismatch_indices(&w("RLR"), &w("LR")), vec![0, 1]);
        let m = Word::mismatch_indices(&w("RLLR"), &w("LLR"));
        assert!(m.contains(&0) && m.contains(&2));
        assert_eq!(Word::alpha(&w("RLLR"), &w("LLR")).unwrap(), 2);
        assert_eq!(Word::alpha(&w("RLRLR"), &w("LR")).unwrap(), 1);
        assert!(Word::mismatch_indices(&w("RLR"), &w("RLR")).is_empty());
        assert!(matches!(
            Word::alpha(&w("RLR"), &w("RLR")),
            Err(Error::MismatchCount(0))
        ));
    }

    #[test]
    fn lyndon_enumeration_counts() {
        // number of binary Lyndon words of length 1..=6: 2, 1, 2, 3, 6, 9
        let words = lyndon_words(6);
        let mut counts = [0usize; 7];
        for word in &words {
            assert!(word.is_primitive());
            assert_eq!(word.canonical_rotation(), *word);
            counts[word.len()] += 1;
        }
        assert_eq!(&counts[1..], &[2, 1, 2, 3, 6, 9]);
    }

    #[test]
    fn serde_as_uppercase_string() {
        let json = serde_json::to_string(&w("rlr")).unwrap();
        assert_eq!(json, "\"RLR\"");
        let back: Word = serde_json::from_str("\"rLlR\"").unwrap();
        assert_eq!(back, w("RLLR"));
    }
}
