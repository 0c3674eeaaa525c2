//! Reduced words over a free product of infinite cyclic and order-two factors.
//!
//! Letters `2j` and `2j + 1` are a free generator and its inverse. An odd
//! valence adds one self-inverse letter. The Cayley graph of such a group is
//! the regular tree of the same valence, which is how vertices are named.

use std::fmt;

use crate::error::{domain, Result};

pub type Letter = u8;

/// The unique self-inverse letter (present only for odd valence).
pub const INVOLUTION: Letter = 0xFF;

const NAMES: &[u8] = b"abcdfghijklmnopqrtuvwxyz";
pub const MAX_FREE_GENERATORS: usize = NAMES.len();

#[inline]
pub fn inv(l: Letter) -> Letter {
    if l == INVOLUTION {
        l
    } else {
        l ^ 1
    }
}

/// All letters of the alphabet for a tree of the given valence.
pub fn alphabet(valence: u8) -> Vec<Letter> {
    let mut out: Vec<Letter> = (0..(valence / 2) * 2).collect();
    if valence % 2 == 1 {
        out.push(INVOLUTION);
    }
    out
}

pub fn letter_in_alphabet(l: Letter, valence: u8) -> bool {
    if l == INVOLUTION {
        valence % 2 == 1
    } else {
        l < (valence / 2) * 2
    }
}

pub fn letter_char(l: Letter) -> char {
    if l == INVOLUTION {
        's'
    } else {
        let c = NAMES[(l / 2) as usize] as char;
        if l.is_multiple_of(2) {
            c
        } else {
            c.to_ascii_uppercase()
        }
    }
}

fn parse_letter(c: char) -> Option<Letter> {
    if c == 's' {
        return Some(INVOLUTION);
    }
    let lower = c.to_ascii_lowercase() as u8;
    let idx = NAMES.iter().position(|&n| n == lower)? as Letter;
    Some(if c.is_ascii_uppercase() {
        2 * idx + 1
    } else {
        2 * idx
    })
}

/// A freely reduced word. The empty word is the identity `e`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from letters, reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Parses `e`, `ab`, `bA`, ...; uppercase is the inverse generator.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "1" {
            return Ok(Word::identity());
        }
        let mut w = Word::identity();
        for c in s.chars() {
            match parse_letter(c) {
                Some(l) => w.push(l),
                None => return domain(format!("invalid letter {c:?} in word {s:?}")),
            }
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Right multiplication by one letter with free cancellation.
    #[inline]
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&inv(l)) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn pop(&mut self) -> Option<Letter> {
        self.0.pop()
    }

    pub fn truncate(&mut self, n: usize) {
        self.0.truncate(n);
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &Word) {
        for &l in &other.0 {
            self.push(l);
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|&l| inv(l)).collect())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn power(&self, k: usize) -> Word {
        let mut out = Word::identity();
        for _ in 0..k {
            out.mul_assign(self);
        }
        out
    }

    /// Length of the longest common prefix.
    #[inline]
    pub fn lcp(&self, other: &Word) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Splits `w = u c u⁻¹` with `c` cyclically reduced; returns `(u, c)`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let letters = &self.0;
        let n = letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && letters[k] == inv(letters[n - 1 - k]) {
            k += 1;
        }
        (
            Word(letters[..k].to_vec()),
            Word(letters[k..n - k].to_vec()),
        )
    }

    /// Translation length of left multiplication on the Cayley tree.
    pub fn translation_length(&self) -> usize {
        let (_, core) = self.cyclic_reduction();
        if core.len() == 1 && core.0[0] == INVOLUTION {
            0
        } else {
            core.len()
        }
    }

    pub fn in_alphabet(&self, valence: u8) -> bool {
        self.0.iter().all(|&l| letter_in_alphabet(l, valence))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn free_reduction() {
        assert_eq!(w("ab").mul(&w("Ba")), w("aa"));
        assert_eq!(w("abBA"), Word::identity());
        assert_eq!(w("ss"), Word::identity());
        assert_eq!(w("ab").inverse().to_string(), "BA");
    }

    #[test]
    fn cyclic_reduction_and_translation() {
        assert_eq!(w("ab").translation_length(), 2);
        assert_eq!(w("bab").mul(&w("B")).to_string(), "ba");
        let conj = w("c").mul(&w("ab")).mul(&w("C"));
        assert_eq!(conj.translation_length(), 2);
        assert_eq!(w("s").translation_length(), 0);
        assert_eq!(w("asA").translation_length(), 0);
        assert_eq!(w("as").translation_length(), 2);
        assert_eq!(Word::identity().translation_length(), 0);
    }

    #[test]
    fn rejects_unknown_letters() {
        assert!(Word::parse("a?").is_err());
    }

    #[test]
    fn alphabet_sizes() {
        assert_eq!(alphabet(4).len(), 4);
        assert_eq!(alphabet(3), vec![0, 1, INVOLUTION]);
        assert!(w("ab").in_alphabet(4));
        assert!(!w("c").in_alphabet(4));
    }
}
