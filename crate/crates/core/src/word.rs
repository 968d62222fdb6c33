//! Bit-packed words over the alphabet `{e0, e1}`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{MzvError, Result};
use crate::index::Index;

/// A monomial in `e0`, `e1` of length at most 64.
///
/// Letters are packed most-significant-first: the first letter sits at bit
/// `len - 1`, a set bit is `e1`. The empty word is the monomial `1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Word {
    bits: u64,
    len: u8,
}

pub const MAX_LEN: usize = 64;

impl Word {
    pub const ONE: Word = Word { bits: 0, len: 0 };
    pub const E0: Word = Word { bits: 0, len: 1 };
    pub const E1: Word = Word { bits: 1, len: 1 };

    /// Builds a word from raw bits; the top `64 - len` bits must be clear.
    pub fn from_bits(bits: u64, len: usize) -> Word {
        debug_assert!(len <= MAX_LEN);
        debug_assert!(len == 64 || bits >> len == 0);
        Word { bits, len: len as u8 }
    }

    pub fn from_letters(letters: &[u8]) -> Result<Word> {
        if letters.len() > MAX_LEN {
            return Err(MzvError::WordTooLong(letters.len()));
        }
        let mut bits = 0u64;
        for &l in letters {
            bits = (bits << 1) | u64::from(l & 1);
        }
        Ok(Word::from_bits(bits, letters.len()))
    }

    /// `e_{k_1} ... e_{k_r}` with `e_k = e1 e0^{k-1}`.
    pub fn from_index(k: &Index) -> Word {
        let mut w = Word::ONE;
        for &p in k.parts() {
            w = w.push(1);
            for _ in 1..p {
                w = w.push(0);
            }
        }
        w
    }

    /// `e_k` as a word.
    pub fn e(k: u32) -> Word {
        Word::from_bits(1u64 << (k - 1), k as usize)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter at position `i` (0 = first).
    pub fn letter(self, i: usize) -> u8 {
        debug_assert!(i < self.len());
        ((self.bits >> (self.len() - 1 - i)) & 1) as u8
    }

    pub fn letters(self) -> impl Iterator<Item = u8> {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn first(self) -> Option<u8> {
        (!self.is_empty()).then(|| self.letter(0))
    }

    pub fn last(self) -> Option<u8> {
        (!self.is_empty()).then_some((self.bits & 1) as u8)
    }

    /// Number of `e1` letters; equals the depth for words in `H^1`.
    pub fn count_e1(self) -> u32 {
        self.bits.count_ones()
    }

    /// Appends one letter.
    pub fn push(self, letter: u8) -> Word {
        assert!(self.len() < MAX_LEN, "word exceeds {MAX_LEN} letters");
        Word::from_bits((self.bits << 1) | u64::from(letter & 1), self.len() + 1)
    }

    /// Prepends one letter.
    pub fn prepend(self, letter: u8) -> Word {
        assert!(self.len() < MAX_LEN, "word exceeds {MAX_LEN} letters");
        Word::from_bits(self.bits | (u64::from(letter & 1) << self.len), self.len() + 1)
    }

    pub fn concat(self, other: Word) -> Word {
        let len = self.len() + other.len();
        assert!(len <= MAX_LEN, "word exceeds {MAX_LEN} letters");
        let hi = if other.len() == 64 { 0 } else { self.bits << other.len };
        Word::from_bits(hi | other.bits, len)
    }

    /// First `n` letters.
    pub fn prefix(self, n: usize) -> Word {
        debug_assert!(n <= self.len());
        let drop = self.len() - n;
        Word::from_bits(if drop == 64 { 0 } else { self.bits >> drop }, n)
    }

    /// Letters from position `n` on.
    pub fn suffix(self, n: usize) -> Word {
        debug_assert!(n <= self.len());
        let keep = self.len() - n;
        let mask = if keep == 64 { u64::MAX } else { (1u64 << keep) - 1 };
        Word::from_bits(self.bits & mask, keep)
    }

    /// Splits off the first letter.
    pub fn split_first(self) -> Option<(u8, Word)> {
        (!self.is_empty()).then(|| (self.letter(0), self.suffix(1)))
    }

    pub fn reversed(self) -> Word {
        let n = self.len();
        if n == 0 {
            return self;
        }
        Word::from_bits(self.bits.reverse_bits() >> (64 - n), n)
    }

    /// Swaps `e0 <-> e1` letterwise.
    pub fn swapped(self) -> Word {
        let n = self.len();
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Word::from_bits(!self.bits & mask, n)
    }

    /// The duality anti-automorphism: reversal composed with the letter swap.
    pub fn dagger(self) -> Word {
        self.reversed().swapped()
    }

    /// `H^1`: empty or starting with `e1`.
    pub fn in_h1(self) -> bool {
        self.first().map_or(true, |a| a == 1)
    }

    /// `H^0`: empty, or starting with `e1` and ending with `e0`.
    pub fn is_admissible(self) -> bool {
        self.is_empty() || (self.first() == Some(1) && self.last() == Some(0))
    }

    /// `e1 H`: non-empty and starting with `e1`.
    pub fn in_e1h(self) -> bool {
        self.first() == Some(1)
    }

    /// Splits a word of `H^1` into its leading block `e_k` and the rest.
    pub fn split_first_block(self) -> Option<(u32, Word)> {
        if !self.in_e1h() {
            return None;
        }
        let rest = self.suffix(1);
        let zeros = if rest.is_empty() {
            0
        } else {
            // leading e0 count of `rest`
            let lead = rest.bits.leading_zeros() as usize - (64 - rest.len());
            lead.min(rest.len())
        };
        Some((1 + zeros as u32, rest.suffix(zeros)))
    }

    /// Splits a word of `e1 H` as `v e_k`.
    pub fn split_last_block(self) -> Option<(Word, u32)> {
        if !self.in_e1h() {
            return None;
        }
        let tz = (self.bits.trailing_zeros() as usize).min(self.len());
        let k = tz as u32 + 1;
        Some((self.prefix(self.len() - tz - 1), k))
    }

    /// Number of trailing `e1` letters.
    pub fn trailing_e1(self) -> usize {
        (self.bits.trailing_ones() as usize).min(self.len())
    }

    pub fn to_index(self) -> Result<Index> {
        if !self.in_h1() {
            return Err(MzvError::NotInH1(self.to_string()));
        }
        let mut parts = Vec::new();
        let mut rest = self;
        while let Some((k, r)) = rest.split_first_block() {
            parts.push(k);
            rest = r;
        }
        Index::new(parts)
    }

    /// Admissible words of weight `w`, in increasing binary order of the
    /// interior `w - 2` letters.
    pub fn admissible_basis(weight: usize) -> Vec<Word> {
        match weight {
            0 => vec![Word::ONE],
            1 => vec![],
            _ => {
                let inner = weight - 2;
                (0..1u64 << inner)
                    .map(|m| Word::from_bits((1u64 << (weight - 1)) | (m << 1), weight))
                    .collect()
            }
        }
    }

    /// Human-readable form, e.g. `e1 e1 e0`; the empty word prints as `1`.
    pub fn to_letters_string(self) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.letters()
            .map(|l| if l == 1 { "e1" } else { "e0" })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Ord for Word {
    /// Lexicographic with `e0 < e1`; a proper prefix sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        let n = self.len().min(other.len());
        match self.prefix(n).bits.cmp(&other.prefix(n).bits) {
            Ordering::Equal => self.len.cmp(&other.len),
            o => o,
        }
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The 0/1 string form, `1` standing for `e1`. The empty word prints as `""`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            f.write_str(if l == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

impl FromStr for Word {
    type Err = MzvError;

    /// Accepts `"110"` or the letter form `"e1 e1 e0"`; empty input is the
    /// empty word.
    fn from_str(s: &str) -> Result<Word> {
        let t = s.trim();
        if t.contains('e') {
            let letters = t
                .split_whitespace()
                .map(|tok| match tok {
                    "e0" => Some(0),
                    "e1" => Some(1),
                    _ => None,
                })
                .collect::<Option<Vec<u8>>>()
                .ok_or_else(|| MzvError::WordSyntax(s.to_string()))?;
            return Word::from_letters(&letters);
        }
        let letters = t
            .chars()
            .map(|c| match c {
                '0' => Some(0),
                '1' => Some(1),
                _ => None,
            })
            .collect::<Option<Vec<u8>>>()
            .ok_or_else(|| MzvError::WordSyntax(s.to_string()))?;
        Word::from_letters(&letters)
    }
}
