//! Finite rational linear combinations of words, i.e. elements of `H`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{MzvError, Result};
use crate::index::Index;
use crate::word::Word;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| MzvError::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| MzvError::Parse(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(MzvError::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

/// A finite `Q`-linear combination of words. Zero coefficients are never
/// stored, and iteration is in lexicographic word order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LinComb {
    terms: BTreeMap<Word, Q>,
}

impl LinComb {
    pub fn zero() -> Self {
        LinComb::default()
    }

    pub fn one() -> Self {
        LinComb::word(Word::ONE)
    }

    pub fn word(w: Word) -> Self {
        LinComb::term(w, Q::one())
    }

    pub fn term(w: Word, c: Q) -> Self {
        let mut lc = LinComb::zero();
        lc.add_term(w, c);
        lc
    }

    pub fn index(k: &Index) -> Self {
        LinComb::word(k.to_word())
    }

    /// Sum of indices with unit coefficients.
    pub fn from_indices<'a>(ks: impl IntoIterator<Item = &'a Index>) -> Self {
        let mut lc = LinComb::zero();
        for k in ks {
            lc.add_term(k.to_word(), Q::one());
        }
        lc
    }

    pub fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LinComb, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(*w, d * c);
        }
    }

    pub fn scale(&self, c: &Q) -> LinComb {
        if c.is_zero() {
            return LinComb::zero();
        }
        LinComb { terms: self.terms.iter().map(|(w, d)| (*w, d * c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: Word) -> Q {
        self.terms.get(&w).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = Word> + '_ {
        self.terms.keys().copied()
    }

    /// Applies a linear map given on words.
    pub fn map_linear(&self, mut f: impl FnMut(Word) -> LinComb) -> LinComb {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_scaled(&f(*w), c);
        }
        out
    }

    /// Applies a word-to-word map termwise.
    pub fn map_words(&self, mut f: impl FnMut(Word) -> Word) -> LinComb {
        let mut out = LinComb::zero();
        for (w, c) in &self.terms {
            out.add_term(f(*w), c.clone());
        }
        out
    }

    /// Weight `w` if every word has length `w`; `Some(0)` for zero.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else { return Some(0) };
        let n = first.len();
        it.all(|w| w.len() == n).then_some(n)
    }

    pub fn all_in_h1(&self) -> bool {
        self.terms.keys().all(|w| w.in_h1())
    }

    pub fn all_admissible(&self) -> bool {
        self.terms.keys().all(|w| w.is_admissible())
    }

    pub fn all_in_e1h(&self) -> bool {
        self.terms.keys().all(|w| w.in_e1h())
    }

    /// Sum of all coefficients.
    pub fn coeff_sum(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, c| a + c)
    }

    pub fn require_h1(&self) -> Result<()> {
        match self.terms.keys().find(|w| !w.in_h1()) {
            Some(w) => Err(MzvError::NotInH1(w.to_string())),
            None => Ok(()),
        }
    }

    pub fn require_admissible(&self) -> Result<()> {
        match self.terms.keys().find(|w| !w.is_admissible()) {
            Some(w) => Err(MzvError::NotAdmissible(w.to_string())),
            None => Ok(()),
        }
    }

    /// Linear dagger (reverse and swap letters).
    pub fn dagger(&self) -> LinComb {
        self.map_words(Word::dagger)
    }

    /// Index-style rendering, e.g. `6·(1,1,3) + 2·(1,2,2)`; requires `H^1`.
    pub fn to_index_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let label = match w.to_index() {
                Ok(k) if k.is_empty() => "1".to_string(),
                Ok(k) => format!("({k})"),
                Err(_) => format!("[{}]", w.to_letters_string()),
            };
            push_signed_term(&mut out, i == 0, c, &label);
        }
        out
    }

    pub fn to_json_value(&self) -> LinCombJson {
        LinCombJson {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| TermJson { word: w.to_string(), coeff: c.to_string() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(v: &LinCombJson) -> Result<LinComb> {
        let mut lc = LinComb::zero();
        for t in &v.terms {
            lc.add_term(t.word.parse()?, parse_q(&t.coeff)?);
        }
        Ok(lc)
    }

    pub fn from_json(s: &str) -> Result<LinComb> {
        let v: LinCombJson = serde_json::from_str(s).map_err(|e| MzvError::Parse(e.to_string()))?;
        LinComb::from_json_value(&v)
    }

    /// Parses the text form produced by `Display`, e.g. `3/2·e1 e1 e0 - e1 e0`.
    pub fn parse_text(s: &str) -> Result<LinComb> {
        let mut lc = LinComb::zero();
        let t = s.trim();
        if t == "0" || t.is_empty() {
            return Ok(lc);
        }
        let normalized = t.replace(" - ", " + -").replace(" + ", "\u{1}");
        for raw in normalized.split('\u{1}') {
            let raw = raw.trim();
            let (neg, body) = match raw.strip_prefix('-') {
                Some(b) => (true, b.trim()),
                None => (false, raw),
            };
            let (c, wtxt) = match body.split_once('·') {
                Some((c, w)) => (parse_q(c)?, w),
                None => (Q::one(), body),
            };
            let w: Word = if wtxt.trim() == "1" { Word::ONE } else { wtxt.parse()? };
            lc.add_term(w, if neg { -c } else { c });
        }
        Ok(lc)
    }
}

fn push_signed_term(out: &mut String, first: bool, c: &Q, label: &str) {
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if !a.is_one() {
        out.push_str(&a.to_string());
        out.push('·');
    }
    out.push_str(label);
}

/// `3/2·e1 e1 e0 + e1 e0`; zero prints as `0`.
impl fmt::Display for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            push_signed_term(&mut out, i == 0, c, &w.to_letters_string());
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for LinComb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinComb({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinCombJson {
    pub terms: Vec<TermJson>,
}

impl From<Word> for LinComb {
    fn from(w: Word) -> Self {
        LinComb::word(w)
    }
}

impl From<&Index> for LinComb {
    fn from(k: &Index) -> Self {
        LinComb::index(k)
    }
}

impl AddAssign<&LinComb> for LinComb {
    fn add_assign(&mut self, rhs: &LinComb) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, c.clone());
        }
    }
}

impl SubAssign<&LinComb> for LinComb {
    fn sub_assign(&mut self, rhs: &LinComb) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, -c.clone());
        }
    }
}

impl Add<&LinComb> for &LinComb {
    type Output = LinComb;
    fn add(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&LinComb> for &LinComb {
    type Output = LinComb;
    fn sub(self, rhs: &LinComb) -> LinComb {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for LinComb {
    type Output = LinComb;
    fn add(mut self, rhs: LinComb) -> LinComb {
        self += &rhs;
        self
    }
}

impl Sub for LinComb {
    type Output = LinComb;
    fn sub(mut self, rhs: LinComb) -> LinComb {
        self -= &rhs;
        self
    }
}

impl Neg for &LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        LinComb { terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect() }
    }
}

impl Neg for LinComb {
    type Output = LinComb;
    fn neg(self) -> LinComb {
        -&self
    }
}

impl FromIterator<(Word, Q)> for LinComb {
    fn from_iter<I: IntoIterator<Item = (Word, Q)>>(iter: I) -> Self {
        let mut lc = LinComb::zero();
        for (w, c) in iter {
            lc.add_term(w, c);
        }
        lc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn zero_terms_are_dropped() {
        let mut a = LinComb::word(w("10"));
        a.add_term(w("10"), q(-1));
        assert!(a.is_zero());
        assert_eq!(a.len(), 0);
        assert_eq!(a.to_string(), "0");
    }

    #[test]
    fn text_round_trip() {
        let mut a = LinComb::zero();
        a.add_term(w("110"), q_frac(3, 2));
        a.add_term(w("100"), q(-1));
        a.add_term(Word::ONE, q(2));
        let s = a.to_string();
        assert_eq!(s, "2·1 - e1 e0 e0 + 3/2·e1 e1 e0");
        assert_eq!(LinComb::parse_text(&s).unwrap(), a);
    }

    #[test]
    fn json_round_trip() {
        let mut a = LinComb::zero();
        a.add_term(w("110"), q_frac(3, 2));
        a.add_term(w("1010"), q(-7));
        let s = a.to_json();
        assert_eq!(s, r#"{"terms":[{"word":"1010","coeff":"-7"},{"word":"110","coeff":"3/2"}]}"#);
        assert_eq!(LinComb::from_json(&s).unwrap(), a);
        assert!(LinComb::from_json(r#"{"terms":[{"word":"12","coeff":"1"}]}"#).is_err());
    }

    #[test]
    fn index_rendering() {
        let mut a = LinComb::zero();
        a.add_term(w("11100"), q(6));
        a.add_term(w("11010"), q(2));
        assert_eq!(a.to_index_string(), "2·(1,2,2) + 6·(1,1,3)");
    }

    #[test]
    fn homogeneity() {
        let mut a = LinComb::word(w("110"));
        assert_eq!(a.homogeneous_weight(), Some(3));
        a.add_term(w("10"), q(1));
        assert_eq!(a.homogeneous_weight(), None);
    }
}
