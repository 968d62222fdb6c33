//! Indices `(k_1, ..., k_r)` of positive integers and the index-level
//! operations used throughout the crate.

use std::fmt;
use std::str::FromStr;

use crate::error::{MzvError, Result};
use crate::word::Word;

/// A finite sequence of positive integers. The empty index has weight and
/// depth zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Index(Vec<u32>);

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(MzvError::IndexSyntax(format!("{parts:?}")));
        }
        Ok(Index(parts))
    }

    pub fn empty() -> Self {
        Index(Vec::new())
    }

    /// `(1, ..., 1)` with `n` ones.
    pub fn ones(n: usize) -> Self {
        Index(vec![1; n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// True for the empty index or when the last part is at least 2.
    pub fn is_admissible(&self) -> bool {
        self.0.last().is_none_or(|&k| k >= 2)
    }

    pub fn to_word(&self) -> Word {
        Word::from_index(self)
    }

    pub fn from_word(w: Word) -> Result<Self> {
        w.to_index()
    }

    pub fn reverse(&self) -> Index {
        Index(self.0.iter().rev().copied().collect())
    }

    /// `k_i = (k_1, ..., k_i)`.
    pub fn prefix(&self, i: usize) -> Result<Index> {
        if i > self.depth() {
            return Err(MzvError::OutOfRange { pos: i, depth: self.depth() });
        }
        Ok(Index(self.0[..i].to_vec()))
    }

    /// `k^i = (k_{i+1}, ..., k_r)`.
    pub fn suffix(&self, i: usize) -> Result<Index> {
        if i > self.depth() {
            return Err(MzvError::OutOfRange { pos: i, depth: self.depth() });
        }
        Ok(Index(self.0[i..].to_vec()))
    }

    /// `(k_1, ..., k_{r-1}, k_r + l_1, l_2, ..., l_s)`.
    pub fn odot(&self, other: &Index) -> Result<Index> {
        if self.is_empty() || other.is_empty() {
            return Err(MzvError::EmptyIndex);
        }
        let mut parts = self.0.clone();
        *parts.last_mut().unwrap() += other.0[0];
        parts.extend_from_slice(&other.0[1..]);
        Ok(Index(parts))
    }

    pub fn concat(&self, other: &Index) -> Index {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        Index(parts)
    }

    /// Partial sums `k_1, k_1+k_2, ..., k_1+...+k_{r-1}`.
    pub fn partial_sums(&self) -> Vec<u32> {
        let mut acc = 0;
        let mut out = Vec::with_capacity(self.depth().saturating_sub(1));
        for &k in &self.0[..self.depth().saturating_sub(1)] {
            acc += k;
            out.push(acc);
        }
        out
    }

    /// Rebuilds an index of weight `weight` from its partial-sum set.
    fn from_partial_sums(weight: u32, sums: &[u32]) -> Index {
        let mut parts = Vec::with_capacity(sums.len() + 1);
        let mut prev = 0;
        for &s in sums {
            parts.push(s - prev);
            prev = s;
        }
        parts.push(weight - prev);
        Index(parts)
    }

    /// Hoffman dual: same weight, complementary partial-sum set in
    /// `{1, ..., weight-1}`.
    pub fn hoffman_dual(&self) -> Result<Index> {
        if self.is_empty() {
            return Err(MzvError::EmptyIndex);
        }
        let w = self.weight();
        let sums = self.partial_sums();
        let comp: Vec<u32> = (1..w).filter(|s| sums.binary_search(s).is_err()).collect();
        Ok(Index::from_partial_sums(w, &comp))
    }

    /// All `2^{r-1}` indices `(k_1 ◯ ... ◯ k_r)` with each `◯` a comma or a
    /// plus, in the order of the bitmask of plus signs.
    pub fn star_terms(&self) -> Vec<Index> {
        if self.is_empty() {
            return vec![Index::empty()];
        }
        let r = self.depth();
        let mut out = Vec::with_capacity(1 << (r - 1));
        for mask in 0u64..(1u64 << (r - 1)) {
            let mut parts = vec![self.0[0]];
            for (j, &k) in self.0[1..].iter().enumerate() {
                if mask >> j & 1 == 1 {
                    *parts.last_mut().unwrap() += k;
                } else {
                    parts.push(k);
                }
            }
            out.push(Index(parts));
        }
        out
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

impl FromStr for Index {
    type Err = MzvError;

    /// Parses `"1,2,3"`; the empty string (or `"∅"`) is the empty index.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
        if t.is_empty() || t == "∅" {
            return Ok(Index::empty());
        }
        let parts = t
            .split(',')
            .map(|p| p.trim().parse::<u32>().ok().filter(|&k| k >= 1))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| MzvError::IndexSyntax(s.to_string()))?;
        Ok(Index(parts))
    }
}

/// All compositions of `n` (indices of weight `n`) in lexicographic order.
/// `compositions(0)` is `[∅]`.
pub fn compositions(n: u32) -> Vec<Index> {
    fn rec(rest: u32, cur: &mut Vec<u32>, out: &mut Vec<Index>) {
        if rest == 0 {
            out.push(Index(cur.clone()));
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::new(), &mut out);
    out
}

/// Compositions of `n` into exactly `parts` positive parts, lexicographic.
pub fn compositions_with_depth(n: u32, parts: usize) -> Vec<Index> {
    compositions(n).into_iter().filter(|k| k.depth() == parts).collect()
}

/// All non-empty indices of weight at most `max_weight`.
pub fn indices_up_to(max_weight: u32) -> Vec<Index> {
    (1..=max_weight).flat_map(compositions).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn admissibility() {
        assert!(ix("1,2").is_admissible());
        assert!(Index::empty().is_admissible());
        assert!(!ix("2,1").is_admissible());
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(ix("1, 2,3").to_string(), "1,2,3");
        assert_eq!(ix("").depth(), 0);
        assert_eq!(ix("(2,1)"), ix("2,1"));
        assert!("1,0".parse::<Index>().is_err());
        assert!("a".parse::<Index>().is_err());
        assert!("1,,2".parse::<Index>().is_err());
    }

    #[test]
    fn star_terms_examples() {
        assert_eq!(ix("2,1").star_terms(), vec![ix("2,1"), ix("3")]);
        assert_eq!(ix("2").star_terms(), vec![ix("2")]);
        let mut t = ix("1,1,1").star_terms();
        t.sort();
        let mut want = vec![ix("1,1,1"), ix("2,1"), ix("1,2"), ix("3")];
        want.sort();
        assert_eq!(t, want);
    }

    #[test]
    fn hoffman_dual_examples() {
        assert_eq!(ix("1").hoffman_dual().unwrap(), ix("1"));
        assert_eq!(ix("2").hoffman_dual().unwrap(), ix("1,1"));
        assert_eq!(ix("1,2").hoffman_dual().unwrap(), ix("2,1"));
        assert!(Index::empty().hoffman_dual().is_err());
    }

    #[test]
    fn positional_ops() {
        assert_eq!(ix("1,1").odot(&ix("2,1")).unwrap(), ix("1,3,1"));
        assert_eq!(ix("1,2,3").prefix(0).unwrap(), Index::empty());
        assert_eq!(ix("1,2,3").suffix(3).unwrap(), Index::empty());
        assert_eq!(ix("1,2,3").prefix(2).unwrap(), ix("1,2"));
        assert_eq!(ix("1,2,3").suffix(1).unwrap(), ix("2,3"));
        assert_eq!(ix("2,1").reverse(), ix("1,2"));
        assert!(ix("1").odot(&Index::empty()).is_err());
        assert!(ix("1").prefix(2).is_err());
    }

    #[test]
    fn composition_counts() {
        for n in 1..=10 {
            assert_eq!(compositions(n).len(), 1 << (n - 1));
        }
        assert_eq!(compositions(0), vec![Index::empty()]);
        assert_eq!(compositions_with_depth(5, 2).len(), 4);
    }

    #[test]
    fn index_invariants_exhaustive() {
        for k in indices_up_to(10) {
            let d = k.hoffman_dual().unwrap();
            assert_eq!(d.weight(), k.weight());
            assert_eq!(d.hoffman_dual().unwrap(), k);
            assert_eq!(Index::from_word(k.to_word()).unwrap(), k);
            let st = k.star_terms();
            assert_eq!(st.len(), 1 << (k.depth() - 1));
            assert!(st.iter().all(|t| t.weight() == k.weight()));
        }
    }

    #[test]
    fn odot_weight_and_depth() {
        for k in indices_up_to(5) {
            for l in indices_up_to(4) {
                let m = k.odot(&l).unwrap();
                assert_eq!(m.weight(), k.weight() + l.weight());
                assert_eq!(m.depth(), k.depth() + l.depth() - 1);
            }
        }
    }
}
