//! 2-labeled posets, the diagram builders, transpose, and the `W` map into
//! the shuffle algebra.

use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;

use crate::error::{MzvError, Result};
use crate::index::Index;
use crate::lincomb::{LinComb, Q};
use crate::word::Word;

/// A finite poset on elements `0..n` with a `{0,1}` label per element.
///
/// The strict order is stored transitively closed: bit `b` of `above[a]` is
/// set iff `a < b`. A set label bit means label 1 (drawn as `•`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset2 {
    above: Vec<u64>,
    labels: u64,
}

const MAX_ELEMENTS: usize = 64;

impl Poset2 {
    pub fn empty() -> Self {
        Poset2 { above: Vec::new(), labels: 0 }
    }

    /// Builds a 2-poset from labels and generating relations `a < b`.
    pub fn new(labels: &[u8], relations: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_ELEMENTS {
            return Err(MzvError::PosetTooLarge(n));
        }
        let mut bits = 0u64;
        for (i, &l) in labels.iter().enumerate() {
            if l > 1 {
                return Err(MzvError::InvalidArgument(format!("label {l} is not 0 or 1")));
            }
            bits |= u64::from(l) << i;
        }
        let mut p = Poset2 { above: vec![0; n], labels: bits };
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(MzvError::InvalidArgument(format!("relation ({a}<{b}) out of range")));
            }
            if a == b || p.less(b, a) {
                return Err(MzvError::InvalidArgument(format!("relation ({a}<{b}) creates a cycle")));
            }
            p.add_relation_in_place(a, b);
        }
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.above.len()
    }

    pub fn is_empty(&self) -> bool {
        self.above.is_empty()
    }

    pub fn label(&self, x: usize) -> u8 {
        ((self.labels >> x) & 1) as u8
    }

    pub fn labels(&self) -> Vec<u8> {
        (0..self.len()).map(|x| self.label(x)).collect()
    }

    /// `a < b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.above[a] >> b & 1 == 1
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    fn below_mask(&self, x: usize) -> u64 {
        (0..self.len()).filter(|&y| self.less(y, x)).fold(0, |m, y| m | 1 << y)
    }

    fn add_relation_in_place(&mut self, a: usize, b: usize) {
        let up = self.above[b] | (1 << b);
        for x in 0..self.len() {
            if x == a || self.less(x, a) {
                self.above[x] |= up;
            }
        }
    }

    /// The poset with the relation `a < b` adjoined (and closed).
    pub fn with_relation(&self, a: usize, b: usize) -> Poset2 {
        debug_assert!(!self.comparable(a, b));
        let mut p = self.clone();
        p.add_relation_in_place(a, b);
        p
    }

    /// Incomparable pairs `(a, b)` with `a < b` as integers, lexicographic.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.comparable(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_total(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (a + 1..n).all(|b| self.comparable(a, b)))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.below_mask(x) == 0).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.above[x] == 0).collect()
    }

    /// Maxima labelled 0 and minima labelled 1.
    pub fn is_admissible(&self) -> bool {
        self.maximal_elements().iter().all(|&x| self.label(x) == 0)
            && self.minimal_elements().iter().all(|&x| self.label(x) == 1)
    }

    /// Reversed order, complemented labels.
    pub fn transpose(&self) -> Poset2 {
        let n = self.len();
        let mut above = vec![0u64; n];
        for a in 0..n {
            for b in 0..n {
                if self.less(a, b) {
                    above[b] |= 1 << a;
                }
            }
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Poset2 { above, labels: !self.labels & mask }
    }

    /// Disjoint union; elements of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Poset2) -> Result<Poset2> {
        let n = self.len();
        if n + other.len() > MAX_ELEMENTS {
            return Err(MzvError::PosetTooLarge(n + other.len()));
        }
        let mut above = self.above.clone();
        above.extend(other.above.iter().map(|m| m << n));
        Ok(Poset2 { above, labels: self.labels | (other.labels << n) })
    }

    /// Cover pairs `(a, b)`: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less(a, b) && !(0..n).any(|c| self.less(a, c) && self.less(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Label word of a totally ordered 2-poset.
    fn total_word(&self) -> Word {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| n - self.above[x].count_ones() as usize);
        let letters: Vec<u8> = order.iter().map(|&x| self.label(x)).collect();
        Word::from_letters(&letters).expect("at most 64 elements")
    }

    /// `W(X)`: the label word when `X` is totally ordered, otherwise
    /// `W(X + a<b) + W(X + b<a)` for the lexicographically first
    /// incomparable pair. Memoized on the exact representation.
    pub fn w_map(&self) -> LinComb {
        let mut memo = HashMap::new();
        self.w_resolve_memo(&mut memo)
    }

    fn w_resolve_memo(&self, memo: &mut HashMap<Poset2, LinComb>) -> LinComb {
        if let Some(hit) = memo.get(self) {
            return hit.clone();
        }
        let out = match self.first_incomparable() {
            None => LinComb::word(self.total_word()),
            Some((a, b)) => {
                let mut acc = self.with_relation(a, b).w_resolve_memo(memo);
                acc += &self.with_relation(b, a).w_resolve_memo(memo);
                acc
            }
        };
        memo.insert(self.clone(), out.clone());
        out
    }

    fn first_incomparable(&self) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n).find_map(|a| (a + 1..n).find(|&b| !self.comparable(a, b)).map(|b| (a, b)))
    }

    /// `W(X)` resolving incomparable pairs in the order chosen by `pick`,
    /// which receives the current incomparable pairs and returns one of them.
    /// Not memoized.
    pub fn w_map_with(&self, pick: &mut dyn FnMut(&[(usize, usize)]) -> usize) -> LinComb {
        let pairs = self.incomparable_pairs();
        if pairs.is_empty() {
            return LinComb::word(self.total_word());
        }
        let (a, b) = pairs[pick(&pairs) % pairs.len()];
        let mut acc = self.with_relation(a, b).w_map_with(pick);
        acc += &self.with_relation(b, a).w_map_with(pick);
        acc
    }

    /// `W(X)` as a sum over linear extensions, by dynamic programming over
    /// order filters: peel a minimal element, prepend its label.
    pub fn w_fast(&self) -> Result<LinComb> {
        let counts = self.extension_words()?;
        let mut out = LinComb::zero();
        for (w, c) in counts.iter() {
            out.add_term(*w, Q::from_integer(BigInt::from(*c)));
        }
        Ok(out)
    }

    fn extension_words(&self) -> Result<Rc<HashMap<Word, u128>>> {
        let n = self.len();
        let below: Vec<u64> = (0..n).map(|x| self.below_mask(x)).collect();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut memo: HashMap<u64, Rc<HashMap<Word, u128>>> = HashMap::new();
        self.filter_words(full, &below, &mut memo)
    }

    fn filter_words(
        &self,
        rest: u64,
        below: &[u64],
        memo: &mut HashMap<u64, Rc<HashMap<Word, u128>>>,
    ) -> Result<Rc<HashMap<Word, u128>>> {
        if rest == 0 {
            return Ok(Rc::new(HashMap::from([(Word::ONE, 1u128)])));
        }
        if let Some(hit) = memo.get(&rest) {
            return Ok(hit.clone());
        }
        let mut acc: HashMap<Word, u128> = HashMap::new();
        let mut bits = rest;
        while bits != 0 {
            let x = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if below[x] & rest != 0 {
                continue;
            }
            let sub = self.filter_words(rest & !(1 << x), below, memo)?;
            let letter = self.label(x);
            for (w, c) in sub.iter() {
                let e = acc.entry(w.prepend(letter)).or_insert(0);
                *e = e.checked_add(*c).ok_or(MzvError::CountOverflow)?;
            }
        }
        let acc = Rc::new(acc);
        memo.insert(rest, acc.clone());
        Ok(acc)
    }

    /// Number of linear extensions, by the same filter recursion.
    pub fn linear_extension_count(&self) -> Result<u128> {
        Ok(self.extension_words()?.values().sum())
    }

    /// Parses the debug format `labels=1,1,0; covers=(0<1),(1<2)`.
    pub fn parse_debug(s: &str) -> Result<Poset2> {
        let bad = || MzvError::Parse(format!("bad poset {s:?}"));
        let (lab, cov) = s.split_once(';').ok_or_else(bad)?;
        let lab = lab.trim().strip_prefix("labels=").ok_or_else(bad)?;
        let labels: Vec<u8> = if lab.trim().is_empty() {
            Vec::new()
        } else {
            lab.split(',').map(|t| t.trim().parse::<u8>().map_err(|_| bad())).collect::<Result<_>>()?
        };
        let cov = cov.trim().strip_prefix("covers=").ok_or_else(bad)?;
        let mut rels = Vec::new();
        for part in cov.split("),").map(str::trim).filter(|p| !p.is_empty()) {
            let inner = part.trim_start_matches('(').trim_end_matches(')');
            let (a, b) = inner.split_once('<').ok_or_else(bad)?;
            rels.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
        }
        Poset2::new(&labels, &rels)
    }
}

/// `labels=1,1,0,1,0; covers=(0<1),(1<2),(3<2),(3<4)`
impl fmt::Display for Poset2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(|l| l.to_string()).collect();
        let covers: Vec<String> = self.covers().iter().map(|(a, b)| format!("({a}<{b})")).collect();
        write!(f, "labels={}; covers={}", labels.join(","), covers.join(","))
    }
}

impl fmt::Debug for Poset2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset2({self})")
    }
}

/// Totally ordered 2-poset whose label word is the word of `k`.
pub fn build_chain(k: &Index) -> Result<Poset2> {
    let weight = k.weight() as usize;
    if weight > MAX_ELEMENTS {
        return Err(MzvError::PosetTooLarge(weight));
    }
    let w = k.to_word();
    let labels: Vec<u8> = w.letters().collect();
    let rels: Vec<(usize, usize)> = (1..labels.len()).map(|i| (i - 1, i)).collect();
    Poset2::new(&labels, &rels)
}

/// The fence for `l = (l_1, ..., l_s)`: blocks for `l_s, ..., l_1` from left
/// to right, each a minimal vertex followed by an ascending chain of
/// `l_i - 1` vertices labelled 0. The top of each block lies above the
/// minimal vertex of the next. The leftmost minimum carries `base_label`,
/// the others carry 1. The base vertex is element 0.
pub fn build_zigzag(l: &Index, base_label: u8) -> Result<Poset2> {
    let weight = l.weight() as usize;
    if weight > MAX_ELEMENTS {
        return Err(MzvError::PosetTooLarge(weight));
    }
    let mut labels = Vec::with_capacity(weight);
    let mut rels = Vec::new();
    let mut prev_top: Option<usize> = None;
    for (j, &li) in l.parts().iter().rev().enumerate() {
        let min = labels.len();
        labels.push(if j == 0 { base_label } else { 1 });
        if let Some(t) = prev_top {
            rels.push((min, t));
        }
        for _ in 1..li {
            let x = labels.len();
            labels.push(0);
            rels.push((x - 1, x));
        }
        prev_top = Some(labels.len() - 1);
    }
    Poset2::new(&labels, &rels)
}

/// The chain of `k` with its maximum placed below the base vertex (labelled
/// 0) of the fence of `l`.
pub fn build_mu_poset(k: &Index, l: &Index) -> Result<Poset2> {
    if k.is_empty() || l.is_empty() {
        return Err(MzvError::EmptyIndex);
    }
    let chain = build_chain(k)?;
    let fence = build_zigzag(l, 0)?;
    let top = chain.len() - 1;
    let base = chain.len();
    let mut p = chain.disjoint_union(&fence)?;
    p.add_relation_in_place(top, base);
    Ok(p)
}

/// Attaches a chain of `m` vertices labelled 0 above `base` as a further
/// upward branch. The new vertices come first in element order, topmost
/// first; the body is shifted by `m`.
pub fn build_graft(m: usize, body: &Poset2, base: usize) -> Result<Poset2> {
    if m == 0 {
        return Ok(body.clone());
    }
    if base >= body.len() {
        return Err(MzvError::InvalidArgument(format!("base {base} outside a {}-element body", body.len())));
    }
    let branch = Poset2::new(&vec![0; m], &(1..m).map(|i| (i, i - 1)).collect::<Vec<_>>())?;
    let mut p = branch.disjoint_union(body)?;
    p.add_relation_in_place(base + m, m - 1);
    Ok(p)
}

/// `μ(k, l)`: W of `chain(k)` placed below the base of `fence(l)`.
pub fn mu(k: &Index, l: &Index) -> Result<LinComb> {
    build_mu_poset(k, l)?.w_fast()
}

/// The `A_m(k)` poset: `m` vertices labelled 0 grafted on the base of the
/// fence of `k` with base label 1.
pub fn a_poset(m: usize, k: &Index) -> Result<Poset2> {
    build_graft(m, &build_zigzag(k, 1)?, 0)
}

/// The `B_m(k)` poset: `m` vertices labelled 0 grafted on the minimum of the
/// chain of `k`. `k` must be non-empty.
pub fn b_poset(m: usize, k: &Index) -> Result<Poset2> {
    if k.is_empty() {
        return Err(MzvError::EmptyIndex);
    }
    build_graft(m, &build_chain(k)?, 0)
}
