//! Integral-series relations and the families derived from them: the four
//! alternating identities, Kawashima's relation and its supporting
//! identities, the restricted sum formula, Hoffman's relation, duality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MzvError, Result};
use crate::index::{compositions, compositions_with_depth, Index};
use crate::lincomb::{LinComb, LinCombJson, Q};
use crate::poset::{a_poset, b_poset, build_mu_poset, build_zigzag, mu};
use crate::products::{
    bar_harmonic, circled_harmonic, harmonic, hoffman_dual, map_indices, shuffle, signed_reverse, star, star_index,
};
use crate::word::Word;

/// One relation `ζ(lhs) = ζ(rhs)` together with the coefficients of
/// `lhs - rhs` in the admissible-word basis of its weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationRecord {
    pub k: Index,
    pub l: Index,
    pub family: String,
    pub lhs: LinComb,
    pub rhs: LinComb,
    /// Sparse `(column, coefficient)` pairs, increasing column.
    pub vector: Vec<(usize, Q)>,
}

/// Column of an admissible word of weight `w ≥ 2` in the canonical basis:
/// the value of its `w - 2` interior letters read as a binary number.
pub fn basis_column(w: Word) -> usize {
    debug_assert!(w.is_admissible() && w.len() >= 2);
    let n = w.len();
    ((w.bits() >> 1) & ((1u64 << (n - 2)) - 1)) as usize
}

/// Number of admissible words of weight `w ≥ 2`.
pub fn basis_size(weight: usize) -> usize {
    1 << (weight - 2)
}

impl RelationRecord {
    pub fn new(k: Index, l: Index, family: &str, lhs: LinComb, rhs: LinComb) -> Result<Self> {
        let diff = &lhs - &rhs;
        diff.require_admissible()?;
        let vector = diff.iter().map(|(w, c)| (basis_column(*w), c.clone())).collect::<Vec<_>>();
        let mut vector = vector;
        vector.sort_by_key(|(c, _)| *c);
        Ok(RelationRecord { k, l, family: family.to_string(), lhs, rhs, vector })
    }

    pub fn weight(&self) -> usize {
        (self.k.weight() + self.l.weight()) as usize
    }

    pub fn difference(&self) -> LinComb {
        &self.lhs - &self.rhs
    }

    pub fn is_trivial(&self) -> bool {
        self.vector.is_empty()
    }

    /// Dense coefficient vector over the basis of the record's weight.
    pub fn dense_vector(&self) -> Vec<Q> {
        let mut v = vec![Q::default(); basis_size(self.weight())];
        for (c, x) in &self.vector {
            v[*c] = x.clone();
        }
        v
    }

    pub fn to_json_value(&self) -> RelationJson {
        RelationJson {
            k: self.k.to_string(),
            l: self.l.to_string(),
            family: self.family.clone(),
            weight: self.weight(),
            lhs: self.lhs.to_json_value(),
            rhs: self.rhs.to_json_value(),
            vector: self.vector.iter().map(|(c, x)| (*c, x.to_string())).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<RelationRecord> {
        let v: RelationJson = serde_json::from_str(s).map_err(|e| MzvError::Parse(e.to_string()))?;
        let rec = RelationRecord::new(
            v.k.parse()?,
            v.l.parse()?,
            &v.family,
            LinComb::from_json_value(&v.lhs)?,
            LinComb::from_json_value(&v.rhs)?,
        )?;
        let vector =
            v.vector.iter().map(|(c, x)| Ok((*c, crate::lincomb::parse_q(x)?))).collect::<Result<Vec<_>>>()?;
        if vector != rec.vector {
            return Err(MzvError::Parse("vector does not match lhs - rhs".into()));
        }
        Ok(rec)
    }

    /// `μ(k,l) = k⊛l★` written with index notation.
    pub fn to_text(&self) -> String {
        format!(
            "[{}] k=({}) l=({}): {} = {}",
            self.family,
            self.k,
            self.l,
            self.lhs.to_index_string(),
            self.rhs.to_index_string()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationJson {
    pub k: String,
    pub l: String,
    pub family: String,
    pub weight: usize,
    pub lhs: LinCombJson,
    pub rhs: LinCombJson,
    pub vector: Vec<(usize, String)>,
}

/// `μ(k,l)` and `k⊛l★`.
pub fn intser_sides(k: &Index, l: &Index) -> Result<(LinComb, LinComb)> {
    if k.is_empty() || l.is_empty() {
        return Err(MzvError::EmptyIndex);
    }
    let lhs = mu(k, l)?;
    let rhs = circled_harmonic(&LinComb::index(k), &star_index(l))?;
    Ok((lhs, rhs))
}

pub fn intser_relation(k: &Index, l: &Index) -> Result<RelationRecord> {
    let (lhs, rhs) = intser_sides(k, l)?;
    RelationRecord::new(k.clone(), l.clone(), "int-ser", lhs, rhs)
}

/// Ordered pairs of non-empty indices of total weight `weight`: by weight
/// of `k`, then `k`, then `l`, with compositions in lexicographic order.
pub fn relation_pairs(weight: u32, skip_trivial: bool) -> Result<Vec<(Index, Index)>> {
    if weight < 2 {
        return Err(MzvError::WeightTooSmall { min: 2, got: weight });
    }
    let mut pairs = Vec::new();
    for wk in 1..weight {
        let ls: Vec<Index> = compositions(weight - wk).into_iter().filter(|l| !skip_trivial || l.depth() > 1).collect();
        for k in compositions(wk) {
            for l in &ls {
                pairs.push((k.clone(), l.clone()));
            }
        }
    }
    Ok(pairs)
}

/// Every Int-Ser relation of the given weight, computed in parallel and
/// returned in `relation_pairs` order.
pub fn enumerate_relations(weight: u32, skip_trivial: bool) -> Result<Vec<RelationRecord>> {
    let pairs = relation_pairs(weight, skip_trivial)?;
    pairs.par_iter().map(|(k, l)| intser_relation(k, l)).collect()
}

fn sign(i: usize) -> Q {
    if i % 2 == 0 {
        Q::from_integer(1.into())
    } else {
        Q::from_integer((-1).into())
    }
}

fn idx(k: &Index) -> LinComb {
    LinComb::index(k)
}

fn zigzag_w(k: &Index) -> Result<LinComb> {
    build_zigzag(k, 1)?.w_fast()
}

/// The four alternating sums `(A_sh)`, `(A_sh★)`, `(A_*)`, `(A_*★)`.
pub fn lemma_identity_sums(k: &Index, l: &Index) -> Result<[LinComb; 4]> {
    if k.is_empty() || l.is_empty() {
        return Err(MzvError::EmptyIndex);
    }
    let (r, s) = (k.depth(), l.depth());
    let k_rev_l = idx(&k.odot(&l.reverse())?);
    let l_rev_k = l.odot(&k.reverse())?;

    let mut a_sh = LinComb::zero();
    let mut a_st = LinComb::zero();
    for i in 0..s {
        let li = l.suffix(i)?;
        let rev_head = idx(&l.prefix(i)?.reverse());
        a_sh.add_scaled(&shuffle(&mu(k, &li)?, &rev_head), &sign(i));
        let cast = circled_harmonic(&idx(k), &star_index(&li))?;
        a_st.add_scaled(&harmonic(&cast, &rev_head)?, &sign(i));
    }
    a_sh.add_scaled(&k_rev_l, &sign(s));
    a_st.add_scaled(&k_rev_l, &sign(s));

    let mut a_sh_star = LinComb::zero();
    let mut a_st_star = LinComb::zero();
    for i in 0..r {
        let ki = k.suffix(i)?;
        let rev_head = k.prefix(i)?.reverse();
        a_sh_star.add_scaled(&shuffle(&mu(&ki, l)?, &zigzag_w(&rev_head)?), &sign(i));
        let cast = circled_harmonic(&idx(&ki), &star_index(l))?;
        a_st_star.add_scaled(&harmonic(&cast, &star_index(&rev_head))?, &sign(i));
    }
    a_sh_star.add_scaled(&zigzag_w(&l_rev_k)?, &sign(r));
    a_st_star.add_scaled(&star_index(&l_rev_k), &sign(r));

    Ok([a_sh, a_sh_star, a_st, a_st_star])
}

/// Whether each of `(A_sh)`, `(A_sh★)`, `(A_*)`, `(A_*★)` vanishes exactly.
pub fn check_lemma_identities(k: &Index, l: &Index) -> Result<[bool; 4]> {
    let sums = lemma_identity_sums(k, l)?;
    Ok(sums.map(|s| s.is_zero()))
}

pub const LEMMA_IDENTITY_NAMES: [&str; 4] = ["A_sh", "A_sh*", "A_st", "A_st*"];

/// Kawashima's relation for `(m, k, l)`: the left side as a list of pairs
/// whose `ζ`-values are multiplied and summed, and the right side.
pub fn kawashima_sides(m: usize, k: &Index, l: &Index) -> Result<(Vec<(LinComb, LinComb)>, LinComb)> {
    if m < 1 {
        return Err(MzvError::InvalidArgument("m must be at least 1".into()));
    }
    if k.is_empty() || l.is_empty() {
        return Err(MzvError::EmptyIndex);
    }
    let cast_dual = |p: usize, x: &LinComb| -> Result<LinComb> {
        circled_harmonic(&idx(&Index::ones(p)), &star(&hoffman_dual(x)?)?)
    };
    let mut lhs = Vec::new();
    for p in 1..m {
        lhs.push((cast_dual(p, &idx(k))?, cast_dual(m - p, &idx(l))?));
    }
    let kl = bar_harmonic(&idx(k), &idx(l))?;
    let rhs = -cast_dual(m, &kl)?;
    Ok((lhs, rhs))
}

/// `W(B_m(·))` extended linearly over non-empty indices; `B_0(∅) = 1`.
fn w_b_linear(m: usize, x: &LinComb) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for (w, c) in x.iter() {
        let k = w.to_index()?;
        if k.is_empty() {
            if m == 0 {
                out.add_scaled(&LinComb::one(), c);
            }
            continue;
        }
        out.add_scaled(&b_poset(m, &k)?.w_fast()?, c);
    }
    Ok(out)
}

/// Outcome of the symbolic identities behind Kawashima's relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineryReport {
    /// `Σ_{p+q=m} W(B_p(k)) * W(B_q(l)) = W(B_m(k*l))`.
    pub b_relation: bool,
    /// `Σ_{i<r} (-1)^i W(A_m(k^i)) ⧢ rev(k_i) + (-1)^r W(B_m(rev k)) = 0`.
    pub a_b_identity: bool,
    /// `R(k ⋆̄ l) = R(k) * R(l)`.
    pub r_bar: bool,
    /// `Σ_{p+q=m} W(B'_p(k)) * W(B'_q(l)) = W(B'_m(k ⋆̄ l))`, `B'_m = B_m∘R`.
    pub b_prime: bool,
    /// `W(μ-poset(1^m, k^∨))† = W(A_m(k))`.
    pub dual_transport: bool,
}

impl MachineryReport {
    pub fn all(&self) -> bool {
        self.b_relation && self.a_b_identity && self.r_bar && self.b_prime && self.dual_transport
    }
}

pub fn check_kawashima_machinery(m: usize, k: &Index, l: &Index) -> Result<MachineryReport> {
    if k.is_empty() || l.is_empty() {
        return Err(MzvError::EmptyIndex);
    }
    let (kk, ll) = (idx(k), idx(l));

    let mut lhs = LinComb::zero();
    for p in 0..=m {
        lhs += &harmonic(&w_b_linear(p, &kk)?, &w_b_linear(m - p, &ll)?)?;
    }
    let b_relation = lhs == w_b_linear(m, &harmonic(&kk, &ll)?)?;

    let a_b_identity = if m >= 1 {
        let r = k.depth();
        let mut acc = LinComb::zero();
        for i in 0..r {
            let a = a_poset(m, &k.suffix(i)?)?.w_fast()?;
            acc.add_scaled(&shuffle(&a, &idx(&k.prefix(i)?.reverse())), &sign(i));
        }
        acc.add_scaled(&b_poset(m, &k.reverse())?.w_fast()?, &sign(r));
        acc.is_zero()
    } else {
        true
    };

    let bar = bar_harmonic(&kk, &ll)?;
    let (rk, rl) = (signed_reverse(&kk)?, signed_reverse(&ll)?);
    let r_bar = signed_reverse(&bar)? == harmonic(&rk, &rl)?;

    let mut lhs = LinComb::zero();
    for p in 0..=m {
        lhs += &harmonic(&w_b_linear(p, &rk)?, &w_b_linear(m - p, &rl)?)?;
    }
    let b_prime = lhs == w_b_linear(m, &signed_reverse(&bar)?)?;

    let dual_transport = if m >= 1 {
        let left = build_mu_poset(&Index::ones(m), &k.hoffman_dual()?)?.w_fast()?.dagger();
        left == a_poset(m, k)?.w_fast()?
    } else {
        true
    };

    Ok(MachineryReport { b_relation, a_b_identity, r_bar, b_prime, dual_transport })
}

/// Both sides of the restricted sum formula as combinations of indices.
pub fn restricted_sum_sides(k: u32, p: u32, q: u32) -> Result<(LinComb, LinComb)> {
    if p < 1 || q < 1 {
        return Err(MzvError::InvalidArgument("p and q must be positive".into()));
    }
    if k < p + q {
        return Err(MzvError::InvalidArgument(format!("need k ≥ p+q, got k={k}, p={p}, q={q}")));
    }
    let mut lhs = LinComb::zero();
    for c in compositions_with_depth(k - p, q as usize) {
        let mut parts = vec![1; (p - 1) as usize];
        parts.extend_from_slice(c.parts());
        *parts.last_mut().unwrap() += 1;
        lhs += &idx(&Index::new(parts)?);
    }
    let mut rhs = LinComb::zero();
    for c in compositions_with_depth(p + q - 1, p as usize) {
        let mut parts = c.parts().to_vec();
        *parts.last_mut().unwrap() += k - p - q + 1;
        rhs += &idx(&Index::new(parts)?);
    }
    Ok((lhs, rhs))
}

/// Hoffman's relation for admissible `k`, both as the Int-Ser relation for
/// `((k_1, ..., k_r - 1), (1,1))` and as the direct element
/// `Σ_i (..., k_i+1, ...) - Σ_{i, k_i≥2} Σ_j (..., j, k_i-j+1, ...)`.
pub fn hoffman_relation(k: &Index) -> Result<(RelationRecord, LinComb)> {
    if k.is_empty() || !k.is_admissible() {
        return Err(MzvError::NotAdmissible(k.to_string()));
    }
    let parts = k.parts();
    let r = parts.len();
    let mut tilde = parts.to_vec();
    tilde[r - 1] -= 1;
    let rec = intser_relation(&Index::new(tilde)?, &Index::ones(2))?;
    let mut direct = LinComb::zero();
    for i in 0..r {
        let mut up = parts.to_vec();
        up[i] += 1;
        direct += &idx(&Index::new(up)?);
        for j in 1..parts[i] {
            let mut split = parts[..i].to_vec();
            split.push(j);
            split.push(parts[i] - j + 1);
            split.extend_from_slice(&parts[i + 1..]);
            direct -= &idx(&Index::new(split)?);
        }
    }
    Ok((rec, direct))
}

/// `w - w†` for `w` in `H^0`.
pub fn duality_relation(w: &LinComb) -> Result<LinComb> {
    w.require_admissible()?;
    Ok(w - &w.dagger())
}

/// `k ⧢ l`, `k * l`, both in `H^0` for admissible `k`, `l`.
pub fn double_shuffle_products(k: &Index, l: &Index) -> Result<(LinComb, LinComb)> {
    let (a, b) = (idx(k), idx(l));
    Ok((shuffle(&a, &b), harmonic(&a, &b)?))
}

/// `R` extended linearly, exposed for the property suites.
pub fn r_map(x: &LinComb) -> Result<LinComb> {
    signed_reverse(x)
}

/// `(k^∨)★` extended linearly.
pub fn dual_star(x: &LinComb) -> Result<LinComb> {
    map_indices(x, |k| star(&LinComb::index(&k.hoffman_dual()?)))
}
