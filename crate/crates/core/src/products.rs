//! The shuffle, harmonic, bar-harmonic and circled-harmonic products, plus
//! the linear index maps (star, Hoffman dual, reversal) lifted to `LinComb`.
//!
//! Word-level products follow the defining recursions and are memoized per
//! thread on the operand pair. Coefficients of word products are integers and
//! are kept as `i128` inside the caches.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{MzvError, Result};
use crate::index::Index;
use crate::lincomb::{LinComb, Q};
use crate::word::Word;

type WordProduct = Rc<Vec<(Word, i128)>>;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Shuffle,
    Harmonic,
    BarHarmonic,
}

thread_local! {
    static CACHE: RefCell<HashMap<(Kind, Word, Word), WordProduct>> = RefCell::new(HashMap::new());
}

/// Drops the per-thread product caches.
pub fn clear_caches() {
    CACHE.with(|c| c.borrow_mut().clear());
}

fn accumulate(acc: &mut HashMap<Word, i128>, prefix: Word, part: &[(Word, i128)], scale: i128) {
    for &(w, c) in part {
        let e = acc.entry(prefix.concat(w)).or_insert(0);
        *e = e.checked_add(c.checked_mul(scale).expect("coefficient overflow")).expect("coefficient overflow");
    }
}

fn finish(acc: HashMap<Word, i128>) -> WordProduct {
    let mut v: Vec<(Word, i128)> = acc.into_iter().filter(|&(_, c)| c != 0).collect();
    v.sort_unstable_by_key(|a| a.0);
    Rc::new(v)
}

fn word_product(kind: Kind, u: Word, v: Word) -> WordProduct {
    if u.is_empty() {
        return Rc::new(vec![(v, 1)]);
    }
    if v.is_empty() {
        return Rc::new(vec![(u, 1)]);
    }
    // all three products are commutative
    let key = if u <= v { (kind, u, v) } else { (kind, v, u) };
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut acc = HashMap::new();
    match kind {
        Kind::Shuffle => {
            let (a, u1) = u.split_first().unwrap();
            let (b, v1) = v.split_first().unwrap();
            let pa = if a == 1 { Word::E1 } else { Word::E0 };
            let pb = if b == 1 { Word::E1 } else { Word::E0 };
            accumulate(&mut acc, pa, &word_product(kind, u1, v), 1);
            accumulate(&mut acc, pb, &word_product(kind, u, v1), 1);
        }
        Kind::Harmonic | Kind::BarHarmonic => {
            let (k, u1) = u.split_first_block().expect("operand in H^1");
            let (l, v1) = v.split_first_block().expect("operand in H^1");
            accumulate(&mut acc, Word::e(k), &word_product(kind, u1, v), 1);
            accumulate(&mut acc, Word::e(l), &word_product(kind, u, v1), 1);
            let sign = if kind == Kind::Harmonic { 1 } else { -1 };
            accumulate(&mut acc, Word::e(k + l), &word_product(kind, u1, v1), sign);
        }
    }
    let out = finish(acc);
    CACHE.with(|c| c.borrow_mut().insert(key, out.clone()));
    out
}

fn bilinear(kind: Kind, a: &LinComb, b: &LinComb) -> LinComb {
    let mut out = LinComb::zero();
    for (u, cu) in a.iter() {
        for (v, cv) in b.iter() {
            let c = cu * cv;
            for &(w, n) in word_product(kind, *u, *v).iter() {
                out.add_term(w, &c * Q::from_integer(BigInt::from(n)));
            }
        }
    }
    out
}

/// Shuffle product on all of `H`.
pub fn shuffle(a: &LinComb, b: &LinComb) -> LinComb {
    bilinear(Kind::Shuffle, a, b)
}

pub fn shuffle_words(u: Word, v: Word) -> LinComb {
    shuffle(&LinComb::word(u), &LinComb::word(v))
}

/// Harmonic (stuffle) product on `H^1`.
pub fn harmonic(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    a.require_h1()?;
    b.require_h1()?;
    Ok(bilinear(Kind::Harmonic, a, b))
}

/// The harmonic product with the merge term negated.
pub fn bar_harmonic(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    a.require_h1()?;
    b.require_h1()?;
    Ok(bilinear(Kind::BarHarmonic, a, b))
}

/// `v e_k ⊛ w e_l = (v * w) e_{k+l}`, defined on `e1 H × e1 H`.
pub fn circled_harmonic(a: &LinComb, b: &LinComb) -> Result<LinComb> {
    for w in a.words().chain(b.words()) {
        if !w.in_e1h() {
            return Err(MzvError::NotInH1(if w.is_empty() { "1".into() } else { w.to_string() }));
        }
    }
    let mut out = LinComb::zero();
    for (u, cu) in a.iter() {
        let (u0, k) = u.split_last_block().unwrap();
        for (v, cv) in b.iter() {
            let (v0, l) = v.split_last_block().unwrap();
            let c = cu * cv;
            let tail = Word::e(k + l);
            for &(w, n) in word_product(Kind::Harmonic, u0, v0).iter() {
                out.add_term(w.concat(tail), &c * Q::from_integer(BigInt::from(n)));
            }
        }
    }
    Ok(out)
}

/// `n`-fold power under a product; `power(_, 0) = 1`.
pub fn power(x: &LinComb, n: usize, mul: impl Fn(&LinComb, &LinComb) -> LinComb) -> LinComb {
    let mut acc = LinComb::one();
    for _ in 0..n {
        acc = mul(&acc, x);
    }
    acc
}

/// Applies an index-level map linearly to a combination of words in `H^1`.
pub fn map_indices(a: &LinComb, mut f: impl FnMut(&Index) -> Result<LinComb>) -> Result<LinComb> {
    let mut out = LinComb::zero();
    for (w, c) in a.iter() {
        out.add_scaled(&f(&w.to_index()?)?, c);
    }
    Ok(out)
}

/// `k★` extended linearly.
pub fn star(a: &LinComb) -> Result<LinComb> {
    map_indices(a, |k| Ok(star_index(k)))
}

pub fn star_index(k: &Index) -> LinComb {
    LinComb::from_indices(&k.star_terms())
}

/// Hoffman dual extended linearly to non-empty indices.
pub fn hoffman_dual(a: &LinComb) -> Result<LinComb> {
    map_indices(a, |k| Ok(LinComb::index(&k.hoffman_dual()?)))
}

/// Index reversal extended linearly.
pub fn reverse(a: &LinComb) -> Result<LinComb> {
    map_indices(a, |k| Ok(LinComb::index(&k.reverse())))
}

/// `R(k) = (-1)^r rev(k)`.
pub fn signed_reverse(a: &LinComb) -> Result<LinComb> {
    map_indices(a, |k| {
        let t = LinComb::index(&k.reverse());
        Ok(if k.depth() % 2 == 1 { -t } else { t })
    })
}

/// `exp_*` of a power series in `u` with `LinComb` coefficients, truncated at
/// degree `n`. `x[0]` must be zero.
pub fn exp_harmonic(x: &[LinComb], n: usize) -> Result<Vec<LinComb>> {
    if x.first().is_some_and(|c| !c.is_zero()) {
        return Err(MzvError::InvalidArgument("exp_* needs a zero constant term".into()));
    }
    for c in x {
        c.require_h1()?;
    }
    let coeff = |d: usize| x.get(d).cloned().unwrap_or_default();
    let mut result = vec![LinComb::zero(); n + 1];
    result[0] = LinComb::one();
    // running power X^j, truncated
    let mut pow: Vec<LinComb> = result.clone();
    let mut fact = Q::one();
    for j in 1..=n {
        let mut next = vec![LinComb::zero(); n + 1];
        for (d, p) in pow.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for e in 1..=n - d {
                let xe = coeff(e);
                if xe.is_zero() {
                    continue;
                }
                next[d + e] += &bilinear(Kind::Harmonic, p, &xe);
            }
        }
        pow = next;
        fact *= Q::from_integer(BigInt::from(j));
        let inv = fact.recip();
        for (d, p) in pow.iter().enumerate() {
            result[d].add_scaled(p, &inv);
        }
    }
    Ok(result)
}

/// Coefficient series `Σ_{m≥1} sign(m)·e_m/m · u^m` up to degree `n`.
pub fn power_sum_series(n: usize, alternating: bool) -> Vec<LinComb> {
    let mut x = vec![LinComb::zero()];
    for m in 1..=n {
        let mut c = Q::new(BigInt::one(), BigInt::from(m));
        if alternating && m % 2 == 0 {
            c = -c;
        }
        x.push(LinComb::term(Word::e(m as u32), c));
    }
    x
}

/// Checks both `exp_*` identities through degree `n`:
/// `Σ e1^n u^n = exp_*(Σ (-1)^{m-1} e_m u^m/m)` and
/// `Σ (e1^n)★ u^n = exp_*(Σ e_m u^m/m)`.
pub fn check_exp_identities(n: usize) -> Result<(bool, bool)> {
    let elem = exp_harmonic(&power_sum_series(n, true), n)?;
    let comp = exp_harmonic(&power_sum_series(n, false), n)?;
    let mut ok_elem = true;
    let mut ok_comp = true;
    for d in 0..=n {
        let ones = Index::ones(d);
        ok_elem &= elem[d] == LinComb::index(&ones);
        ok_comp &= comp[d] == star_index(&ones);
    }
    Ok((ok_elem, ok_comp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::q;

    fn w(s: &str) -> LinComb {
        LinComb::word(s.parse().unwrap())
    }

    fn ix(s: &str) -> LinComb {
        LinComb::index(&s.parse().unwrap())
    }

    fn lc(terms: &[(i64, &str)]) -> LinComb {
        terms.iter().map(|(c, s)| (s.parse::<Word>().unwrap(), q(*c))).collect()
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffle(&w("1"), &w("1")), lc(&[(2, "11")]));
        assert_eq!(shuffle(&w("1"), &w("10")), lc(&[(2, "110"), (1, "101")]));
        assert_eq!(shuffle(&LinComb::one(), &w("1011")), w("1011"));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(harmonic(&ix("1"), &ix("1")).unwrap(), &(&ix("1,1") + &ix("1,1")) + &ix("2"));
        assert_eq!(
            harmonic(&ix("1"), &ix("2")).unwrap(),
            &(&ix("1,2") + &ix("2,1")) + &ix("3")
        );
        assert_eq!(
            harmonic(&ix("2"), &ix("3")).unwrap(),
            &(&ix("2,3") + &ix("3,2")) + &ix("5")
        );
        assert!(harmonic(&w("01"), &ix("1")).is_err());
    }

    #[test]
    fn bar_harmonic_examples() {
        assert_eq!(bar_harmonic(&ix("1"), &ix("1")).unwrap(), &(&ix("1,1") + &ix("1,1")) - &ix("2"));
        assert_eq!(
            bar_harmonic(&ix("1"), &ix("2")).unwrap(),
            &(&ix("1,2") + &ix("2,1")) - &ix("3")
        );
        assert_eq!(bar_harmonic(&LinComb::one(), &ix("2,1")).unwrap(), ix("2,1"));
    }

    #[test]
    fn circled_examples() {
        let got = circled_harmonic(&ix("1,1"), &ix("2,1")).unwrap();
        assert_eq!(got, &(&ix("1,2,2") + &ix("2,1,2")) + &ix("3,2"));
        let star21 = star_index(&"2,1".parse().unwrap());
        let got = circled_harmonic(&ix("1,1"), &star21).unwrap();
        let want = &(&(&ix("1,2,2") + &ix("2,1,2")) + &ix("3,2")) + &ix("1,4");
        assert_eq!(got, want);
        assert_eq!(circled_harmonic(&ix("1,2"), &ix("1")).unwrap(), ix("1,3"));
        assert!(circled_harmonic(&LinComb::one(), &ix("1")).is_err());
        assert!(circled_harmonic(&w("01"), &ix("1")).is_err());
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(w("10").dagger(), w("10"));
        assert_eq!(w("110").dagger(), w("100"));
        assert_eq!(w("1010").dagger(), w("1010"));
    }

    #[test]
    fn exp_identities_small() {
        assert_eq!(check_exp_identities(5).unwrap(), (true, true));
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert!(exp_harmonic(&[LinComb::one()], 2).is_err());
    }

    #[test]
    fn signed_reverse_sign() {
        assert_eq!(signed_reverse(&ix("1,2")).unwrap(), ix("2,1"));
        assert_eq!(signed_reverse(&ix("3")).unwrap(), -ix("3"));
    }
}
