//! High-precision evaluation of multiple zeta values.
//!
//! `ζ(w)` is the iterated integral of `w` over `0 < t_1 < ... < t_n < 1`.
//! Splitting the simplex at `1/2` and mapping `t ↦ 1 - t` on the upper part
//! gives `ζ(w) = Σ_j L(w_{≤j}) · L((w_{>j})†)`, where `L(u)` is the same
//! iterated integral over `(0, 1/2)`. Since `(w_{>j})†` is a prefix of `w†`,
//! two passes of a power-series recursion produce every factor. All series
//! are evaluated at `1/2` and converge geometrically.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::error::{MzvError, Result};
use crate::index::Index;
use crate::lincomb::LinComb;
use crate::products::star_index;
use crate::real::Real;
use crate::word::Word;

pub const DEFAULT_PREC_BITS: u32 = 192;
pub const DEFAULT_GUARD_BITS: u32 = 16;
pub const PREC_ENV: &str = "MZV_PREC_BITS";

/// Working precision. Internal fixed-point arithmetic carries
/// `precision_bits + guard_bits + 16` fractional bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalContext {
    pub precision_bits: u32,
    pub guard_bits: u32,
}

impl Default for EvalContext {
    fn default() -> Self {
        EvalContext::new(DEFAULT_PREC_BITS)
    }
}

impl EvalContext {
    pub fn new(precision_bits: u32) -> Self {
        EvalContext { precision_bits, guard_bits: DEFAULT_GUARD_BITS }
    }

    /// Default precision, overridden by `MZV_PREC_BITS` when set and valid.
    pub fn from_env() -> Self {
        let bits = std::env::var(PREC_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&b| b >= 40);
        EvalContext::new(bits.unwrap_or(DEFAULT_PREC_BITS))
    }

    pub fn frac_bits(&self) -> u32 {
        self.precision_bits + self.guard_bits + 16
    }

    /// Series truncation for a word of length `len`. The coefficients of a
    /// length-`len` series grow at most like `(1 + ln m)^len`, so `4·len`
    /// extra terms cover that growth.
    pub fn truncation(&self, len: usize) -> usize {
        (self.precision_bits + self.guard_bits) as usize + 4 * len + 8
    }

    /// `2^{-(precision_bits - 32)}`, the default acceptance tolerance.
    pub fn tolerance_bits(&self) -> u32 {
        self.precision_bits.saturating_sub(32)
    }
}

/// `L(w_{≤j}; 1/2)` for `j = 0..=len(w)`. `w` must not start with `e0`.
fn half_prefix_values(w: Word, n_terms: usize, frac: u32) -> Vec<Real> {
    // g[m] = f(m) / 2^m, where f is the coefficient sequence of the series
    let mut g = vec![Real::zero(frac); n_terms + 1];
    g[0] = Real::one(frac);
    let mut out = Vec::with_capacity(w.len() + 1);
    out.push(Real::one(frac));
    for letter in w.letters() {
        if letter == 0 {
            debug_assert!(g[0].is_zero());
            for (m, gm) in g.iter_mut().enumerate().skip(1) {
                *gm = gm.div_int(m as u64);
            }
        } else {
            // new[n] = (1/n) Σ_{m<n} g[m] 2^{m-n}
            let mut s = Real::zero(frac);
            let mut next = Vec::with_capacity(n_terms + 1);
            next.push(Real::zero(frac));
            for n in 1..=n_terms {
                s += &g[n - 1];
                s = s.half();
                next.push(s.div_int(n as u64));
            }
            g = next;
        }
        let mut total = Real::zero(frac);
        for gm in &g {
            total += gm;
        }
        out.push(total);
    }
    out
}

/// Evaluates MZVs at a fixed precision, caching values per word.
pub struct Evaluator {
    ctx: EvalContext,
    cache: Mutex<HashMap<Word, Real>>,
}

impl Evaluator {
    pub fn new(ctx: EvalContext) -> Self {
        Evaluator { ctx, cache: Mutex::new(HashMap::new()) }
    }

    pub fn with_precision(bits: u32) -> Self {
        Evaluator::new(EvalContext::new(bits))
    }

    pub fn context(&self) -> EvalContext {
        self.ctx
    }

    pub fn frac_bits(&self) -> u32 {
        self.ctx.frac_bits()
    }

    pub fn zero(&self) -> Real {
        Real::zero(self.frac_bits())
    }

    /// `ζ(w)` for an admissible word; `ζ(1) = 1`.
    pub fn mzv_word(&self, w: Word) -> Result<Real> {
        if !w.is_admissible() {
            return Err(MzvError::NotAdmissible(w.to_letters_string()));
        }
        if let Some(v) = self.cache.lock().unwrap().get(&w) {
            return Ok(v.clone());
        }
        let v = self.compute(w);
        self.cache.lock().unwrap().insert(w, v.clone());
        Ok(v)
    }

    fn compute(&self, w: Word) -> Real {
        let frac = self.frac_bits();
        if w.is_empty() {
            return Real::one(frac);
        }
        let n = w.len();
        let terms = self.ctx.truncation(n);
        let p = half_prefix_values(w, terms, frac);
        let q = half_prefix_values(w.dagger(), terms, frac);
        let mut acc = Real::zero(frac);
        for j in 0..=n {
            acc += &(&p[j] * &q[n - j]);
        }
        acc
    }

    /// Fills the cache for `words` in parallel.
    pub fn precompute(&self, words: &[Word]) -> Result<()> {
        let todo: Vec<Word> = {
            let cache = self.cache.lock().unwrap();
            let mut t: Vec<Word> = words.iter().copied().filter(|w| !cache.contains_key(w)).collect();
            t.sort();
            t.dedup();
            t
        };
        if let Some(bad) = todo.iter().find(|w| !w.is_admissible()) {
            return Err(MzvError::NotAdmissible(bad.to_letters_string()));
        }
        let values: Vec<(Word, Real)> = todo.par_iter().map(|&w| (w, self.compute(w))).collect();
        self.cache.lock().unwrap().extend(values);
        Ok(())
    }

    pub fn mzv(&self, k: &Index) -> Result<Real> {
        if !k.is_admissible() {
            return Err(MzvError::NotAdmissible(k.to_string()));
        }
        self.mzv_word(k.to_word())
    }

    /// `ζ★(k) = ζ(k★)`.
    pub fn mzsv(&self, k: &Index) -> Result<Real> {
        if !k.is_admissible() {
            return Err(MzvError::NotAdmissible(k.to_string()));
        }
        self.eval_lincomb(&star_index(k))
    }

    /// `ζ(n)` for `n ≥ 2`.
    pub fn zeta_single(&self, n: u32) -> Result<Real> {
        if n < 2 {
            return Err(MzvError::InvalidArgument(format!("ζ({n}) diverges")));
        }
        self.mzv_word(Word::e(n))
    }

    /// `ζ` extended linearly; every word must be admissible.
    pub fn eval_lincomb(&self, c: &LinComb) -> Result<Real> {
        c.require_admissible()?;
        let mut acc = self.zero();
        for (w, coeff) in c.iter() {
            acc += &self.mzv_word(*w)?.mul_q(coeff);
        }
        Ok(acc)
    }

    /// `|ζ(lhs) - ζ(rhs)|`.
    pub fn residual(&self, lhs: &LinComb, rhs: &LinComb) -> Result<Real> {
        Ok(self.eval_lincomb(&(lhs - rhs))?.abs())
    }

    /// `|x| < 2^{-(precision_bits - 32)}`.
    pub fn within_tolerance(&self, x: &Real) -> bool {
        x.abs_below_pow2(self.ctx.tolerance_bits())
    }

    pub fn cached_words(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(EvalContext::default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(s: &str) -> Index {
        s.parse().unwrap()
    }

    #[test]
    fn zeta_two_digits() {
        let ev = Evaluator::with_precision(128);
        let z2 = ev.zeta_single(2).unwrap();
        assert_eq!(z2.to_decimal(30), "1.644934066848226436472415166646");
        let z3 = ev.zeta_single(3).unwrap();
        assert_eq!(z3.to_decimal(30), "1.202056903159594285399738161511");
        assert_eq!(ev.mzv(&Index::empty()).unwrap().to_decimal(5), "1.00000");
    }

    #[test]
    fn rejects_divergent() {
        let ev = Evaluator::with_precision(64);
        assert!(ev.mzv(&ix("2,1")).is_err());
        assert!(ev.zeta_single(1).is_err());
        assert!(ev.eval_lincomb(&LinComb::index(&ix("1"))).is_err());
        assert!(ev.eval_lincomb(&LinComb::zero()).unwrap().is_zero());
    }

    #[test]
    fn euler_relations() {
        let ev = Evaluator::default();
        let d = &ev.mzv(&ix("1,2")).unwrap() - &ev.mzv(&ix("3")).unwrap();
        assert!(ev.within_tolerance(&d));
        let lhs = ev.mzv(&ix("2,2")).unwrap().mul_int(4);
        let rhs = ev.mzv(&ix("4")).unwrap().mul_int(3);
        assert!(ev.within_tolerance(&(&lhs - &rhs)));
        let s = &ev.mzsv(&ix("1,2")).unwrap() - &ev.mzv(&ix("3")).unwrap().mul_int(2);
        assert!(ev.within_tolerance(&s));
    }

    #[test]
    fn precompute_matches_serial() {
        let ev = Evaluator::with_precision(96);
        let words = Word::admissible_basis(5);
        ev.precompute(&words).unwrap();
        assert_eq!(ev.cached_words(), words.len());
        let fresh = Evaluator::with_precision(96);
        for w in words {
            assert_eq!(ev.mzv_word(w).unwrap(), fresh.mzv_word(w).unwrap());
        }
    }
}
