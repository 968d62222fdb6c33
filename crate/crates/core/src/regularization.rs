//! Shuffle and harmonic regularization `H^1 → H^0[T]`, the star variants,
//! and the `ρ`, `ρ★` operators on real polynomials in `T`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{MzvError, Result};
use crate::index::Index;
use crate::lincomb::{LinComb, Q, TermJson};
use crate::numeric::Evaluator;
use crate::poset::build_zigzag;
use crate::products::{harmonic, map_indices, power, shuffle, star_index};
use crate::real::Real;
use crate::word::Word;

/// Which product the regularization is a homomorphism for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegKind {
    Shuffle,
    Harmonic,
}

impl RegKind {
    /// The product on `H^1`. Both operands must lie in `H^1`.
    pub fn mul(self, a: &LinComb, b: &LinComb) -> LinComb {
        match self {
            RegKind::Shuffle => shuffle(a, b),
            RegKind::Harmonic => harmonic(a, b).expect("operands in H^1"),
        }
    }
}

/// A polynomial `Σ c_i T^i` with coefficients in `H^0`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TPoly {
    coeffs: Vec<LinComb>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly::default()
    }

    pub fn constant(c: LinComb) -> Self {
        TPoly::from_coeffs(vec![c])
    }

    /// `c · T^n`.
    pub fn monomial(n: usize, c: LinComb) -> Self {
        let mut coeffs = vec![LinComb::zero(); n];
        coeffs.push(c);
        TPoly::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<LinComb>) -> Self {
        while coeffs.last().is_some_and(LinComb::is_zero) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[LinComb] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> LinComb {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Q) -> TPoly {
        TPoly::from_coeffs(self.coeffs.iter().map(|x| x.scale(c)).collect())
    }

    pub fn add_scaled(&mut self, other: &TPoly, c: &Q) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), LinComb::zero());
        }
        for (i, x) in other.coeffs.iter().enumerate() {
            self.coeffs[i].add_scaled(x, c);
        }
        *self = TPoly::from_coeffs(std::mem::take(&mut self.coeffs));
    }

    /// Polynomial product with `kind` on the coefficients.
    pub fn mul(&self, other: &TPoly, kind: RegKind) -> TPoly {
        if self.is_zero() || other.is_zero() {
            return TPoly::zero();
        }
        let mut out = vec![LinComb::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &kind.mul(a, b);
            }
        }
        TPoly::from_coeffs(out)
    }

    /// `Σ c_i ⋄ e1^{⋄i}`: substitutes `T ↦ e1` with powers taken in `kind`.
    pub fn substitute_e1(&self, kind: RegKind) -> LinComb {
        let e1 = LinComb::word(Word::E1);
        let mut out = LinComb::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let p = power(&e1, i, |a, b| kind.mul(a, b));
            out += &kind.mul(c, &p);
        }
        out
    }

    /// Evaluates every coefficient with `ζ`.
    pub fn evaluate(&self, ev: &Evaluator) -> Result<NumPoly> {
        let coeffs = self.coeffs.iter().map(|c| ev.eval_lincomb(c)).collect::<Result<Vec<_>>>()?;
        Ok(NumPoly::from_coeffs(coeffs, ev.frac_bits()))
    }

    pub fn to_json_value(&self) -> TPolyJson {
        TPolyJson {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| TCoeffJson { t_degree: i, terms: c.to_json_value().terms })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<TPoly> {
        let v: TPolyJson = serde_json::from_str(s).map_err(|e| MzvError::Parse(e.to_string()))?;
        let mut coeffs = Vec::new();
        for c in v.coeffs {
            if coeffs.len() <= c.t_degree {
                coeffs.resize(c.t_degree + 1, LinComb::zero());
            }
            let lc = LinComb::from_json_value(&crate::lincomb::LinCombJson { terms: c.terms })?;
            coeffs[c.t_degree] += &lc;
        }
        Ok(TPoly::from_coeffs(coeffs))
    }

    /// Renders coefficients in index notation, highest degree first, e.g.
    /// `[T^1] (2) + [T^0] -2·(1,2)`.
    pub fn to_index_string(&self) -> String {
        self.render(LinComb::to_index_string)
    }

    fn render(&self, f: impl Fn(&LinComb) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("[T^{i}] {}", f(c)))
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|c| c.to_string()))
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TCoeffJson {
    #[serde(rename = "T_degree")]
    pub t_degree: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TPolyJson {
    pub coeffs: Vec<TCoeffJson>,
}

thread_local! {
    static REG_CACHE: RefCell<HashMap<(RegKind, Word), TPoly>> = RefCell::new(HashMap::new());
}

fn factorial(n: usize) -> Q {
    Q::from_integer((1..=n).map(BigInt::from).product())
}

/// `reg(e1^m)`: `T^m/m!` for shuffle; for harmonic, from
/// `e1 * e1^{m-1} = m·e1^m + Σ_{a+b=m-2} e1^a e2 e1^b`.
fn reg_e1_power(kind: RegKind, m: usize) -> TPoly {
    match kind {
        RegKind::Shuffle => TPoly::monomial(m, LinComb::one().scale(&factorial(m).recip())),
        RegKind::Harmonic => {
            if m == 0 {
                return TPoly::constant(LinComb::one());
            }
            let t = TPoly::monomial(1, LinComb::one());
            let mut acc = t.mul(&reg_word(kind, e1_power(m - 1)), kind);
            for a in 0..m - 1 {
                let w = e1_power(a).concat(Word::e(2)).concat(e1_power(m - 2 - a));
                acc.add_scaled(&reg_word(kind, w), &Q::from_integer(BigInt::from(-1)));
            }
            acc.scale(&Q::new(BigInt::from(1), BigInt::from(m)))
        }
    }
}

fn e1_power(n: usize) -> Word {
    Word::from_bits(if n == 0 { 0 } else { u64::MAX >> (64 - n) }, n)
}

/// `reg(w)` for a word in `H^1`, memoized per thread.
fn reg_word(kind: RegKind, w: Word) -> TPoly {
    if w.is_admissible() {
        return TPoly::constant(LinComb::word(w));
    }
    if let Some(hit) = REG_CACHE.with(|c| c.borrow().get(&(kind, w)).cloned()) {
        return hit;
    }
    let m = w.trailing_e1();
    let w0 = w.prefix(w.len() - m);
    let out = if w0.is_empty() {
        reg_e1_power(kind, m)
    } else {
        // w0 ⋄ e1^m = w + (terms with fewer trailing e1)
        let base = reg_e1_power(kind, m);
        let mut acc = TPoly::constant(LinComb::word(w0)).mul(&base, kind);
        let prod = kind.mul(&LinComb::word(w0), &LinComb::word(e1_power(m)));
        for (u, c) in prod.iter() {
            if *u != w {
                acc.add_scaled(&reg_word(kind, *u), &-c.clone());
            }
        }
        acc
    };
    REG_CACHE.with(|c| c.borrow_mut().insert((kind, w), out.clone()));
    out
}

/// Regularization extended linearly; the input must lie in `H^1`.
pub fn regularize(w: &LinComb, kind: RegKind) -> Result<TPoly> {
    w.require_h1()?;
    let mut out = TPoly::zero();
    for (u, c) in w.iter() {
        out.add_scaled(&reg_word(kind, *u), c);
    }
    Ok(out)
}

pub fn reg_shuffle(w: &LinComb) -> Result<TPoly> {
    regularize(w, RegKind::Shuffle)
}

pub fn reg_harmonic(w: &LinComb) -> Result<TPoly> {
    regularize(w, RegKind::Harmonic)
}

/// Harmonic regularization of `k★`.
pub fn reg_star_harmonic(k: &Index) -> Result<TPoly> {
    reg_harmonic(&star_index(k))
}

/// Shuffle regularization of `W` of the fence of `k` with base label 1.
pub fn reg_star_shuffle(k: &Index) -> Result<TPoly> {
    if k.is_empty() {
        return Ok(TPoly::constant(LinComb::one()));
    }
    reg_shuffle(&build_zigzag(k, 1)?.w_fast()?)
}

/// `reg_star_harmonic` extended linearly over a combination of indices.
pub fn reg_star_harmonic_lincomb(w: &LinComb) -> Result<TPoly> {
    reg_harmonic(&map_indices(w, |k| Ok(star_index(k)))?)
}

/// `reg_star_shuffle` extended linearly over a combination of indices.
pub fn reg_star_shuffle_lincomb(w: &LinComb) -> Result<TPoly> {
    w.require_h1()?;
    let mut out = TPoly::zero();
    for (u, c) in w.iter() {
        out.add_scaled(&reg_star_shuffle(&u.to_index()?)?, c);
    }
    Ok(out)
}

/// A polynomial in `T` with real coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct NumPoly {
    coeffs: Vec<Real>,
    frac: u32,
}

impl NumPoly {
    pub fn from_coeffs(mut coeffs: Vec<Real>, frac: u32) -> Self {
        while coeffs.last().is_some_and(Real::is_zero) {
            coeffs.pop();
        }
        NumPoly { coeffs, frac }
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Real {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Real::zero(self.frac))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn zero(frac: u32) -> NumPoly {
        NumPoly { coeffs: Vec::new(), frac }
    }

    pub fn sub(&self, other: &NumPoly) -> NumPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        NumPoly::from_coeffs((0..n).map(|i| &self.coeff(i) - &other.coeff(i)).collect(), self.frac)
    }

    /// `self + c·other`.
    pub fn add_scaled(&self, other: &NumPoly, c: &Real) -> NumPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        NumPoly::from_coeffs((0..n).map(|i| &self.coeff(i) + &(c * &other.coeff(i))).collect(), self.frac)
    }

    pub fn mul(&self, other: &NumPoly) -> NumPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return NumPoly::zero(self.frac);
        }
        let mut out = vec![Real::zero(self.frac); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        NumPoly::from_coeffs(out, self.frac)
    }

    /// Largest coefficient magnitude is below `2^{-bits}`.
    pub fn abs_below_pow2(&self, bits: u32) -> bool {
        self.coeffs.iter().all(|c| c.abs_below_pow2(bits))
    }

    /// Largest coefficient magnitude as an `f64`.
    pub fn max_abs_f64(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs().to_f64()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for NumPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.coeffs.iter().enumerate().map(|(i, c)| format!("{}·T^{i}", c.to_decimal(20))).collect();
        write!(f, "NumPoly({})", parts.join(" + "))
    }
}

/// Coefficients of `A(u) = exp(Σ_{n≥2} (-1)^n ζ(n) u^n / n)` and of the two
/// derived series used by `ρ★` and `ρ^{-1}`.
#[derive(Debug, Clone)]
pub struct ACoeffs {
    a: Vec<Real>,
    star: Vec<Real>,
    inverse: Vec<Real>,
}

impl ACoeffs {
    /// Truncates every series at `degree`.
    pub fn new(ev: &Evaluator, degree: usize) -> Result<Self> {
        let frac = ev.frac_bits();
        let mut signed_zeta = vec![Real::zero(frac); degree + 1];
        for (n, z) in signed_zeta.iter_mut().enumerate().skip(2) {
            let v = ev.zeta_single(n as u32)?;
            *z = if n % 2 == 0 { v } else { -v };
        }
        let a = exp_series(&signed_zeta, frac);
        let a_neg: Vec<Real> =
            a.iter().enumerate().map(|(n, x)| if n % 2 == 0 { x.clone() } else { -x.clone() }).collect();
        let star = invert_series(&a_neg, frac);
        let inverse = invert_series(&a, frac);
        Ok(ACoeffs { a, star, inverse })
    }

    pub fn a(&self) -> &[Real] {
        &self.a
    }

    /// Coefficients of `A(-u)^{-1}`.
    pub fn star(&self) -> &[Real] {
        &self.star
    }

    /// Coefficients of `A(u)^{-1}`.
    pub fn inverse(&self) -> &[Real] {
        &self.inverse
    }

    pub fn degree(&self) -> usize {
        self.a.len() - 1
    }
}

/// `exp(Σ_{n≥1} c_n u^n / n)` given `nc[n] = n·c_n`, via
/// `n·e_n = Σ_{k=1}^{n} (k c_k) e_{n-k}`.
fn exp_series(nc: &[Real], frac: u32) -> Vec<Real> {
    let mut e = vec![Real::one(frac)];
    for n in 1..nc.len() {
        let mut acc = Real::zero(frac);
        for k in 1..=n {
            acc += &(&nc[k] * &e[n - k]);
        }
        e.push(acc.div_int(n as u64));
    }
    e
}

/// Reciprocal of a series with constant term 1.
fn invert_series(s: &[Real], frac: u32) -> Vec<Real> {
    let mut b = vec![Real::one(frac)];
    for n in 1..s.len() {
        let mut acc = Real::zero(frac);
        for k in 1..=n {
            acc -= &(&s[k] * &b[n - k]);
        }
        b.push(acc);
    }
    b
}

/// `T^n/n! ↦ Σ_{j≤n} s_{n-j} T^j/j!`, i.e. multiplication of `e^{Tu}` by the
/// series `s`.
fn apply_series(p: &NumPoly, s: &[Real]) -> Result<NumPoly> {
    let deg = match p.degree() {
        None => return Ok(p.clone()),
        Some(d) => d,
    };
    if s.len() <= deg {
        return Err(MzvError::SeriesTooShort { have: s.len() - 1, need: deg });
    }
    let mut out = vec![Real::zero(p.frac); deg + 1];
    for (n, pn) in p.coeffs.iter().enumerate() {
        // T^n = n! · T^n/n!, contributing n!/j! · s_{n-j} to T^j
        let mut ratio = Q::from_integer(BigInt::from(1));
        for j in (0..=n).rev() {
            out[j] += &(pn * &s[n - j]).mul_q(&ratio);
            ratio *= Q::from_integer(BigInt::from(j.max(1)));
        }
    }
    Ok(NumPoly::from_coeffs(out, p.frac))
}

/// `ρ`, the linear map with `ρ(e^{Tu}) = A(u) e^{Tu}`.
pub fn rho_apply(p: &NumPoly, a: &ACoeffs) -> Result<NumPoly> {
    apply_series(p, &a.a)
}

/// `ρ★`, defined as `ρ` with `A(-u)^{-1}` in place of `A(u)`.
pub fn rho_star_apply(p: &NumPoly, a: &ACoeffs) -> Result<NumPoly> {
    apply_series(p, &a.star)
}

/// `ρ^{-1}`, using `A(u)^{-1}`.
pub fn rho_inverse_apply(p: &NumPoly, a: &ACoeffs) -> Result<NumPoly> {
    apply_series(p, &a.inverse)
}

/// `ζ_sh(k;T) - ρ(ζ_*(k;T))` for a combination in `H^1`.
pub fn regularization_defect(w: &LinComb, ev: &Evaluator, a: &ACoeffs) -> Result<NumPoly> {
    let sh = reg_shuffle(w)?.evaluate(ev)?;
    let st = rho_apply(&reg_harmonic(w)?.evaluate(ev)?, a)?;
    Ok(sh.sub(&st))
}

/// `ζ★_sh(k;T) - ρ★(ζ★_*(k;T))`.
pub fn star_regularization_defect(k: &Index, ev: &Evaluator, a: &ACoeffs) -> Result<NumPoly> {
    let sh = reg_star_shuffle(k)?.evaluate(ev)?;
    let st = rho_star_apply(&reg_star_harmonic(k)?.evaluate(ev)?, a)?;
    Ok(sh.sub(&st))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::{q, q_frac};

    fn w(s: &str) -> LinComb {
        LinComb::word(s.parse().unwrap())
    }

    fn poly(terms: &[(usize, LinComb)]) -> TPoly {
        let mut p = TPoly::zero();
        for (i, c) in terms {
            p.add_scaled(&TPoly::monomial(*i, c.clone()), &q(1));
        }
        p
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(reg_shuffle(&w("1")).unwrap(), TPoly::monomial(1, LinComb::one()));
        let want = poly(&[(1, w("10")), (0, w("110").scale(&q(-2)))]);
        assert_eq!(reg_shuffle(&w("101")).unwrap(), want);
        assert_eq!(reg_shuffle(&w("1100")).unwrap(), TPoly::constant(w("1100")));
        assert_eq!(reg_shuffle(&w("11")).unwrap(), TPoly::monomial(2, LinComb::one().scale(&q_frac(1, 2))));
    }

    #[test]
    fn harmonic_examples() {
        assert_eq!(reg_harmonic(&w("1")).unwrap(), TPoly::monomial(1, LinComb::one()));
        let want = poly(&[(1, w("10")), (0, -(w("110") + w("100")))]);
        assert_eq!(reg_harmonic(&w("101")).unwrap(), want);
        let want = poly(&[(2, LinComb::one().scale(&q_frac(1, 2))), (0, w("10").scale(&q_frac(-1, 2)))]);
        assert_eq!(reg_harmonic(&w("11")).unwrap(), want);
        assert!(reg_harmonic(&w("01")).is_err());
    }

    #[test]
    fn star_examples() {
        let k = |s: &str| s.parse::<Index>().unwrap();
        assert_eq!(reg_star_harmonic(&k("1")).unwrap(), TPoly::monomial(1, LinComb::one()));
        let want = poly(&[(2, LinComb::one().scale(&q_frac(1, 2))), (0, w("10").scale(&q_frac(1, 2)))]);
        assert_eq!(reg_star_harmonic(&k("1,1")).unwrap(), want);
        assert_eq!(reg_star_harmonic(&k("2")).unwrap(), TPoly::constant(w("10")));
        assert_eq!(reg_star_shuffle(&k("2")).unwrap(), TPoly::constant(w("10")));
        for n in 1..=6 {
            let want = TPoly::monomial(n, LinComb::one().scale(&factorial(n).recip()));
            assert_eq!(reg_star_shuffle(&Index::ones(n)).unwrap(), want, "n = {n}");
        }
    }

    #[test]
    fn reconstruction_small() {
        for weight in 1..=5 {
            for k in crate::index::compositions(weight) {
                let x = LinComb::index(&k);
                for kind in [RegKind::Shuffle, RegKind::Harmonic] {
                    let p = regularize(&x, kind).unwrap();
                    assert!(p.coeffs().iter().all(LinComb::all_admissible));
                    assert_eq!(p.substitute_e1(kind), x, "{k} {kind:?}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = reg_harmonic(&w("1011")).unwrap();
        let s = p.to_json();
        assert!(s.contains("\"T_degree\""));
        assert_eq!(TPoly::from_json(&s).unwrap(), p);
        assert_eq!(TPoly::from_json(&TPoly::zero().to_json()).unwrap(), TPoly::zero());
    }

    #[test]
    fn rho_examples() {
        let ev = Evaluator::with_precision(128);
        let a = ACoeffs::new(&ev, 6).unwrap();
        let frac = ev.frac_bits();
        assert_eq!(a.a()[0], Real::one(frac));
        assert!(a.a()[1].is_zero());
        let one = NumPoly::from_coeffs(vec![Real::one(frac)], frac);
        assert_eq!(rho_apply(&one, &a).unwrap(), one);
        let t = NumPoly::from_coeffs(vec![Real::zero(frac), Real::one(frac)], frac);
        assert_eq!(rho_apply(&t, &a).unwrap(), t);
        let t2 = NumPoly::from_coeffs(vec![Real::zero(frac), Real::zero(frac), Real::one(frac)], frac);
        let r = rho_apply(&t2, &a).unwrap();
        let z2 = ev.zeta_single(2).unwrap();
        assert!((&r.coeff(0) - &z2).abs_below_pow2(100));
        assert!(r.coeff(1).is_zero());
        assert_eq!(r.coeff(2), Real::one(frac));
        let short = ACoeffs::new(&ev, 1).unwrap();
        assert!(rho_apply(&t2, &short).is_err());
    }

    #[test]
    fn rho_inverse_round_trip() {
        let ev = Evaluator::with_precision(128);
        let a = ACoeffs::new(&ev, 5).unwrap();
        let frac = ev.frac_bits();
        let p = NumPoly::from_coeffs((0..=5).map(|i| Real::from_int(i * i - 3, frac)).collect(), frac);
        let back = rho_inverse_apply(&rho_apply(&p, &a).unwrap(), &a).unwrap();
        assert!(back.sub(&p).abs_below_pow2(100));
    }
}
