//! Batch verification suites. Each suite enumerates its cases up to a
//! weight bound, runs them in parallel, and reports failures in case order.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{MzvError, Result};
use crate::index::{indices_up_to, Index};
use crate::lincomb::{LinComb, Q};
use crate::numeric::Evaluator;
use crate::poset::{a_poset, b_poset, build_chain, build_mu_poset, build_zigzag, Poset2};
use crate::products::{bar_harmonic, check_exp_identities, circled_harmonic, harmonic, power, shuffle, star_index};
use crate::real::Real;
use crate::regularization::{
    reg_star_harmonic, reg_star_shuffle, regularization_defect, regularize, rho_star_apply,
    star_regularization_defect, ACoeffs, NumPoly, RegKind, TPoly,
};
use crate::relations::{
    check_kawashima_machinery, double_shuffle_products, duality_relation, enumerate_relations, hoffman_relation,
    kawashima_sides, lemma_identity_sums, restricted_sum_sides, LEMMA_IDENTITY_NAMES,
};
use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemma52,
    ExpStar,
    IntSerNumeric,
    Reg,
    RegStar,
    Kawashima,
    Rsf,
    Hoffman,
    Duality,
    DoubleShuffle,
    WMap,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Lemma52,
        Suite::ExpStar,
        Suite::IntSerNumeric,
        Suite::Reg,
        Suite::RegStar,
        Suite::Kawashima,
        Suite::Rsf,
        Suite::Hoffman,
        Suite::Duality,
        Suite::DoubleShuffle,
        Suite::WMap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma52 => "lemma52",
            Suite::ExpStar => "expstar",
            Suite::IntSerNumeric => "intser-numeric",
            Suite::Reg => "reg",
            Suite::RegStar => "reg-star",
            Suite::Kawashima => "kawashima",
            Suite::Rsf => "rsf",
            Suite::Hoffman => "hoffman",
            Suite::Duality => "duality",
            Suite::DoubleShuffle => "doubleshuffle",
            Suite::WMap => "wmap",
        }
    }

    pub fn default_max_weight(self) -> u32 {
        match self {
            Suite::Lemma52 | Suite::ExpStar | Suite::Rsf | Suite::Duality | Suite::WMap => 8,
            Suite::IntSerNumeric | Suite::Kawashima | Suite::Hoffman | Suite::DoubleShuffle => 7,
            Suite::Reg | Suite::RegStar => 6,
        }
    }

    pub fn run(self, max_weight: u32, prec: u32) -> Result<SuiteResult> {
        let start = Instant::now();
        let (cases, failures) = match self {
            Suite::Lemma52 => lemma52(max_weight)?,
            Suite::ExpStar => expstar(max_weight)?,
            Suite::IntSerNumeric => intser_numeric(max_weight, prec)?,
            Suite::Reg => reg(max_weight, prec)?,
            Suite::RegStar => reg_star(max_weight, prec)?,
            Suite::Kawashima => kawashima(max_weight, prec)?,
            Suite::Rsf => rsf(max_weight, prec)?,
            Suite::Hoffman => hoffman(max_weight, prec)?,
            Suite::Duality => duality(max_weight, prec)?,
            Suite::DoubleShuffle => double_shuffle(max_weight, prec)?,
            Suite::WMap => wmap(max_weight)?,
        };
        Ok(SuiteResult { name: self.name().to_string(), cases, failures, elapsed: start.elapsed() })
    }
}

impl FromStr for Suite {
    type Err = MzvError;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| MzvError::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    /// Case identifier with its witness, in case order.
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One status line, without timing.
    pub fn summary(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("{status} {}: {} cases, {} failures", self.name, self.cases, self.failures.len())
    }
}

type Outcome = (usize, Vec<String>);

/// Runs `check` on every case in parallel; `Some(witness)` is a failure.
fn run_cases<C: Sync>(cases: &[C], check: impl Fn(&C) -> Result<Option<String>> + Sync) -> Outcome {
    let results: Vec<Option<String>> = cases
        .par_iter()
        .map(|c| match check(c) {
            Ok(r) => r,
            Err(e) => Some(format!("error: {e}")),
        })
        .collect();
    (cases.len(), results.into_iter().flatten().collect())
}

fn pairs_up_to(max_weight: u32) -> Vec<(Index, Index)> {
    let all = indices_up_to(max_weight.saturating_sub(1));
    let mut out = Vec::new();
    for k in &all {
        for l in &all {
            if k.weight() + l.weight() <= max_weight {
                out.push((k.clone(), l.clone()));
            }
        }
    }
    out
}

fn admissible_up_to(max_weight: u32) -> Vec<Index> {
    indices_up_to(max_weight).into_iter().filter(|k| k.is_admissible() && k.weight() >= 2).collect()
}

fn sci(x: &Real) -> String {
    x.scientific()
}

fn lemma52(max_weight: u32) -> Result<Outcome> {
    let pairs = pairs_up_to(max_weight);
    let (_, failures) = run_cases(&pairs, |(k, l)| {
        let sums = lemma_identity_sums(k, l)?;
        let bad: Vec<String> = sums
            .iter()
            .zip(LEMMA_IDENTITY_NAMES)
            .filter(|(s, _)| !s.is_zero())
            .map(|(s, name)| format!("{name}: sum = {s}"))
            .collect();
        Ok((!bad.is_empty()).then(|| format!("k=({k}) l=({l}) {}", bad.join("; "))))
    });
    Ok((4 * pairs.len(), failures))
}

fn expstar(max_weight: u32) -> Result<Outcome> {
    let n = max_weight as usize;
    let (elem, comp) = check_exp_identities(n)?;
    let mut failures = Vec::new();
    if !elem {
        failures.push(format!("exp_*(Σ (-1)^(m-1) e_m u^m/m) differs from Σ e1^n u^n through degree {n}"));
    }
    if !comp {
        failures.push(format!("exp_*(Σ e_m u^m/m) differs from Σ (e1^n)★ u^n through degree {n}"));
    }
    Ok((2 * (n + 1), failures))
}

fn intser_numeric(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let mut recs = Vec::new();
    for w in 2..=max_weight {
        recs.extend(enumerate_relations(w, false)?);
    }
    let words: Vec<Word> = (2..=max_weight as usize).flat_map(Word::admissible_basis).collect();
    ev.precompute(&words)?;
    Ok(run_cases(&recs, |r| {
        let res = ev.residual(&r.lhs, &r.rhs)?;
        Ok((!ev.within_tolerance(&res)).then(|| {
            format!("k=({}) l=({}) lhs={} rhs={} residual={}", r.k, r.l, r.lhs.to_index_string(), r.rhs.to_index_string(), sci(&res))
        }))
    }))
}

fn poly_witness(p: &NumPoly) -> String {
    format!("max |coefficient| = {:e}", p.max_abs_f64())
}

fn reg(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let a = ACoeffs::new(&ev, max_weight as usize)?;
    let tol = ev.context().tolerance_bits();
    let ks = indices_up_to(max_weight);
    Ok(run_cases(&ks, |k| {
        let x = LinComb::index(k);
        for kind in [RegKind::Shuffle, RegKind::Harmonic] {
            let p = regularize(&x, kind)?;
            if p.substitute_e1(kind) != x {
                return Ok(Some(format!("k=({k}) {kind:?} regularization {p} does not reconstruct the word")));
            }
        }
        let d = regularization_defect(&x, &ev, &a)?;
        Ok((!d.abs_below_pow2(tol)).then(|| format!("k=({k}) ζ_sh - ρ(ζ_*): {}", poly_witness(&d))))
    }))
}

fn reg_star(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let a = ACoeffs::new(&ev, max_weight as usize)?;
    let tol = ev.context().tolerance_bits();
    let frac = ev.frac_bits();

    let ks = indices_up_to(max_weight);
    let (mut cases, mut failures) = run_cases(&ks, |k| {
        let d = star_regularization_defect(k, &ev, &a)?;
        Ok((!d.abs_below_pow2(tol)).then(|| format!("k=({k}) ζ★_sh - ρ★(ζ★_*): {}", poly_witness(&d))))
    });

    let ns: Vec<usize> = (0..=max_weight as usize).collect();
    let (c, f) = run_cases(&ns, |&n| {
        let ones = Index::ones(n);
        let want = TPoly::monomial(n, LinComb::one().scale(&factorial_recip(n)));
        if reg_star_shuffle(&ones)? != want {
            return Ok(Some(format!("n={n}: ζ★_sh(1^n) is not T^n/n!")));
        }
        let lhs = rho_star_apply(&reg_star_harmonic(&ones)?.evaluate(&ev)?, &a)?;
        let d = lhs.sub(&want.evaluate(&ev)?);
        Ok((!d.abs_below_pow2(tol)).then(|| format!("n={n}: ρ★(ζ★_*(1^n)) - T^n/n!: {}", poly_witness(&d))))
    });
    cases += c;
    failures.extend(f);

    let pairs = pairs_up_to(max_weight);
    let (c, f) = run_cases(&pairs, |(k, l)| {
        let r = k.depth();
        let mut sh = NumPoly::zero(frac);
        let mut st = NumPoly::zero(frac);
        for i in 0..r {
            let ki = k.suffix(i)?;
            let head = k.prefix(i)?.reverse();
            let sign = Real::from_int(if i % 2 == 0 { 1 } else { -1 }, frac);
            let mu_poly = regularize(&crate::poset::mu(&ki, l)?, RegKind::Shuffle)?.evaluate(&ev)?;
            sh = sh.add_scaled(&mu_poly.mul(&reg_star_shuffle(&head)?.evaluate(&ev)?), &sign);
            let cast = circled_harmonic(&LinComb::index(&ki), &star_index(l))?;
            let cast_poly = regularize(&cast, RegKind::Harmonic)?.evaluate(&ev)?;
            st = st.add_scaled(&cast_poly.mul(&reg_star_harmonic(&head)?.evaluate(&ev)?), &sign);
        }
        let tail = l.odot(&k.reverse())?;
        let sign = Real::from_int(if r % 2 == 0 { 1 } else { -1 }, frac);
        sh = sh.add_scaled(&reg_star_shuffle(&tail)?.evaluate(&ev)?, &sign);
        st = st.add_scaled(&reg_star_harmonic(&tail)?.evaluate(&ev)?, &sign);
        let mut bad = Vec::new();
        if !sh.abs_below_pow2(tol) {
            bad.push(format!("shuffle side {}", poly_witness(&sh)));
        }
        if !st.abs_below_pow2(tol) {
            bad.push(format!("harmonic side {}", poly_witness(&st)));
        }
        Ok((!bad.is_empty()).then(|| format!("k=({k}) l=({l}) regularized alternating sums: {}", bad.join("; "))))
    });
    cases += c;
    failures.extend(f);
    Ok((cases, failures))
}

fn factorial_recip(n: usize) -> Q {
    Q::from_integer((1..=n as u64).product::<u64>().into()).recip()
}

fn kawashima(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let mut triples = Vec::new();
    for (k, l) in pairs_up_to(max_weight.saturating_sub(1)) {
        for m in 1..=(max_weight - k.weight() - l.weight()) as usize {
            triples.push((m, k.clone(), l.clone()));
        }
    }
    let (mut cases, mut failures) = run_cases(&triples, |(m, k, l)| {
        let (lhs, rhs) = kawashima_sides(*m, k, l)?;
        let mut total = ev.zero();
        for (a, b) in &lhs {
            total += &(&ev.eval_lincomb(a)? * &ev.eval_lincomb(b)?);
        }
        let res = (&total - &ev.eval_lincomb(&rhs)?).abs();
        Ok((!ev.within_tolerance(&res)).then(|| {
            let terms: Vec<String> =
                lhs.iter().map(|(a, b)| format!("ζ({})·ζ({})", a.to_index_string(), b.to_index_string())).collect();
            format!("m={m} k=({k}) l=({l}) lhs={} rhs=ζ({}) residual={}", terms.join(" + "), rhs.to_index_string(), sci(&res))
        }))
    });

    let mach_weight = max_weight.min(5);
    let mut mach = Vec::new();
    for m in 0..=3usize {
        for (k, l) in pairs_up_to(mach_weight) {
            mach.push((m, k, l));
        }
    }
    let (c, f) = run_cases(&mach, |(m, k, l)| {
        let rep = check_kawashima_machinery(*m, k, l)?;
        Ok((!rep.all()).then(|| format!("machinery m={m} k=({k}) l=({l}): {rep:?}")))
    });
    cases += c;
    failures.extend(f);
    Ok((cases, failures))
}

fn rsf(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let mut triples = Vec::new();
    for k in 2..=max_weight {
        for p in 1..k {
            for q in 1..=k - p {
                triples.push((k, p, q));
            }
        }
    }
    Ok(run_cases(&triples, |&(k, p, q)| {
        let (lhs, rhs) = restricted_sum_sides(k, p, q)?;
        let res = ev.residual(&lhs, &rhs)?;
        Ok((!ev.within_tolerance(&res)).then(|| {
            format!("(k,p,q)=({k},{p},{q}) lhs={} rhs={} residual={}", lhs.to_index_string(), rhs.to_index_string(), sci(&res))
        }))
    }))
}

fn hoffman(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let ks = admissible_up_to(max_weight);
    Ok(run_cases(&ks, |k| {
        let (rec, direct) = hoffman_relation(k)?;
        let diff = rec.difference();
        if diff != direct && diff != -direct.clone() {
            return Ok(Some(format!(
                "k=({k}) int-ser difference {} is not ± the direct element {}",
                diff.to_index_string(),
                direct.to_index_string()
            )));
        }
        let res = ev.eval_lincomb(&direct)?.abs();
        Ok((!ev.within_tolerance(&res)).then(|| format!("k=({k}) ζ({}) = {}", direct.to_index_string(), sci(&res))))
    }))
}

fn duality(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let words: Vec<Word> = (2..=max_weight as usize).flat_map(Word::admissible_basis).collect();
    ev.precompute(&words)?;
    Ok(run_cases(&words, |w| {
        let d = duality_relation(&LinComb::word(*w))?;
        let res = ev.eval_lincomb(&d)?.abs();
        Ok((!ev.within_tolerance(&res)).then(|| format!("w={} residual={}", w.to_letters_string(), sci(&res))))
    }))
}

fn double_shuffle(max_weight: u32, prec: u32) -> Result<Outcome> {
    let ev = Evaluator::with_precision(prec);
    let adm = admissible_up_to(max_weight);
    let mut pairs = Vec::new();
    for k in &adm {
        for l in &adm {
            if k.weight() + l.weight() <= max_weight {
                pairs.push((k.clone(), l.clone()));
            }
        }
    }
    Ok(run_cases(&pairs, |(k, l)| {
        let (sh, st) = double_shuffle_products(k, l)?;
        let prod = &ev.mzv(k)? * &ev.mzv(l)?;
        let r_sh = (&ev.eval_lincomb(&sh)? - &prod).abs();
        let r_st = (&ev.eval_lincomb(&st)? - &prod).abs();
        Ok((!(ev.within_tolerance(&r_sh) && ev.within_tolerance(&r_st)))
            .then(|| format!("k=({k}) l=({l}) shuffle residual={} harmonic residual={}", sci(&r_sh), sci(&r_st))))
    }))
}

/// Number of linear extensions by testing every permutation.
pub fn brute_force_extensions(x: &Poset2) -> u64 {
    fn rec(x: &Poset2, placed: &mut Vec<usize>, used: &mut Vec<bool>) -> u64 {
        let n = x.len();
        if placed.len() == n {
            let ok = (0..n).all(|i| (i + 1..n).all(|j| !x.less(placed[j], placed[i])));
            return u64::from(ok);
        }
        let mut total = 0;
        for e in 0..n {
            if !used[e] {
                used[e] = true;
                placed.push(e);
                total += rec(x, placed, used);
                placed.pop();
                used[e] = false;
            }
        }
        total
    }
    rec(x, &mut Vec::new(), &mut vec![false; x.len()])
}

/// Chains, fences with either base label, μ-posets and grafts, each with at
/// most `max_elements` elements, tagged with a description.
pub fn generated_posets(max_elements: u32) -> Result<Vec<(String, Poset2)>> {
    let mut out = Vec::new();
    for k in indices_up_to(max_elements) {
        out.push((format!("chain({k})"), build_chain(&k)?));
        out.push((format!("fence({k},0)"), build_zigzag(&k, 0)?));
        out.push((format!("fence({k},1)"), build_zigzag(&k, 1)?));
        for m in 1..=(max_elements - k.weight()) as usize {
            out.push((format!("A_{m}({k})"), a_poset(m, &k)?));
            out.push((format!("B_{m}({k})"), b_poset(m, &k)?));
        }
    }
    for (k, l) in pairs_up_to(max_elements) {
        out.push((format!("mu({k};{l})"), build_mu_poset(&k, &l)?));
    }
    Ok(out)
}

/// The poset invariants: both W routes agree, the coefficient sum counts
/// linear extensions, `W(X)† = W(X^t)`, admissibility is preserved, and a
/// randomized pair order (seeded by `seed`) gives the same W.
pub fn poset_props(name: &str, x: &Poset2, seed: u64) -> Result<Option<String>> {
    let fast = x.w_fast()?;
    let slow = x.w_map();
    if fast != slow {
        return Ok(Some(format!("{name} [{x}]: resolver {slow} vs extension sum {fast}")));
    }
    if x.len() <= 7 {
        let count = brute_force_extensions(x);
        if fast.coeff_sum() != Q::from_integer(count.into()) {
            return Ok(Some(format!("{name} [{x}]: coefficient sum {} vs {count} extensions", fast.coeff_sum())));
        }
    }
    if fast.dagger() != x.transpose().w_fast()? {
        return Ok(Some(format!("{name} [{x}]: W(X)† differs from W(X^t)")));
    }
    if x.is_admissible() && !fast.all_admissible() {
        return Ok(Some(format!("{name} [{x}]: admissible poset with non-admissible words")));
    }
    if x.len() <= 7 {
        let mut state = 0x9e37_79b9_7f4a_7c15u64 ^ seed ^ x.len() as u64;
        let mut pick = |pairs: &[(usize, usize)]| {
            state = state.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            (state >> 33) as usize % pairs.len()
        };
        if x.w_map_with(&mut pick) != fast {
            return Ok(Some(format!("{name} [{x}]: W depends on the resolution order")));
        }
    }
    Ok(None)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Pairwise word-algebra invariants for `u`, `v`: commutativity of the three
/// products (the last two on `H^1`), the shuffle term count, dagger as a
/// shuffle automorphism, and closure of `H^0`.
pub fn word_pair_props(u: Word, v: Word) -> Result<Option<String>> {
    let (a, b) = (LinComb::word(u), LinComb::word(v));
    let tag = format!("u={} v={}", u.to_letters_string(), v.to_letters_string());
    let sh = shuffle(&a, &b);
    if sh != shuffle(&b, &a) {
        return Ok(Some(format!("{tag}: shuffle not commutative")));
    }
    let want = binomial(u.len() + v.len(), u.len());
    if sh.coeff_sum() != Q::from_integer(want.into()) {
        return Ok(Some(format!("{tag}: shuffle has {} terms, expected {want}", sh.coeff_sum())));
    }
    if sh.dagger() != shuffle(&a.dagger(), &b.dagger()) {
        return Ok(Some(format!("{tag}: dagger is not multiplicative for shuffle")));
    }
    if u.in_h1() && v.in_h1() {
        let st = harmonic(&a, &b)?;
        if st != harmonic(&b, &a)? {
            return Ok(Some(format!("{tag}: harmonic product not commutative")));
        }
        if bar_harmonic(&a, &b)? != bar_harmonic(&b, &a)? {
            return Ok(Some(format!("{tag}: bar-harmonic product not commutative")));
        }
        if u.is_admissible() && v.is_admissible() && !(sh.all_admissible() && st.all_admissible()) {
            return Ok(Some(format!("{tag}: product of admissible words leaves H^0")));
        }
    }
    Ok(None)
}

/// Associativity of the three products on `u`, `v`, `w`.
pub fn word_triple_props(u: Word, v: Word, w: Word) -> Result<Option<String>> {
    let (a, b, c) = (LinComb::word(u), LinComb::word(v), LinComb::word(w));
    let tag = format!("u={} v={} w={}", u.to_letters_string(), v.to_letters_string(), w.to_letters_string());
    if shuffle(&shuffle(&a, &b), &c) != shuffle(&a, &shuffle(&b, &c)) {
        return Ok(Some(format!("{tag}: shuffle not associative")));
    }
    if u.in_h1() && v.in_h1() && w.in_h1() {
        if harmonic(&harmonic(&a, &b)?, &c)? != harmonic(&a, &harmonic(&b, &c)?)? {
            return Ok(Some(format!("{tag}: harmonic product not associative")));
        }
        if bar_harmonic(&bar_harmonic(&a, &b)?, &c)? != bar_harmonic(&a, &bar_harmonic(&b, &c)?)? {
            return Ok(Some(format!("{tag}: bar-harmonic product not associative")));
        }
    }
    Ok(None)
}

/// Index invariants: Hoffman duality is an involution, `k★` has
/// `2^{depth-1}` terms of the same weight, and words round-trip.
pub fn index_props(k: &Index) -> Result<Option<String>> {
    if Index::from_word(k.to_word())? != *k {
        return Ok(Some(format!("k=({k}): word round trip failed")));
    }
    if k.is_empty() {
        return Ok(None);
    }
    if k.hoffman_dual()?.hoffman_dual()? != *k {
        return Ok(Some(format!("k=({k}): Hoffman dual is not an involution")));
    }
    let terms = k.star_terms();
    if terms.len() != 1 << (k.depth() - 1) || terms.iter().any(|t| t.weight() != k.weight()) {
        return Ok(Some(format!("k=({k}): star expansion has {} terms", terms.len())));
    }
    Ok(None)
}

/// `⊙` adds weights and depths minus one.
pub fn index_pair_props(k: &Index, l: &Index) -> Result<Option<String>> {
    if k.is_empty() || l.is_empty() {
        return Ok(None);
    }
    let j = k.odot(l)?;
    let ok = j.weight() == k.weight() + l.weight() && j.depth() == k.depth() + l.depth() - 1;
    Ok((!ok).then(|| format!("k=({k}) l=({l}): odot gives ({j})")))
}

fn wmap(max_weight: u32) -> Result<Outcome> {
    let posets = generated_posets(max_weight)?;
    let (mut cases, mut failures) = run_cases(&posets, |(name, x)| poset_props(name, x, 0));

    let mus = pairs_up_to(max_weight);
    let (c, f) = run_cases(&mus, |(k, l)| {
        let want = (k.depth() + l.depth() - 1) as u32;
        let w = crate::poset::mu(k, l)?;
        let bad = w.words().find(|u| u.count_e1() != want);
        Ok(bad.map(|u| format!("mu(({k}),({l})) word {} has e1-count != {want}", u.to_letters_string())))
    });
    cases += c;
    failures.extend(f);

    let small = indices_up_to(max_weight.min(6) / 2 + 1);
    let mut unions = Vec::new();
    for a in &small {
        for b in &small {
            if a.weight() + b.weight() <= max_weight.min(7) {
                unions.push((a.clone(), b.clone()));
            }
        }
    }
    let (c, f) = run_cases(&unions, |(a, b)| {
        let x = build_zigzag(a, 1)?;
        let y = build_chain(b)?;
        let lhs = x.disjoint_union(&y)?.w_fast()?;
        let rhs = shuffle(&x.w_fast()?, &y.w_fast()?);
        Ok((lhs != rhs).then(|| format!("fence({a},1) ⊔ chain({b}): W of union is not the shuffle")))
    });
    cases += c;
    failures.extend(f);

    let ns: Vec<usize> = (1..=max_weight as usize).collect();
    let (c, f) = run_cases(&ns, |&n| {
        let lhs = build_zigzag(&Index::ones(n), 1)?.w_fast()?;
        let e1 = LinComb::word(Word::E1);
        let rhs = power(&e1, n, shuffle).scale(&factorial_recip(n));
        Ok((lhs != rhs).then(|| format!("n={n}: W(fence(1^n,1)) is not e1^(⧢n)/n!")))
    });
    cases += c;
    failures.extend(f);

    Ok((cases, failures))
}
