//! Independent numerical oracles: direct truncated series with explicit
//! tail bounds, checked against the high-precision evaluator.

use mzv_core::products::{circled_harmonic, star_index};
use mzv_core::relations::{basis_column, basis_size, enumerate_relations};
use mzv_core::{Evaluator, Index, LinComb, Word};

fn ix(s: &str) -> Index {
    s.parse().unwrap()
}

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Truncation of the nested series for `ζ(k ⊛ l★)`: the sum over
/// `0 < m_1 < ... < m_r = n_s >= ... >= n_1 >= 1` with `m_r <= n_max`.
fn cast_series(k: &[u32], l: &[u32], n_max: usize) -> f64 {
    let pw = |n: usize, e: u32| (n as f64).powi(-(e as i32));
    // strict[j][n]: sum over m_1 < ... < m_j = n of the first j factors of k
    let mut strict = vec![0.0; n_max + 1];
    for (n, s) in strict.iter_mut().enumerate().skip(1) {
        *s = pw(n, k[0]);
    }
    for &e in &k[1..] {
        let mut acc = 0.0;
        let mut next = vec![0.0; n_max + 1];
        for n in 1..=n_max {
            next[n] = acc * pw(n, e);
            acc += strict[n];
        }
        strict = next;
    }
    let mut weak = vec![0.0; n_max + 1];
    for (n, s) in weak.iter_mut().enumerate().skip(1) {
        *s = pw(n, l[0]);
    }
    for &e in &l[1..] {
        let mut acc = 0.0;
        let mut next = vec![0.0; n_max + 1];
        for n in 1..=n_max {
            acc += weak[n];
            next[n] = acc * pw(n, e);
        }
        weak = next;
    }
    (1..=n_max).rev().map(|n| strict[n] * weak[n]).sum()
}

fn cast_value(ev: &Evaluator, k: &str, l: &str) -> f64 {
    let c = circled_harmonic(&LinComb::index(&ix(k)), &star_index(&ix(l))).unwrap();
    ev.eval_lincomb(&c).unwrap().to_f64()
}

#[test]
fn zeta_two_matches_truncated_sum_with_tail_bound() {
    let n = 1_000_000usize;
    let partial: f64 = (1..=n).rev().map(|m| 1.0 / (m as f64 * m as f64)).sum();
    // 1/(N+1) < Σ_{m>N} 1/m^2 < 1/N
    let (lo, hi) = (partial + 1.0 / (n as f64 + 1.0), partial + 1.0 / n as f64);
    let z2 = Evaluator::with_precision(128).zeta_single(2).unwrap().to_f64();
    assert!(lo - 1e-13 <= z2 && z2 <= hi + 1e-13, "{lo} {z2} {hi}");
    assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-15);
}

#[test]
fn zeta_four_is_two_fifths_zeta_two_squared() {
    let ev = Evaluator::with_precision(192);
    let z2 = ev.zeta_single(2).unwrap();
    let lhs = ev.zeta_single(4).unwrap().mul_int(5);
    let rhs = (&z2 * &z2).mul_int(2);
    assert!(ev.within_tolerance(&(&lhs - &rhs)));
}

#[test]
fn cast_series_bracket_for_slowest_case() {
    // k=(1), l=(1,1): the series is Σ H_m / m^2 = 2ζ(1,2), with tail of order log N / N
    let n = 100_000usize;
    let partial = cast_series(&[1], &[1, 1], n);
    let nf = n as f64;
    let lo = partial + ((nf + 1.0).ln() + 1.0 + EULER_GAMMA) / (nf + 1.0);
    let hi = partial + (nf.ln() + 1.0 + EULER_GAMMA) / nf + 1.0 / (4.0 * nf * nf);
    let ev = Evaluator::with_precision(128);
    let exact = cast_value(&ev, "1", "1,1");
    let two_z12 = ev.mzv(&ix("1,2")).unwrap().mul_int(2).to_f64();
    assert!((exact - two_z12).abs() < 1e-15);
    assert!(lo - 1e-12 <= exact && exact <= hi + 1e-12, "{lo} {exact} {hi}");
    assert!(hi - lo < 2e-9);
}

#[test]
fn cast_series_matches_for_fast_cases() {
    let ev = Evaluator::with_precision(128);
    for (k, l) in [("2", "2"), ("1,2", "2"), ("2", "1,3"), ("1,1", "3"), ("3", "1,1,1")] {
        let kp: Vec<u32> = ix(k).parts().to_vec();
        let lp: Vec<u32> = ix(l).parts().to_vec();
        let series = cast_series(&kp, &lp, 100_000);
        let exact = cast_value(&ev, k, l);
        assert!((series - exact).abs() < 1e-10, "k={k} l={l}: {series} vs {exact}");
    }
}

#[test]
fn relation_rows_are_orthogonal_to_zeta_values() {
    let ev = Evaluator::with_precision(160);
    for w in 2..=7u32 {
        let mut values = vec![ev.zero(); basis_size(w as usize)];
        for word in Word::admissible_basis(w as usize) {
            values[basis_column(word)] = ev.mzv_word(word).unwrap();
        }
        for rec in enumerate_relations(w, true).unwrap() {
            let mut acc = ev.zero();
            for (c, x) in &rec.vector {
                acc += &values[*c].mul_q(x);
            }
            assert!(ev.within_tolerance(&acc.abs()), "k=({}) l=({})", rec.k, rec.l);
        }
    }
}

#[test]
fn sum_formula() {
    let ev = Evaluator::with_precision(128);
    for k in 2..=8u32 {
        let zk = ev.zeta_single(k).unwrap();
        for depth in 1..k as usize {
            let mut acc = ev.zero();
            for idx in mzv_core::index::compositions_with_depth(k, depth) {
                if idx.is_admissible() {
                    acc += &ev.mzv(&idx).unwrap();
                }
            }
            assert!(ev.within_tolerance(&(&acc - &zk).abs()), "k={k} depth={depth}");
        }
    }
}

#[test]
fn doubling_precision_reproduces_digits() {
    let lo = Evaluator::with_precision(128);
    let hi = Evaluator::with_precision(256);
    for k in ["2,3", "1,1,4", "3,1,2"] {
        let a = lo.mzv(&ix(k)).unwrap();
        let b = hi.mzv(&ix(k)).unwrap().with_frac(lo.frac_bits());
        assert!((&a - &b).abs().abs_below_pow2(120), "{k}");
    }
}
