use proptest::prelude::*;

use mzv_core::lincomb::{q, q_frac};
use mzv_core::linalg::QMatrix;
use mzv_core::products::{bar_harmonic, harmonic, shuffle, star_index};
use mzv_core::regularization::{regularize, rho_apply, rho_inverse_apply, ACoeffs, NumPoly, RegKind};
use mzv_core::relations::RelationRecord;
use mzv_core::suites::poset_props;
use mzv_core::{Evaluator, Index, LinComb, Poset2, Real, TPoly, Word, Q};

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    (0..=max_len).prop_flat_map(|n| (0..1u64 << n).prop_map(move |b| Word::from_bits(b, n)))
}

fn h1_word(max_len: usize) -> impl Strategy<Value = Word> {
    word(max_len.saturating_sub(1)).prop_map(|w| w.prepend(1))
}

fn index(max_depth: usize, max_part: u32) -> impl Strategy<Value = Index> {
    prop::collection::vec(1..=max_part, 0..=max_depth).prop_map(|v| Index::new(v).unwrap())
}

fn lc(w: Word) -> LinComb {
    LinComb::word(w)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shuffle_commutative_associative(u in word(3), v in word(3), w in word(3)) {
        let (a, b, c) = (lc(u), lc(v), lc(w));
        prop_assert_eq!(shuffle(&a, &b), shuffle(&b, &a));
        prop_assert_eq!(shuffle(&shuffle(&a, &b), &c), shuffle(&a, &shuffle(&b, &c)));
    }

    #[test]
    fn harmonic_products_commutative_associative(u in h1_word(3), v in h1_word(3), w in h1_word(3)) {
        let (a, b, c) = (lc(u), lc(v), lc(w));
        prop_assert_eq!(harmonic(&a, &b).unwrap(), harmonic(&b, &a).unwrap());
        prop_assert_eq!(
            harmonic(&harmonic(&a, &b).unwrap(), &c).unwrap(),
            harmonic(&a, &harmonic(&b, &c).unwrap()).unwrap()
        );
        prop_assert_eq!(bar_harmonic(&a, &b).unwrap(), bar_harmonic(&b, &a).unwrap());
        prop_assert_eq!(
            bar_harmonic(&bar_harmonic(&a, &b).unwrap(), &c).unwrap(),
            bar_harmonic(&a, &bar_harmonic(&b, &c).unwrap()).unwrap()
        );
    }

    #[test]
    fn dagger_is_shuffle_automorphism(u in word(4), v in word(3)) {
        let (a, b) = (lc(u), lc(v));
        prop_assert_eq!(shuffle(&a, &b).dagger(), shuffle(&a.dagger(), &b.dagger()));
        prop_assert_eq!(u.dagger().dagger(), u);
    }

    #[test]
    fn shuffle_term_count_is_binomial(u in word(5), v in word(5)) {
        let n = u.len() + v.len();
        let want: u64 = (0..u.len()).fold(1, |acc, i| acc * (n - i) as u64 / (i + 1) as u64);
        prop_assert_eq!(shuffle(&lc(u), &lc(v)).coeff_sum(), Q::from_integer(want.into()));
    }

    #[test]
    fn index_round_trips(k in index(6, 4)) {
        prop_assert_eq!(Index::from_word(k.to_word()).unwrap(), k.clone());
        if !k.is_empty() {
            prop_assert_eq!(k.hoffman_dual().unwrap().hoffman_dual().unwrap(), k.clone());
            let star = star_index(&k);
            prop_assert_eq!(star.coeff_sum(), Q::from_integer((1u64 << (k.depth() - 1)).into()));
            prop_assert_eq!(star.homogeneous_weight(), Some(k.weight() as usize));
        }
    }

    #[test]
    fn odot_weight_and_depth(k in index(4, 3), l in index(4, 3)) {
        prop_assume!(!k.is_empty() && !l.is_empty());
        let j = k.odot(&l).unwrap();
        prop_assert_eq!(j.weight(), k.weight() + l.weight());
        prop_assert_eq!(j.depth(), k.depth() + l.depth() - 1);
    }

    #[test]
    fn rank_invariant_under_row_permutation_and_scaling(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..7),
        scales in prop::collection::vec(1i64..=5, 7),
        seed in any::<u64>(),
    ) {
        let m = QMatrix::from_i64(&rows).unwrap();
        let r = m.rank_rational();
        prop_assert_eq!(m.rank(), r);
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let mut s = seed;
        for i in (1..order.len()).rev() {
            s = s.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let mut p = QMatrix::new(5);
        for (j, &i) in order.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            let row: Vec<Q> = rows[i].iter().map(|&x| q(x) * q(sign * scales[j]) / q(7)).collect();
            p.push_dense(&row).unwrap();
        }
        prop_assert_eq!(p.rank(), r);
        prop_assert_eq!(p.rank_rational(), r);
    }

    #[test]
    fn regularization_is_multiplicative(u in h1_word(3), v in h1_word(3)) {
        for kind in [RegKind::Shuffle, RegKind::Harmonic] {
            let prod = kind.mul(&lc(u), &lc(v));
            let lhs = regularize(&prod, kind).unwrap();
            let rhs = regularize(&lc(u), kind).unwrap().mul(&regularize(&lc(v), kind).unwrap(), kind);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn regularization_reconstructs(u in h1_word(7)) {
        for kind in [RegKind::Shuffle, RegKind::Harmonic] {
            let p: TPoly = regularize(&lc(u), kind).unwrap();
            prop_assert_eq!(p.substitute_e1(kind), lc(u));
        }
    }

    #[test]
    fn poset_invariants(
        n in 1usize..=7,
        labels in any::<u8>(),
        edges in any::<u32>(),
        seed in any::<u64>(),
    ) {
        let labels: Vec<u8> = (0..n).map(|i| labels >> i & 1).collect();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let rel: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| edges >> (b % 32) & 1 == 1).map(|(_, p)| *p).collect();
        let x = Poset2::new(&labels, &rel).unwrap();
        prop_assert_eq!(poset_props("random", &x, seed).unwrap(), None);
    }

    #[test]
    fn json_round_trips(u in h1_word(5), v in h1_word(4), k in index(3, 3), l in index(3, 3)) {
        let x = harmonic(&lc(u), &lc(v)).unwrap();
        prop_assert_eq!(LinComb::from_json(&x.to_json()).unwrap(), x.clone());
        prop_assert_eq!(LinComb::parse_text(&x.to_string()).unwrap(), x);
        let p = regularize(&lc(u), RegKind::Harmonic).unwrap();
        prop_assert_eq!(TPoly::from_json(&p.to_json()).unwrap(), p);
        if !k.is_empty() && !l.is_empty() {
            let rec = mzv_core::relations::intser_relation(&k, &l).unwrap();
            prop_assert_eq!(RelationRecord::from_json(&rec.to_json()).unwrap(), rec);
        }
    }
}

#[test]
fn rho_inverse_undoes_rho() {
    let ev = Evaluator::with_precision(128);
    let a = ACoeffs::new(&ev, 6).unwrap();
    let frac = ev.frac_bits();
    for deg in 0..=6i64 {
        let p = NumPoly::from_coeffs((0..=deg).map(|i| Real::from_q(&q_frac(i + 1, deg + 2), frac)).collect(), frac);
        let back = rho_inverse_apply(&rho_apply(&p, &a).unwrap(), &a).unwrap();
        assert!(back.sub(&p).abs_below_pow2(100), "degree {deg}");
    }
}
