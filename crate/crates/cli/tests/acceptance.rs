//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runtime limits are part of each criterion.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use mzv_core::index::indices_up_to;
use mzv_core::lincomb::q;
use mzv_core::linalg::{conjectural_dim, dimension_report, relation_matrix};
use mzv_core::numeric::{EvalContext, Evaluator};
use mzv_core::poset::mu;
use mzv_core::products::{circled_harmonic, star_index};
use mzv_core::relations::enumerate_relations;
use mzv_core::suites::{
    generated_posets, index_pair_props, index_props, poset_props, word_pair_props, word_triple_props, Suite,
};
use mzv_core::{Index, LinComb, Poset2, Word};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<String, String>;

struct Report {
    failed: usize,
}

impl Report {
    fn run(&mut self, id: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let mut res = f();
        let t = start.elapsed();
        if res.is_ok() && t > limit {
            res = Err(format!("took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()));
        }
        match res {
            Ok(detail) => println!("PASS [{id:>2}] {name}: {detail} ({:.2}s)", t.as_secs_f64()),
            Err(why) => {
                self.failed += 1;
                println!("FAIL [{id:>2}] {name}: {why} ({:.2}s)", t.as_secs_f64());
            }
        }
    }
}

fn ix(s: &str) -> Index {
    s.parse().unwrap()
}

fn idx_lc(terms: &[(i64, &str)]) -> LinComb {
    let mut out = LinComb::zero();
    for (c, k) in terms {
        out.add_term(ix(k).to_word(), q(*c));
    }
    out
}

fn word_lc(terms: &[&str]) -> LinComb {
    let mut out = LinComb::zero();
    for w in terms {
        out.add_term(w.parse().unwrap(), q(1));
    }
    out
}

fn suite(s: Suite, max_weight: u32, prec: u32) -> Outcome {
    let r = s.run(max_weight, prec).map_err(|e| e.to_string())?;
    if r.passed() {
        Ok(format!("{} cases", r.cases))
    } else {
        Err(format!("{} of {} cases failed; first: {}", r.failures.len(), r.cases, r.failures[0]))
    }
}

fn first_failure(results: impl IntoIterator<Item = mzv_core::Result<Option<String>>>) -> Result<usize, String> {
    let mut n = 0;
    for r in results {
        n += 1;
        match r {
            Ok(None) => {}
            Ok(Some(w)) => return Err(w),
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(n)
}

fn criterion_1() -> Outcome {
    let (k, l) = (ix("1,1"), ix("2,1"));
    let lhs = mu(&k, &l).map_err(|e| e.to_string())?;
    let rhs = circled_harmonic(&LinComb::index(&k), &star_index(&l)).map_err(|e| e.to_string())?;
    let want_lhs = idx_lc(&[(6, "1,1,3"), (2, "1,2,2"), (1, "2,1,2")]);
    let want_rhs = idx_lc(&[(1, "1,2,2"), (1, "2,1,2"), (1, "3,2"), (1, "1,4")]);
    if lhs != want_lhs || rhs != want_rhs {
        return Err(format!("got {} = {}", lhs.to_index_string(), rhs.to_index_string()));
    }
    let out = Command::new(env!("CARGO_BIN_EXE_mzv")).args(["mu", "1,1", "2,1"]).output().map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    let line = format!("relation: {} = {}", want_lhs.to_index_string(), want_rhs.to_index_string());
    if !out.status.success() || !text.lines().any(|x| x == line) {
        return Err(format!("CLI printed {text:?}"));
    }
    Ok(line)
}

fn criterion_2() -> Outcome {
    let chain = Poset2::new(&[1, 1, 0], &[(0, 1), (1, 2)]).map_err(|e| e.to_string())?;
    let square = Poset2::new(&[1, 0, 1, 0], &[(0, 1), (0, 2), (1, 3), (2, 3)]).map_err(|e| e.to_string())?;
    let a = (chain.w_map(), word_lc(&["110"]));
    let b = (square.w_map(), word_lc(&["1100", "1010"]));
    if a.0 != a.1 || b.0 != b.1 || square.w_fast().ok() != Some(b.1.clone()) {
        return Err(format!("got {} and {}", a.0, b.0));
    }
    Ok(format!("{} ; {}", a.0, b.0))
}

fn criterion_5() -> Outcome {
    let want = [1u64, 1, 1, 2, 2, 3, 4, 5, 7, 9, 12];
    let start = Instant::now();
    let mut dims = Vec::new();
    for w in 2..=12u32 {
        let row = dimension_report(w).map_err(|e| e.to_string())?;
        if row.expected != want[w as usize - 2] || conjectural_dim(w as usize) != want[w as usize - 2] {
            return Err(format!("recurrence gives {} at weight {w}", row.expected));
        }
        if !row.matches() {
            return Err(format!("weight {w}: rank {} gives dim {}, expected {}", row.rank, row.dim, row.expected));
        }
        if w <= 9 {
            let recs = enumerate_relations(w, true).map_err(|e| e.to_string())?;
            let exact = relation_matrix(w as usize, &recs).map_err(|e| e.to_string())?.rank_rational();
            if exact != row.rank {
                return Err(format!("weight {w}: modular rank {} vs rational rank {exact}", row.rank));
            }
        }
        if w == 10 && start.elapsed() > Duration::from_secs(600) {
            return Err(format!("weights up to 10 took {:.0}s", start.elapsed().as_secs_f64()));
        }
        dims.push(row.dim.to_string());
    }
    Ok(format!("dims 2..12 = ({}); ranks cross-checked exactly through weight 9", dims.join(",")))
}

fn criterion_6() -> Outcome {
    let ctx = EvalContext::new(192);
    if ctx.tolerance_bits() != 160 {
        return Err(format!("tolerance is 2^-{}", ctx.tolerance_bits()));
    }
    suite(Suite::IntSerNumeric, 7, 192).map(|d| format!("{d}, every residual < 2^-160"))
}

fn criterion_7() -> Outcome {
    let a = suite(Suite::Reg, 6, 192)?;
    let b = suite(Suite::RegStar, 6, 192)?;
    Ok(format!("regularization {a}; star regularization {b}"))
}

fn criterion_8() -> Outcome {
    let ev = Evaluator::with_precision(256);
    let z = |s: &str| ev.mzv(&ix(s)).map_err(|e| e.to_string());
    let d1 = (&z("1,2")? - &z("3")?).abs();
    let d2 = (&z("2,2")?.mul_int(4) - &z("4")?.mul_int(3)).abs().div_int(4);
    if !ev.within_tolerance(&d1) || !ev.within_tolerance(&d2) {
        return Err(format!("residuals {} and {}", d1.scientific(), d2.scientific()));
    }
    Ok(format!("residuals {} and {} at 256 bits", d1.scientific(), d2.scientific()))
}

fn criterion_9() -> Outcome {
    let ev = Evaluator::default();
    let z = |s: &str| ev.mzv(&ix(s)).map_err(|e| e.to_string());
    let z2 = z("2")?;
    let lhs = &z2 * &z2;
    let rhs = &(&z("1,1,2")?.mul_int(2) + &z("2,2")?) - &z("1,3")?;
    let res = (&lhs - &rhs).abs();
    if !ev.within_tolerance(&res) {
        return Err(format!("worked case residual {}", res.scientific()));
    }
    // ζ(2)^2 = π^4/36
    let pi4 = std::f64::consts::PI.powi(4) / 36.0;
    if (lhs.to_f64() - pi4).abs() > 1e-14 {
        return Err(format!("ζ(2)^2 = {} vs π^4/36 = {pi4}", lhs.to_f64()));
    }
    let s = suite(Suite::Kawashima, 7, 192)?;
    Ok(format!("worked case residual {}; {s}", res.scientific()))
}

fn criterion_10() -> Outcome {
    let a = suite(Suite::Rsf, 8, 192)?;
    let b = suite(Suite::Hoffman, 7, 192)?;
    for k in indices_up_to(7).into_iter().filter(|k| k.is_admissible() && !k.is_empty()) {
        let (rec, _) = mzv_core::relations::hoffman_relation(&k).map_err(|e| e.to_string())?;
        let mut tilde = k.parts().to_vec();
        *tilde.last_mut().unwrap() -= 1;
        if rec.k != Index::new(tilde).unwrap() || rec.l != ix("1,1") {
            return Err(format!("k=({k}): relation built from ({}),({})", rec.k, rec.l));
        }
    }
    Ok(format!("restricted sums {a}; Hoffman {b}"))
}

fn all_words(max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|n| (0..1u64 << n).map(move |b| Word::from_bits(b, n))).collect()
}

fn random_word(rng: &mut StdRng, len: usize) -> Word {
    Word::from_bits(rng.gen::<u64>() & ((1u64 << len) - 1), len)
}

fn random_poset(rng: &mut StdRng, n: usize) -> Poset2 {
    let labels: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let p = rng.gen_range(0.1..0.6);
    let rel: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(p)).collect();
    Poset2::new(&labels, &rel).unwrap()
}

fn criterion_11() -> Outcome {
    const RANDOM: usize = 10_000;
    let mut rng = StdRng::seed_from_u64(0x6d7a_7631);

    // exhaustive, weight ≤ 5
    let words = all_words(5);
    let pairs = first_failure(words.iter().flat_map(|&u| words.iter().map(move |&v| word_pair_props(u, v))))?;
    let small = all_words(3);
    let mut triple_cases = Vec::new();
    for &u in &small {
        for &v in &small {
            for &w in &small {
                if u.len() + v.len() + w.len() <= 5 || (u.len() <= 2 && v.len() <= 2 && w.len() <= 2) {
                    triple_cases.push((u, v, w));
                }
            }
        }
    }
    let triples = first_failure(triple_cases.into_iter().map(|(u, v, w)| word_triple_props(u, v, w)))?;
    let ks = indices_up_to(10);
    let singles = first_failure(ks.iter().map(index_props))?;
    let ks5 = indices_up_to(5);
    let odots = first_failure(ks5.iter().flat_map(|k| ks5.iter().map(move |l| index_pair_props(k, l))))?;
    let mut posets = 0;
    for n in 0..=5usize {
        let all_pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        for mask in 0u32..1 << all_pairs.len() {
            let rel: Vec<(usize, usize)> =
                all_pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, p)| *p).collect();
            for lab in 0u32..1 << n {
                let labels: Vec<u8> = (0..n).map(|i| (lab >> i & 1) as u8).collect();
                let x = Poset2::new(&labels, &rel).map_err(|e| e.to_string())?;
                posets += first_failure([poset_props("exhaustive", &x, mask as u64)])?;
            }
        }
    }
    let generated = generated_posets(5).map_err(|e| e.to_string())?;
    posets += first_failure(generated.iter().map(|(name, x)| poset_props(name, x, 1)))?;
    let wmap = suite(Suite::WMap, 5, 192)?;

    // randomized, weight ≤ 8
    let mut random = 0;
    for i in 0..RANDOM {
        let total = rng.gen_range(0..=8usize);
        let a = rng.gen_range(0..=total);
        let b = rng.gen_range(0..=total - a);
        let (u, v, w) = (random_word(&mut rng, a), random_word(&mut rng, b), random_word(&mut rng, total - a - b));
        let (u, v) = if i % 2 == 0 { (u, v) } else { (u.prepend(1), v.prepend(1)) };
        random += first_failure([word_pair_props(u, v), word_triple_props(u, v, w)])?;
    }
    for _ in 0..RANDOM {
        let n = rng.gen_range(1..=8);
        let x = random_poset(&mut rng, n);
        random += first_failure([poset_props("random", &x, rng.gen())])?;
    }
    for _ in 0..RANDOM {
        let k = Index::new((0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=2)).collect()).unwrap();
        let l = Index::new((0..rng.gen_range(1..=4)).map(|_| rng.gen_range(1..=2)).collect()).unwrap();
        random += first_failure([index_props(&k), index_pair_props(&k, &l)])?;
    }
    let wmap8 = suite(Suite::WMap, 8, 192)?;
    Ok(format!(
        "exhaustive: {pairs} word pairs, {triples} triples, {} index checks, {posets} posets, wmap {wmap}; \
         randomized: {random} checks over {} cases, wmap at 8 elements {wmap8}",
        singles + odots,
        3 * RANDOM
    ))
}

fn main() -> ExitCode {
    let mut r = Report { failed: 0 };
    let secs = Duration::from_secs;
    r.run(1, "weight-5 example mu(1,1;2,1) = (1,1) ⊛ (2,1)★", secs(1), criterion_1);
    r.run(2, "W of the chain and square examples", secs(1), criterion_2);
    r.run(3, "four alternating-sum identities, total weight ≤ 8", secs(300), || suite(Suite::Lemma52, 8, 192));
    r.run(4, "exp_* identities through degree 8", secs(60), || suite(Suite::ExpStar, 8, 192));
    r.run(5, "dimension table, weights 2-12", secs(7200), criterion_5);
    r.run(6, "Int-Ser residuals, weight ≤ 7, 192 bits", secs(600), criterion_6);
    r.run(7, "regularization theorems, weight ≤ 6", secs(600), criterion_7);
    r.run(8, "Euler cross-checks at 256 bits", secs(60), criterion_8);
    r.run(9, "Kawashima relation and machinery", secs(600), criterion_9);
    r.run(10, "restricted sum formula and Hoffman relation", secs(600), criterion_10);
    r.run(11, "word algebra and poset property suites", secs(1800), criterion_11);
    println!("{} criteria failed", r.failed);
    if r.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
