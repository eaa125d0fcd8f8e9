//! One PASS/FAIL line per acceptance criterion, with its runtime budget.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nadyn::fixtures::{self, Payload};
use nadyn::markov::{analyze_default, refine_to_markov, RefineOptions};
use nadyn::realize::{verify_realization, GlueSpec, QPoly, Term};
use nadyn::roots::default_tol;
use nadyn::zeta::excluded_product;
use nadyn::{
    augment, det_i_minus_ta, leading_root, realize_admissible, series_consistency, zeta_quotient,
    BigRational, FieldContext, IntMatrix, IntPolynomial, Placement, RealizeOptions, ValuedRational,
};
use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn fixture_matrix(name: &str) -> (IntMatrix, Vec<usize>) {
    match fixtures::load(name).unwrap().payload {
        Payload::Matrix { matrix, excluded } => (matrix, excluded),
        Payload::Realization { matrix, .. } => (matrix, vec![]),
    }
}

fn poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn two_pow(k: u32) -> BigInt {
    Pow::pow(BigInt::from(2), k)
}

/// `scale·(z + shift)` over `c - (z - a)^m`, expanded by repeated multiplication.
fn expected_term(scale: u32, shift: i64, c: u32, a: i64, m: u32) -> (QPoly, QPoly) {
    let numerator = QPoly(vec![rat(two_pow(scale) * shift), rat(two_pow(scale))]);
    let mut power = vec![BigRational::one()];
    for _ in 0..m {
        let mut next = vec![BigRational::zero(); power.len() + 1];
        for (k, x) in power.iter().enumerate() {
            next[k + 1] += x;
            next[k] -= x * rat(a.into());
        }
        power = next;
    }
    let mut denominator: Vec<BigRational> = power.into_iter().map(|x| -x).collect();
    denominator[0] += rat(two_pow(c));
    (numerator, QPoly(denominator))
}

fn terms_match(terms: &[Term], expected: &[(QPoly, QPoly)]) -> bool {
    terms.len() == expected.len()
        && terms
            .iter()
            .zip(expected)
            .all(|(t, (n, d))| &t.numerator == n && &t.denominator == d)
}

fn paper(m: Option<u32>) -> RealizeOptions {
    RealizeOptions {
        placement: Placement::Paper,
        m,
        ..Default::default()
    }
}

fn criterion_1() -> Outcome {
    let (a, _) = fixture_matrix("tame");
    let det = det_i_minus_ta(&a);
    let want = &poly(&[1, -1]) * &poly(&[1, 0, -3]);
    let q = zeta_quotient(&a, &[2]).unwrap();
    let zeta_ok = q.zeta.numerator == poly(&[1, 1]) && q.zeta.denominator == poly(&[1, 0, -3]);
    let root = leading_root(&a, &default_tol());
    let three = rat(3.into());
    let (lo, hi) = (root.lo.as_rational(), root.hi.as_rational());
    let brackets = lo * lo <= three && three <= hi * hi && lo > &BigRational::zero();
    let narrow = root.width() <= BigRational::new(1.into(), Pow::pow(BigInt::from(10), 12u32));
    check(
        det == want && zeta_ok && brackets && narrow,
        format!(
            "det {det}, zeta {}, root in [{}, {}]",
            q.zeta, root.lo, root.hi
        ),
    )
}

fn criterion_2() -> Outcome {
    let (a, _) = fixture_matrix("wild");
    let det = det_i_minus_ta(&a);
    let want = &(&poly(&[1, -1]) * &poly(&[1, -1])) * &poly(&[1, -3]);
    let q = zeta_quotient(&a, &[1, 1]).unwrap();
    let zeta_ok = q.zeta.numerator == poly(&[1]) && q.zeta.denominator == poly(&[1, -3]);
    let h = leading_root(&a, &default_tol()).entropy();
    check(
        det == want && zeta_ok && (h - 3f64.ln()).abs() <= 1e-9,
        format!("det {det}, zeta {}, entropy {h:.12}", q.zeta),
    )
}

fn criterion_3() -> Outcome {
    let ctx = FieldContext::new(2).unwrap();
    let a = common::m(&[&[1, 1], &[1, 0]]);
    let r = realize_admissible(&a, &ctx, &paper(Some(14))).unwrap();
    let expected = [
        expected_term(7, 0, 7, 0, 14),
        expected_term(33, 3, 35, 1, 14),
        expected_term(21, -2, 21, 3, 14),
    ];
    let terms_ok = terms_match(&r.map.terms, &expected);
    let report = analyze_default(&r.to_system()).unwrap();
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    let analysis_ok = report.adjacency.as_int() == &a
        && report.zeta_human == "1/(1-t-t^2)"
        && (report.entropy - golden).abs() <= 1e-9;
    check(
        terms_ok && r.verification.ok && analysis_ok,
        format!(
            "terms {}, verify {}, zeta {}, entropy {:.10}",
            if terms_ok { "exact" } else { "differ" },
            r.verification.ok,
            report.zeta_human,
            report.entropy
        ),
    )
}

fn criterion_4() -> Outcome {
    let ctx = FieldContext::new(2).unwrap();
    let a = common::m(&[&[0, 1], &[1, 0]]);
    let r = realize_admissible(&a, &ctx, &paper(Some(6))).unwrap();
    let expected = [
        expected_term(3, 0, 3, 0, 6),
        expected_term(14, 5, 15, 1, 6),
        expected_term(14, -1, 15, 3, 6),
    ];
    let terms_ok = terms_match(&r.map.terms, &expected);
    let report = analyze_default(&r.to_system()).unwrap();
    let exact_one = report.leading_root.exact == Some(ValuedRational::one());
    check(
        terms_ok && exact_one && report.entropy == 0.0 && r.entropy == 0.0,
        format!(
            "terms {}, root {:?}, entropy {}",
            if terms_ok { "exact" } else { "differ" },
            report.leading_root.exact.map(|x| x.to_string()),
            report.entropy
        ),
    )
}

fn criterion_5() -> Outcome {
    let mut drops = std::collections::BTreeMap::<i64, usize>::new();
    let (mut systems, mut seed, mut all_markov) = (0, 0u64, true);
    while systems < 200 {
        let p = if seed % 2 == 0 { 2 } else { 3 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        seed += 1;
        let Some(sys) = common::random_system(&mut rng, p, 5, 6) else {
            continue;
        };
        systems += 1;
        match refine_to_markov(&sys, RefineOptions::default()) {
            Ok(st) => {
                all_markov &= st.is_markov();
                for rec in &st.history {
                    *drops.entry(rec.drop()).or_default() += 1;
                }
            }
            Err(_) => all_markov = false,
        }
    }
    let exact = drops.keys().all(|&d| d == 1);
    let at_least_one = drops.keys().all(|&d| d >= 1);
    check(
        exact && all_markov,
        format!(
            "{systems} systems, split drops {drops:?}, all Markov {all_markov}, every drop >= 1 {at_least_one}"
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut matrices, mut worst) = (0, 0f64);
    while matrices < 50 {
        let a = common::random_matrix(&mut rng, 4, 3);
        if !a.has_cycle() {
            continue;
        }
        matrices += 1;
        let base = leading_root(&a, &default_tol()).decimal;
        for n in 2..=4 {
            let g = augment(&a, n).unwrap();
            let root = leading_root(g.as_int(), &default_tol()).decimal;
            worst = worst.max((root.powi(n as i32) - base).abs());
        }
    }
    check(
        worst <= 1e-9,
        format!("{matrices} matrices, n in 2..=4, worst gap {worst:.3e}"),
    )
}

fn corpus_matrices() -> Vec<IntMatrix> {
    let mut out: Vec<IntMatrix> = fixtures::NAMES
        .iter()
        .map(|n| fixture_matrix(n).0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    out.extend((0..100).map(|_| common::random_matrix(&mut rng, 4, 3)));
    out
}

fn criterion_7() -> Outcome {
    let corpus = corpus_matrices();
    let failures = corpus.iter().filter(|a| !series_consistency(a, 10)).count();
    check(
        failures == 0,
        format!("{} matrices, {failures} failures", corpus.len()),
    )
}

fn criterion_8() -> Outcome {
    let fx = fixtures::load("golden").unwrap();
    let Payload::Realization {
        p,
        matrix,
        placement,
        ..
    } = fx.payload
    else {
        return check(false, "golden fixture is not a realization");
    };
    let ctx = FieldContext::new(p).unwrap();
    let opts = RealizeOptions {
        placement,
        ..Default::default()
    };
    let r = realize_admissible(&matrix, &ctx, &opts).unwrap();
    let spec = GlueSpec::from_arrangement(&r.arrangement, 4).unwrap();
    let low = verify_realization(&r.arrangement, &spec, &nadyn::realize::glue(&spec), &matrix);
    let failed: Vec<String> = low
        .failed()
        .map(|c| {
            format!(
                "{}[{}]",
                c.name,
                c.index.map_or("-".into(), |i| i.to_string())
            )
        })
        .collect();
    let escape_failed = low.failed().any(|c| c.name.starts_with("escape_"));
    check(
        escape_failed && r.verification.ok && r.m == r.m_min,
        format!(
            "M=4 fails {failed:?}; minimal M={} verifies {}",
            r.m_min, r.verification.ok
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut runs: Vec<(IntMatrix, Vec<usize>)> =
        fixtures::NAMES.iter().map(|n| fixture_matrix(n)).collect();
    for a in corpus_matrices() {
        let k = rng.gen_range(0..=3);
        runs.push((a, (0..k).map(|_| rng.gen_range(1..=4)).collect()));
    }
    let mut bad = 0;
    for (a, lengths) in &runs {
        let q = zeta_quotient(a, lengths).unwrap();
        let divides = q.zeta.numerator.divides(&excluded_product(lengths));
        let coprime = q
            .zeta
            .numerator
            .to_rational()
            .gcd(&q.zeta.denominator.to_rational())
            .degree()
            .is_none_or(|d| d == 0);
        if !(q.numerator_cyclotomic && divides && coprime) {
            bad += 1;
        }
    }
    check(
        bad == 0,
        format!("{} quotients, {bad} failures", runs.len()),
    )
}

type Criterion = (fn() -> Outcome, Duration, &'static str);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            criterion_1,
            Duration::from_secs(1),
            "case 1 zeta quotient and entropy bracket",
        ),
        (
            criterion_2,
            Duration::from_secs(1),
            "case 2 zeta quotient and entropy",
        ),
        (
            criterion_3,
            Duration::from_secs(5),
            "golden mean map end to end",
        ),
        (criterion_4, Duration::from_secs(5), "swap map end to end"),
        (
            criterion_5,
            Duration::from_secs(30),
            "split index drops by exactly 1",
        ),
        (
            criterion_6,
            Duration::from_secs(30),
            "augmentation spectral law",
        ),
        (criterion_7, Duration::from_secs(10), "series identity"),
        (criterion_8, Duration::from_secs(2), "bound sharpness"),
        (criterion_9, Duration::from_secs(5), "zeta quotient shape"),
    ];
    let mut all = true;
    for (i, (run, budget, label)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took < *budget;
        all &= ok;
        println!(
            "criterion {}: {} {label} ({:.3} s of {} s) {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs(),
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
