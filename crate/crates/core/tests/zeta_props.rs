mod common;

use nadyn::roots::default_tol;
use nadyn::zeta::excluded_product;
use nadyn::{
    augment, det_i_minus_ta, leading_root, series_consistency, trace_powers, zeta_quotient,
    IntMatrix,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn matrix(max_n: usize, max_entry: u64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::collection::vec(0..=max_entry, n), n)
            .prop_map(|rows| IntMatrix::from_rows(&rows).unwrap())
    })
}

/// Bareiss fraction-free determinant of an integer matrix.
fn bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * prev
}

fn det_at(a: &IntMatrix, t: i64) -> BigInt {
    let n = a.n();
    let rows = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let id = if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    };
                    id - a.get(i, j) * BigInt::from(t)
                })
                .collect()
        })
        .collect();
    bareiss(rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_agrees_with_elimination(a in matrix(5, 3)) {
        let det = det_i_minus_ta(&a);
        prop_assert!(det.degree().unwrap_or(0) <= a.n());
        prop_assert_eq!(det.coeff(0), BigInt::one());
        for t in -3..=3 {
            prop_assert_eq!(det.eval_int(&BigInt::from(t)), det_at(&a, t));
        }
    }

    #[test]
    fn linear_coefficient_is_minus_trace(a in matrix(5, 4)) {
        let det = det_i_minus_ta(&a);
        prop_assert_eq!(det.coeff(1), -trace_powers(&a, 1)[0].clone());
    }

    #[test]
    fn series_identity_holds(a in matrix(4, 3)) {
        prop_assert!(series_consistency(&a, 10));
    }

    #[test]
    fn quotients_have_cyclotomic_numerators(a in matrix(4, 2), lengths in proptest::collection::vec(1usize..5, 0..4)) {
        let q = zeta_quotient(&a, &lengths).unwrap();
        prop_assert!(q.numerator_cyclotomic);
        prop_assert!(q.zeta.is_coprime());
        prop_assert!(q.zeta.numerator.divides(&excluded_product(&lengths)));
        // Cross-multiplication recovers the unreduced quotient.
        let lhs = &q.zeta.numerator * &det_i_minus_ta(&a);
        let rhs = &excluded_product(&lengths) * &q.zeta.denominator;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn augmentation_preserves_spectrum(a in matrix(3, 3), n in 2usize..5) {
        prop_assume!(a.has_cycle());
        let g = augment(&a, n).unwrap();
        prop_assert!(g.is_zero_one());
        let base = leading_root(&a, &default_tol()).decimal;
        let aug = leading_root(g.as_int(), &default_tol()).decimal;
        prop_assert!((aug.powi(n as i32) - base).abs() <= 1e-9 * base.max(1.0));
    }
}

#[test]
fn augmenting_twice_multiplies_lengths() {
    let a = common::m(&[&[1, 1], &[1, 0]]);
    let twice = augment(augment(&a, 2).unwrap().as_int(), 3).unwrap();
    let once = augment(&a, 6).unwrap();
    assert_eq!(
        det_i_minus_ta(twice.as_int()),
        det_i_minus_ta(once.as_int())
    );
}

#[test]
fn acyclic_matrices_have_trivial_zeta() {
    let a = common::m(&[&[0, 1, 1], &[0, 0, 1], &[0, 0, 0]]);
    assert!(!a.has_cycle());
    assert_eq!(det_i_minus_ta(&a), nadyn::IntPolynomial::one());
    assert_eq!(leading_root(&a, &default_tol()).entropy(), 0.0);
}
