//! Zeta functions of subshifts of finite type and their quotients.
//!
//! For a graph with adjacency matrix `A`, the number of closed walks of length
//! `m` is `tr(A^m)` and the zeta function is `1 / det(I - tA)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, ZeroOneMatrix};
use crate::poly::{IntPolynomial, RationalFunctionZ};

/// Exact `det(I - tA)`.
///
/// Uses the Faddeev–LeVerrier recurrence: with `M_0 = 0`, `c_0 = 1`,
/// `M_k = A·M_{k-1} + c_{k-1}·I` and `c_k = -tr(A·M_k)/k`, the characteristic
/// polynomial is `Σ c_k λ^(n-k)`, so `det(I - tA) = Σ c_k t^k`. Every division
/// is exact over the integers.
pub fn det_i_minus_ta(a: &IntMatrix) -> IntPolynomial {
    let n = a.n();
    let mut coeffs = vec![BigInt::one()];
    if n == 0 {
        return IntPolynomial::one();
    }
    // m holds A·M_k; it starts at A·M_1 = A·(0 + I) = A.
    let mut am = a.clone();
    for k in 1..=n {
        let c = -am.trace() / BigInt::from(k);
        coeffs.push(c.clone());
        if k == n {
            break;
        }
        // M_{k+1} = A·M_k + c_k·I, so A·M_{k+1} = A·(A·M_k) + c_k·A.
        let mut next = a.mul(&am);
        if !c.is_zero() {
            for (i, j, v) in a.entries() {
                let updated = next.get(i, j) + &c * v;
                next.set(i, j, updated);
            }
        }
        am = next;
    }
    IntPolynomial::new(coeffs)
}

/// `1 / det(I - tA)`.
pub fn zeta_sft(a: &IntMatrix) -> RationalFunctionZ {
    RationalFunctionZ::reciprocal_of(det_i_minus_ta(a)).expect("det(I - tA) has constant term 1")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaQuotient {
    pub zeta: RationalFunctionZ,
    /// The reduced numerator divides `∏(1 - t^ℓ)`, so it is a product of cyclotomic polynomials.
    pub numerator_cyclotomic: bool,
}

/// `∏(1 - t^ℓ) / det(I - tB)` in lowest terms.
pub fn zeta_quotient(b: &IntMatrix, excluded_lengths: &[usize]) -> Result<ZetaQuotient> {
    if excluded_lengths.contains(&0) {
        return Err(Error::InvalidArgument(
            "excluded cycle lengths must be positive".into(),
        ));
    }
    let product = excluded_product(excluded_lengths);
    let zeta = RationalFunctionZ::new(product.clone(), det_i_minus_ta(b))?;
    let numerator_cyclotomic = zeta.numerator.divides(&product);
    Ok(ZetaQuotient {
        zeta,
        numerator_cyclotomic,
    })
}

/// `∏(1 - t^ℓ)` over the multiset `lengths`.
pub fn excluded_product(lengths: &[usize]) -> IntPolynomial {
    lengths.iter().fold(IntPolynomial::one(), |acc, &l| {
        &acc * &IntPolynomial::one_minus_power(l)
    })
}

/// `tr(A^m)` for `m = 1..=n_max`.
pub fn trace_powers(a: &IntMatrix, n_max: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n_max);
    let mut power = a.clone();
    for m in 1..=n_max {
        out.push(power.trace());
        if m < n_max {
            power = a.mul(&power);
        }
    }
    out
}

/// Checks `1/det(I - tA) = exp(Σ tr(A^m) t^m / m)` modulo `t^(order+1)`.
pub fn series_consistency(a: &IntMatrix, order: usize) -> bool {
    let lhs = det_i_minus_ta(a)
        .series_inverse(order + 1)
        .expect("det(I - tA) has constant term 1");
    let traces = trace_powers(a, order);
    let rhs = exp_of_trace_series(&traces);
    lhs.len() == rhs.len()
        && lhs
            .into_iter()
            .zip(rhs)
            .all(|(l, r)| BigRational::from_integer(l) == r)
}

/// Coefficients `e_0..=e_order` of `exp(Σ_{m≥1} N_m t^m / m)`.
///
/// Differentiating `E = exp(S)` gives `k·e_k = Σ_{j=1..k} N_j·e_{k-j}`.
pub fn exp_of_trace_series(traces: &[BigInt]) -> Vec<BigRational> {
    let order = traces.len();
    let mut e = vec![BigRational::one()];
    for k in 1..=order {
        let mut s = BigRational::zero();
        for j in 1..=k {
            s += BigRational::from_integer(traces[j - 1].clone()) * &e[k - j];
        }
        e.push(s / BigRational::from_integer(BigInt::from(k)));
    }
    e
}

/// Subdivides every edge of the multigraph of `a0` into a path of length `n`.
///
/// Vertices of `a0` keep their indices; the `n - 1` interior vertices of each
/// edge follow, edges taken in row-major order with parallel copies adjacent.
/// The result satisfies `det(I - tA) = det(I - t^n·A0)`.
pub fn augment(a0: &IntMatrix, n: usize) -> Result<ZeroOneMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "subdivision length must be at least 1".into(),
        ));
    }
    if n == 1 {
        if let Some((row, col, v)) = a0.first_multi_edge() {
            return Err(Error::NotSimpleAtN1 {
                row,
                col,
                value: v.to_string(),
            });
        }
        return ZeroOneMatrix::new(a0.clone());
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (i, j, v) in a0.entries() {
        let copies: usize = v
            .try_into()
            .map_err(|_| Error::InvalidArgument(format!("edge multiplicity {v} is too large")))?;
        edges.extend(std::iter::repeat_n((i, j), copies));
    }
    let size = a0.n() + (n - 1) * edges.len();
    let mut rows = vec![vec![false; size]; size];
    let mut next = a0.n();
    for (i, j) in edges {
        let mut prev = i;
        for _ in 0..n - 1 {
            rows[prev][next] = true;
            prev = next;
            next += 1;
        }
        rows[prev][j] = true;
    }
    Ok(ZeroOneMatrix::from_bools(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    /// Cofactor expansion along the first row, entries in `Z[t]`.
    fn det_oracle(a: &IntMatrix) -> IntPolynomial {
        let n = a.n();
        let entry = |i: usize, j: usize| {
            let diag = if i == j {
                IntPolynomial::one()
            } else {
                IntPolynomial::zero()
            };
            diag - IntPolynomial::monomial(a.get(i, j).clone(), 1)
        };
        fn rec(
            idx: &[usize],
            cols: &[usize],
            entry: &dyn Fn(usize, usize) -> IntPolynomial,
        ) -> IntPolynomial {
            if idx.is_empty() {
                return IntPolynomial::one();
            }
            let mut acc = IntPolynomial::zero();
            for (k, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = &entry(idx[0], c) * &rec(&idx[1..], &rest, entry);
                acc = if k % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
        let all: Vec<usize> = (0..n).collect();
        rec(&all, &all, &entry)
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_i_minus_ta(&m(&[&[1, 1], &[1, 0]])), p(&[1, -1, -1]));
        assert_eq!(det_i_minus_ta(&m(&[&[0, 1], &[1, 0]])), p(&[1, 0, -1]));
        assert_eq!(det_i_minus_ta(&m(&[&[0]])), p(&[1]));
        assert_eq!(det_i_minus_ta(&m(&[&[2]])), p(&[1, -2]));
    }

    #[test]
    fn det_matches_cofactor_expansion() {
        let cases: [&[&[u64]]; 3] = [
            &[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]],
            &[&[0, 1, 1, 0], &[1, 0, 0, 2], &[3, 0, 0, 1], &[0, 1, 1, 1]],
            &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]],
        ];
        for rows in cases {
            let a = m(rows);
            assert_eq!(det_i_minus_ta(&a), det_oracle(&a), "{a}");
        }
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_sft(&m(&[&[1, 1], &[1, 0]])).to_string(), "1/(1-t-t^2)");
        assert_eq!(zeta_sft(&m(&[&[0]])).to_string(), "1");
        assert_eq!(zeta_sft(&m(&[&[2]])).to_string(), "1/(1-2t)");
        let q = zeta_quotient(&m(&[&[2]]), &[]).unwrap();
        assert!(q.numerator_cyclotomic);
        assert_eq!(q.zeta, zeta_sft(&m(&[&[2]])));
    }

    #[test]
    fn traces() {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(
            trace_powers(&m(&[&[1, 1], &[1, 0]]), 5),
            big(&[1, 3, 4, 7, 11])
        );
        assert_eq!(trace_powers(&m(&[&[0, 1], &[1, 0]]), 4), big(&[0, 2, 0, 2]));
        assert_eq!(trace_powers(&IntMatrix::identity(3), 2), big(&[3, 3]));
    }

    #[test]
    fn series_identity() {
        assert!(series_consistency(&m(&[&[1, 1], &[1, 0]]), 10));
        assert!(series_consistency(&m(&[&[2]]), 8));
        assert!(series_consistency(&m(&[&[0, 3], &[1, 1]]), 12));
    }

    #[test]
    fn augment_examples() {
        let g = augment(&m(&[&[2]]), 2).unwrap();
        assert_eq!(g.as_int(), &m(&[&[0, 1, 1], &[1, 0, 0], &[1, 0, 0]]));
        let g = augment(&m(&[&[1, 1], &[1, 0]]), 1).unwrap();
        assert_eq!(g.as_int(), &m(&[&[1, 1], &[1, 0]]));
        let g = augment(&m(&[&[1]]), 3).unwrap();
        assert_eq!(g.as_int(), &m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]));
        assert!(matches!(
            augment(&m(&[&[2]]), 1),
            Err(Error::NotSimpleAtN1 { row: 0, col: 0, .. })
        ));
    }

    #[test]
    fn augmented_determinant_substitutes_t_to_the_n() {
        let a0 = m(&[&[1, 2], &[1, 0]]);
        let base = det_i_minus_ta(&a0);
        for n in 2..=4 {
            let g = augment(&a0, n).unwrap();
            let expect = IntPolynomial::new(
                (0..=base.degree().unwrap() * n)
                    .map(|k| {
                        if k % n == 0 {
                            base.coeff(k / n)
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect(),
            );
            assert_eq!(det_i_minus_ta(&g), expect);
            // Closed walks of length n·m through a marked start: n times as many.
            let t0 = trace_powers(&a0, 3);
            let tg = trace_powers(&g, 3 * n);
            for k in 1..=3 {
                assert_eq!(&tg[n * k - 1], &(&t0[k - 1] * BigInt::from(n)));
            }
        }
    }
}
