//! Independent certificates for a glued rational map.
//!
//! All bounds are exact valuation arithmetic carried in half-units, since the
//! gluing radii `|b_i|` sit at half-integer valuations.

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::matrix::{IntMatrix, ZeroOneMatrix};
use crate::valued::{int_valuation_of, ValuedRational};

use super::arrange::Arrangement;
use super::glue::{glue, GlueSpec, RationalMapExpr};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub name: &'static str,
    /// 0 for the sink, `i + 1` for row `i`; absent for global checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    pub ok: bool,
    /// How far the inequality holds, in valuation units; negative on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<ValuedRational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub m: u32,
    pub certificates: Vec<Certificate>,
    pub induced_adjacency: ZeroOneMatrix,
}

impl VerificationReport {
    pub fn failed(&self) -> impl Iterator<Item = &Certificate> {
        self.certificates.iter().filter(|c| !c.ok)
    }
}

fn halves(h: i64) -> ValuedRational {
    ValuedRational::new(h, 2).expect("non-zero denominator")
}

fn margin_cert(name: &'static str, index: usize, margin_halves: i64, strict: bool) -> Certificate {
    Certificate {
        name,
        index: Some(index),
        ok: if strict {
            margin_halves > 0
        } else {
            margin_halves >= 0
        },
        margin: Some(halves(margin_halves)),
    }
}

/// Lower bound, in half-units, on `val(F - f_i)` over `D̄_i`.
///
/// On `D̄_i` the own term differs from `f_i` by `f_i·w/(1 - w)` with
/// `val w ≥ M/2`. For `j ≠ i`, `val(z - a_j) = val(a_i - a_j) = d` is constant
/// and the term has valuation `val f_j + M·(x_j - 1/2 - d)`. A linear map on
/// `D̄_i` has valuation at least `min(val α + x_i, val f(a_i))`.
pub fn perturbation_bound(spec: &GlueSpec, i: usize) -> i64 {
    let ctx = &spec.ctx;
    let m = spec.m as i64;
    let ei = &spec.entries[i];
    let lower_on_i = |j: usize| {
        let ej = &spec.entries[j];
        let slope = 2 * (int_valuation_of(&ej.alpha, ctx) + ei.x_val);
        let at_center = ej.apply(&ei.a);
        if at_center.is_zero() {
            slope
        } else {
            slope.min(2 * int_valuation_of(&at_center, ctx))
        }
    };
    let mut bound = lower_on_i(i) + m;
    for (j, ej) in spec.entries.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = int_valuation_of(&(&ei.a - &ej.a), ctx);
        bound = bound.min(lower_on_i(j) + m * (2 * ej.x_val - 1 - 2 * d));
    }
    bound
}

/// Checks a glued map against its arrangement and the matrix it should realize.
pub fn verify_realization(
    arr: &Arrangement,
    spec: &GlueSpec,
    expr: &RationalMapExpr,
    expected: &IntMatrix,
) -> VerificationReport {
    let ctx = &arr.ctx;
    let m = spec.m as i64;
    let mut certs = Vec::new();

    for (i, e) in spec.entries.iter().enumerate() {
        // Surgery window: diam D̄_i < |b_i| < distance to every other center.
        let nearest = spec
            .entries
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| int_valuation_of(&(&e.a - &o.a), ctx))
            .max();
        if let Some(d) = nearest {
            certs.push(margin_cert(
                "surgery_window",
                i,
                2 * e.x_val - 1 - 2 * d,
                true,
            ));
        }
        // F maps D̄_i onto f_i(D̄_i) with degree 1.
        let bound = perturbation_bound(spec, i);
        certs.push(margin_cert(
            "perturbation",
            i,
            bound - 2 * e.target_val,
            true,
        ));
    }

    // Outside the piece disks F lands in the sink.
    for (i, e) in spec.entries.iter().enumerate().skip(1) {
        let va = int_valuation_of(&e.alpha, ctx);
        if !e.beta.is_zero() {
            let vb = int_valuation_of(&e.beta, ctx);
            certs.push(margin_cert("escape_constant", i, 2 * vb + m - 2, false));
        }
        // val α + val b + (M - 1)/2 ≥ 1 with val b = x - 1/2.
        certs.push(margin_cert(
            "escape_linear",
            i,
            2 * va + (2 * e.x_val - 1) + (m - 1) - 2,
            false,
        ));
        if !e.a.is_zero() {
            let vc = int_valuation_of(&e.a, ctx);
            certs.push(margin_cert(
                "escape_center",
                i,
                2 * va + 2 * vc + (2 * e.x_val - 1) - 2 * e.x_val + (m - 1) - 2,
                false,
            ));
        }
    }
    certs.push(margin_cert("escape_sink", 0, m - 2, false));

    // Induced transition matrix: D̄_j ⊆ f_i(D̄_i).
    let n = arr.n();
    let images: Vec<_> = (0..n).map(|i| arr.image(i)).collect();
    let induced: Vec<Vec<bool>> = images
        .iter()
        .map(|img| {
            arr.terminal_disks
                .iter()
                .map(|d| img.contains(d, ctx))
                .collect()
        })
        .collect();
    let induced = ZeroOneMatrix::from_bools(&induced);
    certs.push(Certificate {
        name: "adjacency",
        index: None,
        ok: induced.as_int() == expected,
        margin: None,
    });

    // The covered disks leave part of each image free.
    for (i, img) in images.iter().enumerate() {
        let covered: BigRational = (0..n)
            .filter(|&j| expected.get(i, j) != &0.into())
            .map(|j| arr.relative_measure(&arr.terminal_disks[j], img))
            .sum();
        certs.push(Certificate {
            name: "proper_containment",
            index: Some(i + 1),
            ok: covered < BigRational::one(),
            margin: Some((BigRational::one() - covered).into()),
        });
    }

    let rebuilt = glue(spec);
    let same_terms = rebuilt.terms.len() == expr.terms.len()
        && rebuilt.terms.iter().zip(&expr.terms).all(|(a, b)| {
            a.numerator == b.numerator && a.denominator == b.denominator && a.c == b.c
        });
    certs.push(Certificate {
        name: "terms",
        index: None,
        ok: same_terms && expr.m == spec.m,
        margin: None,
    });
    certs.push(Certificate {
        name: "combined_form",
        index: None,
        ok: combined_matches(expr),
        margin: None,
    });

    VerificationReport {
        ok: certs.iter().all(|c| c.ok),
        m: spec.m,
        certificates: certs,
        induced_adjacency: induced,
    }
}

/// `P/Q` agrees with the sum of terms at three rational points off the poles.
fn combined_matches(expr: &RationalMapExpr) -> bool {
    let mut checked = 0;
    for k in 1..64i64 {
        let z = BigRational::new((2 * k + 1).into(), (k + 6).into());
        if let (Some(a), Some(b)) = (expr.eval_terms(&z), expr.eval_combined(&z)) {
            if a != b {
                return false;
            }
            checked += 1;
            if checked == 3 {
                return true;
            }
        }
    }
    false
}
