//! Gluing the affine pieces into one rational function.
//!
//! Piece `i` contributes `f_i(z)·c_i / (c_i - (z - a_i)^M)` with
//! `c_i = b_i^M`, `b_i = x_i/√u` and `|u| = |p|`, so `c_i = p^(M·x_val - M/2)`.
//! On `D̄_i` this term is close to `f_i` and elsewhere it is small. Entry 0 is
//! the sink `f_0(z) = z` on `D̄(0, |p|)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::json::BigIntNumber;
use crate::poly::IntPolynomial;
use crate::valued::{int_valuation_of, FieldContext, ValuedRational};

use super::arrange::Arrangement;
use super::verify::perturbation_bound;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlueEntry {
    /// Center of the piece disk.
    pub a: ValuedRational,
    /// Radius exponent of the piece disk.
    pub x_val: i64,
    pub alpha: ValuedRational,
    pub beta: ValuedRational,
    /// Radius exponent of the image disk `f_i(D̄_i)`.
    pub target_val: i64,
}

impl GlueEntry {
    pub fn apply(&self, z: &ValuedRational) -> ValuedRational {
        &self.alpha * z + &self.beta
    }
}

#[derive(Debug, Clone)]
pub struct GlueSpec {
    pub ctx: FieldContext,
    pub m: u32,
    /// Entry 0 is the sink; entry `i + 1` is row `i`.
    pub entries: Vec<GlueEntry>,
}

impl GlueSpec {
    pub fn from_arrangement(arr: &Arrangement, m: u32) -> Result<Self> {
        if m == 0 || m % 2 == 1 {
            return Err(Error::OddM(m));
        }
        let ctx = &arr.ctx;
        let sink = GlueEntry {
            a: ValuedRational::zero(),
            x_val: 1,
            alpha: ValuedRational::one(),
            beta: ValuedRational::zero(),
            target_val: 1,
        };
        let pieces = (0..arr.n()).map(|i| {
            let d = &arr.terminal_disks[i];
            let f = &arr.maps[i];
            let x_val = d.radius_exp().expect("terminal disks are closed");
            GlueEntry {
                a: d.center().clone(),
                x_val,
                alpha: f.alpha.clone(),
                beta: f.beta.clone(),
                target_val: x_val + int_valuation_of(&f.alpha, ctx),
            }
        });
        Ok(GlueSpec {
            ctx: ctx.clone(),
            m,
            entries: std::iter::once(sink).chain(pieces).collect(),
        })
    }

    /// `c_i = p^(M·x_val - M/2)`.
    pub fn scale(&self, i: usize) -> ValuedRational {
        let m = self.m as i64;
        self.ctx.pow(m * self.entries[i].x_val - m / 2)
    }
}

#[derive(Serialize)]
struct GlueSpecJson<'a> {
    p: BigIntNumber,
    m: u32,
    entries: &'a [GlueEntry],
}

impl Serialize for GlueSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GlueSpecJson {
            p: BigIntNumber(self.ctx.p().clone()),
            m: self.m,
            entries: &self.entries,
        }
        .serialize(s)
    }
}

/// Least even `M` for which every piece satisfies the three inequality
/// families bounding `F` away from the pieces, plus the perturbation bound
/// on each piece disk.
pub fn choose_m(arr: &Arrangement) -> Result<u32> {
    let m = lemma_minimum(arr);
    let mut m = m.max(2);
    const CAP: u32 = 1 << 12;
    while m <= CAP {
        let spec = GlueSpec::from_arrangement(arr, m)?;
        if (0..spec.entries.len())
            .all(|i| perturbation_bound(&spec, i) > 2 * spec.entries[i].target_val)
        {
            return Ok(m);
        }
        m += 2;
    }
    Err(Error::CapExceeded {
        what: "gluing exponent",
        index: CAP as u64,
    })
}

/// Least even `M ≥ 2` satisfying the three families alone.
///
/// In half-units with `v = val`, `x = x_val` and `val b = x - 1/2`:
/// `2vβ + M ≥ 2`, `2vα + 2x + M ≥ 4` and `2vα + 2va + M ≥ 4`. The first is
/// vacuous for `β = 0` and the last for `a = 0`.
pub fn lemma_minimum(arr: &Arrangement) -> u32 {
    let ctx = &arr.ctx;
    let mut need: i64 = 2;
    for (i, f) in arr.maps.iter().enumerate() {
        let d = &arr.terminal_disks[i];
        let va = 2 * int_valuation_of(&f.alpha, ctx);
        let x = 2 * d.radius_exp().unwrap();
        if !f.beta.is_zero() {
            need = need.max(2 - 2 * int_valuation_of(&f.beta, ctx));
        }
        need = need.max(4 - va - x);
        if !d.center().is_zero() {
            need = need.max(4 - va - 2 * int_valuation_of(d.center(), ctx));
        }
    }
    let need = need.max(2) as u32;
    need + need % 2
}

/// Polynomial with rational coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    pub fn eval(&self, z: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * z + c)
    }

    /// Clears denominators: returns the integer polynomial `L·self`.
    fn to_integer_scaled(&self, l: &BigInt) -> IntPolynomial {
        let l = BigRational::from_integer(l.clone());
        IntPolynomial::new(self.0.iter().map(|c| (c * &l).to_integer()).collect())
    }

    fn denominator_lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        #[derive(Serialize)]
        struct Raw {
            coeffs: Vec<String>,
        }
        Raw { coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            coeffs: Vec<ValuedRational>,
        }
        let raw = Raw::deserialize(d)?;
        if raw.coeffs.is_empty() {
            return Err(D::Error::custom(
                "a polynomial needs at least one coefficient",
            ));
        }
        Ok(QPoly(
            raw.coeffs
                .into_iter()
                .map(ValuedRational::into_rational)
                .collect(),
        ))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Term {
    /// 0 for the sink, `i + 1` for row `i`.
    pub index: usize,
    pub c: ValuedRational,
    pub numerator: QPoly,
    pub denominator: QPoly,
    pub human: String,
}

impl Term {
    pub fn eval(&self, z: &BigRational) -> Option<BigRational> {
        let den = self.denominator.eval(z);
        (!den.is_zero()).then(|| self.numerator.eval(z) / den)
    }
}

/// `F = Σ terms = P/Q`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RationalMapExpr {
    pub m: u32,
    pub terms: Vec<Term>,
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

impl RationalMapExpr {
    pub fn eval_terms(&self, z: &BigRational) -> Option<BigRational> {
        self.terms.iter().map(|t| t.eval(z)).sum()
    }

    pub fn eval_combined(&self, z: &BigRational) -> Option<BigRational> {
        let den = self.denominator.eval(z);
        (!den.is_zero()).then(|| self.numerator.eval(z) / den)
    }

    pub fn human(&self) -> String {
        self.terms
            .iter()
            .map(|t| t.human.as_str())
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn binomial_row(m: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..m {
        let next = &row[k as usize] * BigInt::from(m - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `c - (z - a)^M`.
fn denominator_poly(c: &ValuedRational, a: &ValuedRational, m: u32) -> QPoly {
    let binom = binomial_row(m);
    let neg_a = -a.as_rational();
    let mut coeffs: Vec<BigRational> = (0..=m)
        .map(|k| {
            let power = num_traits::pow(neg_a.clone(), (m - k) as usize);
            -(BigRational::from_integer(binom[k as usize].clone()) * power)
        })
        .collect();
    coeffs[0] += c.as_rational();
    QPoly(coeffs)
}

pub fn term(spec: &GlueSpec, i: usize) -> Term {
    let e = &spec.entries[i];
    let c = spec.scale(i);
    let numerator = QPoly(vec![
        (&c * &e.beta).into_rational(),
        (&c * &e.alpha).into_rational(),
    ]);
    let denominator = denominator_poly(&c, &e.a, spec.m);
    let human = human_term(spec, i, &c);
    Term {
        index: i,
        c,
        numerator,
        denominator,
        human,
    }
}

pub fn glue(spec: &GlueSpec) -> RationalMapExpr {
    let terms: Vec<Term> = (0..spec.entries.len()).map(|i| term(spec, i)).collect();
    // Each term N_i/D_i is rescaled to integer polynomials before combining.
    let ints: Vec<(IntPolynomial, IntPolynomial)> = terms
        .iter()
        .map(|t| {
            let l = t
                .numerator
                .denominator_lcm()
                .lcm(&t.denominator.denominator_lcm());
            (
                t.numerator.to_integer_scaled(&l),
                t.denominator.to_integer_scaled(&l),
            )
        })
        .collect();
    let mut q = IntPolynomial::one();
    for (_, d) in &ints {
        q = &q * d;
    }
    let mut p = IntPolynomial::zero();
    for (i, (n, _)) in ints.iter().enumerate() {
        let mut prod = n.clone();
        for (j, (_, d)) in ints.iter().enumerate() {
            if i != j {
                prod = &prod * d;
            }
        }
        p = p + prod;
    }
    let g = p.content().gcd(&q.content());
    let (p, q) = if g.is_zero() || g.is_one() {
        (p, q)
    } else {
        (p.div_scalar_exact(&g), q.div_scalar_exact(&g))
    };
    RationalMapExpr {
        m: spec.m,
        terms,
        numerator: p,
        denominator: q,
    }
}

/// `±p^e` as `2^33`, `2`, `1`, `2^-3`; any other rational as `n/d`.
fn power_form(x: &ValuedRational, ctx: &FieldContext) -> String {
    let sign = if x.as_rational().is_negative() {
        "-"
    } else {
        ""
    };
    let abs = ValuedRational::from(x.as_rational().abs());
    let e = int_valuation_of(&abs, ctx);
    if abs != ctx.pow(e) {
        return x.to_string();
    }
    match e {
        0 => format!("{sign}1"),
        1 => format!("{sign}{}", ctx.p()),
        _ => format!("{sign}{}^{e}", ctx.p()),
    }
}

/// `z+q` or `z-q`.
fn shifted(q: &ValuedRational) -> String {
    if q.is_zero() {
        "z".into()
    } else if q.as_rational().is_negative() {
        format!("z-{}", -q)
    } else {
        format!("z+{q}")
    }
}

/// Human form `s*(z+q)/(c-(z-a)^M)` with `s = c·α` and `q = β/α`.
fn human_term(spec: &GlueSpec, i: usize, c: &ValuedRational) -> String {
    let e = &spec.entries[i];
    let s = c * &e.alpha;
    let q = &e.beta / &e.alpha;
    let lin = if q.is_zero() {
        "z".to_string()
    } else {
        format!("({})", shifted(&q))
    };
    let lead = power_form(&s, &spec.ctx);
    let num = if lead == "1" {
        lin
    } else {
        format!("{lead}*{lin}")
    };
    let base = shifted(&-&e.a);
    let base = if e.a.is_zero() {
        base
    } else {
        format!("({base})")
    };
    format!("{num}/({}-{base}^{})", power_form(c, &spec.ctx), spec.m)
}
