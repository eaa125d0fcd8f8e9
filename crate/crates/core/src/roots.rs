//! Certified isolation of the leading real root with Sturm sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;
use crate::poly::{IntPolynomial, RatPoly};
use crate::valued::ValuedRational;
use crate::zeta::det_i_minus_ta;

/// Default bracket width, `10^-12`.
pub fn default_tol() -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 12))
}

/// Parses a positive tolerance: `1e-12`, `0.001` or `1/1000`, read exactly.
pub fn parse_tol(s: &str) -> crate::error::Result<BigRational> {
    use crate::error::Error;
    let bad = || Error::Parse(format!("tolerance {s:?} is not a positive number"));
    let s = s.trim();
    let value = if s.contains('/') {
        s.parse::<BigRational>().map_err(|_| bad())?
    } else {
        let (mantissa, exp) = match s.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let scale = exp - frac.len() as i32;
        let ten = BigInt::from(10);
        if scale >= 0 {
            BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
        } else {
            BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
        }
    };
    if !value.is_positive() {
        return Err(bad());
    }
    Ok(value)
}

/// A rational bracket `[lo, hi]` holding the largest real root of `polynomial`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootCertificate {
    pub polynomial: IntPolynomial,
    pub lo: ValuedRational,
    pub hi: ValuedRational,
    /// Midpoint of the bracket.
    pub decimal: f64,
    /// Set when the root is rational; then `lo = hi = root`.
    pub exact: Option<ValuedRational>,
}

impl RootCertificate {
    pub fn width(&self) -> BigRational {
        self.hi.as_rational() - self.lo.as_rational()
    }

    /// Whether the bracket contains `x`.
    pub fn contains(&self, x: f64) -> bool {
        self.lo.to_f64() <= x && x <= self.hi.to_f64()
    }

    /// `ln` of the root, as an interval and a midpoint; `None` when the root is 0.
    pub fn log(&self) -> Option<(f64, f64, f64)> {
        if self.hi.is_zero() {
            return None;
        }
        let (lo, hi) = (self.lo.to_f64(), self.hi.to_f64());
        Some((lo.ln(), hi.ln(), self.decimal.ln()))
    }

    /// `ln λ`, with the convention that a root of 0 has entropy 0.
    pub fn entropy(&self) -> f64 {
        match self.log() {
            Some((_, _, mid)) => mid.max(0.0),
            None => 0.0,
        }
    }
}

/// Leading eigenvalue of a non-negative matrix, from the reversed `det(I - tA)`.
///
/// For a matrix without cycles the reversed polynomial is constant and the
/// certificate is the exact root 0.
pub fn leading_root(a: &IntMatrix, tol: &BigRational) -> RootCertificate {
    let reversed = det_i_minus_ta(a).reversed();
    largest_real_root(&reversed, tol)
}

/// Largest real root of `p`, bracketed to width `tol`. Returns the exact root 0
/// certificate when `p` has no real root.
pub fn largest_real_root(p: &IntPolynomial, tol: &BigRational) -> RootCertificate {
    let zero_cert = || RootCertificate {
        polynomial: p.clone(),
        lo: ValuedRational::zero(),
        hi: ValuedRational::zero(),
        decimal: 0.0,
        exact: Some(ValuedRational::zero()),
    };
    let core = p.strip_zero_roots();
    let chain = sturm_chain(&squarefree(&core.to_rational()));
    let bound = cauchy_bound(&core);
    let above = |x: &BigRational| sign_changes(&chain, x) - sign_changes_at_infinity(&chain);
    let neg_bound = -bound.clone();
    if core.degree().unwrap_or(0) == 0 || above(&neg_bound) == 0 {
        // Either p = c·t^k, whose only root is 0, or p has no real root at all.
        return zero_cert();
    }
    // Zero is a root of p but not of core; it is the largest if core has no positive root.
    if p.coeff(0).is_zero() && above(&BigRational::zero()) == 0 {
        return zero_cert();
    }
    // Invariant: at least one root in (lo, ∞), none in (hi, ∞).
    let (mut lo, mut hi) = (neg_bound, bound);
    let two = BigRational::from_integer(BigInt::from(2));
    while &hi - &lo > *tol {
        let mid = (&lo + &hi) / &two;
        if above(&mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // A rational root of p with leading coefficient ±1 is an integer.
    for k in integers_in(&lo, &hi) {
        if core.eval_int(&k).is_zero() {
            let root = BigRational::from_integer(k);
            if above(&root) == 0 {
                return exact_cert(p, root);
            }
        }
    }
    let decimal = ((&lo + &hi) / &two).to_f64().unwrap_or(f64::NAN);
    RootCertificate {
        polynomial: p.clone(),
        lo: lo.into(),
        hi: hi.into(),
        decimal,
        exact: None,
    }
}

fn exact_cert(p: &IntPolynomial, root: BigRational) -> RootCertificate {
    let v = ValuedRational::from(root);
    RootCertificate {
        polynomial: p.clone(),
        lo: v.clone(),
        hi: v.clone(),
        decimal: v.to_f64(),
        exact: Some(v),
    }
}

fn integers_in(lo: &BigRational, hi: &BigRational) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut k = lo.ceil().to_integer();
    let top = hi.floor().to_integer();
    while k <= top {
        out.push(k.clone());
        k += 1;
    }
    out
}

/// `1 + max |a_k / a_d|`, an upper bound on the modulus of every root.
fn cauchy_bound(p: &IntPolynomial) -> BigRational {
    let Some(lead) = p.leading() else {
        return BigRational::one();
    };
    let lead = lead.abs();
    let max = p.coeffs()[..p.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigRational::one() + BigRational::new(max, lead)
}

/// `p / gcd(p, p')`, which has the same roots, all simple.
fn squarefree(p: &RatPoly) -> RatPoly {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        return p.clone();
    }
    p.div_rem(&g).0
}

/// Sturm chain `p, p', -rem(p, p'), …`, each term rescaled by a positive constant.
fn sturm_chain(p: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![positive_normalize(p), positive_normalize(&p.derivative())];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            break;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(positive_normalize(&r.neg()));
    }
    chain
}

/// Scales to integer coefficients with content 1, keeping the sign of every value.
fn positive_normalize(p: &RatPoly) -> RatPoly {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return p.clone();
    }
    RatPoly::new(
        ints.into_iter()
            .map(|c| BigRational::from_integer(c / &g))
            .collect(),
    )
}

fn count_changes(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn sign_changes(chain: &[RatPoly], x: &BigRational) -> usize {
    count_changes(chain.iter().map(|q| sign(&q.eval(x))))
}

fn sign_changes_at_infinity(chain: &[RatPoly]) -> usize {
    count_changes(chain.iter().map(|q| q.leading().map_or(0, sign)))
}

fn sign(x: &BigRational) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
