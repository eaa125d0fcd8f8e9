//! Dense univariate polynomials over `Z` and `Q`, and reduced quotients of them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An integer polynomial, constant term first, with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c·t^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `1 - t^k`.
    pub fn one_minus_power(k: usize) -> Self {
        Self::one() - Self::monomial(BigInt::one(), k)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Coefficient reversal `t^d·p(1/t)` for `d = deg p`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Drops the factor `t^k` of largest `k`.
    pub fn strip_zero_roots(&self) -> Self {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        Self::new(self.coeffs[k..].to_vec())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn div_scalar_exact(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x / c).collect())
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn to_rational(&self) -> RatPoly {
        RatPoly::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    /// Exact quotient in `Z[t]`, if `divisor` divides `self`.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        if divisor.is_zero() {
            return None;
        }
        let (q, r) = self.to_rational().div_rem(&divisor.to_rational());
        if !r.is_zero() {
            return None;
        }
        q.to_integer()
    }

    pub fn divides(&self, other: &IntPolynomial) -> bool {
        other.div_exact(self).is_some()
    }

    /// Truncated power series inverse modulo `t^order`; requires constant term ±1.
    pub fn series_inverse(&self, order: usize) -> Option<Vec<BigInt>> {
        let c0 = self.coeffs.first()?;
        if !c0.abs().is_one() {
            return None;
        }
        let mut inv: Vec<BigInt> = Vec::with_capacity(order);
        for k in 0..order {
            let mut s = if k == 0 {
                BigInt::one()
            } else {
                BigInt::zero()
            };
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s -= &self.coeffs[j] * &inv[k - j];
            }
            inv.push(s * c0);
        }
        Some(inv)
    }

    /// Human-readable form in the variable `var`, e.g. `1-t-t^2`.
    pub fn format_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let show_mag = k == 0 || !mag.is_one();
            if show_mag {
                out.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("t"))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Add for IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: IntPolynomial) -> IntPolynomial {
        &self + &rhs
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Sub for IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: IntPolynomial) -> IntPolynomial {
        &self - &rhs
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Mul for IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: IntPolynomial) -> IntPolynomial {
        &self * &rhs
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    coeffs: Vec<crate::json::BigIntString>,
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            coeffs: self.coeffs.iter().cloned().map(Into::into).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolyJson::deserialize(d)?;
        Ok(IntPolynomial::new(
            raw.coeffs.into_iter().map(|c| c.0).collect(),
        ))
    }
}

/// A polynomial over `Q`, constant term first, trimmed.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (RatPoly::default(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic greatest common divisor; zero if both inputs are zero.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                RatPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
        }
    }

    /// Integer polynomial if every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        if self.coeffs.iter().all(|c| c.is_integer()) {
            Some(IntPolynomial::new(
                self.coeffs.iter().map(|c| c.to_integer()).collect(),
            ))
        } else {
            None
        }
    }

    /// Primitive integer polynomial proportional to `self`, with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPolynomial {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints = IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
                .collect(),
        );
        let mut content = ints.content();
        if content.is_zero() {
            return ints;
        }
        if ints.leading().is_some_and(|l| l.is_negative()) {
            content = -content;
        }
        ints.div_scalar_exact(&content)
    }
}

/// A quotient of integer polynomials, reduced over `Q[t]`.
///
/// Normalization: the common factor is cancelled, the joint content of
/// numerator and denominator is removed, and the lowest non-zero coefficient
/// of the denominator is positive. For zeta functions this leaves the
/// denominator with constant term `+1`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RationalFunctionZ {
    pub numerator: IntPolynomial,
    pub denominator: IntPolynomial,
}

impl RationalFunctionZ {
    pub fn new(numerator: IntPolynomial, denominator: IntPolynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let g = numerator.to_rational().gcd(&denominator.to_rational());
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            let (qn, _) = numerator.to_rational().div_rem(&g);
            let (qd, _) = denominator.to_rational().div_rem(&g);
            (qn, qd)
        } else {
            (numerator.to_rational(), denominator.to_rational())
        };
        Ok(Self::normalize_joint(&num, &den))
    }

    fn normalize_joint(num: &RatPoly, den: &RatPoly) -> Self {
        let lcm = num
            .coeffs()
            .iter()
            .chain(den.coeffs())
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let scale = BigRational::from_integer(lcm);
        let to_int = |p: &RatPoly| {
            IntPolynomial::new(
                p.coeffs()
                    .iter()
                    .map(|c| (c * &scale).to_integer())
                    .collect(),
            )
        };
        let (n, d) = (to_int(num), to_int(den));
        let mut g = n.content().gcd(&d.content());
        let low = d.coeffs().iter().find(|c| !c.is_zero()).unwrap();
        if low.is_negative() {
            g = -g;
        }
        Self {
            numerator: n.div_scalar_exact(&g),
            denominator: d.div_scalar_exact(&g),
        }
    }

    /// `1 / p`.
    pub fn reciprocal_of(p: IntPolynomial) -> Result<Self> {
        Self::new(IntPolynomial::one(), p)
    }

    pub fn is_coprime(&self) -> bool {
        self.numerator
            .to_rational()
            .gcd(&self.denominator.to_rational())
            .degree()
            == Some(0)
    }

    /// Power series coefficients up to (excluding) `t^order`; requires denominator constant ±1.
    pub fn series(&self, order: usize) -> Option<Vec<BigInt>> {
        let inv = self.denominator.series_inverse(order)?;
        let mut out = vec![BigInt::zero(); order];
        for (i, a) in self.numerator.coeffs().iter().enumerate().take(order) {
            for (j, b) in inv.iter().enumerate().take(order - i) {
                out[i + j] += a * b;
            }
        }
        Some(out)
    }
}

impl fmt::Display for RationalFunctionZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &IntPolynomial| {
            if p.term_count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.denominator == IntPolynomial::one() {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "{}/{}", wrap(&self.numerator), wrap(&self.denominator))
    }
}
