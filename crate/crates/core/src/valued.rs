//! Exact rationals viewed inside `Q_p`.
//!
//! Every element handled by the library is a rational number; the p-adic
//! structure enters only through [`valuation`]. The norm is normalized so that
//! `|p| = 1/p`, i.e. `|x| = p^(-v(x))`.
//!
//! Square roots of the uniformizer are never materialized. They appear only as
//! half-integer values of [`HalfValuation`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// The ground field `Q_p`, identified with its residue characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldContext {
    p: BigInt,
}

impl FieldContext {
    /// Builds a context for `Q_p`; `p` is checked for primality by trial division.
    pub fn new(p: impl Into<BigInt>) -> Result<Self> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    /// `p^k` as an exact rational; negative `k` gives `1/p^|k|`.
    pub fn pow(&self, k: i64) -> ValuedRational {
        let mag = num_traits::pow(self.p.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            ValuedRational::from(mag)
        } else {
            ValuedRational(BigRational::new(BigInt::one(), mag))
        }
    }

    /// p-adic valuation of a non-zero integer.
    pub fn int_valuation(&self, n: &BigInt) -> i64 {
        debug_assert!(!n.is_zero());
        if self.p == BigInt::from(2u8) {
            return n.trailing_zeros().unwrap_or(0) as i64;
        }
        let mut n = n.abs();
        let mut v = 0;
        loop {
            let (q, r) = n.div_rem(&self.p);
            if !r.is_zero() {
                return v;
            }
            n = q;
            v += 1;
        }
    }
}

fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2u8);
    if *n < two {
        return false;
    }
    let mut d = two;
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact rational number. Always stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValuedRational(BigRational);

impl ValuedRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self(r)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn into_rational(self) -> BigRational {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("reciprocal of zero".into()));
        }
        Ok(Self(self.0.recip()))
    }

    pub fn pow(&self, k: u32) -> Self {
        Self(num_traits::pow(self.0.clone(), k as usize))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl From<i64> for ValuedRational {
    fn from(n: i64) -> Self {
        Self(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<BigInt> for ValuedRational {
    fn from(n: BigInt) -> Self {
        Self(BigRational::from_integer(n))
    }
}

impl From<BigRational> for ValuedRational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ValuedRational> for &ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: &ValuedRational) -> ValuedRational {
                ValuedRational((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<ValuedRational> for ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: ValuedRational) -> ValuedRational {
                ValuedRational(self.0.$method(rhs.0))
            }
        }
        impl $tr<&ValuedRational> for ValuedRational {
            type Output = ValuedRational;
            fn $method(self, rhs: &ValuedRational) -> ValuedRational {
                ValuedRational(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Division by zero panics, as it does for `BigRational`.
forward_binop!(Div, div);

impl Neg for ValuedRational {
    type Output = ValuedRational;
    fn neg(self) -> ValuedRational {
        ValuedRational(-self.0)
    }
}

impl Neg for &ValuedRational {
    type Output = ValuedRational;
    fn neg(self) -> ValuedRational {
        ValuedRational(-&self.0)
    }
}

impl fmt::Display for ValuedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for ValuedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ValuedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad rational literal {s:?}")))
        };
        match s.split_once('/') {
            None => Ok(Self::from(parse_int(s)?)),
            Some((n, d)) => Self::new(parse_int(n)?, parse_int(d)?),
        }
    }
}

impl Serialize for ValuedRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ValuedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!(
                "expected rational literal, got {other}"
            ))),
        }
    }
}

/// A valuation in `(1/2)·Z ∪ {+∞}`.
///
/// Finite values are stored as a count of halves, so `Finite(3)` is `3/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfValuation {
    Finite(i64),
    Infinite,
}

impl HalfValuation {
    pub fn integer(k: i64) -> Self {
        HalfValuation::Finite(2 * k)
    }

    pub fn halves(h: i64) -> Self {
        HalfValuation::Finite(h)
    }

    /// Integer value, if finite and integral.
    pub fn as_integer(&self) -> Option<i64> {
        match *self {
            HalfValuation::Finite(h) if h % 2 == 0 => Some(h / 2),
            _ => None,
        }
    }

    pub fn as_halves(&self) -> Option<i64> {
        match *self {
            HalfValuation::Finite(h) => Some(h),
            HalfValuation::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, HalfValuation::Infinite)
    }
}

impl Ord for HalfValuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (HalfValuation::Infinite, HalfValuation::Infinite) => Ordering::Equal,
            (HalfValuation::Infinite, _) => Ordering::Greater,
            (_, HalfValuation::Infinite) => Ordering::Less,
            (HalfValuation::Finite(a), HalfValuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for HalfValuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for HalfValuation {
    type Output = HalfValuation;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (HalfValuation::Finite(a), HalfValuation::Finite(b)) => HalfValuation::Finite(a + b),
            _ => HalfValuation::Infinite,
        }
    }
}

impl fmt::Display for HalfValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            HalfValuation::Infinite => write!(f, "inf"),
            HalfValuation::Finite(h) if h % 2 == 0 => write!(f, "{}", h / 2),
            HalfValuation::Finite(h) => write!(f, "{h}/2"),
        }
    }
}

impl FromStr for HalfValuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" {
            return Ok(HalfValuation::Infinite);
        }
        let bad = || Error::Parse(format!("bad valuation literal {s:?}"));
        match s.split_once('/') {
            None => s
                .parse::<i64>()
                .map(HalfValuation::integer)
                .map_err(|_| bad()),
            Some((n, "2")) => n
                .trim()
                .parse::<i64>()
                .map(HalfValuation::Finite)
                .map_err(|_| bad()),
            Some(_) => Err(bad()),
        }
    }
}

impl Serialize for HalfValuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfValuation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::String(s) => s.parse().map_err(serde::de::Error::custom),
            serde_json::Value::Number(n) => n.to_string().parse().map_err(serde::de::Error::custom),
            other => Err(serde::de::Error::custom(format!(
                "expected valuation literal, got {other}"
            ))),
        }
    }
}

/// p-adic valuation: `|x| = p^(-v)`, and `+∞` exactly for zero.
pub fn valuation(x: &ValuedRational, ctx: &FieldContext) -> HalfValuation {
    if x.is_zero() {
        return HalfValuation::Infinite;
    }
    HalfValuation::integer(int_valuation_of(x, ctx))
}

/// Integer valuation of a non-zero rational.
pub(crate) fn int_valuation_of(x: &ValuedRational, ctx: &FieldContext) -> i64 {
    ctx.int_valuation(x.numer()) - ctx.int_valuation(x.denom())
}

/// Compares `|x|` with `|y|`.
pub fn norm_compare(x: &ValuedRational, y: &ValuedRational, ctx: &FieldContext) -> Ordering {
    valuation(y, ctx).cmp(&valuation(x, ctx))
}

/// Canonical representative of `x` modulo `p^k`.
///
/// Returns the unique rational `m·p^e` with `e = min(v(x), 0)` and `0 ≤ m < p^(k-e)`
/// congruent to `x` modulo `p^k`. Requires `x` to be p-adically bounded below `k`
/// in the sense that the result is well defined for any rational input.
pub(crate) fn reduce_mod_power(x: &ValuedRational, k: i64, ctx: &FieldContext) -> ValuedRational {
    if x.is_zero() {
        return ValuedRational::zero();
    }
    let v = int_valuation_of(x, ctx);
    if v >= k {
        return ValuedRational::zero();
    }
    let e = v.min(0);
    // y = x / p^e is p-integral
    let y = x / &ctx.pow(e);
    let modulus = num_traits::pow(ctx.p().clone(), (k - e) as usize);
    let inv = mod_inverse(y.denom(), &modulus).expect("denominator is a p-adic unit");
    let m = (y.numer() * inv).mod_floor(&modulus);
    ValuedRational::from(m) * ctx.pow(e)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}
