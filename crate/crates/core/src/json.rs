//! Wire formats that need more than a derive.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::disk::{Disk, DiskKind};
use crate::error::Result;
use crate::valued::{FieldContext, HalfValuation, ValuedRational};

/// An integer written as a decimal string; plain JSON numbers are accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigIntString(pub BigInt);

impl From<BigInt> for BigIntString {
    fn from(v: BigInt) -> Self {
        BigIntString(v)
    }
}

impl Serialize for BigIntString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigIntString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor).map(BigIntString)
    }
}

/// Like [`BigIntString`], but written as a JSON number whenever it fits in 64 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigIntNumber(pub BigInt);

impl Serialize for BigIntNumber {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for BigIntNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(BigIntVisitor).map(BigIntNumber)
    }
}

struct BigIntVisitor;

impl Visitor<'_> for BigIntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigInt, E> {
        Ok(v.into())
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigInt, E> {
        v.trim()
            .parse()
            .map_err(|_| E::custom(format!("not an integer: {v:?}")))
    }
}

/// `{"center":"1","radius_exp":"3","kind":"closed"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiskJson {
    pub center: ValuedRational,
    pub radius_exp: HalfValuation,
    #[serde(default = "closed")]
    pub kind: DiskKind,
}

fn closed() -> DiskKind {
    DiskKind::Closed
}

impl DiskJson {
    pub fn to_disk(&self, ctx: &FieldContext) -> Result<Disk> {
        Disk::from_parts(self.center.clone(), self.radius_exp, self.kind, ctx)
    }
}

impl From<&Disk> for DiskJson {
    fn from(d: &Disk) -> Self {
        DiskJson {
            center: d.center().clone(),
            radius_exp: d.radius_valuation(),
            kind: d.kind(),
        }
    }
}
