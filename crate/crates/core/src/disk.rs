//! Closed ultrametric disks over `Q_p` with rational centers.
//!
//! A disk `D̄(c, p^-r)` is stored as its canonical center and the radius
//! exponent `r`; a point is a disk with infinite radius exponent. Open disks
//! are normalized on construction: over `Q_p`, `D(a, p^-k) = D̄(a, p^-(k+1))`.
//!
//! Because the value group is discrete, two disks are always disjoint or
//! nested, and [`relation`] never reports a partial overlap.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valued::{
    int_valuation_of, reduce_mod_power, valuation, FieldContext, HalfValuation, ValuedRational,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiskKind {
    Closed,
    Open,
    Point,
}

/// A closed disk or a single point. Centers are canonical, so `==` is set equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Disk {
    center: ValuedRational,
    /// `None` for a point.
    radius_exp: Option<i64>,
}

impl Disk {
    /// The closed disk `{z : v(z - center) ≥ radius_exp}`.
    pub fn closed(center: ValuedRational, radius_exp: i64, ctx: &FieldContext) -> Self {
        let center = reduce_mod_power(&center, radius_exp, ctx);
        Disk {
            center,
            radius_exp: Some(radius_exp),
        }
    }

    /// The open disk `{z : v(z - center) > radius_exp}`, stored as a closed disk.
    pub fn open(center: ValuedRational, radius_exp: i64, ctx: &FieldContext) -> Self {
        Self::closed(center, radius_exp + 1, ctx)
    }

    pub fn point(center: ValuedRational) -> Self {
        Disk {
            center,
            radius_exp: None,
        }
    }

    /// Builds a disk from its serialized parts. Half-integer radii are rejected:
    /// geometric operations need an integer exponent.
    pub fn from_parts(
        center: ValuedRational,
        radius_exp: HalfValuation,
        kind: DiskKind,
        ctx: &FieldContext,
    ) -> Result<Self> {
        match (kind, radius_exp) {
            (DiskKind::Point, HalfValuation::Infinite) => Ok(Disk::point(center)),
            (DiskKind::Point, r) => Err(Error::BadGeometry(format!(
                "point disk must have radius_exp inf, got {r}"
            ))),
            (_, HalfValuation::Infinite) => Ok(Disk::point(center)),
            (kind, r) => {
                let k = r.as_integer().ok_or_else(|| {
                    Error::BadGeometry(format!("radius exponent {r} is not an integer"))
                })?;
                Ok(match kind {
                    DiskKind::Open => Disk::open(center, k, ctx),
                    _ => Disk::closed(center, k, ctx),
                })
            }
        }
    }

    pub fn center(&self) -> &ValuedRational {
        &self.center
    }

    /// Radius exponent `r` with radius `p^-r`; `None` for a point.
    pub fn radius_exp(&self) -> Option<i64> {
        self.radius_exp
    }

    pub fn radius_valuation(&self) -> HalfValuation {
        match self.radius_exp {
            Some(r) => HalfValuation::integer(r),
            None => HalfValuation::Infinite,
        }
    }

    pub fn kind(&self) -> DiskKind {
        if self.radius_exp.is_some() {
            DiskKind::Closed
        } else {
            DiskKind::Point
        }
    }

    pub fn is_point(&self) -> bool {
        self.radius_exp.is_none()
    }

    pub fn contains_point(&self, z: &ValuedRational, ctx: &FieldContext) -> bool {
        match self.radius_exp {
            None => *z == self.center,
            Some(r) => valuation(&(z - &self.center), ctx) >= HalfValuation::integer(r),
        }
    }

    /// `self ⊇ other`.
    pub fn contains(&self, other: &Disk, ctx: &FieldContext) -> bool {
        matches!(
            relation(self, other, ctx),
            Relation::Equal | Relation::Nested { outer: Side::First }
        )
    }

    /// `self ⊋ other`.
    pub fn strictly_contains(&self, other: &Disk, ctx: &FieldContext) -> bool {
        relation(self, other, ctx) == Relation::Nested { outer: Side::First }
    }

    pub fn is_disjoint(&self, other: &Disk, ctx: &FieldContext) -> bool {
        relation(self, other, ctx) == Relation::Disjoint
    }

    /// The disk one level larger (radius multiplied by p).
    pub fn parent(&self, ctx: &FieldContext) -> Option<Disk> {
        self.radius_exp
            .map(|r| Disk::closed(self.center.clone(), r - 1, ctx))
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.radius_exp {
            None => write!(f, "{{{}}}", self.center),
            Some(r) => write!(f, "D̄({}, p^{})", self.center, -r),
        }
    }
}

impl fmt::Debug for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "relation")]
pub enum Relation {
    Disjoint,
    Nested { outer: Side },
    Equal,
}

/// Classifies two disks: disjoint, nested (naming the outer one) or equal.
pub fn relation(d1: &Disk, d2: &Disk, ctx: &FieldContext) -> Relation {
    let dist = valuation(&(d1.center() - d2.center()), ctx);
    let r1 = d1.radius_valuation();
    let r2 = d2.radius_valuation();
    // Closed disks meet iff the centers are within the larger radius.
    if dist < r1.min(r2) {
        return Relation::Disjoint;
    }
    match r1.cmp(&r2) {
        std::cmp::Ordering::Equal => Relation::Equal,
        std::cmp::Ordering::Less => Relation::Nested { outer: Side::First },
        std::cmp::Ordering::Greater => Relation::Nested {
            outer: Side::Second,
        },
    }
}

/// Image of `d` under `z ↦ alpha·z + beta`.
pub fn affine_image(
    d: &Disk,
    alpha: &ValuedRational,
    beta: &ValuedRational,
    ctx: &FieldContext,
) -> Result<Disk> {
    if alpha.is_zero() {
        return Err(Error::ZeroScale);
    }
    let center = alpha * d.center() + beta;
    Ok(match d.radius_exp() {
        None => Disk::point(center),
        Some(r) => Disk::closed(center, r + int_valuation_of(alpha, ctx), ctx),
    })
}

/// Preimage of `d` under `z ↦ alpha·z + beta`.
pub fn affine_preimage(
    d: &Disk,
    alpha: &ValuedRational,
    beta: &ValuedRational,
    ctx: &FieldContext,
) -> Result<Disk> {
    let inv = alpha.recip().map_err(|_| Error::ZeroScale)?;
    affine_image(d, &inv, &(-(beta * &inv)), ctx)
}

/// The maximal disk `W` with `v ⊆ W ⊆ u` and `c0 ∉ W`.
pub fn enclosing_gap_disk(
    v: &Disk,
    c0: &ValuedRational,
    u: &Disk,
    ctx: &FieldContext,
) -> Result<Disk> {
    if !u.contains(v, ctx) {
        return Err(Error::BadGeometry(format!("{v} is not inside {u}")));
    }
    if !u.contains_point(c0, ctx) {
        return Err(Error::BadGeometry(format!("{c0} is not inside {u}")));
    }
    if v.contains_point(c0, ctx) {
        return Err(Error::BadGeometry(format!("{v} contains {c0}")));
    }
    let dist = int_valuation_of(&(v.center() - c0), ctx);
    // c0 ∈ u forces dist ≥ radius(u), so the gap disk is automatically inside u.
    let w = Disk::closed(v.center().clone(), dist + 1, ctx);
    debug_assert!(u.strictly_contains(&w, ctx));
    Ok(w)
}

/// Splits `u` via the proper subdisk `u0`, keeping the maximal gap disks of
/// `u ∖ u0` that contain a marked disk.
///
/// The output starts with `u0`; gap disks follow in order of first appearance,
/// with duplicates merged.
pub fn split(u: &Disk, u0: &Disk, marked: &[Disk], ctx: &FieldContext) -> Result<Vec<Disk>> {
    if !u.strictly_contains(u0, ctx) {
        return Err(Error::BadGeometry(format!(
            "{u0} is not a proper subdisk of {u}"
        )));
    }
    let mut out = vec![u0.clone()];
    for m in marked {
        if !u.contains(m, ctx) {
            return Err(Error::BadGeometry(format!(
                "marked disk {m} is not inside {u}"
            )));
        }
        if !m.is_disjoint(u0, ctx) {
            continue;
        }
        let gap = enclosing_gap_disk(m, u0.center(), u, ctx)?;
        if !out.contains(&gap) {
            out.push(gap);
        }
    }
    Ok(out)
}
