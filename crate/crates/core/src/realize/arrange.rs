//! Placement of the class hierarchy as nested disks in the unit sphere of `Z_p`.
//!
//! Every class gets a closed disk, every index `i` a terminal disk `D̄_i`
//! inside the disk of its terminal class, and `f_i` maps `D̄_i` affinely onto
//! the disk of the class indicated by `i`. The sink `D̄(0, |p|)` is left free.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize, Serializer};

use crate::disk::{affine_image, Disk};
use crate::error::Result;
use crate::json::{BigIntNumber, DiskJson};
use crate::valued::{FieldContext, ValuedRational};

use super::hierarchy::Hierarchy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    /// Successors before terminals, with the smallest subdivision that leaves
    /// room in every class. Reproduces the worked examples.
    Paper,
    /// Children ordered by smallest index, always keeping one free slot.
    #[default]
    Lex,
}

impl std::str::FromStr for Placement {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" => Ok(Placement::Paper),
            "lex" => Ok(Placement::Lex),
            other => Err(format!(
                "unknown placement {other:?}, expected paper or lex"
            )),
        }
    }
}

/// `z ↦ alpha·z + beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineMap {
    pub alpha: ValuedRational,
    pub beta: ValuedRational,
}

impl AffineMap {
    pub fn apply(&self, z: &ValuedRational) -> ValuedRational {
        &self.alpha * z + &self.beta
    }
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    pub ctx: FieldContext,
    pub placement: Placement,
    pub hierarchy: Hierarchy,
    /// Indexed by class id.
    pub class_disks: Vec<Disk>,
    /// `D̄_i`, indexed by row.
    pub terminal_disks: Vec<Disk>,
    /// `f_i`, mapping `D̄_i` onto `class_disks[kappa[i]]`.
    pub maps: Vec<AffineMap>,
    pub sink: Disk,
}

enum Child {
    Class(usize),
    Terminal(usize),
}

/// Least `d ≥ 1` with `p^d ≥ slots`.
fn depth_for(p: &BigInt, slots: usize) -> i64 {
    let slots = BigInt::from(slots);
    let mut d = 1;
    let mut cap = p.clone();
    while cap < slots {
        cap *= p;
        d += 1;
    }
    d
}

pub fn arrange(h: &Hierarchy, ctx: &FieldContext, placement: Placement) -> Result<Arrangement> {
    let p = ctx.p().clone();
    let mut class_disks: Vec<Option<Disk>> = vec![None; h.classes.len()];
    let n = h.kappa.len();
    let mut terminal_disks: Vec<Option<Disk>> = vec![None; n];

    // Roots go to the unit residues: slot t sits at 1 + (t mod (p-1)) + p·(t div (p-1)).
    let roots: Vec<usize> = h.roots().collect();
    let units = &p - 1u32;
    let mut d = 1;
    while &units * num_traits::pow(p.clone(), d - 1) < BigInt::from(roots.len()) {
        d += 1;
    }
    for (t, &k) in roots.iter().enumerate() {
        let t = BigInt::from(t);
        let center = BigInt::one() + &t % &units + &p * (&t / &units);
        class_disks[k] = Some(Disk::closed(center.into(), d as i64, ctx));
    }

    // Classes are ordered by level, so parents are placed before children.
    for k in 0..h.classes.len() {
        let class = &h.classes[k];
        let disk = class_disks[k].clone().expect("parent placed first");
        let mut children: Vec<Child> = class
            .successors
            .iter()
            .map(|&s| Child::Class(s))
            .chain(class.terminals.iter().map(|&j| Child::Terminal(j)))
            .collect();
        let slots = match placement {
            Placement::Paper => children.len() + usize::from(class.successors.is_empty()),
            Placement::Lex => {
                children.sort_by_key(|c| match c {
                    Child::Class(s) => h.classes[*s].members[0],
                    Child::Terminal(j) => *j,
                });
                children.len() + 1
            }
        };
        let step = depth_for(&p, slots);
        let r = disk.radius_exp().expect("class disks are closed");
        let spacing = ctx.pow(r);
        for (t, child) in children.iter().enumerate() {
            let center = disk.center() + &(&spacing * &ValuedRational::from(t as i64));
            let sub = Disk::closed(center, r + step, ctx);
            match *child {
                Child::Class(s) => class_disks[s] = Some(sub),
                Child::Terminal(j) => terminal_disks[j] = Some(sub),
            }
        }
    }

    let class_disks: Vec<Disk> = class_disks
        .into_iter()
        .map(|d| d.expect("every class placed"))
        .collect();
    let terminal_disks: Vec<Disk> = terminal_disks
        .into_iter()
        .map(|d| d.expect("every index is a terminal"))
        .collect();
    let maps = (0..n)
        .map(|i| {
            let (dom, target) = (&terminal_disks[i], &class_disks[h.kappa[i]]);
            let (rd, rt) = (dom.radius_exp().unwrap(), target.radius_exp().unwrap());
            let alpha = ctx.pow(rt - rd);
            let beta = target.center() - &(&alpha * dom.center());
            AffineMap { alpha, beta }
        })
        .collect();

    Ok(Arrangement {
        ctx: ctx.clone(),
        placement,
        hierarchy: h.clone(),
        class_disks,
        terminal_disks,
        maps,
        sink: Disk::closed(ValuedRational::zero(), 1, ctx),
    })
}

impl Arrangement {
    pub fn n(&self) -> usize {
        self.terminal_disks.len()
    }

    /// `f_i(D̄_i)`.
    pub fn image(&self, i: usize) -> Disk {
        let f = &self.maps[i];
        affine_image(&self.terminal_disks[i], &f.alpha, &f.beta, &self.ctx)
            .expect("alpha is a power of p")
    }

    /// Haar measure of `inner` relative to `outer`, `p^-(r_inner - r_outer)`.
    pub fn relative_measure(&self, inner: &Disk, outer: &Disk) -> BigRational {
        let k = inner.radius_exp().unwrap() - outer.radius_exp().unwrap();
        self.ctx.pow(-k).into_rational()
    }

    /// Geometric invariants of the placement; empty when all hold.
    pub fn invariant_violations(&self) -> Vec<String> {
        let ctx = &self.ctx;
        let unit = Disk::closed(ValuedRational::zero(), 0, ctx);
        let h = &self.hierarchy;
        let mut out = Vec::new();
        for (k, d) in self.class_disks.iter().enumerate() {
            if !unit.strictly_contains(d, ctx) || !d.is_disjoint(&self.sink, ctx) {
                out.push(format!("class disk {d} is not in the unit sphere"));
            }
            match h.classes[k].parent {
                Some(par) if !self.class_disks[par].strictly_contains(d, ctx) => {
                    out.push(format!("class disk {d} is not inside its parent"));
                }
                None => {
                    for other in h.roots().filter(|&o| o != k) {
                        if !d.is_disjoint(&self.class_disks[other], ctx) {
                            out.push(format!(
                                "root class disks {d} and {} meet",
                                self.class_disks[other]
                            ));
                        }
                    }
                }
                _ => {}
            }
        }
        for (i, d) in self.terminal_disks.iter().enumerate() {
            for e in &self.terminal_disks[i + 1..] {
                if !d.is_disjoint(e, ctx) {
                    out.push(format!("terminal disks {d} and {e} meet"));
                }
            }
            let home = h.terminal_class[i];
            if !self.class_disks[home].strictly_contains(d, ctx) {
                out.push(format!("terminal disk {d} is outside its class"));
            }
            for &s in &h.classes[home].successors {
                if !d.is_disjoint(&self.class_disks[s], ctx) {
                    out.push(format!("terminal disk {d} meets a successor class"));
                }
            }
        }
        for (k, class) in h.classes.iter().enumerate() {
            let outer = &self.class_disks[k];
            let covered: BigRational = class
                .members
                .iter()
                .map(|&j| self.relative_measure(&self.terminal_disks[j], outer))
                .sum();
            if covered >= BigRational::one() {
                out.push(format!("terminal disks fill the class disk {outer}"));
            }
            if self.placement == Placement::Lex {
                let children: BigRational = class
                    .successors
                    .iter()
                    .map(|&s| &self.class_disks[s])
                    .chain(class.terminals.iter().map(|&j| &self.terminal_disks[j]))
                    .map(|d| self.relative_measure(d, outer))
                    .sum();
                if children >= BigRational::one() {
                    out.push(format!("subdisks fill the class disk {outer}"));
                }
            }
        }
        out
    }
}

#[derive(Serialize)]
struct ArrangementJson<'a> {
    p: BigIntNumber,
    placement: Placement,
    class_disks: Vec<DiskJson>,
    terminal_disks: Vec<DiskJson>,
    maps: &'a [AffineMap],
    kappa: &'a [usize],
    sink: DiskJson,
}

impl Serialize for Arrangement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ArrangementJson {
            p: BigIntNumber(self.ctx.p().clone()),
            placement: self.placement,
            class_disks: self.class_disks.iter().map(DiskJson::from).collect(),
            terminal_disks: self.terminal_disks.iter().map(DiskJson::from).collect(),
            maps: &self.maps,
            kappa: &self.hierarchy.kappa,
            sink: (&self.sink).into(),
        }
        .serialize(s)
    }
}
