//! Piecewise-affine systems on disjoint disks and their Markov refinement.
//!
//! A cover is a list of pairwise disjoint disks, each inside one piece domain
//! and acting by that piece's affine map. For a cover disk `U`, `m(U)` is the
//! least `n ≥ 1` such that `f^n(U)` contains a cover disk; the cover is Markov
//! when every `m(U)` is 1. The refinement loop prunes disks whose orbit leaves
//! the cover and splits one disk at a time, tracking the index
//! `Σ (m(U) - 1)` before and after each split.

use serde::{Deserialize, Serialize};

use crate::disk::{affine_image, affine_preimage, split, Disk};
use crate::error::{Error, Result};
use crate::json::{BigIntNumber, DiskJson};
use crate::matrix::ZeroOneMatrix;
use crate::poly::RationalFunctionZ;
use crate::roots::{default_tol, leading_root, RootCertificate};
use crate::valued::{FieldContext, ValuedRational};
use crate::zeta::zeta_sft;

use num_rational::BigRational;

/// `z ↦ alpha·z + beta` on a closed disk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePiece {
    pub domain: Disk,
    pub alpha: ValuedRational,
    pub beta: ValuedRational,
}

impl AffinePiece {
    pub fn new(domain: Disk, alpha: ValuedRational, beta: ValuedRational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::ZeroScale);
        }
        if domain.is_point() {
            return Err(Error::InvalidSystem(format!(
                "piece domain {domain} is a point"
            )));
        }
        Ok(Self {
            domain,
            alpha,
            beta,
        })
    }

    pub fn apply(&self, z: &ValuedRational) -> ValuedRational {
        &self.alpha * z + &self.beta
    }

    pub fn image(&self, d: &Disk, ctx: &FieldContext) -> Disk {
        affine_image(d, &self.alpha, &self.beta, ctx).expect("alpha is non-zero")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseSystem {
    ctx: FieldContext,
    pieces: Vec<AffinePiece>,
    sink: Option<Disk>,
}

impl PiecewiseSystem {
    pub fn new(ctx: FieldContext, pieces: Vec<AffinePiece>, sink: Option<Disk>) -> Result<Self> {
        for (i, a) in pieces.iter().enumerate() {
            for (j, b) in pieces.iter().enumerate().skip(i + 1) {
                if !a.domain.is_disjoint(&b.domain, &ctx) {
                    return Err(Error::InvalidSystem(format!(
                        "domains of pieces {i} and {j} overlap"
                    )));
                }
            }
            if let Some(s) = &sink {
                if !a.domain.is_disjoint(s, &ctx) {
                    return Err(Error::InvalidSystem(format!(
                        "domain of piece {i} meets the sink {s}"
                    )));
                }
            }
        }
        Ok(Self { ctx, pieces, sink })
    }

    pub fn ctx(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn sink(&self) -> Option<&Disk> {
        self.sink.as_ref()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let raw: SystemJson = serde_json::from_str(s)?;
        raw.into_system()
    }

    pub fn to_json(&self) -> SystemJson {
        SystemJson {
            p: BigIntNumber(self.ctx.p().clone()),
            pieces: self
                .pieces
                .iter()
                .map(|pc| PieceJson {
                    domain: DiskJson::from(&pc.domain),
                    alpha: pc.alpha.clone(),
                    beta: pc.beta.clone(),
                })
                .collect(),
            sink: self.sink.as_ref().map(DiskJson::from),
        }
    }
}

/// `{"p":2,"pieces":[{"domain":{…},"alpha":"1/4","beta":"3/4"}],"sink":{…}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemJson {
    pub p: BigIntNumber,
    pub pieces: Vec<PieceJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sink: Option<DiskJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PieceJson {
    pub domain: DiskJson,
    pub alpha: ValuedRational,
    pub beta: ValuedRational,
}

impl SystemJson {
    pub fn into_system(self) -> Result<PiecewiseSystem> {
        let ctx = FieldContext::new(self.p.0)?;
        let pieces = self
            .pieces
            .into_iter()
            .map(|pc| AffinePiece::new(pc.domain.to_disk(&ctx)?, pc.alpha, pc.beta))
            .collect::<Result<Vec<_>>>()?;
        let sink = self.sink.map(|d| d.to_disk(&ctx)).transpose()?;
        PiecewiseSystem::new(ctx, pieces, sink)
    }
}

/// A cover disk together with the index of the piece acting on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDisk {
    pub disk: Disk,
    pub piece: usize,
}

/// Result of following the orbit of a cover disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MIndex {
    Hit {
        m: u32,
    },
    /// The orbit left every cover disk before covering one.
    Escaped {
        after: u32,
    },
    CapExceeded,
}

impl MIndex {
    pub fn value(&self) -> Option<u32> {
        match self {
            MIndex::Hit { m } => Some(*m),
            _ => None,
        }
    }
}

/// One performed split.
#[derive(Debug, Clone, Serialize)]
pub struct SplitRecord {
    /// Cover disk whose `m` drove the split.
    pub source: DiskJson,
    pub source_m: u32,
    /// The disk that was split, and the subdisk it was split via.
    pub target: DiskJson,
    pub via: DiskJson,
    pub fragments: Vec<DiskJson>,
    pub index_before: u64,
    pub index_after: u64,
}

impl SplitRecord {
    pub fn drop(&self) -> i64 {
        self.index_before as i64 - self.index_after as i64
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Nothing survived pruning; the system has no repelling dynamics.
    EmptyJulia,
    /// A cover disk whose orbit leaves the cover was dropped as Fatou.
    Pruned { disk: DiskJson },
    /// Part of a split disk was not kept because no known orbit passes through it.
    Discarded { from: DiskJson, kept: usize },
    /// The admissible-matrix Markov check failed but realization proceeded.
    NotMarkov { detail: String },
}

#[derive(Debug, Clone)]
pub struct CoverState {
    pub cover: Vec<CoverDisk>,
    pub m_values: Vec<MIndex>,
    pub history: Vec<SplitRecord>,
    pub pruned: Vec<Disk>,
    pub warnings: Vec<Warning>,
}

impl CoverState {
    /// The initial cover: the piece domains.
    pub fn initial(system: &PiecewiseSystem) -> Self {
        let cover = system
            .pieces
            .iter()
            .enumerate()
            .map(|(i, pc)| CoverDisk {
                disk: pc.domain.clone(),
                piece: i,
            })
            .collect();
        Self {
            cover,
            m_values: vec![],
            history: vec![],
            pruned: vec![],
            warnings: vec![],
        }
    }

    pub fn disks(&self) -> Vec<Disk> {
        self.cover.iter().map(|c| c.disk.clone()).collect()
    }

    /// `Σ (m(U) - 1)` over disks with a finite `m`.
    pub fn index(&self) -> u64 {
        self.m_values
            .iter()
            .filter_map(MIndex::value)
            .map(|m| u64::from(m - 1))
            .sum()
    }

    pub fn is_markov(&self) -> bool {
        self.m_values.iter().all(|m| *m == MIndex::Hit { m: 1 })
    }

    fn recompute(&mut self, system: &PiecewiseSystem, cap_m: u32) {
        self.m_values = (0..self.cover.len())
            .map(|i| m_index(i, self, system, cap_m))
            .collect();
    }
}

#[derive(Debug, Clone)]
struct Affine {
    alpha: ValuedRational,
    beta: ValuedRational,
}

impl Affine {
    fn identity() -> Self {
        Affine {
            alpha: ValuedRational::one(),
            beta: ValuedRational::zero(),
        }
    }

    /// `piece ∘ self`.
    fn then(&self, piece: &AffinePiece) -> Self {
        Affine {
            alpha: &piece.alpha * &self.alpha,
            beta: &piece.alpha * &self.beta + &piece.beta,
        }
    }
}

struct Orbit {
    outcome: MIndex,
    /// `images[k]` is `f^(k+1)` of the start disk.
    images: Vec<Disk>,
    /// Composite map from the start disk to each image.
    maps: Vec<Affine>,
}

fn follow(start: &CoverDisk, cover: &[CoverDisk], system: &PiecewiseSystem, cap: u32) -> Orbit {
    let ctx = &system.ctx;
    let mut disk = start.disk.clone();
    let mut piece = start.piece;
    let mut map = Affine::identity();
    let mut images = Vec::new();
    let mut maps = Vec::new();
    for n in 1..=cap {
        let pc = &system.pieces[piece];
        disk = pc.image(&disk, ctx);
        map = map.then(pc);
        images.push(disk.clone());
        maps.push(map.clone());
        if cover.iter().any(|c| disk.contains(&c.disk, ctx)) {
            return Orbit {
                outcome: MIndex::Hit { m: n },
                images,
                maps,
            };
        }
        // Disks are disjoint or nested, so the image now sits strictly inside
        // at most one cover disk.
        match cover.iter().find(|c| c.disk.contains(&disk, ctx)) {
            Some(c) => piece = c.piece,
            None => {
                return Orbit {
                    outcome: MIndex::Escaped { after: n },
                    images,
                    maps,
                }
            }
        }
    }
    Orbit {
        outcome: MIndex::CapExceeded,
        images,
        maps,
    }
}

/// `m` of cover disk `idx`: the least `n ≤ cap` with `f^n(U)` containing a cover disk.
pub fn m_index(idx: usize, state: &CoverState, system: &PiecewiseSystem, cap: u32) -> MIndex {
    follow(&state.cover[idx], &state.cover, system, cap).outcome
}

/// `A[i][j] = 1` iff `f(U_i) ⊇ U_j`.
pub fn adjacency(state: &CoverState, system: &PiecewiseSystem) -> ZeroOneMatrix {
    let ctx = &system.ctx;
    let rows: Vec<Vec<bool>> = state
        .cover
        .iter()
        .map(|u| {
            let img = system.pieces[u.piece].image(&u.disk, ctx);
            state
                .cover
                .iter()
                .map(|v| img.contains(&v.disk, ctx))
                .collect()
        })
        .collect();
    ZeroOneMatrix::from_bools(&rows)
}

#[derive(Debug, Clone, Copy)]
pub struct RefineOptions {
    pub cap_splits: usize,
    pub cap_m: u32,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            cap_splits: 10_000,
            cap_m: 64,
        }
    }
}

/// Prunes and splits until every surviving cover disk has `m = 1`.
pub fn refine_to_markov(system: &PiecewiseSystem, opts: RefineOptions) -> Result<CoverState> {
    let ctx = &system.ctx;
    let mut state = CoverState::initial(system);
    loop {
        prune(&mut state, system, opts.cap_m)?;
        if state.is_markov() {
            if state.cover.is_empty() {
                state.warnings.push(Warning::EmptyJulia);
            }
            return Ok(state);
        }
        if state.history.len() >= opts.cap_splits {
            return Err(Error::CapExceeded {
                what: "splits",
                index: state.index(),
            });
        }
        let index_before = state.index();
        let (ui, m) = state
            .m_values
            .iter()
            .enumerate()
            .find_map(|(i, v)| v.value().filter(|&m| m > 1).map(|m| (i, m)))
            .expect("a non-Markov cover has a disk with m > 1");
        let orbit = follow(&state.cover[ui], &state.cover, system, m);
        let u0 = orbit.images[(m - 2) as usize].clone();
        let ti = state
            .cover
            .iter()
            .position(|c| c.disk.strictly_contains(&u0, ctx))
            .expect("f^(m-1)(U) lies strictly inside a cover disk");
        let target = state.cover[ti].clone();
        let marked = marked_disks(ti, &u0, &state, system, opts.cap_m)?;
        let fragments = split(&target.disk, &u0, &marked, ctx)?;
        if fragments.len() == 1 || marked.is_empty() {
            state.warnings.push(Warning::Discarded {
                from: (&target.disk).into(),
                kept: fragments.len(),
            });
        }
        let source = state.cover[ui].disk.clone();
        state.cover.splice(
            ti..=ti,
            fragments.iter().map(|d| CoverDisk {
                disk: d.clone(),
                piece: target.piece,
            }),
        );
        state.recompute(system, opts.cap_m);
        check_cap(&state)?;
        state.history.push(SplitRecord {
            source: (&source).into(),
            source_m: m,
            target: (&target.disk).into(),
            via: (&u0).into(),
            fragments: fragments.iter().map(DiskJson::from).collect(),
            index_before,
            index_after: state.index(),
        });
    }
}

/// Subdisks of cover disk `ti` known to carry orbits that come back to the cover.
///
/// With `k = m(U')`, these are the pullbacks under `f^k|U'` of the cover
/// disks inside `f^k(U')`. A pullback that contains `u0` contributes the
/// maximal disks of the ring between it and `u0`.
fn marked_disks(
    ti: usize,
    u0: &Disk,
    state: &CoverState,
    system: &PiecewiseSystem,
    cap_m: u32,
) -> Result<Vec<Disk>> {
    let ctx = &system.ctx;
    let target = &state.cover[ti];
    let orbit = follow(target, &state.cover, system, cap_m);
    let MIndex::Hit { m: k } = orbit.outcome else {
        return Ok(vec![]);
    };
    let image = &orbit.images[(k - 1) as usize];
    let map = &orbit.maps[(k - 1) as usize];
    let mut marked = Vec::new();
    for w in state.cover.iter().filter(|w| image.contains(&w.disk, ctx)) {
        let pre = affine_preimage(&w.disk, &map.alpha, &map.beta, ctx)?;
        if pre.contains(u0, ctx) {
            if &pre != u0 {
                marked.extend(ring_disks(&pre, u0, ctx));
            }
        } else {
            marked.push(pre);
        }
    }
    Ok(marked)
}

/// Maximal closed disks of `outer ∖ inner`, for `inner ⊊ outer`.
fn ring_disks(outer: &Disk, inner: &Disk, ctx: &FieldContext) -> Vec<Disk> {
    let (Some(r0), Some(r1)) = (outer.radius_exp(), inner.radius_exp()) else {
        return vec![];
    };
    let c = inner.center();
    let mut out = Vec::new();
    for level in r0..r1 {
        // Children of D̄(c, p^-level) at level + 1, except the one holding c.
        let step = ctx.pow(level);
        let mut digit = ValuedRational::one();
        let p = ValuedRational::from(ctx.p().clone());
        while digit != p {
            out.push(Disk::closed(c + &(&digit * &step), level + 1, ctx));
            digit = digit + ValuedRational::one();
        }
    }
    out
}

fn check_cap(state: &CoverState) -> Result<()> {
    if state.m_values.contains(&MIndex::CapExceeded) {
        return Err(Error::CapExceeded {
            what: "m-search",
            index: state.index(),
        });
    }
    Ok(())
}

fn prune(state: &mut CoverState, system: &PiecewiseSystem, cap_m: u32) -> Result<()> {
    loop {
        state.recompute(system, cap_m);
        check_cap(state)?;
        let escaped: Vec<usize> = state
            .m_values
            .iter()
            .enumerate()
            .filter(|(_, m)| matches!(m, MIndex::Escaped { .. }))
            .map(|(i, _)| i)
            .collect();
        if escaped.is_empty() {
            return Ok(());
        }
        for &i in escaped.iter().rev() {
            let c = state.cover.remove(i);
            state.warnings.push(Warning::Pruned {
                disk: (&c.disk).into(),
            });
            state.pruned.push(c.disk);
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    pub refine: RefineOptions,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub cover: Vec<DiskJson>,
    pub adjacency: ZeroOneMatrix,
    pub zeta: RationalFunctionZ,
    pub zeta_human: String,
    pub leading_root: RootCertificate,
    /// `ln λ`; 0 when there is no entropy.
    pub entropy: f64,
    pub entropy_bracket: [f64; 2],
    pub splits: usize,
    pub escaped: Vec<DiskJson>,
    pub warnings: Vec<Warning>,
}

/// Markov refinement, adjacency, zeta function and entropy.
pub fn analyze(
    system: &PiecewiseSystem,
    opts: AnalyzeOptions,
    tol: &BigRational,
) -> Result<AnalysisReport> {
    let state = refine_to_markov(system, opts.refine)?;
    let adjacency = adjacency(&state, system);
    let zeta = zeta_sft(&adjacency);
    let root = leading_root(&adjacency, tol);
    let (bracket, entropy) = match root.log() {
        Some((lo, hi, mid)) if root.hi.as_rational() > &BigRational::from_integer(1.into()) => {
            ([lo.max(0.0), hi], mid)
        }
        _ => ([0.0, 0.0], 0.0),
    };
    Ok(AnalysisReport {
        cover: state.cover.iter().map(|c| (&c.disk).into()).collect(),
        zeta_human: zeta.to_string(),
        zeta,
        adjacency,
        leading_root: root,
        entropy,
        entropy_bracket: bracket,
        splits: state.history.len(),
        escaped: state.pruned.iter().map(DiskJson::from).collect(),
        warnings: state.warnings,
    })
}

/// [`analyze`] with the default tolerance.
pub fn analyze_default(system: &PiecewiseSystem) -> Result<AnalysisReport> {
    analyze(system, AnalyzeOptions::default(), &default_tol())
}
