//! Shared generators and fixture helpers for the integration tests.
#![allow(dead_code)]

use nadyn::markov::{AffinePiece, CoverState, MIndex, PiecewiseSystem};
use nadyn::{Disk, FieldContext, IntMatrix, ValuedRational};
use rand::Rng;

pub fn m(rows: &[&[u64]]) -> IntMatrix {
    IntMatrix::from_rows(rows).unwrap()
}

pub fn random_matrix<R: Rng>(rng: &mut R, max_n: usize, max_entry: u64) -> IntMatrix {
    let n = rng.gen_range(1..=max_n);
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(0..=max_entry)).collect())
        .collect();
    IntMatrix::from_rows(&rows).unwrap()
}

fn random_unit_center<R: Rng>(rng: &mut R, p: u64, depth: u32) -> i64 {
    loop {
        let c = rng.gen_range(1..p.pow(depth)) as i64;
        if !(c as u64).is_multiple_of(p) {
            return c;
        }
    }
}

/// A random system over `Q_p` with at most `max_pieces` pieces whose domains
/// are disjoint disks of depth at most `max_depth` in the unit sphere.
///
/// Each piece maps its domain either onto a disk containing some domain or
/// onto a subdisk of some domain, so orbits stay near the cover. Returns
/// `None` when the draw has an orbit trapped forever strictly inside the cover.
pub fn random_system<R: Rng>(
    rng: &mut R,
    p: u64,
    max_pieces: usize,
    max_depth: i64,
) -> Option<PiecewiseSystem> {
    let ctx = FieldContext::new(p).unwrap();
    let k = rng.gen_range(1..=max_pieces);
    let mut domains: Vec<Disk> = Vec::new();
    for _ in 0..8 * k {
        if domains.len() == k {
            break;
        }
        let r = rng.gen_range(1..=max_depth.min(4));
        let d = Disk::closed(random_unit_center(rng, p, 6).into(), r, &ctx);
        if domains.iter().all(|e| e.is_disjoint(&d, &ctx)) {
            domains.push(d);
        }
    }
    let mut pieces = Vec::new();
    for d in &domains {
        let anchor = &domains[rng.gen_range(0..domains.len())];
        let ra = anchor.radius_exp().unwrap();
        let target = if rng.gen_bool(0.6) {
            // A disk containing the anchor domain.
            let r = rng.gen_range(0..=ra);
            Disk::closed(anchor.center().clone(), r, &ctx)
        } else {
            // A proper subdisk of the anchor domain.
            let r = (ra + rng.gen_range(1..=2)).min(max_depth);
            if r <= ra {
                anchor.clone()
            } else {
                let offset = ctx.pow(ra)
                    * ValuedRational::from(rng.gen_range(0..p.pow((r - ra) as u32)) as i64);
                Disk::closed(anchor.center() + &offset, r, &ctx)
            }
        };
        let rd = d.radius_exp().unwrap();
        let unit = if rng.gen_bool(0.5) { 1 } else { -1 };
        let alpha = ctx.pow(target.radius_exp().unwrap() - rd) * ValuedRational::from(unit);
        let beta = target.center() - &(&alpha * d.center());
        pieces.push(AffinePiece::new(d.clone(), alpha, beta).unwrap());
    }
    let sink = Disk::closed(0.into(), 1, &ctx);
    let sys = PiecewiseSystem::new(ctx, pieces, Some(sink)).ok()?;
    let st = CoverState::initial(&sys);
    let trapped = (0..st.cover.len())
        .any(|i| nadyn::markov::m_index(i, &st, &sys, 64) == MIndex::CapExceeded);
    (!trapped).then_some(sys)
}
