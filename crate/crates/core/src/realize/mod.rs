//! Compiling a non-negative integer matrix into a rational map over `Q_p`
//! whose Julia set dynamics has that matrix as transition matrix.
//!
//! The pipeline is admissibility check, class hierarchy, disk arrangement,
//! choice of the gluing exponent `M`, gluing and verification.

pub mod admissible;
pub mod arrange;
pub mod glue;
pub mod hierarchy;
pub mod verify;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::markov::{AffinePiece, PiecewiseSystem, SystemJson, Warning};
use crate::matrix::{IntMatrix, ZeroOneMatrix};
use crate::roots::{default_tol, leading_root, RootCertificate};
use crate::valued::FieldContext;
use crate::zeta::augment;

pub use admissible::{check_admissible, AdmissibilityReport, Check};
pub use arrange::{arrange, AffineMap, Arrangement, Placement};
pub use glue::{choose_m, glue, lemma_minimum, GlueEntry, GlueSpec, QPoly, RationalMapExpr, Term};
pub use hierarchy::{hierarchy, Class, Hierarchy};
pub use verify::{perturbation_bound, verify_realization, Certificate, VerificationReport};

#[derive(Debug, Clone)]
pub struct RealizeOptions {
    pub placement: Placement,
    /// Overrides the computed minimal exponent.
    pub m: Option<u32>,
    pub tol: BigRational,
}

impl Default for RealizeOptions {
    fn default() -> Self {
        Self {
            placement: Placement::default(),
            m: None,
            tol: default_tol(),
        }
    }
}

/// `λ(A)^(n0·j0)` against `λ(B^j0)`.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralCheck {
    pub n0: u32,
    pub j0: u32,
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Realization {
    pub matrix: ZeroOneMatrix,
    pub admissibility: AdmissibilityReport,
    pub hierarchy: Hierarchy,
    pub arrangement: Arrangement,
    /// The exponent used, and the least one that passes every certificate.
    pub m: u32,
    pub m_min: u32,
    pub glue: GlueSpec,
    pub map: RationalMapExpr,
    pub human: String,
    pub verification: VerificationReport,
    pub system: SystemJson,
    pub leading_root: RootCertificate,
    pub entropy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectral: Option<SpectralCheck>,
    pub warnings: Vec<Warning>,
}

impl Realization {
    /// The affine pieces `f_i` on `D̄_i`, with the sink.
    pub fn to_system(&self) -> PiecewiseSystem {
        self.system
            .clone()
            .into_system()
            .expect("arrangement disks are disjoint")
    }
}

fn piecewise(arr: &Arrangement) -> Result<PiecewiseSystem> {
    let pieces = (0..arr.n())
        .map(|i| {
            let f = &arr.maps[i];
            AffinePiece::new(
                arr.terminal_disks[i].clone(),
                f.alpha.clone(),
                f.beta.clone(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    PiecewiseSystem::new(arr.ctx.clone(), pieces, Some(arr.sink.clone()))
}

/// Realizes a (0,1) matrix directly.
///
/// The matrix must be non-zero, constant, containing and irreducible. When
/// only the Markov condition fails the realization still goes through and a
/// [`Warning::NotMarkov`] is attached.
pub fn realize_admissible(
    a: &IntMatrix,
    ctx: &FieldContext,
    opts: &RealizeOptions,
) -> Result<Realization> {
    let matrix = ZeroOneMatrix::new(a.clone())
        .map_err(|_| Error::NotAdmissible("the matrix must have 0/1 entries".into()))?;
    let admissibility = check_admissible(a);
    if !admissibility.structurally_ok() {
        return Err(Error::NotAdmissible(admissibility.failures().join("; ")));
    }
    let mut warnings = Vec::new();
    if !admissibility.markov.ok {
        warnings.push(Warning::NotMarkov {
            detail: admissibility.markov.detail.clone().unwrap_or_default(),
        });
    }
    let hierarchy = hierarchy::hierarchy(a)?;
    let arrangement = arrange::arrange(&hierarchy, ctx, opts.placement)?;
    let m_min = choose_m(&arrangement)?;
    let m = opts.m.unwrap_or(m_min);
    let spec = GlueSpec::from_arrangement(&arrangement, m)?;
    let map = glue::glue(&spec);
    let verification = verify_realization(&arrangement, &spec, &map, a);
    let system = piecewise(&arrangement)?.to_json();
    let root = leading_root(a, &opts.tol);
    Ok(Realization {
        human: map.human(),
        matrix,
        admissibility,
        hierarchy,
        arrangement,
        m,
        m_min,
        glue: spec,
        map,
        verification,
        system,
        entropy: root.entropy(),
        leading_root: root,
        spectral: None,
        warnings,
    })
}

/// Realizes `B` through the augmented power: `A0 = B^j0` is subdivided into
/// paths of length `n0·j0`, giving a (0,1) matrix with `λ(A)^(n0·j0) = λ(B)^j0`.
///
/// Fails with [`Error::NotPrimitive`] when `B^j0` has a zero entry.
pub fn realize(
    b: &IntMatrix,
    n0: u32,
    j0: u32,
    ctx: &FieldContext,
    opts: &RealizeOptions,
) -> Result<Realization> {
    if n0 == 0 || j0 == 0 {
        return Err(Error::InvalidArgument("n0 and j0 must be positive".into()));
    }
    let a0 = b.pow(j0);
    for i in 0..a0.n() {
        for j in 0..a0.n() {
            if a0.get(i, j).is_zero() {
                return Err(Error::NotPrimitive { j0, row: i, col: j });
            }
        }
    }
    let period = n0 * j0;
    let a = augment(&a0, period as usize)?;
    let mut out = realize_admissible(a.as_int(), ctx, opts)?;
    let rhs = leading_root(&a0, &opts.tol).decimal;
    let lhs = out.leading_root.decimal.powi(period as i32);
    let tol = env_free_tol(&opts.tol);
    out.spectral = Some(SpectralCheck {
        n0,
        j0,
        lhs,
        rhs,
        ok: (lhs - rhs).abs() <= tol * rhs.abs().max(1.0),
    });
    Ok(out)
}

/// The comparison tolerance for decimals, never tighter than `1e-9`.
fn env_free_tol(tol: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    tol.to_f64().unwrap_or(0.0).max(1e-9)
}
