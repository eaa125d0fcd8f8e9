//! Exact p-adic piecewise-scaling dynamics: Markov partitions, Artin–Mazur
//! zeta functions and entropy, and the compilation of a non-negative integer
//! matrix into a hyperbolic rational map over `Q_p` that realizes its entropy.
//!
//! Everything is computed with arbitrary-precision integers and rationals;
//! floating point only appears in human-facing decimal approximations.

pub mod disk;
pub mod error;
pub mod fixtures;
pub mod json;
pub mod markov;
pub mod matrix;
pub mod poly;
pub mod realize;
pub mod roots;
pub mod valued;
pub mod zeta;

pub use num_rational::BigRational;

pub use disk::{affine_image, enclosing_gap_disk, relation, split, Disk, DiskKind, Relation, Side};
pub use error::{Error, Result};
pub use markov::{analyze, refine_to_markov, AnalysisReport, PiecewiseSystem};
pub use matrix::{IntMatrix, ZeroOneMatrix};
pub use poly::{IntPolynomial, RatPoly, RationalFunctionZ};
pub use realize::{realize, realize_admissible, Placement, Realization, RealizeOptions};
pub use roots::{default_tol, leading_root, parse_tol, RootCertificate};
pub use valued::{norm_compare, valuation, FieldContext, HalfValuation, ValuedRational};
pub use zeta::{
    augment, det_i_minus_ta, series_consistency, trace_powers, zeta_quotient, zeta_sft,
};
