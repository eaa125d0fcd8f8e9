//! Worked examples shipped with the crate, with their expected values.
//!
//! Every expected value carries a provenance tag: `[PAPER]` for values
//! published with the example, `[DERIVED]` for values computed independently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{analyze, AnalyzeOptions, SystemJson};
use crate::matrix::IntMatrix;
use crate::realize::{realize_admissible, Placement, RealizeOptions};
use crate::roots::leading_root;
use crate::valued::FieldContext;
use crate::zeta::{det_i_minus_ta, excluded_product, zeta_quotient};

const SOURCES: [(&str, &str); 4] = [
    ("golden", include_str!("../fixtures/golden.json")),
    ("swap", include_str!("../fixtures/swap.json")),
    ("tame", include_str!("../fixtures/tame.json")),
    ("wild", include_str!("../fixtures/wild.json")),
];

pub const NAMES: [&str; 4] = ["golden", "swap", "tame", "wild"];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: String,
}

impl<T> Tagged<T> {
    pub fn has_provenance(&self) -> bool {
        let p = self.provenance.trim_start();
        p.starts_with("[PAPER]") || p.starts_with("[DERIVED]")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    /// A matrix to realize, with the piecewise system the realization should produce.
    Realization {
        p: u32,
        matrix: IntMatrix,
        placement: Placement,
        m: u32,
        system: SystemJson,
    },
    /// A transition matrix and the cycle lengths excluded from its zeta function.
    Matrix {
        matrix: IntMatrix,
        excluded: Vec<usize>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Tagged<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adjacency: Option<Tagged<IntMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub det: Option<Tagged<String>>,
    pub zeta: Tagged<String>,
    pub entropy: Tagged<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minimal_m: Option<Tagged<u32>>,
}

impl Expected {
    /// Names of expected fields lacking a provenance tag.
    pub fn missing_provenance(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut check = |name, ok: Option<bool>| {
            if ok == Some(false) {
                out.push(name);
            }
        };
        check("terms", self.terms.as_ref().map(Tagged::has_provenance));
        check(
            "adjacency",
            self.adjacency.as_ref().map(Tagged::has_provenance),
        );
        check("det", self.det.as_ref().map(Tagged::has_provenance));
        check("zeta", Some(self.zeta.has_provenance()));
        check("entropy", Some(self.entropy.has_provenance()));
        check(
            "minimal_m",
            self.minimal_m.as_ref().map(Tagged::has_provenance),
        );
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub payload: Payload,
    pub expected: Expected,
}

pub fn source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn load(name: &str) -> Result<Fixture> {
    let raw =
        source(name).ok_or_else(|| Error::InvalidArgument(format!("unknown example {name:?}")))?;
    Ok(serde_json::from_str(raw)?)
}

pub fn all() -> Vec<Fixture> {
    NAMES
        .iter()
        .map(|n| load(n).expect("embedded fixtures parse"))
        .collect()
}

/// One compared field.
#[derive(Debug, Clone, Serialize)]
pub struct FieldCheck {
    pub field: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub ok: bool,
    pub checks: Vec<FieldCheck>,
}

impl FixtureOutcome {
    pub fn diff(&self) -> impl Iterator<Item = &FieldCheck> {
        self.checks.iter().filter(|c| !c.ok)
    }
}

fn exact(field: &str, expected: impl ToString, actual: impl ToString) -> FieldCheck {
    let (expected, actual) = (expected.to_string(), actual.to_string());
    FieldCheck {
        field: field.into(),
        ok: expected == actual,
        expected,
        actual,
    }
}

/// Entropy decimals are compared at the 9 significant digits they are stored with.
fn decimal(field: &str, expected: f64, actual: f64, tol: f64) -> FieldCheck {
    let slack = 5e-9 * expected.abs().max(1.0);
    FieldCheck {
        field: field.into(),
        expected: format!("{expected}"),
        actual: format!("{actual:.9}"),
        ok: (expected - actual).abs() <= slack + tol,
    }
}

fn flag(field: &str, ok: bool) -> FieldCheck {
    exact(field, true, ok)
}

/// Runs a fixture end to end and compares every expected value.
pub fn run(fixture: &Fixture, tol: &num_rational::BigRational) -> Result<FixtureOutcome> {
    use num_traits::ToPrimitive;
    let tol_f = tol.to_f64().unwrap_or(0.0);
    let e = &fixture.expected;
    let mut checks = Vec::new();
    match &fixture.payload {
        Payload::Realization {
            p,
            matrix,
            placement,
            m,
            system,
        } => {
            let ctx = FieldContext::new(*p)?;
            let opts = RealizeOptions {
                placement: *placement,
                m: Some(*m),
                tol: tol.clone(),
            };
            let r = realize_admissible(matrix, &ctx, &opts)?;
            if let Some(terms) = &e.terms {
                let actual: Vec<&str> = r.map.terms.iter().map(|t| t.human.as_str()).collect();
                checks.push(exact("terms", terms.value.join(" + "), actual.join(" + ")));
            }
            checks.push(flag("verification", r.verification.ok));
            checks.push(exact(
                "system",
                serde_json::to_string(system)?,
                serde_json::to_string(&r.system)?,
            ));
            if let Some(mm) = &e.minimal_m {
                checks.push(exact("minimal_m", mm.value, r.m_min));
            }
            let report = analyze(
                &system.clone().into_system()?,
                AnalyzeOptions::default(),
                tol,
            )?;
            if let Some(adj) = &e.adjacency {
                checks.push(exact("adjacency", &adj.value, report.adjacency.as_int()));
            }
            checks.push(exact("zeta", &e.zeta.value, &report.zeta_human));
            checks.push(decimal("entropy", e.entropy.value, report.entropy, tol_f));
        }
        Payload::Matrix { matrix, excluded } => {
            if let Some(det) = &e.det {
                checks.push(exact("det", &det.value, det_i_minus_ta(matrix)));
            }
            let q = zeta_quotient(matrix, excluded)?;
            checks.push(exact("zeta", &e.zeta.value, &q.zeta));
            checks.push(flag("numerator_divides_product", q.numerator_cyclotomic));
            checks.push(flag("coprime", q.zeta.is_coprime()));
            let product = excluded_product(excluded);
            checks.push(flag("product_nonzero", !product.is_zero()));
            let root = leading_root(matrix, tol);
            checks.push(decimal("entropy", e.entropy.value, root.entropy(), tol_f));
        }
    }
    for missing in e.missing_provenance() {
        checks.push(exact(
            &format!("provenance.{missing}"),
            "[PAPER] or [DERIVED]",
            "none",
        ));
    }
    Ok(FixtureOutcome {
        name: fixture.name.clone(),
        ok: checks.iter().all(|c| c.ok),
        checks,
    })
}
