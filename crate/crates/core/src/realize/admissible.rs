//! Admissibility of a non-negative matrix: the structural conditions under
//! which a linearly compatible piecewise map can be built.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::matrix::IntMatrix;

/// Outcome of one sub-check; `witness` is the first offending row (or column).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn pass() -> Self {
        Check {
            ok: true,
            witness: None,
            detail: None,
        }
    }

    fn fail(witness: usize, detail: String) -> Self {
        Check {
            ok: false,
            witness: Some(witness),
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub nonzero: Check,
    pub constant: Check,
    pub containing: Check,
    pub markov: Check,
    pub irreducible_ok: bool,
}

impl AdmissibilityReport {
    /// Everything except the Markov condition.
    pub fn structurally_ok(&self) -> bool {
        self.nonzero.ok && self.constant.ok && self.containing.ok && self.irreducible_ok
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, c) in [
            ("non-zero", &self.nonzero),
            ("constant", &self.constant),
            ("containing", &self.containing),
            ("markov", &self.markov),
        ] {
            if !c.ok {
                out.push(format!("{name}: {}", c.detail.clone().unwrap_or_default()));
            }
        }
        if !self.irreducible_ok {
            out.push("irreducible: the graph is not strongly connected".into());
        }
        out
    }
}

pub fn check_admissible(a: &IntMatrix) -> AdmissibilityReport {
    let n = a.n();
    let supports: Vec<Vec<usize>> = (0..n).map(|i| a.support(i)).collect();

    let nonzero = match supports.iter().position(Vec::is_empty) {
        Some(i) => Check::fail(i, format!("row {i} is zero")),
        None => {
            match (0..n).find(|&j| (0..n).all(|i| a.get(i, j).sign() == num_bigint::Sign::NoSign)) {
                Some(j) => Check::fail(j, format!("column {j} is zero")),
                None => Check::pass(),
            }
        }
    };

    let constant = (0..n)
        .find(|&i| {
            let mut vals = supports[i].iter().map(|&j| a.get(i, j));
            let first = vals.next();
            vals.any(|v| Some(v) != first)
        })
        .map_or_else(Check::pass, |i| {
            Check::fail(i, format!("row {i} has distinct non-zero entries"))
        });

    let containing = containing_check(&supports);
    let markov = markov_check(&supports);
    let irreducible_ok = a.is_irreducible();
    AdmissibilityReport {
        ok: nonzero.ok && constant.ok && containing.ok && markov.ok && irreducible_ok,
        nonzero,
        constant,
        containing,
        markov,
        irreducible_ok,
    }
}

fn containing_check(supports: &[Vec<usize>]) -> Check {
    let sets: Vec<BTreeSet<usize>> = supports
        .iter()
        .map(|s| s.iter().copied().collect())
        .collect();
    for i1 in 0..sets.len() {
        for i2 in i1 + 1..sets.len() {
            let (s1, s2) = (&sets[i1], &sets[i2]);
            if !s1.is_disjoint(s2) && !s1.is_subset(s2) && !s2.is_subset(s1) {
                return Check::fail(
                    i1,
                    format!("supports of rows {i1} and {i2} overlap without nesting"),
                );
            }
        }
    }
    Check::pass()
}

/// Row `i` of `A^k` is supported on the `k`-step reachable set of `i`. A row
/// passes once that set has two elements; while it is a singleton the next
/// set is determined by a single vertex, so the walk repeats within `n` steps.
fn markov_check(supports: &[Vec<usize>]) -> Check {
    for i in 0..supports.len() {
        let mut current: Vec<usize> = supports[i].clone();
        let mut seen = BTreeSet::new();
        loop {
            match current.len() {
                0 => return Check::fail(i, format!("row {i} of some power of A is zero")),
                1 => {
                    if !seen.insert(current[0]) {
                        return Check::fail(
                            i,
                            format!("row {i} of every power of A has a single non-zero entry"),
                        );
                    }
                    current = supports[current[0]].clone();
                }
                _ => break,
            }
        }
    }
    Check::pass()
}
