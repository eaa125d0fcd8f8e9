//! The class hierarchy of an admissible matrix.
//!
//! Classes are the distinct row supports `S_i = supp(row i)`. For an
//! admissible matrix they form a laminar family, hence a forest under
//! inclusion. Row `i` indicates the class `S_i`; index `j` is a terminal of
//! the smallest class containing it.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Class {
    /// Sorted member indices.
    pub members: Vec<usize>,
    /// 1 for the roots of the forest.
    pub level: u32,
    /// Rows whose support is exactly this class.
    pub indicators: Vec<usize>,
    /// Child classes, by id.
    pub successors: Vec<usize>,
    pub parent: Option<usize>,
    /// Members not contained in any successor.
    pub terminals: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hierarchy {
    /// Ordered by level, then by smallest member.
    pub classes: Vec<Class>,
    /// `kappa[i]` is the class indicated by row `i`.
    pub kappa: Vec<usize>,
    /// `terminal_class[j]` is the deepest class containing `j`.
    pub terminal_class: Vec<usize>,
}

impl Hierarchy {
    pub fn max_level(&self) -> u32 {
        self.classes.iter().map(|c| c.level).max().unwrap_or(0)
    }

    /// Level at which `j` is a terminal.
    pub fn terminal_level(&self, j: usize) -> u32 {
        self.classes[self.terminal_class[j]].level
    }

    /// Class ids at a given level.
    pub fn level(&self, level: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.classes.len()).filter(move |&k| self.classes[k].level == level)
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.level(1)
    }
}

/// Builds the hierarchy from the row supports of `a`.
///
/// Fails with [`Error::HierarchyIncomplete`] for a zero row (it indicates no
/// class), and with [`Error::NotAdmissible`] for a zero column or supports
/// that are not laminar.
pub fn hierarchy(a: &IntMatrix) -> Result<Hierarchy> {
    let n = a.n();
    let supports: Vec<BTreeSet<usize>> =
        (0..n).map(|i| a.support(i).into_iter().collect()).collect();
    if let Some(i) = supports.iter().position(BTreeSet::is_empty) {
        return Err(Error::HierarchyIncomplete(i));
    }

    let mut sets: Vec<BTreeSet<usize>> = supports.clone();
    sets.sort();
    sets.dedup();
    for (x, s) in sets.iter().enumerate() {
        for t in &sets[x + 1..] {
            if !s.is_disjoint(t) && !s.is_subset(t) && !t.is_subset(s) {
                return Err(Error::NotAdmissible(format!(
                    "row supports {s:?} and {t:?} overlap without nesting"
                )));
            }
        }
    }

    // The parent of a set is the smallest set strictly containing it; laminarity
    // makes it unique.
    let parent_of = |s: &BTreeSet<usize>| -> Option<usize> {
        sets.iter()
            .enumerate()
            .filter(|(_, t)| t.len() > s.len() && s.is_subset(t))
            .min_by_key(|(_, t)| t.len())
            .map(|(k, _)| k)
    };
    let raw_parent: Vec<Option<usize>> = sets.iter().map(parent_of).collect();
    let depth = |mut k: usize| {
        let mut d = 1u32;
        while let Some(p) = raw_parent[k] {
            d += 1;
            k = p;
        }
        d
    };

    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&k| (depth(k), *sets[k].iter().next().expect("non-empty")));
    let mut id_of = vec![0; sets.len()];
    for (id, &k) in order.iter().enumerate() {
        id_of[k] = id;
    }

    let mut classes: Vec<Class> = order
        .iter()
        .map(|&k| Class {
            members: sets[k].iter().copied().collect(),
            level: depth(k),
            indicators: Vec::new(),
            successors: Vec::new(),
            parent: raw_parent[k].map(|p| id_of[p]),
            terminals: Vec::new(),
        })
        .collect();
    for id in 0..classes.len() {
        if let Some(p) = classes[id].parent {
            classes[p].successors.push(id);
        }
    }

    let kappa: Vec<usize> = supports
        .iter()
        .map(|s| id_of[sets.binary_search(s).expect("support is a class")])
        .collect();
    for (i, &k) in kappa.iter().enumerate() {
        classes[k].indicators.push(i);
    }

    let mut terminal_class = Vec::with_capacity(n);
    for j in 0..n {
        let deepest = (0..classes.len())
            .filter(|&k| classes[k].members.binary_search(&j).is_ok())
            .max_by_key(|&k| classes[k].level)
            .ok_or_else(|| Error::NotAdmissible(format!("column {j} is zero")))?;
        classes[deepest].terminals.push(j);
        terminal_class.push(deepest);
    }

    Ok(Hierarchy {
        classes,
        kappa,
        terminal_class,
    })
}
