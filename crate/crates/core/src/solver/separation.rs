//! Center-separation rows added lazily to a binary model.

use std::collections::HashSet;

use super::model::{CoverModel, Row, RowKind, Sense};
use crate::candidates::CandidateSet;
use crate::geometry::{dist, Disk, Point};

/// A pair at distance below `ell - SEPARATION_TOL` violates separation;
/// distance exactly `ell` is allowed.
pub const SEPARATION_TOL: f64 = 1e-9;

/// Pairs `(i, j)`, `i < j`, of disks whose centers are closer than `ell`,
/// with their distance, in lexicographic order.
pub fn separation_violations(selected: &[Disk], ell: f64) -> Vec<((usize, usize), f64)> {
    let mut out = Vec::new();
    for i in 0..selected.len() {
        for j in i + 1..selected.len() {
            let d = dist(&selected[i].center, &selected[j].center);
            if d < ell - SEPARATION_TOL {
                out.push(((i, j), d));
            }
        }
    }
    out
}

/// Clique centers and pair rows already in the model.
#[derive(Clone, Debug, Default)]
pub struct CliqueState {
    pub centers: Vec<Point>,
    pairs: HashSet<(usize, usize)>,
    cliques: HashSet<usize>,
    /// Sorted variable lists of the clique rows.
    members: Vec<Vec<usize>>,
}

impl CliqueState {
    fn near_existing(&self, p: &Point, radius: f64) -> bool {
        self.centers.iter().any(|c| dist(c, p) < radius)
    }

    fn in_one_clique(&self, i: usize, j: usize) -> bool {
        self.members
            .iter()
            .any(|m| m.binary_search(&i).is_ok() && m.binary_search(&j).is_ok())
    }
}

/// Adds one row per violation. `selected[k]` is the candidate index of the
/// `k`-th disk the violation indices refer to. A violation closer than
/// `ell / 2` becomes a clique row around the first disk of the pair unless
/// an earlier clique center lies within `ell / 2` of it (or `cliques` is
/// off); every other violation becomes a pair row unless a clique row
/// already forbids the pair.
pub fn add_separation_cuts(
    model: &mut CoverModel,
    c: &CandidateSet,
    selected: &[usize],
    violations: &[((usize, usize), f64)],
    ell: f64,
    cliques: bool,
    state: &mut CliqueState,
) -> usize {
    let half = ell / 2.0;
    let mut added = 0;
    for &((a, b), d) in violations {
        let (i, j) = (selected[a], selected[b]);
        let yi = c.disks[i].center;
        if cliques && d < half && !state.cliques.contains(&i) && !state.near_existing(&yi, half) {
            let vars: Vec<usize> = (0..c.len()).filter(|&k| dist(&yi, &c.disks[k].center) < half).collect();
            model.rows.push(Row {
                kind: RowKind::Clique { center: i },
                sense: Sense::Le,
                rhs: 1,
                vars: vars.clone(),
            });
            state.members.push(vars);
            state.centers.push(yi);
            state.cliques.insert(i);
            added += 1;
            continue;
        }
        let key = (i.min(j), i.max(j));
        if !state.in_one_clique(i, j) && state.pairs.insert(key) {
            model.rows.push(Row {
                kind: RowKind::Pair { a: key.0, b: key.1 },
                sense: Sense::Le,
                rhs: 1,
                vars: vec![key.0, key.1],
            });
            added += 1;
        }
    }
    added
}
