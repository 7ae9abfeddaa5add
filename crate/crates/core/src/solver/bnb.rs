//! Best-first branch-and-bound over the LP relaxation.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::rc::Rc;
use std::time::Instant;

use super::model::{CoverModel, Sense};
use super::simplex::{self, Basis, LpData, LpOutcome};
use super::{ExactOptions, Limits, Selection, SolveResult, SolveStats, Status};
use crate::error::Result;

const INT_TOL: f64 = 1e-6;
/// Nodes between two runs of the greedy completion heuristic.
const GREEDY_EVERY: u64 = 16;

fn prune_eps(incumbent: f64) -> f64 {
    1e-9 * incumbent.abs().max(1.0)
}

struct Node {
    /// Parent LP bound, scaled.
    bound: f64,
    depth: u32,
    seq: u64,
    /// Bound changes from the root: `(column, lo, hi)`.
    fixes: Vec<(u32, f64, f64)>,
    basis: Option<Rc<Basis>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    /// Max-heap order: smallest bound, then deepest, then oldest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.seq.cmp(&self.seq))
    }
}

/// Columns `j` for which another column covers a superset of `j`'s points
/// at no greater cost. Only sound when the cardinality row is the sole
/// `<=` row and every variable may reach the budget.
fn dominated_columns(model: &CoverModel, ge: &[Vec<u32>]) -> Vec<bool> {
    let n = model.num_vars();
    let mut out = vec![false; n];
    let card = model.cardinality_rhs();
    let le_rows = model.rows.iter().filter(|r| r.sense == Sense::Le).count();
    if le_rows != 1 || model.upper.iter().any(|&u| u < card) {
        return out;
    }
    let ge_rows: Vec<&[usize]> = model
        .rows
        .iter()
        .filter(|r| r.sense == Sense::Ge)
        .map(|r| r.vars.as_slice())
        .collect();
    // Among columns with identical rows only the cheapest (then lowest
    // index) survives; the pairwise test below runs over survivors only.
    let mut rep: HashMap<&[u32], usize> = HashMap::new();
    for j in 0..n {
        if ge[j].is_empty() {
            out[j] = true;
            continue;
        }
        match rep.entry(ge[j].as_slice()) {
            Entry::Vacant(e) => {
                e.insert(j);
            }
            Entry::Occupied(mut e) => {
                let k = *e.get();
                if model.costs[j] < model.costs[k] {
                    out[k] = true;
                    e.insert(j);
                } else {
                    out[j] = true;
                }
            }
        }
    }
    for j in 0..n {
        if out[j] {
            continue;
        }
        let rarest = ge[j]
            .iter()
            .min_by_key(|&&r| ge_rows[r as usize].len())
            .copied()
            .expect("nonempty");
        out[j] = ge_rows[rarest as usize].iter().any(|&k| {
            if k == j || ge[k] == ge[j] {
                return false;
            }
            let (ck, cj) = (model.costs[k], model.costs[j]);
            ck <= cj && is_subset(&ge[j], &ge[k])
        });
    }
    out
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

struct Search<'a> {
    model: &'a CoverModel,
    /// Reduced column -> model variable.
    active: Vec<usize>,
    cols: Vec<Vec<u32>>,
    cost: Vec<f64>,
    scale: f64,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
    glo: Vec<f64>,
    ghi: Vec<f64>,
    /// Incumbent in model space with its unscaled objective.
    incumbent: Option<(f64, Vec<u32>)>,
    root: Option<(f64, Vec<f64>, Vec<f64>)>,
}

impl<'a> Search<'a> {
    fn lp(&self) -> LpData<'_> {
        LpData {
            cols: &self.cols,
            cost: &self.cost,
            row_lo: &self.row_lo,
            row_hi: &self.row_hi,
        }
    }

    /// Scaled cutoff for node LPs.
    fn cutoff(&self) -> f64 {
        match &self.incumbent {
            Some((u, _)) => (u - prune_eps(*u)) / self.scale,
            None => f64::INFINITY,
        }
    }

    fn to_model_space(&self, y: &[u32]) -> Vec<u32> {
        let mut x = vec![0; self.model.num_vars()];
        for (c, &v) in y.iter().enumerate() {
            x[self.active[c]] = v;
        }
        x
    }

    fn offer(&mut self, x: Vec<u32>) {
        if self.model.check(&x).is_err() {
            return;
        }
        let obj = self.model.objective(&x);
        let better = match &self.incumbent {
            Some((u, _)) => obj < u - prune_eps(*u),
            None => true,
        };
        if better {
            self.incumbent = Some((obj, x));
            self.fix_by_reduced_cost();
        }
    }

    /// Caps columns whose root reduced cost makes large values unprofitable.
    fn fix_by_reduced_cost(&mut self) {
        let (Some((u, _)), Some((z, x, d))) = (&self.incumbent, &self.root) else {
            return;
        };
        let gap = u / self.scale - z;
        for c in 0..self.cols.len() {
            if d[c] > 1e-9 && x[c] <= self.glo[c] + 1e-9 {
                let cap = self.glo[c] + (gap / d[c] + 1e-9).floor().max(0.0);
                if cap < self.ghi[c] {
                    self.ghi[c] = cap;
                }
            }
        }
    }

    fn activities(&self, y: &[u32]) -> Vec<i64> {
        let mut act = vec![0i64; self.row_lo.len()];
        for (c, &v) in y.iter().enumerate() {
            if v > 0 {
                for &r in &self.cols[c] {
                    act[r as usize] += v as i64;
                }
            }
        }
        act
    }

    /// Removes units whose removal keeps every lower row bound, most
    /// expensive first.
    fn drop_redundant(&self, y: &mut [u32], act: &mut [i64]) {
        let mut order: Vec<usize> = (0..y.len()).filter(|&c| y[c] > 0).collect();
        order.sort_by(|&a, &b| self.cost[b].total_cmp(&self.cost[a]).then(a.cmp(&b)));
        for c in order {
            while y[c] > 0 && self.cols[c].iter().all(|&r| act[r as usize] > self.row_lo[r as usize] as i64) {
                y[c] -= 1;
                for &r in &self.cols[c] {
                    act[r as usize] -= 1;
                }
            }
        }
    }

    fn upper_ok(&self, act: &[i64]) -> bool {
        act.iter().zip(&self.row_hi).all(|(&a, &h)| (a as f64) <= h)
    }

    /// Rounds every positive LP value up, then trims.
    fn round_up(&mut self, x: &[f64]) {
        let mut y: Vec<u32> = x
            .iter()
            .zip(&self.ghi)
            .map(|(&v, &h)| (v - INT_TOL).ceil().clamp(0.0, h) as u32)
            .collect();
        let mut act = self.activities(&y);
        self.drop_redundant(&mut y, &mut act);
        if self.upper_ok(&act) {
            let x = self.to_model_space(&y);
            self.offer(x);
        }
    }

    /// Rounds down, then repeatedly adds the column with the lowest cost
    /// per unit of remaining deficit it covers.
    fn greedy(&mut self, x: &[f64]) {
        let mut y: Vec<u32> = x.iter().map(|&v| (v + INT_TOL).floor().max(0.0) as u32).collect();
        let mut act = self.activities(&y);
        if !self.upper_ok(&act) {
            return;
        }
        loop {
            let deficit = |r: usize, act: &[i64]| (self.row_lo[r] - act[r] as f64).max(0.0);
            if (0..act.len()).all(|r| deficit(r, &act) == 0.0) {
                break;
            }
            let mut best: Option<(f64, usize)> = None;
            for c in 0..self.cols.len() {
                if y[c] as f64 + 1.0 > self.ghi[c] {
                    continue;
                }
                let mut gain = 0usize;
                let mut fits = true;
                for &r in &self.cols[c] {
                    let r = r as usize;
                    if act[r] as f64 + 1.0 > self.row_hi[r] {
                        fits = false;
                        break;
                    }
                    if deficit(r, &act) > 0.0 {
                        gain += 1;
                    }
                }
                if !fits || gain == 0 {
                    continue;
                }
                let score = self.cost[c] / gain as f64;
                if best.is_none_or(|(s, _)| score < s) {
                    best = Some((score, c));
                }
            }
            let Some((_, c)) = best else {
                return;
            };
            y[c] += 1;
            for &r in &self.cols[c] {
                act[r as usize] += 1;
            }
        }
        self.drop_redundant(&mut y, &mut act);
        let x = self.to_model_space(&y);
        self.offer(x);
    }
}

pub(crate) fn branch_and_bound(model: &CoverModel, limits: &Limits, opts: &ExactOptions) -> Result<SolveResult> {
    let start = Instant::now();
    let n = model.num_vars();
    let mut ge: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut all: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut ge_index = 0u32;
    for (r, row) in model.rows.iter().enumerate() {
        for &v in &row.vars {
            all[v].push(r as u32);
            if row.sense == Sense::Ge {
                ge[v].push(ge_index);
            }
        }
        if row.sense == Sense::Ge {
            ge_index += 1;
        }
    }
    let dominated = if opts.presolve {
        dominated_columns(model, &ge)
    } else {
        vec![false; n]
    };
    let active: Vec<usize> = (0..n).filter(|&v| !dominated[v] && model.upper[v] > 0).collect();
    let scale = active.iter().map(|&v| model.costs[v]).fold(0.0, f64::max);
    let scale = if scale > 0.0 { scale } else { 1.0 };

    let mut search = Search {
        model,
        cols: active.iter().map(|&v| std::mem::take(&mut all[v])).collect(),
        cost: active.iter().map(|&v| model.costs[v] / scale).collect(),
        glo: vec![0.0; active.len()],
        ghi: active.iter().map(|&v| model.upper[v] as f64).collect(),
        active,
        scale,
        row_lo: model
            .rows
            .iter()
            .map(|r| match r.sense {
                Sense::Ge => r.rhs as f64,
                Sense::Le => f64::NEG_INFINITY,
            })
            .collect(),
        row_hi: model
            .rows
            .iter()
            .map(|r| match r.sense {
                Sense::Ge => f64::INFINITY,
                Sense::Le => r.rhs as f64,
            })
            .collect(),
        incumbent: None,
        root: None,
    };
    if let Some(s) = &opts.start {
        search.offer(s.clone());
    }

    let mut stats = SolveStats {
        candidates: n as u64,
        columns: search.cols.len() as u64,
        ..SolveStats::default()
    };
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        depth: 0,
        seq: 0,
        fixes: Vec::new(),
        basis: None,
    });
    let mut seq = 1u64;
    let mut hit_limit = false;
    let mut open_bound = f64::INFINITY;

    while let Some(node) = heap.pop() {
        if node.bound >= search.cutoff() {
            heap.clear();
            break;
        }
        let over_time = limits.time.is_some_and(|t| start.elapsed() >= t);
        let over_nodes = limits.nodes.is_some_and(|k| stats.nodes >= k);
        if over_time || over_nodes {
            open_bound = node.bound;
            hit_limit = true;
            break;
        }
        stats.nodes += 1;

        let mut lo = search.glo.clone();
        let mut hi = search.ghi.clone();
        for &(c, l, h) in &node.fixes {
            lo[c as usize] = lo[c as usize].max(l);
            hi[c as usize] = hi[c as usize].min(h);
        }
        let outcome = simplex::solve(&search.lp(), &lo, &hi, node.basis.as_deref(), search.cutoff())?;
        let sol = match outcome {
            LpOutcome::Optimal(s) => s,
            LpOutcome::Infeasible | LpOutcome::Cutoff => continue,
        };
        stats.lp_iterations += sol.iterations as u64;
        if search.root.is_none() {
            search.root = Some((sol.objective, sol.x.clone(), sol.reduced.clone()));
            search.fix_by_reduced_cost();
        }
        if sol.objective >= search.cutoff() {
            continue;
        }

        let mut branch: Option<(f64, usize)> = None;
        for (c, &v) in sol.x.iter().enumerate() {
            let f = v - v.floor();
            if f > INT_TOL && f < 1.0 - INT_TOL {
                let score = f.min(1.0 - f);
                let better = match branch {
                    None => true,
                    Some((s, b)) => {
                        score > s + 1e-12 || (score > s - 1e-12 && search.cost[c] > search.cost[b])
                    }
                };
                if better {
                    branch = Some((score, c));
                }
            }
        }
        let Some((_, c)) = branch else {
            let y: Vec<u32> = sol.x.iter().map(|&v| v.round().max(0.0) as u32).collect();
            let x = search.to_model_space(&y);
            search.offer(x);
            continue;
        };

        search.round_up(&sol.x);
        if node.depth <= 1 || stats.nodes % GREEDY_EVERY == 1 {
            search.greedy(&sol.x);
        }
        if sol.objective >= search.cutoff() {
            continue;
        }

        let v = sol.x[c];
        let basis = Rc::new(sol.basis);
        let mut up = node.fixes.clone();
        up.push((c as u32, v.ceil(), f64::INFINITY));
        let mut down = node.fixes;
        down.push((c as u32, f64::NEG_INFINITY, v.floor()));
        for fixes in [up, down] {
            heap.push(Node {
                bound: sol.objective,
                depth: node.depth + 1,
                seq,
                fixes,
                basis: Some(Rc::clone(&basis)),
            });
            seq += 1;
        }
    }

    if hit_limit {
        for node in heap.iter() {
            open_bound = open_bound.min(node.bound);
        }
    }
    stats.wall_secs = start.elapsed().as_secs_f64();
    let (status, objective, selected, bound) = match search.incumbent.take() {
        Some((obj, x)) => {
            let selected = x
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| Selection {
                    index: i,
                    disk: model.disks[i],
                    multiplicity: k,
                })
                .collect();
            if hit_limit {
                let lb = (open_bound * scale).max(0.0).min(obj);
                (Status::Feasible, Some(obj), selected, Some(lb))
            } else {
                (Status::Optimal, Some(obj), selected, Some(obj))
            }
        }
        None if hit_limit => (Status::Unsolved, None, Vec::new(), Some((open_bound * scale).max(0.0))),
        None => (Status::Infeasible, None, Vec::new(), None),
    };
    Ok(SolveResult {
        status,
        selected,
        objective,
        lower_bound: bound,
        model_bound: bound,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::candidates::{enumerate_gmc, Origin};
    use crate::geometry::{Disk, Point, SpatialIndex};
    use crate::instance::Instance;
    use crate::solver::model::build_gmc_model;

    #[test]
    fn node_order_prefers_low_bound_then_depth() {
        let mk = |bound, depth, seq| Node {
            bound,
            depth,
            seq,
            fixes: vec![],
            basis: None,
        };
        let mut heap = BinaryHeap::new();
        heap.push(mk(2.0, 5, 0));
        heap.push(mk(1.0, 1, 1));
        heap.push(mk(1.0, 3, 2));
        heap.push(mk(1.0, 3, 3));
        let order: Vec<u64> = std::iter::from_fn(|| heap.pop().map(|n| n.seq)).collect();
        assert_eq!(order, vec![2, 3, 1, 0]);
    }

    #[test]
    fn dominated_extra_disks_are_dropped() {
        let inst = Instance::new("t", vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0)], vec![1, 1], 2).unwrap();
        let mut c = enumerate_gmc(&inst.points);
        let idx = SpatialIndex::build(&inst.points);
        // Covers both points at four times the pair disk's cost.
        c.push(Disk::new(Point::new(1.0, 0.5), 2.0), Origin::Pair, &idx);
        // Covers nothing.
        c.push(Disk::new(Point::new(50.0, 50.0), 1.0), Origin::Pair, &idx);
        let model = build_gmc_model(&c, &inst);
        let ge: Vec<Vec<u32>> = (0..model.num_vars())
            .map(|v| {
                (0..2u32)
                    .filter(|&r| model.rows[r as usize].vars.contains(&v))
                    .collect()
            })
            .collect();
        assert_eq!(dominated_columns(&model, &ge), vec![false, false, false, true, true]);
        let mut bin = model.clone();
        bin.binarize();
        assert!(dominated_columns(&bin, &ge).iter().all(|&d| !d));
    }

    #[test]
    fn subset_check() {
        assert!(is_subset(&[1, 3], &[0, 1, 2, 3]));
        assert!(!is_subset(&[1, 4], &[0, 1, 2, 3]));
        assert!(is_subset(&[], &[2]));
    }
}
