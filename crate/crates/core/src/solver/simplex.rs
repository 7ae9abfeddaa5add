//! Bounded-variable dual simplex for 0/1-coefficient covering LPs.
//!
//! Rows are `sum(x[v] for v in col rows) - s_i = 0` with a logical variable
//! `s_i` carrying the row bounds. Costs are nonnegative, so the all-logical
//! basis with every structural at its lower bound is dual feasible and the
//! dual simplex can start from it cold. A parent basis is reused for warm
//! starts in branch-and-bound.

use crate::error::{Error, Result};

const PRIMAL_TOL: f64 = 1e-7;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;

/// Static column structure shared by all node LPs.
pub(crate) struct LpData<'a> {
    /// Row indices of each structural column (coefficient 1).
    pub cols: &'a [Vec<u32>],
    pub cost: &'a [f64],
    pub row_lo: &'a [f64],
    pub row_hi: &'a [f64],
}

#[derive(Clone, Debug)]
pub(crate) struct Basis {
    head: Vec<usize>,
    at_upper: Vec<usize>,
}

pub(crate) enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
    /// Dual bound exceeded the cutoff before optimality.
    Cutoff,
}

pub(crate) struct LpSolution {
    pub objective: f64,
    /// Structural values.
    pub x: Vec<f64>,
    /// Structural reduced costs.
    pub reduced: Vec<f64>,
    pub basis: Basis,
    pub iterations: usize,
}

struct State<'a> {
    lp: &'a LpData<'a>,
    ns: usize,
    nr: usize,
    lo: Vec<f64>,
    hi: Vec<f64>,
    head: Vec<usize>,
    /// Position in `head`, or `usize::MAX` when nonbasic.
    pos: Vec<usize>,
    at_upper: Vec<bool>,
    x: Vec<f64>,
    d: Vec<f64>,
    binv: Vec<f64>,
}

impl<'a> State<'a> {
    fn cost(&self, v: usize) -> f64 {
        if v < self.ns {
            self.lp.cost[v]
        } else {
            0.0
        }
    }

    /// `dot(w, column v)`.
    fn col_dot(&self, w: &[f64], v: usize) -> f64 {
        if v < self.ns {
            self.lp.cols[v].iter().map(|&r| w[r as usize]).sum()
        } else {
            -w[v - self.ns]
        }
    }

    /// `B^-1 * column v`.
    fn ftran(&self, v: usize) -> Vec<f64> {
        let nr = self.nr;
        let mut w = vec![0.0; nr];
        if v < self.ns {
            for &r in &self.lp.cols[v] {
                let r = r as usize;
                for i in 0..nr {
                    w[i] += self.binv[i * nr + r];
                }
            }
        } else {
            let r = v - self.ns;
            for i in 0..nr {
                w[i] = -self.binv[i * nr + r];
            }
        }
        w
    }

    fn nonbasic_value(&self, v: usize) -> f64 {
        if self.at_upper[v] {
            self.hi[v]
        } else {
            self.lo[v]
        }
    }

    /// Rebuilds `B^-1`, basic values and reduced costs from `head`.
    fn refactor(&mut self) -> bool {
        let nr = self.nr;
        let mut b = vec![0.0; nr * nr];
        for (k, &v) in self.head.iter().enumerate() {
            if v < self.ns {
                for &r in &self.lp.cols[v] {
                    b[r as usize * nr + k] = 1.0;
                }
            } else {
                b[(v - self.ns) * nr + k] = -1.0;
            }
        }
        match invert(&mut b, nr) {
            Some(inv) => self.binv = inv,
            None => return false,
        }
        self.recompute_primal();
        self.recompute_duals();
        true
    }

    fn recompute_primal(&mut self) {
        let nr = self.nr;
        let total = self.ns + nr;
        // rhs = -sum over nonbasic columns of col_v * x_v
        let mut rhs = vec![0.0; nr];
        for v in 0..total {
            if self.pos[v] != usize::MAX {
                continue;
            }
            let val = self.nonbasic_value(v);
            self.x[v] = val;
            if val == 0.0 {
                continue;
            }
            if v < self.ns {
                for &r in &self.lp.cols[v] {
                    rhs[r as usize] -= val;
                }
            } else {
                rhs[v - self.ns] += val;
            }
        }
        for i in 0..nr {
            let row = &self.binv[i * nr..(i + 1) * nr];
            self.x[self.head[i]] = row.iter().zip(&rhs).map(|(a, b)| a * b).sum();
        }
    }

    fn recompute_duals(&mut self) {
        let nr = self.nr;
        let mut y = vec![0.0; nr];
        for (i, &v) in self.head.iter().enumerate() {
            let c = self.cost(v);
            if c != 0.0 {
                let row = &self.binv[i * nr..(i + 1) * nr];
                for (yk, bk) in y.iter_mut().zip(row) {
                    *yk += c * bk;
                }
            }
        }
        for v in 0..self.ns + nr {
            self.d[v] = if self.pos[v] == usize::MAX {
                self.cost(v) - self.col_dot(&y, v)
            } else {
                0.0
            };
        }
    }

    /// Moves nonbasic variables whose reduced cost has the wrong sign to
    /// their other bound. Fails if that bound is infinite.
    fn restore_dual_feasibility(&mut self) -> bool {
        let mut moved = false;
        for v in 0..self.ns + self.nr {
            if self.pos[v] != usize::MAX || self.lo[v] == self.hi[v] {
                continue;
            }
            if !self.at_upper[v] && self.d[v] < -DUAL_TOL {
                if !self.hi[v].is_finite() {
                    return false;
                }
                self.at_upper[v] = true;
                moved = true;
            } else if self.at_upper[v] && self.d[v] > DUAL_TOL {
                if !self.lo[v].is_finite() {
                    return false;
                }
                self.at_upper[v] = false;
                moved = true;
            }
        }
        if moved {
            self.recompute_primal();
        }
        true
    }

    fn objective(&self) -> f64 {
        (0..self.ns).map(|v| self.lp.cost[v] * self.x[v]).sum()
    }
}

/// Gauss-Jordan inverse with partial pivoting; `None` when singular.
fn invert(a: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&p, &q| a[p * n + col].abs().total_cmp(&a[q * n + col].abs()))?;
        if a[piv * n + col].abs() < 1e-11 {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
                inv.swap(piv * n + k, col * n + k);
            }
        }
        let p = a[col * n + col];
        for k in 0..n {
            a[col * n + k] /= p;
            inv[col * n + k] /= p;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * n + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..n {
                a[r * n + k] -= f * a[col * n + k];
                inv[r * n + k] -= f * inv[col * n + k];
            }
        }
    }
    Some(inv)
}

/// Solves the LP with structural bounds `[lo, hi]`, optionally warm
/// started, stopping early once the dual bound reaches `cutoff`.
pub(crate) fn solve(lp: &LpData<'_>, lo: &[f64], hi: &[f64], warm: Option<&Basis>, cutoff: f64) -> Result<LpOutcome> {
    if let Some(b) = warm {
        if let Some(out) = run(lp, lo, hi, Some(b), cutoff)? {
            return Ok(out);
        }
    }
    run(lp, lo, hi, None, cutoff)?
        .ok_or_else(|| Error::Numerical("dual simplex could not be initialized".into()))
}

fn run(lp: &LpData<'_>, slo: &[f64], shi: &[f64], warm: Option<&Basis>, cutoff: f64) -> Result<Option<LpOutcome>> {
    let ns = lp.cols.len();
    let nr = lp.row_lo.len();
    let total = ns + nr;
    if slo.iter().zip(shi).any(|(l, h)| l > h) {
        return Ok(Some(LpOutcome::Infeasible));
    }
    let mut lo = slo.to_vec();
    lo.extend_from_slice(lp.row_lo);
    let mut hi = shi.to_vec();
    hi.extend_from_slice(lp.row_hi);

    let mut st = State {
        lp,
        ns,
        nr,
        lo,
        hi,
        head: (ns..total).collect(),
        pos: vec![usize::MAX; total],
        at_upper: vec![false; total],
        x: vec![0.0; total],
        d: vec![0.0; total],
        binv: Vec::new(),
    };
    if let Some(b) = warm {
        st.head = b.head.clone();
        for &v in &b.at_upper {
            st.at_upper[v] = true;
        }
    }
    for (i, &v) in st.head.iter().enumerate() {
        st.pos[v] = i;
    }
    for v in 0..total {
        if st.at_upper[v] && !st.hi[v].is_finite() {
            st.at_upper[v] = false;
        }
    }
    if !st.refactor() || !st.restore_dual_feasibility() {
        return Ok(None);
    }

    let max_iter = 20 * (total + 100);
    let mut alpha = vec![0.0; total];
    let mut rho = vec![0.0; nr];
    let mut iter = 0;
    loop {
        if iter > 0 && iter % REFACTOR_EVERY == 0 {
            if !st.refactor() {
                return Err(Error::Numerical("basis became singular".into()));
            }
            if !st.restore_dual_feasibility() {
                return Ok(None);
            }
        }
        if iter % 8 == 0 && st.objective() > cutoff {
            return Ok(Some(LpOutcome::Cutoff));
        }

        // Leaving row: largest bound violation.
        let mut leave = None;
        let mut worst = PRIMAL_TOL;
        for (i, &v) in st.head.iter().enumerate() {
            let viol = if st.x[v] < st.lo[v] {
                st.lo[v] - st.x[v]
            } else if st.x[v] > st.hi[v] {
                st.x[v] - st.hi[v]
            } else {
                0.0
            };
            if viol > worst {
                worst = viol;
                leave = Some(i);
            }
        }
        let Some(r) = leave else {
            let objective = st.objective();
            if objective > cutoff {
                return Ok(Some(LpOutcome::Cutoff));
            }
            let at_upper = (0..total).filter(|&v| st.pos[v] == usize::MAX && st.at_upper[v]).collect();
            return Ok(Some(LpOutcome::Optimal(LpSolution {
                objective,
                x: st.x[..ns].to_vec(),
                reduced: st.d[..ns].to_vec(),
                basis: Basis {
                    head: st.head.clone(),
                    at_upper,
                },
                iterations: iter,
            })));
        };
        iter += 1;
        if iter > max_iter {
            return Err(Error::Numerical(format!("iteration limit {max_iter} reached")));
        }

        let p = st.head[r];
        let to_lower = st.x[p] < st.lo[p];
        let sign = if to_lower { 1.0 } else { -1.0 };
        rho.copy_from_slice(&st.binv[r * nr..(r + 1) * nr]);

        // Harris two-pass ratio test.
        let mut bound = f64::INFINITY;
        for v in 0..total {
            if st.pos[v] != usize::MAX {
                continue;
            }
            let a = st.col_dot(&rho, v);
            alpha[v] = a;
            if st.lo[v] == st.hi[v] {
                continue;
            }
            let sa = sign * a;
            let eligible = (!st.at_upper[v] && sa < -PIVOT_TOL) || (st.at_upper[v] && sa > PIVOT_TOL);
            if eligible {
                let dv = if st.at_upper[v] { -st.d[v] } else { st.d[v] }.max(0.0);
                bound = bound.min((dv + DUAL_TOL) / a.abs());
            }
        }
        if !bound.is_finite() {
            return Ok(Some(LpOutcome::Infeasible));
        }
        let mut enter = None;
        let mut best_pivot = 0.0;
        for v in 0..total {
            if st.pos[v] != usize::MAX || st.lo[v] == st.hi[v] {
                continue;
            }
            let a = alpha[v];
            let sa = sign * a;
            let eligible = (!st.at_upper[v] && sa < -PIVOT_TOL) || (st.at_upper[v] && sa > PIVOT_TOL);
            if !eligible {
                continue;
            }
            let dv = if st.at_upper[v] { -st.d[v] } else { st.d[v] }.max(0.0);
            if dv / a.abs() <= bound && a.abs() > best_pivot {
                best_pivot = a.abs();
                enter = Some(v);
            }
        }
        let q = enter.expect("bound is finite so a candidate exists");

        let w = st.ftran(q);
        let piv = w[r];
        if piv.abs() < PIVOT_TOL {
            if !st.refactor() {
                return Err(Error::Numerical("basis became singular".into()));
            }
            continue;
        }

        // Dual update.
        let theta_d = st.d[q] / piv;
        for v in 0..total {
            if st.pos[v] == usize::MAX {
                st.d[v] -= theta_d * alpha[v];
            }
        }
        st.d[q] = 0.0;
        st.d[p] = -theta_d;

        // Primal update.
        let target = if to_lower { st.lo[p] } else { st.hi[p] };
        let theta_p = (st.x[p] - target) / piv;
        for (i, &v) in st.head.iter().enumerate() {
            st.x[v] -= theta_p * w[i];
        }
        st.x[q] += theta_p;
        st.x[p] = target;
        st.at_upper[p] = !to_lower;

        // Basis change.
        st.head[r] = q;
        st.pos[q] = r;
        st.pos[p] = usize::MAX;
        st.at_upper[q] = false;

        let (before, rest) = st.binv.split_at_mut(r * nr);
        let (pivot_row, after) = rest.split_at_mut(nr);
        for e in pivot_row.iter_mut() {
            *e /= piv;
        }
        for (i, row) in before.chunks_mut(nr).enumerate() {
            let f = w[i];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(pivot_row.iter()) {
                    *a -= f * b;
                }
            }
        }
        for (k, row) in after.chunks_mut(nr).enumerate() {
            let f = w[r + 1 + k];
            if f != 0.0 {
                for (a, b) in row.iter_mut().zip(pivot_row.iter()) {
                    *a -= f * b;
                }
            }
        }
    }
}
