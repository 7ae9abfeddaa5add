use std::fmt;

use crate::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::geometry::Disk;
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Ge,
    Le,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Ge => ">=",
            Sense::Le => "<=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RowKind {
    /// Point `point` covered at least `kappa` times.
    Coverage { point: usize },
    /// At most `m` disks.
    Cardinality,
    /// Candidates `a` and `b` are too close to both be used.
    Pair { a: usize, b: usize },
    /// At most one candidate centered strictly within `ell / 2` of
    /// candidate `center`.
    Clique { center: usize },
}

/// A row `sum(x[v] for v in vars) (>= | <=) rhs`; all coefficients are 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub kind: RowKind,
    pub sense: Sense,
    pub rhs: u32,
    pub vars: Vec<usize>,
}

impl Row {
    pub fn name(&self) -> String {
        match self.kind {
            RowKind::Coverage { point } => format!("cover_{point}"),
            RowKind::Cardinality => "card".to_string(),
            RowKind::Pair { a, b } => format!("pair_{a}_{b}"),
            RowKind::Clique { center } => format!("clique_{center}"),
        }
    }

    pub fn activity(&self, x: &[u32]) -> u64 {
        self.vars.iter().map(|&v| x[v] as u64).sum()
    }

    pub fn is_satisfied(&self, x: &[u32]) -> bool {
        let a = self.activity(x);
        match self.sense {
            Sense::Ge => a >= self.rhs as u64,
            Sense::Le => a <= self.rhs as u64,
        }
    }
}

/// Integer program over a candidate set: one multiplicity variable per
/// candidate with cost `pi r^2`, one coverage row per point, one cardinality
/// row, and any separation rows added later.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverModel {
    pub disks: Vec<Disk>,
    pub costs: Vec<f64>,
    pub upper: Vec<u32>,
    pub rows: Vec<Row>,
}

pub fn build_gmc_model(c: &CandidateSet, inst: &Instance) -> CoverModel {
    let m = inst.m as u32;
    let mut rows: Vec<Row> = inst
        .kappa
        .iter()
        .enumerate()
        .map(|(j, &k)| Row {
            kind: RowKind::Coverage { point: j },
            sense: Sense::Ge,
            rhs: k,
            vars: Vec::new(),
        })
        .collect();
    for (i, cov) in c.covers.iter().enumerate() {
        for &j in cov {
            rows[j].vars.push(i);
        }
    }
    rows.push(Row {
        kind: RowKind::Cardinality,
        sense: Sense::Le,
        rhs: m,
        vars: (0..c.len()).collect(),
    });
    CoverModel {
        disks: c.disks.clone(),
        costs: c.disks.iter().map(Disk::area).collect(),
        upper: vec![m; c.len()],
        rows,
    }
}

impl CoverModel {
    pub fn num_vars(&self) -> usize {
        self.costs.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cardinality_rhs(&self) -> u32 {
        self.rows
            .iter()
            .find(|r| r.kind == RowKind::Cardinality)
            .map_or(u32::MAX, |r| r.rhs)
    }

    pub fn separation_rows(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r.kind, RowKind::Pair { .. } | RowKind::Clique { .. }))
            .count()
    }

    /// Restricts every variable to `{0, 1}`.
    pub fn binarize(&mut self) {
        for u in &mut self.upper {
            *u = (*u).min(1);
        }
    }

    pub fn is_binary(&self) -> bool {
        self.upper.iter().all(|&u| u <= 1)
    }

    pub fn objective(&self, x: &[u32]) -> f64 {
        x.iter().zip(&self.costs).map(|(&k, c)| k as f64 * c).sum()
    }

    /// Checks variable bounds and every row, naming the first violation.
    pub fn check(&self, x: &[u32]) -> Result<()> {
        if x.len() != self.num_vars() {
            return Err(Error::InvalidArgument(format!(
                "assignment has {} entries for {} variables",
                x.len(),
                self.num_vars()
            )));
        }
        if let Some(v) = (0..x.len()).find(|&v| x[v] > self.upper[v]) {
            return Err(Error::RowViolation {
                row: format!("bound x{v}"),
                reason: format!("x{v} = {} exceeds upper bound {}", x[v], self.upper[v]),
            });
        }
        for row in &self.rows {
            if !row.is_satisfied(x) {
                return Err(Error::RowViolation {
                    row: row.name(),
                    reason: format!("activity {} {} {} does not hold", row.activity(x), row.sense, row.rhs),
                });
            }
        }
        Ok(())
    }
}
