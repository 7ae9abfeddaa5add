//! Exhaustive reference solver for tiny instances.

use crate::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::geometry::{contains, TOL};
use crate::instance::Instance;

/// Largest number of multisets the oracle will enumerate.
pub const ORACLE_LIMIT: u128 = 20_000_000;

/// Number of multisets of size at most `m` over `c` items.
pub fn multiset_count(c: usize, m: usize) -> u128 {
    // C(c + k - 1, k) accumulated for k = 0..=m.
    let mut total: u128 = 1;
    let mut term: u128 = 1;
    for k in 1..=m as u128 {
        term = term.saturating_mul(c as u128 + k - 1) / k;
        total = total.saturating_add(term);
    }
    total
}

/// Minimum total area over all multisets of at most `m` disks from `c`
/// meeting every coverage requirement, or `None` if there is none.
/// Containment is recomputed by linear scan.
pub fn brute_force_oracle(c: &CandidateSet, inst: &Instance) -> Result<Option<f64>> {
    let combinations = multiset_count(c.len(), inst.m);
    if combinations > ORACLE_LIMIT {
        return Err(Error::OracleTooLarge {
            combinations,
            limit: ORACLE_LIMIT,
        });
    }
    let covers: Vec<Vec<usize>> = c
        .disks
        .iter()
        .map(|d| (0..inst.n()).filter(|&j| contains(d, &inst.points[j], TOL)).collect())
        .collect();
    let areas: Vec<f64> = c.disks.iter().map(|d| d.area()).collect();
    let mut state = Enum {
        covers: &covers,
        areas: &areas,
        kappa: &inst.kappa,
        counts: vec![0; inst.n()],
        chosen: Vec::new(),
        best: None,
    };
    state.visit(0, inst.m);
    Ok(state.best)
}

struct Enum<'a> {
    covers: &'a [Vec<usize>],
    areas: &'a [f64],
    kappa: &'a [u32],
    counts: Vec<u32>,
    chosen: Vec<usize>,
    best: Option<f64>,
}

impl Enum<'_> {
    fn visit(&mut self, from: usize, left: usize) {
        if self.counts.iter().zip(self.kappa).all(|(c, k)| c >= k) {
            let area: f64 = self.chosen.iter().map(|&i| self.areas[i]).sum();
            if self.best.is_none_or(|b| area < b) {
                self.best = Some(area);
            }
        }
        if left == 0 {
            return;
        }
        for i in from..self.covers.len() {
            for &j in &self.covers[i] {
                self.counts[j] += 1;
            }
            self.chosen.push(i);
            self.visit(i, left - 1);
            self.chosen.pop();
            for &j in &self.covers[i] {
                self.counts[j] -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::candidates::enumerate_gmc;
    use crate::geometry::Point;

    fn inst(points: &[(f64, f64)], kappa: &[u32], m: usize) -> Instance {
        Instance::new(
            "t",
            points.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            kappa.to_vec(),
            m,
        )
        .unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(multiset_count(3, 0), 1);
        assert_eq!(multiset_count(3, 1), 4);
        // 1 + 3 + 6
        assert_eq!(multiset_count(3, 2), 10);
        assert_eq!(multiset_count(0, 3), 1);
    }

    #[test]
    fn zero_disk_twice() {
        let i = inst(&[(0.0, 0.0)], &[2], 2);
        assert_eq!(brute_force_oracle(&enumerate_gmc(&i.points), &i).unwrap(), Some(0.0));
    }

    #[test]
    fn right_triangle_mec() {
        let i = inst(&[(0.0, 0.0), (2.0, 0.0), (1.0, 1.0)], &[1, 1, 1], 1);
        let v = brute_force_oracle(&enumerate_gmc(&i.points), &i).unwrap().unwrap();
        assert_abs_diff_eq!(v, PI, epsilon = 1e-12);
    }

    #[test]
    fn infeasible_budget() {
        let i = inst(&[(0.0, 0.0)], &[3], 2);
        assert_eq!(brute_force_oracle(&enumerate_gmc(&i.points), &i).unwrap(), None);
    }

    #[test]
    fn guard_refuses() {
        let pts: Vec<(f64, f64)> = (0..40).map(|k| (k as f64, (k * k % 17) as f64)).collect();
        let i = inst(&pts, &[1; 40], 6);
        assert!(matches!(
            brute_force_oracle(&enumerate_gmc(&i.points), &i),
            Err(Error::OracleTooLarge { .. })
        ));
    }
}
