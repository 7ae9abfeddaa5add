//! Iterative clustering heuristic for the multi-cover problem.
//!
//! 0. Shuffle the points with the seeded generator.
//! 1. Cluster into `m` groups with k-means and take each group's minimum
//!    enclosing disk.
//! 2. For coverage levels `i = 1..=kappa_max`, every point that still needs
//!    an `i`-th disk joins the nearest cluster whose disk does not already
//!    contain it; touched disks are recomputed until the level is met.
//! 3. Shrink: drop boundary members from clusters while every requirement
//!    stays satisfied and the disk gets strictly smaller.
//!
//! When `m > n` every point first gets its own zero-radius disk; leftover
//! disks are clustered over the points that still need coverage.

mod kmeans;

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{contains, dist, min_enclosing_disk, Disk, Point, TOL};
use crate::instance::Instance;
use crate::solution::{total_area, Solution, SolutionMeta};
use crate::solver::Status;

pub const METHOD: &str = "heuristic";

/// Clusters with their enclosing disks. A cluster without members has no
/// disk and does not count towards coverage.
struct ClusterCover<'a> {
    points: &'a [Point],
    kappa: &'a [u32],
    members: Vec<Vec<usize>>,
    disks: Vec<Option<Disk>>,
}

impl<'a> ClusterCover<'a> {
    fn new(inst: &'a Instance, members: Vec<Vec<usize>>) -> Self {
        let mut cover = Self {
            points: &inst.points,
            kappa: &inst.kappa,
            disks: vec![None; members.len()],
            members,
        };
        for c in 0..cover.members.len() {
            cover.refresh(c);
        }
        cover
    }

    fn refresh(&mut self, c: usize) {
        self.members[c].sort_unstable();
        self.disks[c] = self.enclosing(&self.members[c]);
    }

    fn enclosing(&self, members: &[usize]) -> Option<Disk> {
        if members.is_empty() {
            return None;
        }
        let pts: Vec<Point> = members.iter().map(|&j| self.points[j]).collect();
        Some(min_enclosing_disk(&pts).expect("nonempty"))
    }

    fn covers(&self, c: usize, j: usize) -> bool {
        self.disks[c].is_some_and(|d| contains(&d, &self.points[j], TOL))
    }

    fn coverage_of(&self, j: usize) -> u32 {
        (0..self.disks.len()).filter(|&c| self.covers(c, j)).count() as u32
    }

    fn coverage(&self) -> Vec<u32> {
        (0..self.points.len()).map(|j| self.coverage_of(j)).collect()
    }

    /// Nearest cluster (by disk center, ties to the lower index) that
    /// neither contains `j` nor has it as a member. Empty clusters rank last.
    fn nearest_open_cluster(&self, j: usize) -> Option<usize> {
        let p = &self.points[j];
        (0..self.members.len())
            .filter(|&c| !self.covers(c, j) && self.members[c].binary_search(&j).is_err())
            .min_by(|&a, &b| {
                let da = self.disks[a].map_or(f64::INFINITY, |d| dist(&d.center, p));
                let db = self.disks[b].map_or(f64::INFINITY, |d| dist(&d.center, p));
                da.total_cmp(&db).then(a.cmp(&b))
            })
    }

    /// Raises every point in `order` to `target(j)` coverage. Returns the
    /// number of passes used, or an error once `budget` passes are spent.
    fn repair(&mut self, order: &[usize], target: impl Fn(usize) -> u32, budget: &mut usize) -> Result<usize> {
        let mut passes = 0;
        loop {
            let under: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&j| self.coverage_of(j) < target(j))
                .collect();
            if under.is_empty() {
                return Ok(passes);
            }
            if *budget == 0 {
                return Err(Error::IterationCap(passes));
            }
            *budget -= 1;
            passes += 1;
            for j in under {
                if self.coverage_of(j) >= target(j) {
                    continue;
                }
                let c = self
                    .nearest_open_cluster(j)
                    .expect("coverage below kappa <= m leaves an open cluster");
                self.members[c].push(j);
                self.refresh(c);
            }
        }
    }

    fn into_parts(self) -> (Vec<Disk>, Vec<Vec<usize>>) {
        let mut disks = Vec::new();
        let mut assignment = Vec::new();
        for (d, mem) in self.disks.into_iter().zip(self.members) {
            if let Some(d) = d {
                disks.push(d);
                assignment.push(mem);
            }
        }
        (disks, assignment)
    }
}

fn iteration_budget(inst: &Instance) -> usize {
    10 * inst.kappa_max() as usize * inst.m
}

/// Runs the heuristic. Deterministic per `(inst, seed)`.
pub fn solve_heuristic(inst: &Instance, seed: u64) -> Result<Solution> {
    inst.ensure_gmc_feasible()?;
    if inst.m > inst.n() {
        return special_case_m_exceeds_n(inst, seed);
    }
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Step 0
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.shuffle(&mut rng);

    // Step 1
    let shuffled: Vec<Point> = order.iter().map(|&j| inst.points[j]).collect();
    let clustering = kmeans::kmeans(&shuffled, inst.m, &mut rng);
    let mut members = vec![Vec::new(); inst.m];
    for (pos, &label) in clustering.labels.iter().enumerate() {
        members[label].push(order[pos]);
    }
    let cover = ClusterCover::new(inst, members);

    finish(inst, cover, &order, seed, start)
}

/// Steps 2 and 3 shared by both entry points.
fn finish(inst: &Instance, mut cover: ClusterCover<'_>, order: &[usize], seed: u64, start: Instant) -> Result<Solution> {
    let mut budget = iteration_budget(inst);
    let mut iterations = 0;
    for level in 1..=inst.kappa_max() {
        iterations += cover.repair(order, |j| level.min(inst.kappa[j]), &mut budget)?;
    }
    // Disks that moved during later levels may have dropped incidental
    // coverage of earlier points.
    iterations += cover.repair(order, |j| inst.kappa[j], &mut budget)?;

    let (disks, assignment) = cover.into_parts();
    let sol = Solution {
        method: METHOD.to_string(),
        instance: inst.name.clone(),
        status: Status::Feasible,
        objective: total_area(&disks),
        disks,
        assignment,
        lower_bound: None,
        stats: None,
        meta: SolutionMeta {
            seed: Some(seed),
            iterations: iterations as u64,
            elapsed_secs: 0.0,
        },
    };
    let mut sol = shrink_overcovered(&sol, inst);
    sol.meta.elapsed_secs = start.elapsed().as_secs_f64();
    Ok(sol)
}

/// The `m > n` case: zero-radius disks first, then clustering of the points
/// that are still short with the remaining budget.
pub fn special_case_m_exceeds_n(inst: &Instance, seed: u64) -> Result<Solution> {
    inst.ensure_gmc_feasible()?;
    if inst.m <= inst.n() {
        return Err(Error::InvalidArgument(format!(
            "special case requires m > n (m={}, n={})",
            inst.m,
            inst.n()
        )));
    }
    let start = Instant::now();
    if inst.kappa_sum() <= inst.m as u64 {
        let mut disks = Vec::new();
        let mut assignment = Vec::new();
        for (j, (p, &k)) in inst.points.iter().zip(&inst.kappa).enumerate() {
            for _ in 0..k {
                disks.push(Disk::point(*p));
                assignment.push(vec![j]);
            }
        }
        return Ok(Solution {
            method: METHOD.to_string(),
            instance: inst.name.clone(),
            status: Status::Feasible,
            objective: 0.0,
            disks,
            assignment,
            lower_bound: None,
            stats: None,
            meta: SolutionMeta {
                seed: Some(seed),
                iterations: 0,
                elapsed_secs: start.elapsed().as_secs_f64(),
            },
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.shuffle(&mut rng);

    let mut members: Vec<Vec<usize>> = (0..inst.n()).map(|j| vec![j]).collect();
    let spare = inst.m - inst.n();
    let short: Vec<usize> = order.iter().copied().filter(|&j| inst.kappa[j] > 1).collect();
    let k = spare.min(short.len());
    let mut extra = vec![Vec::new(); spare];
    if k > 0 {
        let pts: Vec<Point> = short.iter().map(|&j| inst.points[j]).collect();
        let clustering = kmeans::kmeans(&pts, k, &mut rng);
        for (pos, &label) in clustering.labels.iter().enumerate() {
            extra[label].push(short[pos]);
        }
    }
    members.extend(extra);
    let cover = ClusterCover::new(inst, members);
    finish(inst, cover, &order, seed, start)
}

/// Step 3 as a standalone pass: repeatedly removes a boundary member from a
/// cluster when the recomputed (strictly smaller) disk keeps every point at
/// or above its requirement. Disks are visited by descending radius until a
/// full sweep changes nothing.
pub fn shrink_overcovered(sol: &Solution, inst: &Instance) -> Solution {
    let members: Vec<Vec<usize>> = if sol.assignment.len() == sol.disks.len() {
        sol.assignment.clone()
    } else {
        sol.disks
            .iter()
            .map(|d| (0..inst.n()).filter(|&j| contains(d, &inst.points[j], TOL)).collect())
            .collect()
    };
    let mut cover = ClusterCover {
        points: &inst.points,
        kappa: &inst.kappa,
        disks: sol.disks.iter().copied().map(Some).collect(),
        members,
    };
    for m in cover.members.iter_mut() {
        m.sort_unstable();
    }
    let mut coverage = cover.coverage();
    let mut sweeps = 0u64;

    loop {
        sweeps += 1;
        let mut changed = false;
        let mut by_radius: Vec<usize> = (0..cover.disks.len()).filter(|&c| cover.disks[c].is_some()).collect();
        by_radius.sort_by(|&a, &b| {
            let ra = cover.disks[a].unwrap().radius;
            let rb = cover.disks[b].unwrap().radius;
            rb.total_cmp(&ra).then(a.cmp(&b))
        });
        for c in by_radius {
            'disk: loop {
                let disk = cover.disks[c].unwrap();
                if disk.radius == 0.0 || cover.members[c].len() < 2 {
                    break;
                }
                let boundary: Vec<usize> = cover.members[c]
                    .iter()
                    .copied()
                    .filter(|&j| (dist(&disk.center, &cover.points[j]) - disk.radius).abs() <= 1e-7)
                    .collect();
                for j in boundary {
                    let rest: Vec<usize> = cover.members[c].iter().copied().filter(|&q| q != j).collect();
                    let smaller = cover.enclosing(&rest).unwrap();
                    if smaller.radius >= disk.radius - 1e-12 {
                        continue;
                    }
                    let ok = (0..cover.points.len()).all(|q| {
                        let p = &cover.points[q];
                        let before = contains(&disk, p, TOL) as u32;
                        let after = contains(&smaller, p, TOL) as u32;
                        coverage[q] + after - before >= cover.kappa[q]
                    });
                    if ok {
                        for q in 0..cover.points.len() {
                            let p = &cover.points[q];
                            coverage[q] = coverage[q] + contains(&smaller, p, TOL) as u32
                                - contains(&disk, p, TOL) as u32;
                        }
                        cover.members[c] = rest;
                        cover.disks[c] = Some(smaller);
                        changed = true;
                        continue 'disk;
                    }
                }
                break;
            }
        }
        if !changed {
            break;
        }
    }

    let (disks, assignment) = cover.into_parts();
    let mut meta = sol.meta.clone();
    meta.iterations += sweeps;
    Solution {
        method: sol.method.clone(),
        instance: sol.instance.clone(),
        status: sol.status,
        objective: total_area(&disks),
        disks,
        assignment,
        lower_bound: sol.lower_bound,
        stats: sol.stats.clone(),
        meta,
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;
    use crate::instance::{generate, GeneratorConfig};

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
    fn two_points_two_disks() {
        let i = inst(&[(0.0, 0.0), (10.0, 0.0)], &[1, 1], 2);
        let s = solve_heuristic(&i, 1).unwrap();
        assert_eq!(s.disks.len(), 2);
        assert!(s.disks.iter().all(|d| d.radius == 0.0));
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn single_disk_is_forced_mec() {
        let i = inst(&[(0.0, 0.0), (4.0, 0.0), (8.0, 0.0)], &[1, 1, 1], 1);
        let s = solve_heuristic(&i, 5).unwrap();
        assert_eq!(s.disks.len(), 1);
        assert_abs_diff_eq!(s.disks[0].center.x, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.disks[0].radius, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.objective, 16.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn replicated_point_costs_nothing() {
        let i = inst(&[(0.0, 0.0)], &[3], 3);
        let s = solve_heuristic(&i, 0).unwrap();
        assert_eq!(s.disks.len(), 3);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn infeasible_budget_rejected() {
        let i = inst(&[(0.0, 0.0), (1.0, 1.0)], &[3, 1], 2);
        assert!(matches!(solve_heuristic(&i, 0), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn special_case_zero_cost() {
        let i = inst(&[(0.0, 0.0), (3.0, 4.0)], &[2, 1], 3);
        let s = special_case_m_exceeds_n(&i, 2).unwrap();
        assert_eq!(s.objective, 0.0);
        assert!(s.is_feasible(&i));

        let i = inst(&[(2.0, 2.0)], &[1], 5);
        let s = special_case_m_exceeds_n(&i, 2).unwrap();
        assert_eq!(s.disks.len(), 1);
        assert_eq!(s.objective, 0.0);
    }

    #[test]
    fn special_case_shares_one_disk() {
        // Enumerating 3-disk covers where both points need two disks: two
        // zero disks plus the diametral disk is the cheapest, pi (d/2)^2.
        let i = inst(&[(0.0, 0.0), (3.0, 4.0)], &[2, 2], 3);
        let s = special_case_m_exceeds_n(&i, 7).unwrap();
        assert!(s.is_feasible(&i));
        assert_abs_diff_eq!(s.objective, PI * 2.5 * 2.5, epsilon = 1e-9);
    }

    #[test]
    fn special_case_budget_too_small_for_zero_disks() {
        let i = inst(&[(0.0, 0.0), (2.0, 0.0)], &[3, 3], 3);
        let s = solve_heuristic(&i, 1).unwrap();
        assert!(s.is_feasible(&i));
        assert_abs_diff_eq!(s.objective, 3.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn shrink_removes_redundant_boundary_point() {
        // Point 2 (kappa 1) is covered by its own zero disk and sits alone on
        // the boundary of the big disk.
        let i = inst(&[(0.0, 0.0), (1.0, 0.0), (5.0, 0.0)], &[1, 1, 1], 2);
        let big = min_enclosing_disk(&i.points).unwrap();
        let sol = Solution {
            method: METHOD.into(),
            instance: "t".into(),
            status: Status::Feasible,
            disks: vec![big, Disk::point(i.points[2])],
            assignment: vec![vec![0, 1, 2], vec![2]],
            objective: total_area(&[big]),
            lower_bound: None,
            stats: None,
            meta: SolutionMeta::default(),
        };
        let shrunk = shrink_overcovered(&sol, &i);
        assert!(shrunk.is_feasible(&i));
        assert_abs_diff_eq!(shrunk.disks[0].radius, 0.5, epsilon = 1e-12);
        assert!(shrunk.objective < sol.objective);
    }

    #[test]
    fn shrink_fixpoint_unchanged() {
        let i = inst(&[(0.0, 0.0), (2.0, 0.0)], &[1, 1], 1);
        let d = disk_from_pair(&i);
        let sol = Solution {
            method: METHOD.into(),
            instance: "t".into(),
            status: Status::Feasible,
            disks: vec![d],
            assignment: vec![vec![0, 1]],
            objective: d.area(),
            lower_bound: None,
            stats: None,
            meta: SolutionMeta::default(),
        };
        let again = shrink_overcovered(&sol, &i);
        assert_eq!(again.disks, sol.disks);
        assert_eq!(again.objective, sol.objective);
    }

    fn disk_from_pair(i: &Instance) -> Disk {
        crate::geometry::disk_from_two(&i.points[0], &i.points[1])
    }

    #[test]
    fn deterministic_per_seed() {
        let i = generate(30, 8, &GeneratorConfig::with_seed(3)).unwrap();
        let a = solve_heuristic(&i, 17).unwrap();
        let b = solve_heuristic(&i, 17).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn feasible_within_budget(seed in 0u64..10_000, n in 1usize..40, m in 3usize..25) {
            let i = generate(n, m, &GeneratorConfig::with_seed(seed)).unwrap();
            let s = solve_heuristic(&i, seed ^ 0xabc).unwrap();
            prop_assert!(s.disks.len() <= i.m);
            prop_assert!(s.is_feasible(&i));
            let rel = (s.objective - s.recomputed_objective()).abs() / s.objective.max(1.0);
            prop_assert!(rel <= 1e-12);
        }

        #[test]
        fn shrink_never_increases_objective(seed in 0u64..10_000, n in 2usize..30, m in 3usize..12) {
            let i = generate(n, m, &GeneratorConfig::with_seed(seed)).unwrap();
            // Unshrunk cover: round-robin split over all m clusters.
            let k = m;
            let mut members = vec![Vec::new(); k];
            for j in 0..n {
                members[j % k].push(j);
            }
            let mut cover = ClusterCover::new(&i, members);
            let order: Vec<usize> = (0..n).collect();
            let mut budget = usize::MAX;
            cover.repair(&order, |j| i.kappa[j], &mut budget).unwrap();
            let (disks, assignment) = cover.into_parts();
            let sol = Solution {
                method: METHOD.into(),
                instance: i.name.clone(),
                status: Status::Feasible,
                objective: total_area(&disks),
                disks,
                assignment,
                lower_bound: None,
                stats: None,
                meta: SolutionMeta::default(),
            };
            prop_assert!(sol.is_feasible(&i));
            let shrunk = shrink_overcovered(&sol, &i);
            prop_assert!(shrunk.is_feasible(&i));
            prop_assert!(shrunk.objective <= sol.objective + 1e-9);
            prop_assert!((shrunk.objective - shrunk.recomputed_objective()).abs() <= 1e-9);
        }
    }
}
