//! Finite candidate-disk sets.
//!
//! Without separation, some optimal cover uses only disks that are a single
//! point (radius 0), the diametral disk of a pair, or the circumdisk of an
//! acute triple. [`enumerate_gmc`] builds exactly that set. For the
//! separated variant the set is widened with regular-polygon disks around
//! multiply-covered points ([`augment_kgons`]) and narrowed by radius
//! ([`prune_by_alpha`]).

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{circumdisk, diameter, disk_from_two, dist, is_acute, Disk, Point, SpatialIndex, TOL};
use crate::instance::Instance;
use crate::solution::Solution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Singleton,
    Pair,
    Triple,
    KgonAugment,
    /// Supplied by the caller rather than enumerated.
    External,
}

/// Triples whose circumradius exceeds this multiple of the point-set
/// diameter are skipped.
const DEGENERATE_RADIUS_FACTOR: f64 = 1e4;

/// Grid for duplicate detection, in meters.
const DEDUP_GRID: f64 = 1e-9;

type DiskKey = (i64, i64, i64);

fn key(d: &Disk) -> DiskKey {
    let q = |v: f64| (v / DEDUP_GRID).round() as i64;
    (q(d.center.x), q(d.center.y), q(d.radius))
}

#[derive(Clone, Debug, Default)]
pub struct CandidateSet {
    pub disks: Vec<Disk>,
    /// Sorted indices of the points each disk contains.
    pub covers: Vec<Vec<usize>>,
    pub origins: Vec<Origin>,
    seen: HashMap<DiskKey, usize>,
}

#[derive(Serialize)]
struct CandidateRecord<'a> {
    x: f64,
    y: f64,
    r: f64,
    origin: Origin,
    covers: &'a [usize],
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn count(&self, origin: Origin) -> usize {
        self.origins.iter().filter(|&&o| o == origin).count()
    }

    /// Adds `disk` unless an equal one (on the dedup grid) is present.
    /// Returns whether it was added.
    pub fn push(&mut self, disk: Disk, origin: Origin, index: &SpatialIndex) -> bool {
        let k = key(&disk);
        if self.seen.contains_key(&k) {
            return false;
        }
        self.seen.insert(k, self.disks.len());
        self.covers.push(index.query_disk(&disk, TOL));
        self.disks.push(disk);
        self.origins.push(origin);
        true
    }

    fn extend_batch(&mut self, batch: Vec<Disk>, origin: Origin, index: &SpatialIndex) {
        let mut fresh = Vec::new();
        for d in batch {
            let k = key(&d);
            if !self.seen.contains_key(&k) {
                self.seen.insert(k, self.disks.len() + fresh.len());
                fresh.push(d);
            }
        }
        let covers: Vec<Vec<usize>> = fresh.par_iter().map(|d| index.query_disk(d, TOL)).collect();
        self.origins.extend(std::iter::repeat_n(origin, fresh.len()));
        self.disks.extend(fresh);
        self.covers.extend(covers);
    }

    /// Keeps the disks for which `keep` holds, preserving order.
    pub fn retain(&self, mut keep: impl FnMut(usize, &Disk) -> bool) -> CandidateSet {
        let mut out = CandidateSet::default();
        for i in 0..self.len() {
            if keep(i, &self.disks[i]) {
                out.seen.insert(key(&self.disks[i]), out.disks.len());
                out.disks.push(self.disks[i]);
                out.covers.push(self.covers[i].clone());
                out.origins.push(self.origins[i]);
            }
        }
        out
    }

    /// Debug dump: one record per disk with origin tag and cover list.
    pub fn to_json(&self) -> Result<String> {
        let records: Vec<CandidateRecord<'_>> = (0..self.len())
            .map(|i| CandidateRecord {
                x: self.disks[i].center.x,
                y: self.disks[i].center.y,
                r: self.disks[i].radius,
                origin: self.origins[i],
                covers: &self.covers[i],
            })
            .collect();
        Ok(serde_json::to_string_pretty(&records)?)
    }
}

/// Singletons, all pair disks and the circumdisks of acute triples, each
/// with its covered points. Duplicates are dropped.
pub fn enumerate_gmc(points: &[Point]) -> CandidateSet {
    let index = SpatialIndex::build(points);
    let n = points.len();
    let mut set = CandidateSet::default();

    set.extend_batch(points.iter().map(|&p| Disk::point(p)).collect(), Origin::Singleton, &index);

    let pairs: Vec<Disk> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| disk_from_two(&points[i], &points[j]))
        .collect();
    set.extend_batch(pairs, Origin::Pair, &index);

    let limit = DEGENERATE_RADIUS_FACTOR * diameter(points);
    let triples: Vec<Disk> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut local = Vec::new();
            for j in i + 1..n {
                for k in j + 1..n {
                    let (a, b, c) = (&points[i], &points[j], &points[k]);
                    if !is_acute(a, b, c) {
                        continue;
                    }
                    if let Ok(d) = circumdisk(a, b, c) {
                        if d.radius <= limit {
                            local.push(d);
                        }
                    }
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    set.extend_batch(triples, Origin::Triple, &index);
    set
}

/// Circumradius of a regular `k`-gon with side `ell`.
pub fn kgon_radius(k: u32, ell: f64) -> f64 {
    ell / (2.0 * (PI / k as f64).sin())
}

/// For every point with `kappa > 1`, adds `kappa` disks centered on the
/// vertices of a regular `kappa`-gon of side `ell` around it (first vertex
/// due east, counterclockwise), each just large enough to contain the point.
pub fn augment_kgons(c: &CandidateSet, inst: &Instance, ell: f64) -> Result<CandidateSet> {
    if !(ell > 0.0 && ell.is_finite()) {
        return Err(Error::InvalidArgument(format!("separation distance must be positive, got {ell}")));
    }
    let index = SpatialIndex::build(&inst.points);
    let mut out = c.clone();
    for (p, &k) in inst.points.iter().zip(&inst.kappa) {
        if k < 2 {
            continue;
        }
        let big_r = kgon_radius(k, ell);
        for t in 0..k {
            let angle = 2.0 * PI * t as f64 / k as f64;
            let center = Point::new(p.x + big_r * angle.cos(), p.y + big_r * angle.sin());
            out.push(Disk::new(center, dist(&center, p)), Origin::KgonAugment, &index);
        }
    }
    Ok(out)
}

/// Keeps disks with `radius <= alpha * r_max`, where `r_max` is the largest
/// radius in `reference`. `alpha = inf` keeps everything.
pub fn prune_by_alpha(c: &CandidateSet, reference: &Solution, alpha: f64) -> CandidateSet {
    prune_by_radius(c, alpha * reference.max_radius())
}

/// Keeps disks with `radius <= bound` (boundary inclusive; `bound` may be
/// infinite, and `alpha * 0` for an all-zero reference is treated as 0).
pub fn prune_by_radius(c: &CandidateSet, bound: f64) -> CandidateSet {
    if bound.is_nan() {
        // inf * 0: an unbounded factor on an all-zero reference.
        return c.clone();
    }
    c.retain(|_, d| d.radius <= bound)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;
    use crate::geometry::contains;
    use crate::solution::SolutionMeta;
    use crate::solver::Status;

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn reference(radii: &[f64]) -> Solution {
        Solution {
            method: "ref".into(),
            instance: "t".into(),
            status: Status::Feasible,
            disks: radii.iter().map(|&r| Disk::new(Point::new(0.0, 0.0), r)).collect(),
            assignment: vec![],
            objective: 0.0,
            lower_bound: None,
            stats: None,
            meta: SolutionMeta::default(),
        }
    }

    #[test]
    fn equilateral_has_seven() {
        let c = enumerate_gmc(&pts(&[(0.0, 0.0), (2.0, 0.0), (1.0, 3f64.sqrt())]));
        assert_eq!(c.len(), 7);
        assert_eq!(c.count(Origin::Triple), 1);
        assert_eq!(c.covers[6], vec![0, 1, 2]);
    }

    #[test]
    fn right_triangle_has_six() {
        let c = enumerate_gmc(&pts(&[(0.0, 0.0), (2.0, 0.0), (0.0, 2.0)]));
        assert_eq!(c.len(), 6);
        assert_eq!(c.count(Origin::Triple), 0);
        // The hypotenuse disk already holds the right-angle vertex.
        let hyp = (0..6).find(|&i| c.disks[i].radius > 1.4).unwrap();
        assert_eq!(c.covers[hyp], vec![0, 1, 2]);
    }

    #[test]
    fn single_point() {
        let c = enumerate_gmc(&pts(&[(3.0, 3.0)]));
        assert_eq!(c.len(), 1);
        assert_eq!(c.disks[0].radius, 0.0);
        assert_eq!(c.covers[0], vec![0]);
    }

    #[test]
    fn cocircular_quadruple_deduplicated() {
        // Square corners: all four triples are right triangles; none added.
        let c = enumerate_gmc(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]));
        assert_eq!(c.count(Origin::Triple), 0);
        // Regular pentagon: acute triples share one circumcircle.
        let pent: Vec<Point> = (0..5)
            .map(|t| {
                let a = 2.0 * PI * t as f64 / 5.0;
                Point::new(a.cos(), a.sin())
            })
            .collect();
        let c = enumerate_gmc(&pent);
        assert_eq!(c.count(Origin::Triple), 1);
    }

    fn kappa_inst(points: &[(f64, f64)], kappa: &[u32]) -> Instance {
        Instance::new("t", pts(points), kappa.to_vec(), 3).unwrap()
    }

    #[test]
    fn kgon_two() {
        let inst = kappa_inst(&[(0.0, 0.0)], &[2]);
        let c = augment_kgons(&enumerate_gmc(&inst.points), &inst, 5.0).unwrap();
        let added: Vec<&Disk> = (0..c.len())
            .filter(|&i| c.origins[i] == Origin::KgonAugment)
            .map(|i| &c.disks[i])
            .collect();
        assert_eq!(added.len(), 2);
        assert_abs_diff_eq!(added[0].radius, 2.5, epsilon = 1e-12);
        assert_abs_diff_eq!(dist(&added[0].center, &added[1].center), 5.0, epsilon = 1e-9);
    }

    #[test]
    fn kgon_three() {
        let inst = kappa_inst(&[(10.0, 10.0)], &[3]);
        let c = augment_kgons(&enumerate_gmc(&inst.points), &inst, 3.0).unwrap();
        let added: Vec<Disk> = (0..c.len())
            .filter(|&i| c.origins[i] == Origin::KgonAugment)
            .map(|i| c.disks[i])
            .collect();
        assert_eq!(added.len(), 3);
        for (t, d) in added.iter().enumerate() {
            assert_abs_diff_eq!(d.radius, 3f64.sqrt(), epsilon = 1e-12);
            let next = &added[(t + 1) % 3];
            assert_abs_diff_eq!(dist(&d.center, &next.center), 3.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn kgon_noop_for_unit_requirements() {
        let inst = kappa_inst(&[(0.0, 0.0), (4.0, 1.0)], &[1, 1]);
        let base = enumerate_gmc(&inst.points);
        let c = augment_kgons(&base, &inst, 5.0).unwrap();
        assert_eq!(c.disks, base.disks);
        assert!(augment_kgons(&base, &inst, 0.0).is_err());
    }

    #[test]
    fn alpha_pruning() {
        let mut c = CandidateSet::default();
        let index = SpatialIndex::build(&pts(&[(0.0, 0.0)]));
        for (i, r) in [0.0, 1.0, 2.0, 2.4, 2.5, 3.0].into_iter().enumerate() {
            c.push(Disk::new(Point::new(i as f64, 0.0), r), Origin::Pair, &index);
        }
        let radii = |s: &CandidateSet| s.disks.iter().map(|d| d.radius).collect::<Vec<_>>();
        let r2 = reference(&[1.0, 2.0]);
        assert_eq!(radii(&prune_by_alpha(&c, &r2, 1.0)), vec![0.0, 1.0, 2.0]);
        assert_eq!(radii(&prune_by_alpha(&c, &r2, 1.2)), vec![0.0, 1.0, 2.0, 2.4]);
        assert_eq!(radii(&prune_by_alpha(&c, &r2, f64::INFINITY)), radii(&c));
        assert_eq!(radii(&prune_by_alpha(&c, &reference(&[0.0]), f64::INFINITY)), radii(&c));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn defining_points_on_boundary_and_covers_exact(
            raw in prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 1..25)
        ) {
            let points: Vec<Point> = raw.into_iter().map(|(x, y)| Point::new(x, y)).collect();
            let c = enumerate_gmc(&points);
            for i in 0..c.len() {
                let scan: Vec<usize> = (0..points.len())
                    .filter(|&j| contains(&c.disks[i], &points[j], TOL))
                    .collect();
                prop_assert_eq!(&c.covers[i], &scan);
                if c.origins[i] == Origin::Singleton {
                    prop_assert_eq!(c.disks[i].radius, 0.0);
                }
                let on_boundary = points
                    .iter()
                    .filter(|p| (dist(&c.disks[i].center, p) - c.disks[i].radius).abs() <= 1e-7)
                    .count();
                let needed = match c.origins[i] {
                    Origin::Singleton => 1,
                    Origin::Pair => 2,
                    Origin::Triple => 3,
                    Origin::KgonAugment | Origin::External => unreachable!(),
                };
                prop_assert!(on_boundary >= needed);
            }
            let mut keys: Vec<DiskKey> = c.disks.iter().map(key).collect();
            keys.sort_unstable();
            keys.dedup();
            prop_assert_eq!(keys.len(), c.len());
        }

        #[test]
        fn kgon_vertices_and_anchor(
            x in 0.0f64..100.0, y in 0.0f64..100.0, k in 2u32..7, ell in 0.5f64..20.0
        ) {
            let inst = Instance::new("t", vec![Point::new(x, y)], vec![k], k as usize).unwrap();
            let c = augment_kgons(&enumerate_gmc(&inst.points), &inst, ell).unwrap();
            let added: Vec<Disk> = (0..c.len())
                .filter(|&i| c.origins[i] == Origin::KgonAugment)
                .map(|i| c.disks[i])
                .collect();
            prop_assert_eq!(added.len(), k as usize);
            for (t, d) in added.iter().enumerate() {
                prop_assert!((dist(&d.center, &inst.points[0]) - d.radius).abs() <= 1e-7);
                let next = &added[(t + 1) % added.len()];
                prop_assert!((dist(&d.center, &next.center) - ell).abs() <= 1e-9);
            }
        }

        #[test]
        fn pruning_is_monotone_subset(
            raw in prop::collection::vec((0.0f64..50.0, 0.0f64..50.0), 2..15),
            r_max in 0.0f64..30.0, a1 in 1.0f64..3.0, a2 in 1.0f64..3.0,
        ) {
            let points: Vec<Point> = raw.into_iter().map(|(x, y)| Point::new(x, y)).collect();
            let c = enumerate_gmc(&points);
            let refsol = reference(&[r_max]);
            let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
            let small = prune_by_alpha(&c, &refsol, lo);
            let large = prune_by_alpha(&c, &refsol, hi);
            prop_assert!(small.disks.iter().all(|d| large.disks.contains(d)));
            prop_assert!(large.disks.iter().all(|d| c.disks.contains(d)));
            prop_assert!(small.disks.iter().all(|d| d.radius <= lo * r_max));
        }
    }
}
