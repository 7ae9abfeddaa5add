//! Planar geometry kernel: points, disks, two/three-point disks, minimum
//! enclosing disks and a static range index.
//!
//! All containment tests use an absolute tolerance ([`TOL`]) so that points
//! defining a disk are reported as inside it despite rounding.

mod kdtree;
mod obtuse;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use kdtree::SpatialIndex;
pub use obtuse::{obtuse_fraction_estimate, Region};

/// Absolute containment tolerance in meters.
pub const TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point::new(x, y)
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub const fn new(center: Point, radius: f64) -> Self {
        Self { center, radius }
    }

    /// Zero-radius disk sitting on `p`.
    pub const fn point(p: Point) -> Self {
        Self { center: p, radius: 0.0 }
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.radius * self.radius
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        contains(self, p, tol)
    }
}

/// Euclidean distance.
pub fn dist(p: &Point, q: &Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// Smallest disk through both points: centered at the midpoint.
pub fn disk_from_two(p: &Point, q: &Point) -> Disk {
    Disk::new(p.midpoint(q), 0.5 * dist(p, q))
}

/// Squared side lengths sorted ascending.
fn sorted_sides_sq(a: &Point, b: &Point, c: &Point) -> [f64; 3] {
    let mut s = [a.dist_sq(b), b.dist_sq(c), c.dist_sq(a)];
    s.sort_by(f64::total_cmp);
    s
}

/// True iff the triangle is strictly acute. Right, obtuse, collinear and
/// coincident triples are all reported as not acute.
pub fn is_acute(a: &Point, b: &Point, c: &Point) -> bool {
    let [s0, s1, s2] = sorted_sides_sq(a, b, c);
    s0 > 0.0 && s0 + s1 > s2
}

/// Circumscribed disk of a non-degenerate triangle.
///
/// The center is the intersection of two perpendicular bisectors. The radius
/// is the largest center-to-vertex distance, which agrees with
/// [`circumradius_heron`] up to rounding and guarantees all three vertices
/// test as contained.
pub fn circumdisk(a: &Point, b: &Point, c: &Point) -> Result<Disk> {
    // Bisector equations relative to `a`:
    //   2 (b - a) . u = |b - a|^2,  2 (c - a) . u = |c - a|^2,  center = a + u
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let det = 2.0 * (bx * cy - by * cx);
    let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
    if scale == 0.0 || det.abs() <= 1e-14 * scale {
        return Err(Error::DegenerateTriangle);
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / det;
    let uy = (bx * c2 - cx * b2) / det;
    let center = Point::new(a.x + ux, a.y + uy);
    let radius = dist(&center, a).max(dist(&center, b)).max(dist(&center, c));
    Ok(Disk::new(center, radius))
}

/// Circumradius `abc / (4 A)` with the area from Heron's formula.
pub fn circumradius_heron(a: &Point, b: &Point, c: &Point) -> Result<f64> {
    let (la, lb, lc) = (dist(b, c), dist(c, a), dist(a, b));
    let prod = (la + lb + lc) * (lb + lc - la) * (lc + la - lb) * (la + lb - lc);
    if !(prod > 0.0) {
        return Err(Error::DegenerateTriangle);
    }
    Ok(la * lb * lc / prod.sqrt())
}

/// `dist(center, p) <= radius + tol`.
pub fn contains(d: &Disk, p: &Point, tol: f64) -> bool {
    dist(&d.center, p) <= d.radius + tol
}

/// Smallest disk enclosing three points given that two of them must lie on
/// its boundary. Falls back to the widest pair when collinear.
fn disk_from_three(a: &Point, b: &Point, c: &Point) -> Disk {
    match circumdisk(a, b, c) {
        Ok(d) => d,
        Err(_) => {
            let pairs = [(a, b), (b, c), (a, c)];
            let (p, q) = pairs
                .into_iter()
                .max_by(|x, y| x.0.dist_sq(x.1).total_cmp(&y.0.dist_sq(y.1)))
                .unwrap();
            disk_from_two(p, q)
        }
    }
}

const MEC_SHUFFLE_SEED: u64 = 0x6d65_635f_7368_7566;

/// Minimum enclosing disk, randomized incremental construction.
///
/// The insertion order is a fixed-seed permutation, so the result is a pure
/// function of the input.
pub fn min_enclosing_disk(points: &[Point]) -> Result<Disk> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let mut pts = points.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(MEC_SHUFFLE_SEED);
    pts.shuffle(&mut rng);

    let mut disk = Disk::point(pts[0]);
    for i in 1..pts.len() {
        if contains(&disk, &pts[i], TOL) {
            continue;
        }
        // pts[i] lies on the boundary of the enclosing disk of pts[..=i].
        disk = Disk::point(pts[i]);
        for j in 0..i {
            if contains(&disk, &pts[j], TOL) {
                continue;
            }
            disk = disk_from_two(&pts[i], &pts[j]);
            for k in 0..j {
                if !contains(&disk, &pts[k], TOL) {
                    disk = disk_from_three(&pts[i], &pts[j], &pts[k]);
                }
            }
        }
    }
    Ok(disk)
}

/// Largest pairwise distance; zero for fewer than two points.
pub fn diameter(points: &[Point]) -> f64 {
    let mut best = 0.0f64;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            best = best.max(p.dist_sq(q));
        }
    }
    best.sqrt()
}
