use super::{contains, Disk, Point};

const LEAF_SIZE: usize = 8;

/// Static 2-d tree over a fixed point list answering disk range queries.
///
/// The tree is stored implicitly: `order` is a permutation of point indices
/// where every subrange `[lo, hi)` larger than a leaf has its splitting
/// point at the midpoint, split on `x` at even depth and `y` at odd depth.
#[derive(Clone, Debug)]
pub struct SpatialIndex {
    points: Vec<Point>,
    order: Vec<usize>,
}

fn coord(p: &Point, axis: usize) -> f64 {
    if axis == 0 {
        p.x
    } else {
        p.y
    }
}

impl SpatialIndex {
    pub fn build(points: &[Point]) -> Self {
        let mut order: Vec<usize> = (0..points.len()).collect();
        Self::split(points, &mut order, 0);
        Self { points: points.to_vec(), order }
    }

    fn split(points: &[Point], slice: &mut [usize], depth: usize) {
        if slice.len() <= LEAF_SIZE {
            return;
        }
        let axis = depth % 2;
        let mid = slice.len() / 2;
        slice.select_nth_unstable_by(mid, |&a, &b| {
            coord(&points[a], axis)
                .total_cmp(&coord(&points[b], axis))
                .then(a.cmp(&b))
        });
        let (left, right) = slice.split_at_mut(mid);
        Self::split(points, left, depth + 1);
        Self::split(points, &mut right[1..], depth + 1);
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Indices `j` with `contains(disk, points[j], tol)`, ascending.
    pub fn query_disk(&self, disk: &Disk, tol: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.visit(&self.order, 0, disk, tol, &mut out);
        out.sort_unstable();
        out
    }

    fn visit(&self, slice: &[usize], depth: usize, disk: &Disk, tol: f64, out: &mut Vec<usize>) {
        if slice.len() <= LEAF_SIZE {
            out.extend(slice.iter().copied().filter(|&j| contains(disk, &self.points[j], tol)));
            return;
        }
        let axis = depth % 2;
        let mid = slice.len() / 2;
        let pivot = slice[mid];
        let split = coord(&self.points[pivot], axis);
        let c = coord(&disk.center, axis);
        let reach = disk.radius + tol;
        if contains(disk, &self.points[pivot], tol) {
            out.push(pivot);
        }
        if c - reach <= split {
            self.visit(&slice[..mid], depth + 1, disk, tol, out);
        }
        if c + reach >= split {
            self.visit(&slice[mid + 1..], depth + 1, disk, tol, out);
        }
    }
}
