use rand::Rng;

use crate::geometry::Point;

pub(crate) const MAX_LLOYD_ITERATIONS: usize = 50;

/// Result of a k-means run: cluster label per input point.
#[derive(Debug, Clone)]
pub(crate) struct Clustering {
    pub labels: Vec<usize>,
}

fn nearest(p: &Point, centers: &[Point]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, q) in centers.iter().enumerate() {
        let d = p.dist_sq(q);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

/// k-means++ seeding followed by Lloyd iterations (squared Euclidean).
/// Empty clusters are reseeded with the point farthest from its center
/// among clusters that can spare a member.
pub(crate) fn kmeans<R: Rng>(points: &[Point], k: usize, rng: &mut R) -> Clustering {
    assert!(k >= 1 && k <= points.len(), "k-means needs 1 <= k <= n");
    let n = points.len();

    let mut chosen = vec![false; n];
    let first = rng.gen_range(0..n);
    chosen[first] = true;
    let mut centers = vec![points[first]];
    let mut d2: Vec<f64> = points.iter().map(|p| p.dist_sq(&points[first])).collect();
    while centers.len() < k {
        let total: f64 = d2.iter().sum();
        let pick = if total > 0.0 {
            let mut t = rng.gen::<f64>() * total;
            let mut pick = None;
            for (j, &w) in d2.iter().enumerate() {
                if w > 0.0 {
                    pick = Some(j);
                    if t < w {
                        break;
                    }
                    t -= w;
                }
            }
            pick.expect("positive total weight")
        } else {
            // Only duplicates of chosen centers remain.
            (0..n).find(|&j| !chosen[j]).expect("k <= n")
        };
        chosen[pick] = true;
        centers.push(points[pick]);
        for (j, p) in points.iter().enumerate() {
            d2[j] = d2[j].min(p.dist_sq(&points[pick]));
        }
    }

    let mut labels: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
    let mut iterations = 0;
    loop {
        iterations += 1;

        let mut sums = vec![(0.0, 0.0, 0usize); k];
        for (p, &c) in points.iter().zip(&labels) {
            sums[c].0 += p.x;
            sums[c].1 += p.y;
            sums[c].2 += 1;
        }
        for c in 0..k {
            if sums[c].2 == 0 {
                let mut sizes = vec![0usize; k];
                for &l in &labels {
                    sizes[l] += 1;
                }
                let donor = (0..n)
                    .filter(|&j| sizes[labels[j]] > 1)
                    .max_by(|&a, &b| {
                        let da = points[a].dist_sq(&centers[labels[a]]);
                        let db = points[b].dist_sq(&centers[labels[b]]);
                        da.total_cmp(&db).then(b.cmp(&a))
                    })
                    .expect("k <= n leaves a cluster with two members");
                let old = labels[donor];
                sums[old].0 -= points[donor].x;
                sums[old].1 -= points[donor].y;
                sums[old].2 -= 1;
                labels[donor] = c;
                sums[c] = (points[donor].x, points[donor].y, 1);
            }
        }
        for c in 0..k {
            let cnt = sums[c].2 as f64;
            centers[c] = Point::new(sums[c].0 / cnt, sums[c].1 / cnt);
        }

        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centers)).collect();
        let stable = next == labels;
        if stable || iterations >= MAX_LLOYD_ITERATIONS {
            // Keep every cluster non-empty in the returned labels.
            let mut sizes = vec![0usize; k];
            for &l in &next {
                sizes[l] += 1;
            }
            if sizes.iter().all(|&s| s > 0) {
                labels = next;
            }
            break;
        }
        labels = next;
    }

    Clustering { labels }
}
