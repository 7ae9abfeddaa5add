use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{is_acute, Point};
use crate::error::{Error, Result};

/// Sampling region for random triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    UnitSquare,
    UnitDisk,
}

impl Region {
    fn sample(self, rng: &mut ChaCha8Rng) -> Point {
        match self {
            Region::UnitSquare => Point::new(rng.gen::<f64>(), rng.gen::<f64>()),
            Region::UnitDisk => loop {
                let x = 2.0 * rng.gen::<f64>() - 1.0;
                let y = 2.0 * rng.gen::<f64>() - 1.0;
                if x * x + y * y <= 1.0 {
                    break Point::new(x, y);
                }
            },
        }
    }
}

/// Monte Carlo estimate of the probability that three uniform points in
/// `region` form a non-acute triangle. Uses ChaCha8 seeded with `seed`, so
/// the estimate is reproducible across platforms.
pub fn obtuse_fraction_estimate(region: Region, trials: u64, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut non_acute = 0u64;
    for _ in 0..trials {
        let a = region.sample(&mut rng);
        let b = region.sample(&mut rng);
        let c = region.sample(&mut rng);
        if !is_acute(&a, &b, &c) {
            non_acute += 1;
        }
    }
    Ok(non_acute as f64 / trials as f64)
}
