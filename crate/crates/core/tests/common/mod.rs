#![allow(dead_code)]

use delcech::geometry::{check_general_position, WeightedPoint, WeightedPointSet};
use delcech::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn planar(coords: &[[f64; 2]]) -> WeightedPointSet {
    WeightedPointSet::unweighted(2, coords.iter().map(|c| c.to_vec()).collect()).unwrap()
}

/// A(0,0), B(4,0), C(2,1).
pub fn obtuse() -> WeightedPointSet {
    planar(&[[0.0, 0.0], [4.0, 0.0], [2.0, 1.0]])
}

/// Unit-side equilateral triangle.
pub fn equilateral() -> WeightedPointSet {
    planar(&[[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]])
}

/// Random points in the unit cube with weights uniform in `[0, max_weight)`
/// (all zero when `max_weight == 0`), resampled until the set passes the
/// general-position check.
pub fn random_gp(
    rng: &mut ChaCha8Rng,
    count: usize,
    dim: usize,
    max_weight: f64,
) -> WeightedPointSet {
    let tol = Tolerances::default();
    loop {
        let points = (0..count)
            .map(|_| WeightedPoint {
                coords: (0..dim).map(|_| rng.random::<f64>()).collect(),
                weight: max_weight * rng.random::<f64>(),
            })
            .collect();
        let x = WeightedPointSet::new(dim, points).unwrap();
        if check_general_position(&x, &tol).is_ok() {
            return x;
        }
    }
}

/// Random subset of `0..m` where each element is kept with probability 1/2.
pub fn random_subset(rng: &mut ChaCha8Rng, m: usize) -> Vec<usize> {
    (0..m).filter(|_| rng.random::<bool>()).collect()
}

/// All subsets of `0..m`.
pub fn all_subsets(m: usize) -> Vec<Vec<usize>> {
    (0u32..(1 << m))
        .map(|mask| (0..m).filter(|&i| mask & (1 << i) != 0).collect())
        .collect()
}
