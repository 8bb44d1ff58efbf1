use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result, Tolerances};

use super::oracle::{combinations, smallest_circumsphere};
use super::points::{WeightedPoint, WeightedPointSet};

/// Subsets examined before switching from exhaustive to sampled checking.
const EXHAUSTIVE_BUDGET: u128 = 250_000;

#[derive(Debug, Clone, PartialEq)]
pub enum GpViolation {
    /// The subset is affinely dependent within tolerance.
    AffinelyDependent { subset: Vec<usize> },
    /// `point` lies on the smallest circumsphere of `subset`.
    OnCircumsphere {
        subset: Vec<usize>,
        point: usize,
        excess: f64,
    },
}

impl fmt::Display for GpViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GpViolation::AffinelyDependent { subset } => {
                write!(f, "affinely dependent: {subset:?}")
            }
            GpViolation::OnCircumsphere {
                subset,
                point,
                excess,
            } => write!(
                f,
                "point {point} on smallest circumsphere of {subset:?} (excess {excess:e})"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GpReport {
    pub violations: Vec<GpViolation>,
    /// False when the subset count exceeded the budget and a deterministic
    /// sample was checked instead.
    pub exhaustive: bool,
}

impl GpReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every subset of at most `n + 1` points for affine independence and
/// for an outside point lying on its smallest circumsphere, both within
/// `eps_gp`. Point sets with too many subsets are checked on a fixed random
/// sample.
pub fn check_general_position(x: &WeightedPointSet, tol: &Tolerances) -> GpReport {
    let m = x.len();
    let max_size = (x.dim() + 1).min(m);
    let total: u128 = (1..=max_size).map(|k| binomial(m as u128, k as u128)).sum();
    let all = x.all_vertices();
    let mut report = GpReport {
        violations: Vec::new(),
        exhaustive: total <= EXHAUSTIVE_BUDGET,
    };
    if report.exhaustive {
        for k in 1..=max_size {
            for subset in combinations(&all, k) {
                check_subset(x, &subset, tol, &mut report.violations);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6770);
        for _ in 0..EXHAUSTIVE_BUDGET {
            let k = rng.random_range(2..=max_size);
            let mut subset = rand::seq::index::sample(&mut rng, m, k).into_vec();
            subset.sort_unstable();
            check_subset(x, &subset, tol, &mut report.violations);
        }
        report
            .violations
            .sort_by(|a, b| format!("{a}").cmp(&format!("{b}")));
        report.violations.dedup();
    }
    report
}

fn check_subset(
    x: &WeightedPointSet,
    subset: &[usize],
    tol: &Tolerances,
    out: &mut Vec<GpViolation>,
) {
    if !affinely_independent(x, subset, tol.eps_gp) {
        out.push(GpViolation::AffinelyDependent {
            subset: subset.to_vec(),
        });
        return;
    }
    let Some((sphere, _)) = smallest_circumsphere(x, subset) else {
        out.push(GpViolation::AffinelyDependent {
            subset: subset.to_vec(),
        });
        return;
    };
    for p in 0..x.len() {
        if subset.binary_search(&p).is_ok() {
            continue;
        }
        let excess = sphere.excess(x, p);
        if excess.abs() <= tol.eps_gp {
            out.push(GpViolation::OnCircumsphere {
                subset: subset.to_vec(),
                point: p,
                excess,
            });
        }
    }
}

/// Smallest singular value of the difference vectors at least `threshold`.
fn affinely_independent(x: &WeightedPointSet, subset: &[usize], threshold: f64) -> bool {
    if subset.len() <= 1 {
        return true;
    }
    let p0 = x.coords(subset[0]);
    let rows = subset.len() - 1;
    let d = nalgebra::DMatrix::from_fn(rows, x.dim(), |i, j| x.coords(subset[i + 1])[j] - p0[j]);
    let sv = d.singular_values();
    sv.len() >= rows && sv.iter().all(|&s| s >= threshold)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Returns a copy with each coordinate jittered uniformly in
/// `[-magnitude, magnitude]`, deterministic in `seed`. Weights are unchanged.
pub fn perturb(x: &WeightedPointSet, magnitude: f64, seed: u64) -> Result<WeightedPointSet> {
    if !(magnitude > 0.0 && magnitude.is_finite()) {
        return Err(Error::precondition(
            "perturbation magnitude must be positive",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = x
        .points()
        .iter()
        .map(|p| WeightedPoint {
            coords: p
                .coords
                .iter()
                .map(|c| c + rng.random_range(-magnitude..=magnitude))
                .collect(),
            weight: p.weight,
        })
        .collect();
    WeightedPointSet::new(x.dim(), points)
}
