//! Brute-force reference for [`smallest_sphere`](super::smallest_sphere):
//! enumerate every candidate on-set and keep the smallest circumsphere that
//! satisfies the combinatorial KKT conditions.

use nalgebra::{DMatrix, DVector};

use crate::{Result, Tolerances};

use super::points::{sq_dist, WeightedPointSet};
use super::solver::normalize_sets;
use super::sphere::{Sphere, SphereCertificate};

/// Smallest circumsphere of the (weighted) points `t`: the orthogonal sphere
/// whose center lies in their affine hull. Returns the sphere and the affine
/// coefficients of its center, or `None` when `t` is affinely dependent.
pub fn smallest_circumsphere(x: &WeightedPointSet, t: &[usize]) -> Option<(Sphere, Vec<f64>)> {
    let n = x.dim();
    let p0 = x.coords(t[0]);
    let w0 = x.weight(t[0]);
    let k = t.len() - 1;
    if k > n {
        return None;
    }
    let diffs: Vec<Vec<f64>> = t[1..]
        .iter()
        .map(|&v| x.coords(v).iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let mut mu = DVector::zeros(k);
    if k > 0 {
        let gram = DMatrix::from_fn(k, k, |i, j| {
            diffs[i]
                .iter()
                .zip(&diffs[j])
                .map(|(a, b)| a * b)
                .sum::<f64>()
        });
        let rhs = DVector::from_fn(k, |i, _| {
            let d2: f64 = diffs[i].iter().map(|c| c * c).sum();
            0.5 * (d2 - x.weight(t[i + 1]) + w0)
        });
        // Affinely independent iff the Gram matrix is positive definite; a
        // tiny pivot relative to the entries marks near-dependence.
        let max_entry = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let chol = gram.cholesky()?;
        let min_pivot = chol
            .l_dirty()
            .diagonal()
            .iter()
            .fold(f64::INFINITY, |m, v| m.min(v * v));
        if min_pivot <= 1e-14 * max_entry.max(f64::MIN_POSITIVE) {
            return None;
        }
        mu = chol.solve(&rhs);
    }
    let mut center = p0.to_vec();
    for (j, d) in diffs.iter().enumerate() {
        for (c, dk) in center.iter_mut().zip(d) {
            *c += mu[j] * dk;
        }
    }
    let sq_radius = sq_dist(&center, p0) - w0;
    let mut coeffs = Vec::with_capacity(k + 1);
    coeffs.push(1.0 - mu.sum());
    coeffs.extend(mu.iter().copied());
    Some((Sphere { center, sq_radius }, coeffs))
}

/// Exhaustive KKT enumeration over all on-set candidates `T ⊆ Q ∪ E` with
/// `1 ≤ |T| ≤ n + 1`. Exponential in `|Q ∪ E|`; intended as a test oracle.
///
/// Among candidates of equal minimal squared radius (within `eps`) the
/// lexicographically smallest vertex set wins.
pub fn smallest_sphere_oracle(
    x: &WeightedPointSet,
    q: &[usize],
    e: &[usize],
    tol: &Tolerances,
) -> Result<Option<SphereCertificate>> {
    let (q, e) = normalize_sets(x, q, e)?;
    let mut universe: Vec<usize> = q.iter().chain(&e).copied().collect();
    universe.sort_unstable();
    universe.dedup();
    let max_size = (x.dim() + 1).min(universe.len());

    let mut best: Option<(Vec<usize>, Sphere, Vec<f64>)> = None;
    for size in 1..=max_size {
        for subset in combinations(&universe, size) {
            let Some((sphere, coeffs)) = smallest_circumsphere(x, &subset) else {
                continue;
            };
            if coeffs.iter().any(|c| c.abs() <= tol.eps) {
                continue;
            }
            let signs_ok = subset.iter().zip(&coeffs).all(|(v, &c)| {
                if c > 0.0 {
                    q.binary_search(v).is_ok()
                } else {
                    e.binary_search(v).is_ok()
                }
            });
            if !signs_ok {
                continue;
            }
            let feasible = q.iter().all(|&v| sphere.includes(x, v, tol))
                && e.iter().all(|&v| sphere.excludes(x, v, tol));
            if !feasible {
                continue;
            }
            let replace = match &best {
                None => true,
                Some((bt, bs, _)) => {
                    sphere.sq_radius < bs.sq_radius - tol.eps
                        || ((sphere.sq_radius - bs.sq_radius).abs() <= tol.eps && subset < *bt)
                }
            };
            if replace {
                best = Some((subset, sphere, coeffs));
            }
        }
    }
    match best {
        None => Ok(None),
        Some((t, sphere, coeffs)) => {
            SphereCertificate::assemble(x, sphere, &t, &coeffs, tol).map(Some)
        }
    }
}

/// All `k`-subsets of `items` in lexicographic order.
pub(crate) fn combinations(items: &[usize], k: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = items.len();
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out: Vec<usize> = idx.iter().map(|&i| items[i]).collect();
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_enumerate_in_lex_order() {
        let items = [1, 3, 5, 7];
        let c: Vec<_> = combinations(&items, 2).collect();
        assert_eq!(
            c,
            vec![
                vec![1, 3],
                vec![1, 5],
                vec![1, 7],
                vec![3, 5],
                vec![3, 7],
                vec![5, 7]
            ]
        );
        assert_eq!(combinations(&items, 4).count(), 1);
        assert_eq!(combinations(&items, 5).count(), 0);
        assert_eq!(combinations(&items, 0).count(), 1);
    }

    #[test]
    fn circumsphere_of_collinear_triple_is_rejected() {
        let x =
            WeightedPointSet::unweighted(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]])
                .unwrap();
        assert!(smallest_circumsphere(&x, &[0, 1, 2]).is_none());
        assert!(smallest_circumsphere(&x, &[0, 2]).is_some());
    }
}
