use crate::simplex::{is_sorted_subset, sorted_intersection};
use crate::{Error, Result, Tolerances};

use super::points::WeightedPointSet;

/// Slack for algebraic identities of a certificate (affine coefficients sum to
/// one, center reproduced by its affine combination). Looser than `eps`
/// because these quantities carry the conditioning of a linear solve.
pub(crate) const IDENTITY_TOL: f64 = 1e-8;

/// A sphere with center `z` and squared radius `s`; `s` may be negative for
/// weighted input.
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub center: Vec<f64>,
    pub sq_radius: f64,
}

impl Sphere {
    /// `‖z − x‖² − s − w_x`: negative inside, zero on, positive outside.
    pub fn excess(&self, x: &WeightedPointSet, i: usize) -> f64 {
        x.power(i, &self.center) - self.sq_radius
    }

    pub fn includes(&self, x: &WeightedPointSet, i: usize, tol: &Tolerances) -> bool {
        self.excess(x, i) <= tol.eps
    }

    pub fn excludes(&self, x: &WeightedPointSet, i: usize, tol: &Tolerances) -> bool {
        self.excess(x, i) >= -tol.eps
    }

    pub fn is_on(&self, x: &WeightedPointSet, i: usize, tol: &Tolerances) -> bool {
        self.excess(x, i).abs() <= tol.eps
    }

    /// Same center and squared radius within `tol`.
    pub fn approx_eq(&self, other: &Sphere, tol: f64) -> bool {
        (self.sq_radius - other.sq_radius).abs() <= tol
            && self
                .center
                .iter()
                .zip(&other.center)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

/// A sphere together with its combinatorial KKT witness.
///
/// All vertex sets are sorted ascending and refer to the whole point set:
/// `incl_set`/`excl_set` list every point of `X` on-or-inside / on-or-outside.
/// `coeffs` holds the affine coefficients of the center over `on_set`, in the
/// same order as `on_set`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereCertificate {
    pub sphere: Sphere,
    pub on_set: Vec<usize>,
    pub incl_set: Vec<usize>,
    pub excl_set: Vec<usize>,
    pub front: Vec<usize>,
    pub back: Vec<usize>,
    pub coeffs: Vec<f64>,
}

impl SphereCertificate {
    pub fn sq_radius(&self) -> f64 {
        self.sphere.sq_radius
    }

    pub fn coeff(&self, v: usize) -> Option<f64> {
        self.on_set
            .binary_search(&v)
            .ok()
            .map(|pos| self.coeffs[pos])
    }

    /// True when the center lies in the convex hull of the on-set.
    pub fn is_centered(&self) -> bool {
        self.back.is_empty()
    }

    /// Builds the certificate for a sphere whose claimed on-set is `support`
    /// with affine coefficients `coeffs`. Rejects the result as degenerate
    /// when the classification over all of `X` disagrees with `support`, a
    /// coefficient is within `eps` of zero, or more than `n + 1` points lie on
    /// the sphere.
    pub(crate) fn assemble(
        x: &WeightedPointSet,
        sphere: Sphere,
        support: &[usize],
        coeffs: &[f64],
        tol: &Tolerances,
    ) -> Result<Self> {
        debug_assert_eq!(support.len(), coeffs.len());
        let mut incl_set = Vec::new();
        let mut excl_set = Vec::new();
        for i in 0..x.len() {
            let d = sphere.excess(x, i);
            if d <= tol.eps {
                incl_set.push(i);
            }
            if d >= -tol.eps {
                excl_set.push(i);
            }
        }
        let on_set = sorted_intersection(&incl_set, &excl_set);
        let mut pairs: Vec<(usize, f64)> = support
            .iter()
            .copied()
            .zip(coeffs.iter().copied())
            .collect();
        pairs.sort_by_key(|p| p.0);
        let support_sorted: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        if on_set != support_sorted {
            return Err(Error::degenerate(format!(
                "points {on_set:?} lie on the sphere of {support_sorted:?} within tolerance"
            )));
        }
        if on_set.len() > x.dim() + 1 {
            return Err(Error::degenerate(format!(
                "{} points on one sphere in dimension {}",
                on_set.len(),
                x.dim()
            )));
        }
        if let Some(&(v, c)) = pairs.iter().find(|p| p.1.abs() <= tol.eps) {
            return Err(Error::degenerate(format!(
                "affine coefficient of vertex {v} is {c:e}, within tolerance of zero"
            )));
        }
        let front = pairs.iter().filter(|p| p.1 > 0.0).map(|p| p.0).collect();
        let back = pairs.iter().filter(|p| p.1 < 0.0).map(|p| p.0).collect();
        Ok(SphereCertificate {
            sphere,
            on_set,
            incl_set,
            excl_set,
            front,
            back,
            coeffs: pairs.iter().map(|p| p.1).collect(),
        })
    }
}

/// Independent validity check of a certificate for the problem `(Q, E)`.
///
/// Recomputes the inclusion relations from the sphere and verifies
/// feasibility, that the on-set and its front/back split are exactly as
/// claimed, that the coefficients form an affine combination reproducing the
/// center, and the sign conditions `Front ⊆ Q`, `Back ⊆ E`.
pub fn check_kkt(
    x: &WeightedPointSet,
    q: &[usize],
    e: &[usize],
    cert: &SphereCertificate,
    tol: &Tolerances,
) -> bool {
    let mut q = q.to_vec();
    q.sort_unstable();
    let mut e = e.to_vec();
    e.sort_unstable();
    let sphere = &cert.sphere;
    if sphere.center.len() != x.dim() || cert.coeffs.len() != cert.on_set.len() {
        return false;
    }
    if q.iter().chain(&e).any(|&v| v >= x.len()) {
        return false;
    }
    if !q.iter().all(|&v| sphere.includes(x, v, tol))
        || !e.iter().all(|&v| sphere.excludes(x, v, tol))
    {
        return false;
    }
    let incl: Vec<usize> = (0..x.len())
        .filter(|&v| sphere.includes(x, v, tol))
        .collect();
    let excl: Vec<usize> = (0..x.len())
        .filter(|&v| sphere.excludes(x, v, tol))
        .collect();
    let on = sorted_intersection(&incl, &excl);
    if on.is_empty() || on != cert.on_set || incl != cert.incl_set || excl != cert.excl_set {
        return false;
    }
    let sum: f64 = cert.coeffs.iter().sum();
    if (sum - 1.0).abs() > IDENTITY_TOL {
        return false;
    }
    for k in 0..x.dim() {
        let comb: f64 = cert
            .on_set
            .iter()
            .zip(&cert.coeffs)
            .map(|(&v, &c)| c * x.coords(v)[k])
            .sum();
        let scale = 1.0 + sphere.center[k].abs();
        if (comb - sphere.center[k]).abs() > IDENTITY_TOL * scale {
            return false;
        }
    }
    if cert.coeffs.iter().any(|c| c.abs() <= tol.eps) {
        return false;
    }
    let front: Vec<usize> = cert
        .on_set
        .iter()
        .zip(&cert.coeffs)
        .filter(|p| *p.1 > 0.0)
        .map(|p| *p.0)
        .collect();
    let back: Vec<usize> = cert
        .on_set
        .iter()
        .zip(&cert.coeffs)
        .filter(|p| *p.1 < 0.0)
        .map(|p| *p.0)
        .collect();
    front == cert.front
        && back == cert.back
        && is_sorted_subset(&front, &q)
        && is_sorted_subset(&back, &e)
}
