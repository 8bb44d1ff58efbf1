//! Dual active-set solver for the smallest sphere that includes `Q` and
//! excludes `E`.
//!
//! In lifted coordinates `y = (z, a)` with `a = ‖z‖² − s` the problem is the
//! convex QP
//!
//! ```text
//! minimize    ‖z‖² − a
//! subject to  c_x(y) = −2⟨z, x⟩ + a + ‖x‖² − w_x  ≤ 0   for x ∈ Q \ E
//!             c_x(y)                              ≥ 0   for x ∈ E \ Q
//!             c_x(y)                              = 0   for x ∈ Q ∩ E
//! ```
//!
//! whose stationarity condition says the center is an affine combination of
//! the active points. The solver keeps an affinely independent working set
//! whose smallest circumsphere has dual-feasible coefficients, then adds
//! violated constraints one at a time, moving the multiplier of the entering
//! constraint until it becomes tight or an active coefficient reaches zero
//! and is dropped (Goldfarb–Idnani style). Infeasibility shows up as an
//! entering constraint that can neither be satisfied nor trade against any
//! active multiplier.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result, Tolerances};

use super::oracle::{smallest_circumsphere, smallest_sphere_oracle};
use super::points::WeightedPointSet;
use super::sphere::{check_kkt, Sphere, SphereCertificate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Must be included: multiplier ≥ 0.
    Include,
    /// Must be excluded: multiplier ≤ 0.
    Exclude,
    /// Must lie on the sphere: free multiplier.
    On,
}

struct Problem {
    /// Translated coordinates of every point of X.
    pts: Vec<Vec<f64>>,
    /// `‖x‖² − w_x` in translated coordinates.
    offset: Vec<f64>,
    origin: Vec<f64>,
    /// Constrained vertices with their kinds, ascending by vertex.
    constraints: Vec<(usize, Kind)>,
    /// Squared extent of the constrained points, for scale-aware thresholds.
    scale: f64,
}

impl Problem {
    fn new(x: &WeightedPointSet, q: &[usize], e: &[usize]) -> Self {
        let mut constraints: Vec<(usize, Kind)> = Vec::with_capacity(q.len() + e.len());
        for &v in q {
            let kind = if e.binary_search(&v).is_ok() {
                Kind::On
            } else {
                Kind::Include
            };
            constraints.push((v, kind));
        }
        for &v in e {
            if q.binary_search(&v).is_err() {
                constraints.push((v, Kind::Exclude));
            }
        }
        constraints.sort_by_key(|c| c.0);

        let n = x.dim();
        let mut origin = vec![0.0; n];
        for &(v, _) in &constraints {
            for (o, c) in origin.iter_mut().zip(x.coords(v)) {
                *o += c;
            }
        }
        for o in &mut origin {
            *o /= constraints.len() as f64;
        }
        let pts: Vec<Vec<f64>> = (0..x.len())
            .map(|i| {
                x.coords(i)
                    .iter()
                    .zip(&origin)
                    .map(|(c, o)| c - o)
                    .collect()
            })
            .collect();
        let offset = (0..x.len())
            .map(|i| dot(&pts[i], &pts[i]) - x.weight(i))
            .collect();
        let scale = constraints
            .iter()
            .map(|&(v, _)| dot(&pts[v], &pts[v]))
            .fold(0.0, f64::max);
        Problem {
            pts,
            offset,
            origin,
            constraints,
            scale,
        }
    }

    fn kind(&self, v: usize) -> Kind {
        let pos = self
            .constraints
            .binary_search_by_key(&v, |c| c.0)
            .expect("vertex is constrained");
        self.constraints[pos].1
    }

    /// `c_v(z, a)`, equal to the excess `‖z − v‖² − s − w_v`.
    fn constraint(&self, v: usize, z: &[f64], a: f64) -> f64 {
        -2.0 * dot(z, &self.pts[v]) + a + self.offset[v]
    }

    fn center(&self, active: &[usize], lam: &[f64]) -> Vec<f64> {
        let mut z = vec![0.0; self.origin.len()];
        for (&v, &l) in active.iter().zip(lam) {
            for (zk, pk) in z.iter_mut().zip(&self.pts[v]) {
                *zk += l * pk;
            }
        }
        z
    }

    /// Solves the stationarity + on-sphere system for the working set with
    /// the entering vertex `entering` at multiplier `t`, returning the affine
    /// parametrization `(λ, a)(t) = base + t·slope` (last entry is `a`).
    /// With no entering vertex the slope is zero.
    fn solve(
        &self,
        active: &[usize],
        entering: Option<usize>,
    ) -> Option<(DVector<f64>, DVector<f64>)> {
        let k = active.len();
        let m = DMatrix::from_fn(k + 1, k + 1, |i, j| match (i < k, j < k) {
            (true, true) => -2.0 * dot(&self.pts[active[i]], &self.pts[active[j]]),
            (true, false) | (false, true) => 1.0,
            (false, false) => 0.0,
        });
        let lu = m.lu();
        let rhs0 = DVector::from_fn(
            k + 1,
            |i, _| if i < k { -self.offset[active[i]] } else { 1.0 },
        );
        let base = lu.solve(&rhs0)?;
        let slope = match entering {
            Some(v) => {
                let rhs1 = DVector::from_fn(k + 1, |i, _| {
                    if i < k {
                        2.0 * dot(&self.pts[v], &self.pts[active[i]])
                    } else {
                        -1.0
                    }
                });
                lu.solve(&rhs1)?
            }
            None => DVector::zeros(k + 1),
        };
        if base.iter().chain(slope.iter()).any(|c| !c.is_finite()) {
            return None;
        }
        Some((base, slope))
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Largest `|Q ∪ E|` for which a failed active-set certificate is recomputed
/// by enumeration.
const FALLBACK_LIMIT: usize = 20;

/// Smallest sphere including every vertex of `q` and excluding every vertex
/// of `e`, with its KKT certificate.
///
/// Runs [`smallest_sphere_active_set`] and re-checks its certificate with
/// [`check_kkt`]. If the certificate fails (near-degenerate input can make
/// the working-set solves lose all precision) and the problem is small, the
/// answer is recomputed with [`smallest_sphere_oracle`].
///
/// The returned sphere is always the circumsphere of the on-set computed by
/// [`smallest_circumsphere`], so equal spheres found for different `Q` or `E`
/// carry bit-identical values.
///
/// Returns `Ok(None)` when no such sphere exists. Returns
/// [`Error::DegenerateInput`] when the optimum cannot be certified because
/// general position fails within tolerance.
pub fn smallest_sphere(
    x: &WeightedPointSet,
    q: &[usize],
    e: &[usize],
    tol: &Tolerances,
) -> Result<Option<SphereCertificate>> {
    let failure = match smallest_sphere_active_set(x, q, e, tol).map(|c| c.map(|c| canonical(x, c)))
    {
        Ok(Some(c)) if check_kkt(x, q, e, &c, tol) => return Ok(Some(c)),
        Ok(None) => return Ok(None),
        Err(err @ Error::PreconditionViolated(_)) => return Err(err),
        Ok(Some(_)) => Error::degenerate(format!(
            "active-set certificate for Q={q:?} fails the KKT check"
        )),
        Err(err) => err,
    };
    let mut support: Vec<usize> = q.iter().chain(e).copied().collect();
    support.sort_unstable();
    support.dedup();
    if support.len() <= FALLBACK_LIMIT {
        Ok(smallest_sphere_oracle(x, q, e, tol)?.map(|c| canonical(x, c)))
    } else {
        Err(failure)
    }
}

fn canonical(x: &WeightedPointSet, mut cert: SphereCertificate) -> SphereCertificate {
    if let Some((sphere, coeffs)) = smallest_circumsphere(x, &cert.on_set) {
        cert.sphere = sphere;
        cert.coeffs = coeffs;
    }
    cert
}

/// The dual active-set iteration alone, without the certificate re-check.
pub fn smallest_sphere_active_set(
    x: &WeightedPointSet,
    q: &[usize],
    e: &[usize],
    tol: &Tolerances,
) -> Result<Option<SphereCertificate>> {
    let (q, e) = normalize_sets(x, q, e)?;
    let prob = Problem::new(x, &q, &e);
    let n = x.dim();
    let small = 1e-11 * (1.0 + prob.scale);
    let max_iters = 50 * (prob.constraints.len() + 2) * (n + 2);

    let mut active: Vec<usize> = vec![q[0]];
    let mut lam: Vec<f64> = vec![1.0];
    let mut a = {
        let p = &prob.pts[q[0]];
        2.0 * dot(p, p) - prob.offset[q[0]]
    };
    let mut iters = 0usize;

    loop {
        let z = prob.center(&active, &lam);
        let violated = prob
            .constraints
            .iter()
            .filter(|(v, _)| !active.contains(v))
            .filter_map(|&(v, kind)| {
                let c = prob.constraint(v, &z, a);
                let amount = match kind {
                    Kind::Include => c,
                    Kind::Exclude => -c,
                    Kind::On => c.abs(),
                };
                (amount > tol.eps).then_some((v, c, amount))
            })
            .fold(None, |best: Option<(usize, f64, f64)>, cand| match best {
                Some(b) if b.2 >= cand.2 => Some(b),
                _ => Some(cand),
            });
        let Some((v, c_v, _)) = violated else {
            break;
        };
        // Direction of the entering multiplier: positive pulls the sphere
        // outward over v, negative pushes it inward past v.
        let sigma = if c_v > 0.0 { 1.0 } else { -1.0 };
        let mut t = 0.0f64;

        loop {
            iters += 1;
            if iters > max_iters {
                return Err(Error::degenerate(format!(
                    "active-set iteration did not terminate for Q={q:?}, E={e:?}"
                )));
            }
            if active.is_empty() {
                // Multipliers sum to one, so an emptied working set leaves the
                // entering vertex with multiplier exactly one.
                active = vec![v];
                break;
            }
            let (base, slope) = prob.solve(&active, Some(v)).ok_or_else(|| {
                Error::degenerate(format!("working set {active:?} is affinely dependent"))
            })?;
            let k = active.len();
            let z0 = prob.center(&active, &base.as_slice()[..k]);
            let mut z1 = prob.center(&active, &slope.as_slice()[..k]);
            for (zk, vk) in z1.iter_mut().zip(&prob.pts[v]) {
                *zk += vk;
            }
            let alpha = -2.0 * dot(&z0, &prob.pts[v]) + base[k] + prob.offset[v];
            let beta = -2.0 * dot(&z1, &prob.pts[v]) + slope[k];

            let full = if k <= n && beta < -small {
                let tf = -alpha / beta;
                Some((tf, (tf - t) * sigma))
            } else {
                None
            };
            let mut partial: Option<(usize, f64, f64)> = None;
            for (j, &u) in active.iter().enumerate() {
                let hits_zero = match prob.kind(u) {
                    Kind::Include => slope[j] * sigma < 0.0,
                    Kind::Exclude => slope[j] * sigma > 0.0,
                    Kind::On => false,
                };
                if !hits_zero || slope[j] == 0.0 {
                    continue;
                }
                let tj = -base[j] / slope[j];
                let step = ((tj - t) * sigma).max(0.0);
                if partial.is_none_or(|p| step < p.2) {
                    partial = Some((j, tj, step));
                }
            }
            match (full, partial) {
                (None, None) => return Ok(None),
                (Some((_, sf)), p) if p.is_none_or(|p| sf.max(0.0) <= p.2) => {
                    active.push(v);
                    break;
                }
                (_, Some((j, tj, _))) => {
                    t = tj;
                    active.remove(j);
                }
                (Some(_), None) => unreachable!(),
            }
        }
        // The entering vertex is now tight (or the working set collapsed onto
        // it); the new state is the smallest circumsphere of the working set.
        let (base, _) = prob.solve(&active, None).ok_or_else(|| {
            Error::degenerate(format!("working set {active:?} is affinely dependent"))
        })?;
        let k = active.len();
        lam = base.as_slice()[..k].to_vec();
        a = base[k];
    }

    let z = prob.center(&active, &lam);
    let sq_radius = dot(&z, &z) - a;
    let center: Vec<f64> = z.iter().zip(&prob.origin).map(|(zk, o)| zk + o).collect();
    let cert = SphereCertificate::assemble(x, Sphere { center, sq_radius }, &active, &lam, tol)?;
    Ok(Some(cert))
}

/// Sorts, deduplicates and validates the constraint sets.
pub(crate) fn normalize_sets(
    x: &WeightedPointSet,
    q: &[usize],
    e: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut q = q.to_vec();
    q.sort_unstable();
    q.dedup();
    let mut e = e.to_vec();
    e.sort_unstable();
    e.dedup();
    if q.is_empty() {
        return Err(Error::precondition("the included set Q must be nonempty"));
    }
    if let Some(&v) = q.iter().chain(&e).find(|&&v| v >= x.len()) {
        return Err(Error::precondition(format!(
            "vertex {v} out of range for {} points",
            x.len()
        )));
    }
    Ok((q, e))
}
