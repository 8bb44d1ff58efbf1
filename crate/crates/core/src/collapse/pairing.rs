use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::complexes::build_selective_delaunay;
use crate::geometry::{smallest_sphere, WeightedPointSet};
use crate::simplex::{is_sorted_subset, sorted_intersection, sorted_union};
use crate::{Error, Result, Simplex, Tolerances};

use super::stages::normalize_pair;

/// The vertex map `g` on `Del_r(X, E) ∖ DelTri(X, F)`: each simplex `Q` is
/// paired with `Q − g(Q)` or `Q + g(Q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingAssignment {
    pub e: Vec<usize>,
    pub f: Vec<usize>,
    map: BTreeMap<Simplex, usize>,
}

impl PairingAssignment {
    pub fn get(&self, q: &Simplex) -> Option<usize> {
        self.map.get(q).copied()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `(Q, g(Q))` in lexicographic order of `Q`.
    pub fn iter(&self) -> impl Iterator<Item = (&Simplex, usize)> + '_ {
        self.map.iter().map(|(q, &v)| (q, v))
    }

    /// `(Q − x, Q + x, x)` once per pair, taken from the members missing `x`.
    pub fn pairs(&self) -> Vec<(Simplex, Simplex, usize)> {
        self.iter()
            .filter(|(q, v)| !q.contains(*v))
            .map(|(q, v)| (q.clone(), q.with(v), v))
            .collect()
    }
}

/// `g(Q)`: scanning `F` in vertex order with `A = F_Q ∪ {f ∈ F : f < x}`,
/// the first `x ∉ A` for which `Q` has no sphere excluding `A + x`.
fn pairing_vertex(
    x: &WeightedPointSet,
    q: &Simplex,
    e: &[usize],
    f: &[usize],
    tol: &Tolerances,
) -> Result<usize> {
    let cert = smallest_sphere(x, q.vertices(), e, tol)?
        .ok_or_else(|| Error::precondition(format!("{q} has no sphere excluding E")))?;
    let fq = sorted_intersection(f, &cert.excl_set);
    for (j, &xj) in f.iter().enumerate() {
        if fq.binary_search(&xj).is_ok() {
            continue;
        }
        let a = sorted_union(&fq, &f[..=j]);
        if smallest_sphere(x, q.vertices(), &a, tol)?.is_none() {
            return Ok(xj);
        }
    }
    Err(Error::degenerate(format!("{q} has a sphere excluding F")))
}

pub(crate) fn assign(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    domain: Vec<Simplex>,
    tol: &Tolerances,
) -> Result<PairingAssignment> {
    let map = domain
        .into_par_iter()
        .map(|q| pairing_vertex(x, &q, e, f, tol).map(|v| (q, v)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(PairingAssignment {
        e: e.to_vec(),
        f: f.to_vec(),
        map,
    })
}

/// Simplices of `DelTri(X, F)`.
pub(crate) fn triangulation_set(
    x: &WeightedPointSet,
    f: &[usize],
    tol: &Tolerances,
) -> Result<HashSet<Simplex>> {
    Ok(build_selective_delaunay(x, f, f64::INFINITY, None, tol)?
        .simplices()
        .cloned()
        .collect())
}

/// The pairing map on `Del_r(X, E) ∖ DelTri(X, F)` with `r² = cap`; pass
/// `f64::INFINITY` for the whole domain. Vertices are scanned in index
/// order.
pub fn pairing_map(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    cap: f64,
    tol: &Tolerances,
) -> Result<PairingAssignment> {
    let (e, f) = normalize_pair(x, e, f)?;
    let tri = triangulation_set(x, &f, tol)?;
    let domain: Vec<Simplex> = build_selective_delaunay(x, &e, cap, None, tol)?
        .simplices()
        .filter(|s| !tri.contains(*s))
        .cloned()
        .collect();
    assign(x, &e, &f, domain, tol)
}

/// Checks every simplex of the domain: `g(Q) ∈ F ∖ E`, `Q − x` and `Q + x`
/// are both in the domain with the same image, share the sphere for `E`, and
/// have no sphere excluding `F`. Returns one message per violation.
pub fn pairing_violations(
    x: &WeightedPointSet,
    pa: &PairingAssignment,
    tol: &Tolerances,
) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (q, v) in pa.iter() {
        if !pa.f.contains(&v) || pa.e.contains(&v) {
            out.push(format!("g({q}) = {v} is not in F \\ E"));
        }
        let (lo, hi) = (q.without(v), q.with(v));
        let Some(lo) = lo else {
            out.push(format!("g({q}) = {v} leaves an empty face"));
            continue;
        };
        for s in [&lo, &hi] {
            if pa.get(s) != Some(v) {
                out.push(format!("g({s}) differs from g({q}) = {v}"));
            }
            if smallest_sphere(x, s.vertices(), &pa.f, tol)?.is_some() {
                out.push(format!("{s} has a sphere excluding F"));
            }
        }
        let a = smallest_sphere(x, lo.vertices(), &pa.e, tol)?;
        let b = smallest_sphere(x, hi.vertices(), &pa.e, tol)?;
        match (a, b) {
            (Some(a), Some(b)) if a.front == b.front && a.incl_set == b.incl_set => {}
            _ => out.push(format!("{lo} and {hi} have different spheres for E")),
        }
    }
    debug_assert!(is_sorted_subset(&pa.e, &pa.f));
    Ok(out)
}

/// For `Q ∈ DelTri(X, F)` whose spheres for `E` and `F` differ: the least
/// `x ∈ Back(S(Q, F)) ∖ Excl(S(Q, E))`. Adding or removing `x` changes
/// neither sphere. `None` when the two spheres coincide.
pub fn first_pairing_vertex(
    x: &WeightedPointSet,
    q: &Simplex,
    e: &[usize],
    f: &[usize],
    tol: &Tolerances,
) -> Result<Option<usize>> {
    let (e, f) = normalize_pair(x, e, f)?;
    let s = smallest_sphere(x, q.vertices(), &e, tol)?
        .ok_or_else(|| Error::precondition(format!("{q} has no sphere excluding E")))?;
    let t = smallest_sphere(x, q.vertices(), &f, tol)?
        .ok_or_else(|| Error::precondition(format!("{q} has no sphere excluding F")))?;
    if s.front == t.front && s.incl_set == t.incl_set {
        return Ok(None);
    }
    match t.back.iter().find(|v| s.excl_set.binary_search(v).is_err()) {
        Some(&v) => Ok(Some(v)),
        None => Err(Error::degenerate(format!("no pairing vertex for {q}"))),
    }
}
