use std::collections::{HashMap, HashSet};

use rayon::prelude::*;

use crate::geometry::{smallest_sphere, SphereCertificate, WeightedPointSet};
use crate::simplex::is_sorted_subset;
use crate::{Error, Result, Simplex, Tolerances};

use super::filtered::{ComplexKind, FilteredComplex};

/// Interval key of a certificate: `(Front(S), Incl(S))`.
pub(crate) type IntervalKey = (Vec<usize>, Vec<usize>);

pub(crate) fn interval_key(cert: &SphereCertificate) -> IntervalKey {
    (cert.front.clone(), cert.incl_set.clone())
}

/// Certificates of `S(Q, E)` for every simplex, solved in parallel.
pub(crate) fn certify(
    x: &WeightedPointSet,
    e: &[usize],
    simplices: &[Simplex],
    tol: &Tolerances,
) -> Result<Vec<Option<SphereCertificate>>> {
    simplices
        .par_iter()
        .map(|s| smallest_sphere(x, s.vertices(), e, tol))
        .collect()
}

/// One value per interval: the largest raw value among its members, then
/// raised until every face has a value no larger than its cofaces.
///
/// Members of one interval share a sphere, so their raw values differ only
/// by rounding; unifying them keeps the filtration order exact.
pub(crate) fn unify_values(simplices: &[Simplex], raw: &[f64], keys: &[IntervalKey]) -> Vec<f64> {
    let mut group_of_key: HashMap<&IntervalKey, usize> = HashMap::new();
    let group: Vec<usize> = keys
        .iter()
        .map(|k| {
            let next = group_of_key.len();
            *group_of_key.entry(k).or_insert(next)
        })
        .collect();
    let mut gv = vec![f64::NEG_INFINITY; group_of_key.len()];
    for (g, &v) in group.iter().zip(raw) {
        gv[*g] = gv[*g].max(v);
    }
    let pos: HashMap<&Simplex, usize> = simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let facet_groups: Vec<Vec<usize>> = simplices
        .iter()
        .map(|s| {
            s.facets()
                .filter_map(|f| pos.get(&f).map(|&j| group[j]))
                .collect()
        })
        .collect();
    loop {
        let mut changed = false;
        for (i, fg) in facet_groups.iter().enumerate() {
            for &h in fg {
                if h != group[i] && gv[h] > gv[group[i]] {
                    gv[group[i]] = gv[h];
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    group.iter().map(|&g| gv[g]).collect()
}

/// All feasible simplices for `E` with raw value at most `cap + eps` and
/// dimension at most `max_dim`, together with their certificates, found by
/// expanding dimension by dimension.
pub(crate) fn enumerate(
    x: &WeightedPointSet,
    e: &[usize],
    cap: f64,
    max_dim: usize,
    tol: &Tolerances,
) -> Result<Vec<(Simplex, SphereCertificate)>> {
    let limit = cap + tol.eps;
    let mut out: Vec<(Simplex, SphereCertificate)> = Vec::new();
    let mut layer: Vec<Simplex> = (0..x.len()).map(Simplex::vertex).collect();
    let mut present: HashSet<Simplex> = HashSet::new();
    for d in 0..=max_dim {
        if layer.is_empty() {
            break;
        }
        let certs = certify(x, e, &layer, tol)?;
        let mut kept = Vec::new();
        for (s, c) in layer.into_iter().zip(certs) {
            if let Some(c) = c.filter(|c| c.sq_radius() <= limit) {
                present.insert(s.clone());
                kept.push(s.clone());
                out.push((s, c));
            }
        }
        if d == max_dim {
            break;
        }
        layer = cofaces_with_all_facets(&kept, &present, x.len());
    }
    Ok(out)
}

/// Candidates of the next dimension: `P + v` with `v` above the last vertex
/// of `P` whose facets are all present.
fn cofaces_with_all_facets(kept: &[Simplex], present: &HashSet<Simplex>, m: usize) -> Vec<Simplex> {
    let mut next: Vec<Simplex> = kept
        .iter()
        .flat_map(|p| {
            let last = *p.vertices().last().expect("nonempty");
            (last + 1..m).map(move |v| p.with(v))
        })
        .filter(|q| q.facets().all(|f| present.contains(&f)))
        .collect();
    next.sort_by(|a, b| a.cmp_dim_lex(b));
    next
}

fn default_max_dim(x: &WeightedPointSet, e: &[usize]) -> usize {
    if e.len() == x.len() {
        x.dim()
    } else {
        x.len().saturating_sub(1)
    }
}

fn normalize_e(x: &WeightedPointSet, e: &[usize]) -> Result<Vec<usize>> {
    let mut e = e.to_vec();
    e.sort_unstable();
    e.dedup();
    if let Some(&v) = e.iter().find(|&&v| v >= x.len()) {
        return Err(Error::precondition(format!(
            "selective vertex {v} out of range for {} points",
            x.len()
        )));
    }
    Ok(e)
}

fn assemble(
    x: &WeightedPointSet,
    kind: ComplexKind,
    e: Vec<usize>,
    cap: f64,
    found: Vec<(Simplex, SphereCertificate)>,
    tol: &Tolerances,
) -> Result<FilteredComplex> {
    let simplices: Vec<Simplex> = found.iter().map(|(s, _)| s.clone()).collect();
    let raw: Vec<f64> = found.iter().map(|(_, c)| c.sq_radius()).collect();
    let keys: Vec<IntervalKey> = found.iter().map(|(_, c)| interval_key(c)).collect();
    let values = unify_values(&simplices, &raw, &keys);
    let kept = simplices
        .into_iter()
        .zip(values)
        .filter(|(_, v)| *v <= cap + tol.eps)
        .collect();
    FilteredComplex::new(x.dim(), x.len(), kind, e, cap, kept)
}

/// The selective Delaunay complex `Del_r(X, E)` with `r² = cap`: every
/// simplex `Q` for which some sphere includes `Q` and excludes `E`, whose
/// smallest such sphere has squared radius at most `cap`.
///
/// `max_dim` defaults to `n` when `E = X` and to `|X| − 1` otherwise. The
/// cap is inclusive up to `tol.eps`.
pub fn build_selective_delaunay(
    x: &WeightedPointSet,
    e: &[usize],
    cap: f64,
    max_dim: Option<usize>,
    tol: &Tolerances,
) -> Result<FilteredComplex> {
    let e = normalize_e(x, e)?;
    let kind = if e.is_empty() {
        ComplexKind::Cech
    } else if e.len() == x.len() {
        ComplexKind::Delaunay
    } else {
        ComplexKind::Selective
    };
    let max_dim = max_dim.unwrap_or_else(|| default_max_dim(x, &e));
    let found = enumerate(x, &e, cap, max_dim, tol)?;
    assemble(x, kind, e, cap, found, tol)
}

/// `Čech_r(X) = Del_r(X, ∅)`.
pub fn build_cech(
    x: &WeightedPointSet,
    cap: f64,
    max_dim: Option<usize>,
    tol: &Tolerances,
) -> Result<FilteredComplex> {
    build_selective_delaunay(x, &[], cap, max_dim, tol)
}

/// `Del_r(X) = Del_r(X, X)`, the alpha complex.
pub fn build_delaunay(x: &WeightedPointSet, cap: f64, tol: &Tolerances) -> Result<FilteredComplex> {
    build_selective_delaunay(x, &x.all_vertices(), cap, None, tol)
}

/// `Del_r(X, E) ∩ DelTri(X, F)`: the simplices of the selective Delaunay
/// triangulation for `F`, valued by `ρ_E` and truncated at `cap`.
///
/// Requires `E ⊆ F`. With `E = ∅` and `F = X` this is the Delaunay–Čech
/// complex; otherwise the result is labelled as selective for `E`.
pub fn build_selective_restricted(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    cap: f64,
    tol: &Tolerances,
) -> Result<FilteredComplex> {
    let e = normalize_e(x, e)?;
    let f = normalize_e(x, f)?;
    if !is_sorted_subset(&e, &f) {
        return Err(Error::precondition("E must be a subset of F"));
    }
    let tri = enumerate(x, &f, f64::INFINITY, default_max_dim(x, &f), tol)?;
    let simplices: Vec<Simplex> = tri.into_iter().map(|(s, _)| s).collect();
    let certs = certify(x, &e, &simplices, tol)?;
    let found: Vec<(Simplex, SphereCertificate)> = simplices
        .into_iter()
        .zip(certs)
        .map(|(s, c)| {
            let c = c.ok_or_else(|| {
                Error::degenerate(format!("{s} has a sphere excluding F but none excluding E"))
            })?;
            Ok((s, c))
        })
        .collect::<Result<_>>()?;
    let kind = if e.is_empty() && f.len() == x.len() {
        ComplexKind::DelaunayCech
    } else {
        ComplexKind::Selective
    };
    assemble(x, kind, e, cap, found, tol)
}

/// The Delaunay triangulation with Čech values, truncated at `cap`.
pub fn build_delaunay_cech(
    x: &WeightedPointSet,
    cap: f64,
    tol: &Tolerances,
) -> Result<FilteredComplex> {
    build_selective_restricted(x, &[], &x.all_vertices(), cap, tol)
}
