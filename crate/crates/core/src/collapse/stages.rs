use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};

use crate::complexes::{
    build_cech, build_delaunay, build_delaunay_cech, build_selective_delaunay,
    build_selective_restricted, ComplexKind, FilteredComplex,
};
use crate::geometry::WeightedPointSet;
use crate::morse::{
    radius_gradient, refine_interval, sum_refinement, DiscreteGradient, GeneralizedVectorField,
};
use crate::simplex::is_sorted_subset;
use crate::wrap::wrap_from_gradient;
use crate::{Error, Result, Simplex, Tolerances};

use super::pairing::{assign, triangulation_set};
use super::sequence::{verify_collapse, CollapseFailure, CollapseSequence, CollapseStep};

pub(crate) fn normalize_pair(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let norm = |s: &[usize]| -> Result<Vec<usize>> {
        let mut s = s.to_vec();
        s.sort_unstable();
        s.dedup();
        match s.iter().find(|&&v| v >= x.len()) {
            Some(v) => Err(Error::precondition(format!("vertex {v} out of range"))),
            None => Ok(s),
        }
    };
    let (e, f) = (norm(e)?, norm(f)?);
    if !is_sorted_subset(&e, &f) {
        return Err(Error::precondition("E must be a subset of F"));
    }
    Ok((e, f))
}

/// Larger key first, then higher cofacet dimension, then reverse
/// lexicographic on cofacet and facet.
fn order_steps<K: PartialOrd>(mut keyed: Vec<(K, CollapseStep)>) -> Vec<CollapseStep> {
    keyed.sort_by(|(ka, a), (kb, b)| {
        kb.partial_cmp(ka)
            .unwrap_or(Ordering::Equal)
            .then_with(|| b.cofacet.len().cmp(&a.cofacet.len()))
            .then_with(|| b.cofacet.cmp(&a.cofacet))
            .then_with(|| b.facet.cmp(&a.facet))
    });
    keyed.into_iter().map(|(_, s)| s).collect()
}

/// Reorders `preferred` into a replayable collapse of `start`: repeatedly
/// takes the earliest pair in `preferred` whose facet is free and whose
/// cofacet is maximal. A valid order is returned unchanged; the pairs need
/// only be acyclic.
fn schedule(start: &FilteredComplex, preferred: Vec<CollapseStep>) -> Result<Vec<CollapseStep>> {
    let mut live_cofacets: HashMap<&Simplex, usize> = start.simplices().map(|s| (s, 0)).collect();
    for q in start.simplices() {
        for p in q.facets() {
            if let Some(c) = live_cofacets.get_mut(&p) {
                *c += 1;
            }
        }
    }
    let mut owner: HashMap<&Simplex, usize> = HashMap::new();
    for (i, st) in preferred.iter().enumerate() {
        owner.insert(&st.facet, i);
        owner.insert(&st.cofacet, i);
    }
    let is_ready = |c: &HashMap<&Simplex, usize>, st: &CollapseStep| {
        c.get(&st.cofacet) == Some(&0) && c.get(&st.facet) == Some(&1)
    };
    let mut ready: BTreeSet<usize> = (0..preferred.len())
        .filter(|&i| is_ready(&live_cofacets, &preferred[i]))
        .collect();
    let mut done = vec![false; preferred.len()];
    let mut order = Vec::with_capacity(preferred.len());
    while let Some(i) = ready.pop_first() {
        done[i] = true;
        order.push(i);
        let st = &preferred[i];
        for f in st.cofacet.facets().chain(st.facet.facets()) {
            let Some(c) = live_cofacets.get_mut(&f) else {
                continue;
            };
            *c -= 1;
            if let Some(&j) = owner.get(&f) {
                if !done[j] && is_ready(&live_cofacets, &preferred[j]) {
                    ready.insert(j);
                }
            }
        }
    }
    if order.len() != preferred.len() {
        let stuck = preferred
            .iter()
            .zip(&done)
            .find(|(_, d)| !**d)
            .map(|(s, _)| s);
        return Err(Error::degenerate(format!(
            "pairs admit no collapse order (stuck at {} < {})",
            stuck.map(|s| s.facet.to_string()).unwrap_or_default(),
            stuck.map(|s| s.cofacet.to_string()).unwrap_or_default()
        )));
    }
    let mut slots: Vec<Option<CollapseStep>> = preferred.into_iter().map(Some).collect();
    Ok(order
        .into_iter()
        .map(|i| slots[i].take().expect("each pair once"))
        .collect())
}

/// Pairs of the vertex stages: `{Q − x, Q + x}` for `x = g(Q)` over
/// `start ∖ DelTri(X, F)`. Preferred order: the stage of `x_1` first, then
/// decreasing dimension. The union of the stages is acyclic, but a single
/// stage need not end on a subcomplex, so the order is passed through
/// [`schedule`].
fn vertex_stage_steps(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    start: &FilteredComplex,
    tol: &Tolerances,
) -> Result<Vec<CollapseStep>> {
    let tri = triangulation_set(x, f, tol)?;
    let domain: Vec<Simplex> = start
        .simplices()
        .filter(|s| !tri.contains(*s))
        .cloned()
        .collect();
    let n = domain.len();
    let pa = assign(x, e, f, domain, tol)?;
    let mut keyed = Vec::with_capacity(n / 2);
    for (lo, hi, v) in pa.pairs() {
        if pa.get(&hi) != Some(v) {
            return Err(Error::degenerate(format!(
                "{lo} and {hi} are assigned different vertices"
            )));
        }
        let value = start.value(&hi).expect("paired simplex in start");
        keyed.push((
            std::cmp::Reverse(v),
            CollapseStep {
                facet: lo,
                cofacet: hi,
                value,
            },
        ));
    }
    if 2 * keyed.len() != n {
        return Err(Error::degenerate(
            "the pairing does not partition the domain",
        ));
    }
    schedule(start, order_steps(keyed))
}

/// Vertex refinement of the intervals of `w` covering `region`, ordered by
/// decreasing value of `w`. Fails when an interval straddles the region or
/// is singular.
fn interval_steps(
    w: &GeneralizedVectorField,
    region: &HashSet<&Simplex>,
    start: &FilteredComplex,
) -> Result<Vec<CollapseStep>> {
    let mut ids = region
        .iter()
        .map(|s| {
            w.interval_of(s)
                .ok_or_else(|| Error::precondition(format!("{s} has no interval")))
        })
        .collect::<Result<Vec<usize>>>()?;
    ids.sort_unstable();
    ids.dedup();
    let rank = HashMap::new();
    let mut keyed = Vec::new();
    for id in ids {
        let iv = w.interval(id);
        if let Some(s) = w.members(id).iter().find(|s| !region.contains(s)) {
            return Err(Error::degenerate(format!(
                "interval {iv} meets the target at {s}"
            )));
        }
        if iv.is_singular() {
            return Err(Error::degenerate(format!(
                "critical simplex {} lies between the complexes",
                iv.lower
            )));
        }
        let (pairs, left) = refine_interval(w, id, &rank);
        if !left.is_empty() {
            return Err(Error::degenerate(format!("interval {iv} is incomplete")));
        }
        for (lo, hi) in pairs {
            let value = start.value(&hi).expect("region lies in start");
            keyed.push((
                w.value(id),
                CollapseStep {
                    facet: lo,
                    cofacet: hi,
                    value,
                },
            ));
        }
    }
    schedule(start, order_steps(keyed))
}

fn difference<'a>(a: &'a FilteredComplex, b: &FilteredComplex) -> HashSet<&'a Simplex> {
    a.simplices().filter(|s| !b.contains(s)).collect()
}

fn label_of(k: &FilteredComplex) -> String {
    k.kind().label().to_string()
}

/// `Del_r(X, E) ↘ Del_r(X, E) ∩ DelTri(X, F)` for `E ⊆ F`, by the vertex
/// pairing map.
pub fn collapse_selective_to_restricted(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    cap: f64,
    tol: &Tolerances,
) -> Result<CollapseSequence> {
    let (e, f) = normalize_pair(x, e, f)?;
    let start = build_selective_delaunay(x, &e, cap, None, tol)?;
    let steps = vertex_stage_steps(x, &e, &f, &start, tol)?;
    let target = if e.is_empty() && f.len() == x.len() {
        ComplexKind::DelaunayCech.label().to_string()
    } else {
        ComplexKind::Selective.label().to_string()
    };
    Ok(CollapseSequence {
        start,
        target,
        steps,
    })
}

/// `Del_r(X, E) ∩ DelTri(X, F) ↘ Del_r(X, F)` for `E ⊆ F`, by vertex
/// refinement of the sum of the gradients of `ρ_E` and `ρ_F` on
/// `DelTri(X, F)`.
pub fn collapse_restricted_to_selective(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    cap: f64,
    tol: &Tolerances,
) -> Result<CollapseSequence> {
    let (e, f) = normalize_pair(x, e, f)?;
    let tri = build_selective_delaunay(x, &f, f64::INFINITY, None, tol)?;
    let start = build_selective_restricted(x, &e, &f, cap, tol)?;
    let target = build_selective_delaunay(x, &f, cap, None, tol)?;
    let ve = radius_gradient(x, &e, &tri, tol)?;
    let vf = radius_gradient(x, &f, &tri, tol)?;
    let w = sum_refinement(&ve, &vf, &tri)?;
    let steps = interval_steps(&w, &difference(&start, &target), &start)?;
    Ok(CollapseSequence {
        target: label_of(&target),
        start,
        steps,
    })
}

/// `Čech_r(X) ↘ DelČech_r(X)`.
pub fn collapse_cech_to_delcech(
    x: &WeightedPointSet,
    cap: f64,
    tol: &Tolerances,
) -> Result<CollapseSequence> {
    collapse_selective_to_restricted(x, &[], &x.all_vertices(), cap, tol)
}

/// `DelČech_r(X) ↘ Del_r(X)`.
pub fn collapse_delcech_to_del(
    x: &WeightedPointSet,
    cap: f64,
    tol: &Tolerances,
) -> Result<CollapseSequence> {
    collapse_restricted_to_selective(x, &[], &x.all_vertices(), cap, tol)
}

/// `Del_r(X) ↘ Wrap_r(X)`, by vertex refinement of the Delaunay intervals
/// outside the Wrap complex.
pub fn collapse_del_to_wrap(
    x: &WeightedPointSet,
    cap: f64,
    tol: &Tolerances,
) -> Result<CollapseSequence> {
    let tri = build_delaunay(x, f64::INFINITY, tol)?;
    let vx = radius_gradient(x, &x.all_vertices(), &tri, tol)?;
    let start = build_delaunay(x, cap, tol)?;
    let wrap = wrap_from_gradient(&vx, x.dim(), x.len(), cap, tol)?;
    let steps = interval_steps(&vx, &difference(&start, &wrap), &start)?;
    Ok(CollapseSequence {
        start,
        target: ComplexKind::Wrap.label().to_string(),
        steps,
    })
}

/// The four complexes at one cap with the three collapses between them.
#[derive(Debug, Clone)]
pub struct CollapseHierarchy {
    pub cech: FilteredComplex,
    pub delcech: FilteredComplex,
    pub del: FilteredComplex,
    pub wrap: FilteredComplex,
    pub stages: [CollapseSequence; 3],
}

impl CollapseHierarchy {
    /// Replays each stage against the next complex; on failure returns the
    /// stage index with the failure.
    pub fn verify(&self) -> std::result::Result<(), (usize, CollapseFailure)> {
        let chain = [&self.cech, &self.delcech, &self.del, &self.wrap];
        for (i, seq) in self.stages.iter().enumerate() {
            verify_collapse(chain[i], &seq.steps, chain[i + 1]).map_err(|f| (i, f))?;
        }
        Ok(())
    }

    /// All pairs of all stages as one discrete vector field on `Čech_r(X)`,
    /// with the Wrap complex critical.
    pub fn gradient(&self) -> DiscreteGradient {
        DiscreteGradient {
            pairs: self
                .stages
                .iter()
                .flat_map(|s| s.pairs().map(|(a, b)| (a.clone(), b.clone())))
                .collect(),
            critical: self.wrap.simplices().cloned().collect(),
        }
    }
}

pub fn collapse_hierarchy(
    x: &WeightedPointSet,
    cap: f64,
    tol: &Tolerances,
) -> Result<CollapseHierarchy> {
    let stages = [
        collapse_cech_to_delcech(x, cap, tol)?,
        collapse_delcech_to_del(x, cap, tol)?,
        collapse_del_to_wrap(x, cap, tol)?,
    ];
    let tri = build_delaunay(x, f64::INFINITY, tol)?;
    let vx = radius_gradient(x, &x.all_vertices(), &tri, tol)?;
    Ok(CollapseHierarchy {
        cech: build_cech(x, cap, None, tol)?,
        delcech: build_delaunay_cech(x, cap, tol)?,
        del: build_delaunay(x, cap, tol)?,
        wrap: wrap_from_gradient(&vx, x.dim(), x.len(), cap, tol)?,
        stages,
    })
}

fn hierarchy_rank(kind: ComplexKind) -> Option<usize> {
    match kind {
        ComplexKind::Cech => Some(0),
        ComplexKind::DelaunayCech => Some(1),
        ComplexKind::Delaunay => Some(2),
        ComplexKind::Wrap => Some(3),
        ComplexKind::Selective => None,
    }
}

/// The stages from `from` down to `to` in the hierarchy, concatenated, with
/// the target complex. `to` must not come before `from`.
pub fn collapse_between(
    x: &WeightedPointSet,
    from: ComplexKind,
    to: ComplexKind,
    cap: f64,
    tol: &Tolerances,
) -> Result<(CollapseSequence, FilteredComplex)> {
    let (Some(a), Some(b)) = (hierarchy_rank(from), hierarchy_rank(to)) else {
        return Err(Error::precondition(
            "collapses run between cech, delcech, delaunay and wrap",
        ));
    };
    if b < a {
        return Err(Error::precondition(format!(
            "{} does not collapse onto {}",
            to.label(),
            from.label()
        )));
    }
    let h = collapse_hierarchy(x, cap, tol)?;
    let chain = [h.cech, h.delcech, h.del, h.wrap];
    let [s0, s1, s2] = h.stages;
    let stages = [s0, s1, s2];
    let mut seq = CollapseSequence {
        start: chain[a].clone(),
        target: to.label().to_string(),
        steps: Vec::new(),
    };
    for s in stages.into_iter().take(b).skip(a) {
        seq = seq.then(s);
    }
    Ok((seq, chain[b].clone()))
}
