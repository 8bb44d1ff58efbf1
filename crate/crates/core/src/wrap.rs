//! Wrap complexes: unions of lower sets of singular intervals in the
//! Delaunay gradient.
//!
//! A simplex enters the Wrap filtration at the smallest value of a singular
//! interval whose lower set contains it, which is at least its Delaunay
//! radius. `Wrap_r(X)` is the sublevel set at `r²`.

use std::collections::VecDeque;

use crate::complexes::{build_delaunay, ComplexKind, FilteredComplex};
use crate::geometry::WeightedPointSet;
use crate::morse::{radius_gradient, GeneralizedVectorField};
use crate::{Result, Simplex, Tolerances};

/// Nodes are interval ids of a gradient; an arc `(μ, ν)` means some simplex
/// of `μ` is a face of some simplex of `ν`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalDigraph {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize)>,
}

impl IntervalDigraph {
    fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut pred = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.arcs {
            pred[b].push(a);
        }
        pred
    }
}

/// Arcs from facet relations between distinct intervals, deduplicated.
pub fn build_interval_digraph(vx: &GeneralizedVectorField) -> IntervalDigraph {
    IntervalDigraph {
        nodes: vx.len(),
        arcs: vx.facet_arcs(),
    }
}

/// Entry value of every interval: the least value of a singular interval
/// reachable from it, or `None` when it reaches none. Seeds above `cap` are
/// ignored.
pub fn entry_values(
    vx: &GeneralizedVectorField,
    graph: &IntervalDigraph,
    cap: f64,
) -> Vec<Option<f64>> {
    let pred = graph.predecessors();
    let mut seeds: Vec<usize> = (0..vx.len())
        .filter(|&i| vx.interval(i).is_singular() && vx.value(i) <= cap)
        .collect();
    seeds.sort_by(|&a, &b| vx.value(a).total_cmp(&vx.value(b)).then(a.cmp(&b)));
    let mut entry: Vec<Option<f64>> = vec![None; vx.len()];
    // Seeds in increasing value: the first visit fixes the minimum.
    for s in seeds {
        if entry[s].is_some() {
            continue;
        }
        let v = vx.value(s);
        entry[s] = Some(v);
        let mut queue = VecDeque::from([s]);
        while let Some(n) = queue.pop_front() {
            for &p in &pred[n] {
                if entry[p].is_none() {
                    entry[p] = Some(v);
                    queue.push_back(p);
                }
            }
        }
    }
    entry
}

/// Wrap complex from a Delaunay gradient: members of every interval in the
/// lower set of a singular interval with value at most `cap + eps`, valued
/// by their entry value.
pub fn wrap_from_gradient(
    vx: &GeneralizedVectorField,
    dim: usize,
    num_points: usize,
    cap: f64,
    tol: &Tolerances,
) -> Result<FilteredComplex> {
    let graph = build_interval_digraph(vx);
    let entry = entry_values(vx, &graph, cap + tol.eps);
    let simplices: Vec<(Simplex, f64)> = entry
        .iter()
        .enumerate()
        .filter_map(|(id, e)| e.map(|v| (id, v)))
        .flat_map(|(id, v)| vx.members(id).iter().map(move |s| (s.clone(), v)))
        .collect();
    FilteredComplex::new(
        dim,
        num_points,
        ComplexKind::Wrap,
        (0..num_points).collect(),
        cap,
        simplices,
    )
}

/// `Wrap_r(X)` with `r² = cap`.
pub fn wrap_complex(x: &WeightedPointSet, cap: f64, tol: &Tolerances) -> Result<FilteredComplex> {
    let tri = build_delaunay(x, f64::INFINITY, tol)?;
    let vx = radius_gradient(x, &x.all_vertices(), &tri, tol)?;
    wrap_from_gradient(&vx, x.dim(), x.len(), cap, tol)
}
