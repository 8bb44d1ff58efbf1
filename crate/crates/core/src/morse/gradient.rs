use std::collections::{HashMap, HashSet};

use crate::complexes::FilteredComplex;
use crate::{Error, Result, Simplex};

use super::field::{is_acyclic, GeneralizedVectorField};

/// A discrete vector field: facet–cofacet pairs plus unpaired (critical)
/// simplices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiscreteGradient {
    pub pairs: Vec<(Simplex, Simplex)>,
    pub critical: Vec<Simplex>,
}

impl DiscreteGradient {
    /// Every simplex of `k` critical.
    pub fn trivial(k: &FilteredComplex) -> Self {
        DiscreteGradient {
            pairs: Vec::new(),
            critical: k.simplices().cloned().collect(),
        }
    }

    pub fn num_simplices(&self) -> usize {
        2 * self.pairs.len() + self.critical.len()
    }

    /// All simplices, paired or not.
    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.pairs
            .iter()
            .flat_map(|(a, b)| [a, b])
            .chain(self.critical.iter())
    }
}

/// Rank of each vertex in `order`; vertices not listed rank after all
/// listed ones, by index.
fn ranks(order: &[usize]) -> HashMap<usize, usize> {
    order.iter().enumerate().map(|(r, &v)| (v, r)).collect()
}

fn min_free_vertex(free: &[usize], rank: &HashMap<usize, usize>) -> usize {
    *free
        .iter()
        .min_by_key(|&&v| (rank.get(&v).copied().unwrap_or(usize::MAX), v))
        .expect("non-singular interval has a free vertex")
}

/// Pairs of one interval refined by its first free vertex `x`: `(T, T + x)`
/// for every present member `T` missing `x` whose partner is present.
/// Returns the pairs and the members left unpaired.
pub(crate) fn refine_interval(
    w: &GeneralizedVectorField,
    id: usize,
    rank: &HashMap<usize, usize>,
) -> (Vec<(Simplex, Simplex)>, Vec<Simplex>) {
    let iv = w.interval(id);
    let members = w.members(id);
    if iv.is_singular() {
        return (Vec::new(), members.to_vec());
    }
    let x = min_free_vertex(&iv.free_vertices(), rank);
    let present: HashSet<&Simplex> = members.iter().collect();
    let mut pairs = Vec::new();
    let mut paired: HashSet<Simplex> = HashSet::new();
    for t in members.iter().filter(|t| !t.contains(x)) {
        let up = t.with(x);
        if present.contains(&up) {
            paired.insert(t.clone());
            paired.insert(up.clone());
            pairs.push((t.clone(), up));
        }
    }
    let left = members
        .iter()
        .filter(|s| !paired.contains(*s))
        .cloned()
        .collect();
    (pairs, left)
}

/// Splits every non-singular interval `[P, R]` into pairs `{Q − x, Q + x}`
/// using the vertex `x ∈ R \ P` that comes first in `order`; singular
/// intervals become critical.
pub fn vertex_refine(w: &GeneralizedVectorField, order: &[usize]) -> DiscreteGradient {
    let rank = ranks(order);
    let mut out = DiscreteGradient::default();
    for id in 0..w.len() {
        let (pairs, left) = refine_interval(w, id, &rank);
        out.pairs.extend(pairs);
        out.critical.extend(left);
    }
    out
}

/// Union of a gradient `v0` on `K0` with a gradient `v1` on `K1 ⊇ K0` whose
/// pairs avoid `K0`: pairs from both, critical simplices of `v0` plus those
/// of `v1` outside `K0`.
pub fn compose_gradients(v0: &DiscreteGradient, v1: &DiscreteGradient) -> Result<DiscreteGradient> {
    let k0: HashSet<&Simplex> = v0.simplices().collect();
    if let Some((a, b)) = v1
        .pairs
        .iter()
        .find(|(a, b)| k0.contains(a) || k0.contains(b))
    {
        return Err(Error::precondition(format!(
            "pair ({a}, {b}) meets the inner complex"
        )));
    }
    let mut out = v0.clone();
    out.pairs.extend(v1.pairs.iter().cloned());
    out.critical
        .extend(v1.critical.iter().filter(|s| !k0.contains(s)).cloned());
    Ok(out)
}

/// True when `v` partitions `k` into pairs and critical simplices, every pair
/// is a facet with one of its cofacets, and no closed V-path exists.
///
/// Acyclicity is checked on the Hasse diagram of `k` with arcs pointing from
/// cofacet to facet, except that each pair's arc is reversed.
pub fn is_gradient(v: &DiscreteGradient, k: &FilteredComplex) -> bool {
    let n = k.len();
    let mut seen = vec![false; n];
    for s in v.simplices() {
        match k.position(s) {
            Some(i) if !seen[i] => seen[i] = true,
            _ => return false,
        }
    }
    if seen.iter().any(|b| !b) {
        return false;
    }
    let mut partner: HashMap<usize, usize> = HashMap::new();
    for (a, b) in &v.pairs {
        if b.len() != a.len() + 1 || !a.is_face_of(b) {
            return false;
        }
        let (i, j) = (
            k.position(a).expect("checked"),
            k.position(b).expect("checked"),
        );
        partner.insert(i, j);
    }
    let mut arcs = Vec::new();
    for (j, (q, _)) in k.iter().enumerate() {
        for p in q.facets() {
            let i = k.position(&p).expect("face-closed");
            if partner.get(&i) == Some(&j) {
                arcs.push((i, j));
            } else {
                arcs.push((j, i));
            }
        }
    }
    is_acyclic(n, &arcs)
}
