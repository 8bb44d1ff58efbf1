use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use crate::complexes::{certify, interval_key, unify_values, FilteredComplex, IntervalKey};
use crate::format::{parse_cap, sig12};
use crate::geometry::{Sphere, WeightedPointSet};
use crate::simplex::write_vertex_list;
use crate::{Error, Result, Simplex, Tolerances};

use super::interval::Interval;

/// A partition of a complex into face intervals, each carrying the value of
/// the function whose gradient it is.
///
/// An interval may be only partly present in the complex (for example the
/// Čech field restricted to the Delaunay triangulation); its stored members
/// are the simplices of the complex it covers. [`is_generalized_morse`]
/// requires every interval to be complete.
#[derive(Debug, Clone)]
pub struct GeneralizedVectorField {
    intervals: Vec<Interval>,
    values: Vec<f64>,
    members: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
}

impl GeneralizedVectorField {
    /// Groups `(simplex, interval, value)` triples by interval. Intervals are
    /// numbered in order of (value, lower bound).
    pub(crate) fn from_assignment(entries: Vec<(Simplex, Interval, f64)>) -> Self {
        let mut by_interval: HashMap<Interval, (f64, Vec<Simplex>)> = HashMap::new();
        for (s, iv, v) in entries {
            by_interval.entry(iv).or_insert((v, Vec::new())).1.push(s);
        }
        let mut groups: Vec<(Interval, f64, Vec<Simplex>)> = by_interval
            .into_iter()
            .map(|(iv, (v, m))| (iv, v, m))
            .collect();
        groups.sort_by(|a, b| {
            a.1.total_cmp(&b.1)
                .then_with(|| a.0.lower.cmp_dim_lex(&b.0.lower))
                .then_with(|| a.0.upper.cmp_dim_lex(&b.0.upper))
        });
        let mut field = GeneralizedVectorField {
            intervals: Vec::with_capacity(groups.len()),
            values: Vec::with_capacity(groups.len()),
            members: Vec::with_capacity(groups.len()),
            index: HashMap::new(),
        };
        for (id, (iv, v, mut m)) in groups.into_iter().enumerate() {
            m.sort_by(|a, b| a.cmp_dim_lex(b));
            for s in &m {
                field.index.insert(s.clone(), id);
            }
            field.intervals.push(iv);
            field.values.push(v);
            field.members.push(m);
        }
        field
    }

    /// Assigns every simplex of `k` to the unique given interval containing
    /// it. Fails when a simplex is covered zero or several times, or when an
    /// interval reaches outside `k`.
    pub fn from_intervals(k: &FilteredComplex, intervals: Vec<(Interval, f64)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(k.len());
        let mut covered: HashMap<Simplex, usize> = HashMap::new();
        for (id, (iv, v)) in intervals.iter().enumerate() {
            for s in iv.members() {
                if !k.contains(&s) {
                    return Err(Error::precondition(format!(
                        "interval {iv} reaches {s} outside the complex"
                    )));
                }
                if covered.insert(s.clone(), id).is_some() {
                    return Err(Error::precondition(format!(
                        "simplex {s} lies in two intervals"
                    )));
                }
                entries.push((s, iv.clone(), *v));
            }
        }
        if let Some(s) = k.simplices().find(|s| !covered.contains_key(*s)) {
            return Err(Error::precondition(format!(
                "simplex {s} is in no interval"
            )));
        }
        Ok(Self::from_assignment(entries))
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn interval(&self, id: usize) -> &Interval {
        &self.intervals[id]
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn value(&self, id: usize) -> f64 {
        self.values[id]
    }

    /// Simplices of interval `id` present in the underlying complex.
    pub fn members(&self, id: usize) -> &[Simplex] {
        &self.members[id]
    }

    pub fn interval_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Number of simplices covered.
    pub fn num_simplices(&self) -> usize {
        self.index.len()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.members.iter().flatten()
    }

    /// Every interval is fully present.
    pub fn is_complete(&self) -> bool {
        self.intervals
            .iter()
            .zip(&self.members)
            .all(|(iv, m)| iv.size() == m.len())
    }

    /// Arcs `interval(P) → interval(Q)` for every facet `P` of a covered `Q`
    /// lying in a different interval; deduplicated and sorted.
    pub fn facet_arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs: Vec<(usize, usize)> = self
            .index
            .iter()
            .flat_map(|(q, &j)| {
                q.facets()
                    .filter_map(|p| self.index.get(&p).copied())
                    .filter(move |&i| i != j)
                    .map(move |i| (i, j))
                    .collect::<Vec<_>>()
            })
            .collect();
        arcs.sort_unstable();
        arcs.dedup();
        arcs
    }
}

/// True when the directed graph on `n` nodes has no cycle.
pub(crate) fn is_acyclic(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut indeg = vec![0usize; n];
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in arcs {
        out[a].push(b);
        indeg[b] += 1;
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(a) = queue.pop_front() {
        seen += 1;
        for &b in &out[a] {
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push_back(b);
            }
        }
    }
    seen == n
}

/// Generalized discrete gradient of the radius function `ρ_E` on `k`.
///
/// Each simplex `Q` goes to the interval `[Front(S), Incl(S)]` of its
/// smallest sphere `S = S(Q, E)`; the upper bound is kept as computed, so an
/// interval cut short by `k` (a dimension limit, or a complex built for a
/// different `E`) is stored with its members in `k` only. All simplices of an
/// interval get one value, as in the complex builder.
pub fn radius_gradient(
    x: &WeightedPointSet,
    e: &[usize],
    k: &FilteredComplex,
    tol: &Tolerances,
) -> Result<GeneralizedVectorField> {
    let mut e = e.to_vec();
    e.sort_unstable();
    e.dedup();
    let simplices: Vec<Simplex> = k.simplices().cloned().collect();
    let certs = certify(x, &e, &simplices, tol)?;
    let certs = simplices
        .iter()
        .zip(certs)
        .map(|(s, c)| {
            c.ok_or_else(|| Error::precondition(format!("simplex {s} has no sphere excluding E")))
        })
        .collect::<Result<Vec<_>>>()?;
    let keys: Vec<IntervalKey> = certs.iter().map(interval_key).collect();
    let raw: Vec<f64> = certs.iter().map(|c| c.sq_radius()).collect();
    let values = unify_values(&simplices, &raw, &keys);

    // One sphere per interval; a second sphere under the same key, or two
    // keys sharing a sphere, means general position failed.
    let mut sphere_of: HashMap<&IntervalKey, &Sphere> = HashMap::new();
    for (key, cert) in keys.iter().zip(&certs) {
        let first = *sphere_of.entry(key).or_insert(&cert.sphere);
        if !same_sphere(first, &cert.sphere) {
            return Err(Error::degenerate(format!(
                "interval with front {:?} has two different spheres",
                key.0
            )));
        }
    }
    let mut distinct: Vec<(&IntervalKey, &Sphere)> = sphere_of.into_iter().collect();
    distinct.sort_by(|a, b| a.1.sq_radius.total_cmp(&b.1.sq_radius));
    for w in distinct.windows(2) {
        if same_sphere(w[0].1, w[1].1) {
            return Err(Error::degenerate(format!(
                "intervals with fronts {:?} and {:?} share one sphere",
                w[0].0 .0, w[1].0 .0
            )));
        }
    }

    let entries = simplices
        .into_iter()
        .zip(keys)
        .zip(values)
        .map(|((s, (front, incl)), v)| {
            let iv = Interval {
                lower: Simplex::from_sorted(front),
                upper: Simplex::from_sorted(incl),
            };
            (s, iv, v)
        })
        .collect();
    Ok(GeneralizedVectorField::from_assignment(entries))
}

fn same_sphere(a: &Sphere, b: &Sphere) -> bool {
    let scale = 1.0 + a.sq_radius.abs().max(b.sq_radius.abs());
    a.approx_eq(b, 1e-7 * scale)
}

/// Checks that `w` is the gradient of a generalized discrete Morse function
/// on `k`: it partitions `k` into complete intervals, values weakly increase
/// from facets to cofacets with equality exactly inside an interval, and the
/// interval digraph is acyclic.
pub fn is_generalized_morse(k: &FilteredComplex, w: &GeneralizedVectorField) -> bool {
    if w.num_simplices() != k.len() || !k.simplices().all(|s| w.interval_of(s).is_some()) {
        return false;
    }
    if !w.is_complete() {
        return false;
    }
    for q in k.simplices() {
        let j = w.interval_of(q).expect("covered");
        for p in q.facets() {
            let Some(i) = w.interval_of(&p) else {
                return false;
            };
            let ok = if i == j {
                w.value(i) == w.value(j)
            } else {
                w.value(i) < w.value(j)
            };
            if !ok {
                return false;
            }
        }
    }
    is_acyclic(w.len(), &w.facet_arcs())
}

/// The singular intervals with their values, in filtration order.
pub fn critical_simplices(w: &GeneralizedVectorField) -> Vec<(Simplex, f64)> {
    let mut out: Vec<(Simplex, f64)> = w
        .intervals()
        .iter()
        .enumerate()
        .filter(|(id, iv)| iv.is_singular() && !w.members(*id).is_empty())
        .map(|(id, iv)| (iv.lower.clone(), w.value(id)))
        .collect();
    out.sort_by(crate::complexes::filtration_cmp);
    out
}

/// Common refinement of two fields on the simplices of `k`: the nonempty
/// intersections of their intervals, valued by the sum of the two values.
pub fn sum_refinement(
    we: &GeneralizedVectorField,
    wf: &GeneralizedVectorField,
    k: &FilteredComplex,
) -> Result<GeneralizedVectorField> {
    let mut entries = Vec::with_capacity(k.len());
    for q in k.simplices() {
        let (Some(i), Some(j)) = (we.interval_of(q), wf.interval_of(q)) else {
            return Err(Error::precondition(format!(
                "simplex {q} is not covered by both fields"
            )));
        };
        let iv = we
            .interval(i)
            .intersect(wf.interval(j))
            .expect("both intervals contain q");
        entries.push((q.clone(), iv, we.value(i) + wf.value(j)));
    }
    Ok(GeneralizedVectorField::from_assignment(entries))
}

/// Gradient file text: `gradient E=<label>`, then one line per interval.
pub fn gradient_to_string(w: &GeneralizedVectorField, e_label: &str) -> String {
    let mut out = format!("gradient E={e_label}\n");
    for (id, iv) in w.intervals().iter().enumerate() {
        out.push_str("interval lower=");
        let _ = write_vertex_list(&mut out, iv.lower.vertices());
        out.push_str(" upper=");
        let _ = write_vertex_list(&mut out, iv.upper.vertices());
        let _ = write!(out, " value={}", sig12(w.value(id)));
        if iv.is_singular() {
            out.push_str(" critical");
        }
        out.push('\n');
    }
    out
}

/// Parses gradient file text into its E label and `(interval, value)` list.
pub fn parse_gradient(text: &str) -> Result<(String, Vec<(Interval, f64)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::parse(0, "empty gradient file"))?;
    let label = header
        .strip_prefix("gradient E=")
        .ok_or_else(|| Error::parse(hl, "expected `gradient E=<...>`"))?
        .to_string();
    let mut out = Vec::new();
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("interval") {
            return Err(Error::parse(ln, "expected `interval`"));
        }
        let (mut lower, mut upper, mut value, mut critical) = (None, None, None, false);
        for tok in toks {
            if tok == "critical" {
                critical = true;
            } else if let Some(v) = tok.strip_prefix("lower=") {
                lower = Some(parse_simplex(v, ln)?);
            } else if let Some(v) = tok.strip_prefix("upper=") {
                upper = Some(parse_simplex(v, ln)?);
            } else if let Some(v) = tok.strip_prefix("value=") {
                value = Some(
                    parse_cap(v).map_err(|_| Error::parse(ln, format!("invalid value `{v}`")))?,
                );
            } else {
                return Err(Error::parse(ln, format!("unexpected token `{tok}`")));
            }
        }
        let (Some(lower), Some(upper), Some(value)) = (lower, upper, value) else {
            return Err(Error::parse(ln, "interval needs lower=, upper= and value="));
        };
        let iv = Interval::new(lower, upper).map_err(|e| Error::parse(ln, e.to_string()))?;
        if critical != iv.is_singular() {
            return Err(Error::parse(
                ln,
                "`critical` must mark exactly the singular intervals",
            ));
        }
        out.push((iv, value));
    }
    Ok((label, out))
}

fn parse_simplex(s: &str, line: usize) -> Result<Simplex> {
    let v = crate::complexes::parse_vertex_list(s).map_err(|m| Error::parse(line, m))?;
    Simplex::new(v).map_err(|e| Error::parse(line, e.to_string()))
}
