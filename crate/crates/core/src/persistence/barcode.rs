use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complexes::FilteredComplex;
use crate::format::{parse_cap, sig12};
use crate::{Error, Result, Simplex};

use super::reduce::{Reduced, Reducer};

/// One persistence interval `[birth, death)`; `death` is `+∞` for essential
/// classes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub dim: usize,
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }

    /// Alive at `t`: `birth ≤ t < death`.
    pub fn alive_at(&self, t: f64) -> bool {
        self.birth <= t && t < self.death
    }

    /// Same dimension and endpoints within `tol · (1 + |value|)`. An infinite
    /// endpoint only matches an equal one.
    pub fn approx_eq(&self, other: &Bar, tol: f64) -> bool {
        let close = |a: f64, b: f64| {
            a == b
                || (a.is_finite()
                    && b.is_finite()
                    && (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs())))
        };
        self.dim == other.dim && close(self.birth, other.birth) && close(self.death, other.death)
    }
}

fn canonical(a: &Bar, b: &Bar) -> std::cmp::Ordering {
    a.dim
        .cmp(&b.dim)
        .then(a.birth.total_cmp(&b.birth))
        .then(a.death.total_cmp(&b.death))
}

/// A multiset of bars in canonical order (dimension, birth, death).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Self {
        bars.sort_by(canonical);
        Barcode { bars }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Betti numbers at `t`, up to the highest nonzero one.
    pub fn betti_at(&self, t: f64) -> Vec<usize> {
        let mut betti = Vec::new();
        for b in self.bars.iter().filter(|b| b.alive_at(t)) {
            if betti.len() <= b.dim {
                betti.resize(b.dim + 1, 0);
            }
            betti[b.dim] += 1;
        }
        betti
    }

    /// `dim,birth,death` header, then one row per bar.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dim,birth,death\n");
        for b in &self.bars {
            let _ = writeln!(out, "{},{},{}", b.dim, sig12(b.birth), sig12(b.death));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Barcode> {
        let mut bars = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (i == 0 && line == "dim,birth,death") {
                continue;
            }
            let err = || Error::parse(i + 1, format!("expected `dim,birth,death`, got `{line}`"));
            let mut parts = line.split(',');
            let (Some(d), Some(b), Some(e), None) =
                (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(err());
            };
            bars.push(Bar {
                dim: d.trim().parse().map_err(|_| err())?,
                birth: parse_cap(b).map_err(|_| err())?,
                death: parse_cap(e).map_err(|_| err())?,
            });
        }
        Ok(Barcode::new(bars))
    }
}

fn boundary(k: &FilteredComplex, s: &Simplex) -> Vec<usize> {
    s.facets()
        .map(|f| k.position(&f).expect("complex is face-closed"))
        .collect()
}

/// Barcode of the filtration of `k`, with zero-length bars removed.
pub fn compute_barcode(k: &FilteredComplex) -> Barcode {
    compute_barcode_verbose(k).0
}

/// Barcode of `k` together with the zero-length bars it drops.
pub fn compute_barcode_verbose(k: &FilteredComplex) -> (Barcode, Vec<Bar>) {
    let mut red = Reducer::new(false);
    let mut killed = vec![false; k.len()];
    let mut creators = Vec::new();
    let mut bars = Vec::new();
    let mut zero = Vec::new();
    for (j, (s, v)) in k.iter().enumerate() {
        match red.push(j, boundary(k, s)) {
            Reduced::Pivot(i) => {
                killed[i] = true;
                let (p, birth) = k.get(i);
                let bar = Bar {
                    dim: p.dim(),
                    birth,
                    death: v,
                };
                if birth == v {
                    zero.push(bar);
                } else {
                    bars.push(bar);
                }
            }
            Reduced::Zero(_) => creators.push(j),
        }
    }
    for j in creators.into_iter().filter(|&j| !killed[j]) {
        let (s, v) = k.get(j);
        bars.push(Bar {
            dim: s.dim(),
            birth: v,
            death: f64::INFINITY,
        });
    }
    zero.sort_by(canonical);
    (Barcode::new(bars), zero)
}

/// Simplices of `k` with value at most `t`, grouped by dimension.
fn by_dim(k: &FilteredComplex, t: f64) -> Vec<Vec<&Simplex>> {
    let mut out: Vec<Vec<&Simplex>> = Vec::new();
    for (s, _) in k.iter().filter(|(_, v)| *v <= t) {
        if out.len() <= s.dim() {
            out.resize(s.dim() + 1, Vec::new());
        }
        out[s.dim()].push(s);
    }
    out
}

fn boundary_rank(k: &FilteredComplex, simplices: &[&Simplex]) -> usize {
    let mut red = Reducer::new(false);
    for (j, s) in simplices.iter().enumerate() {
        red.push(j, boundary(k, s));
    }
    red.rank()
}

/// Betti numbers of the sublevel complex at `t` from ranks of boundary
/// matrices, up to the highest nonzero one.
pub fn betti_by_rank(k: &FilteredComplex, t: f64) -> Vec<usize> {
    let groups = by_dim(k, t);
    let ranks: Vec<usize> = groups.iter().map(|g| boundary_rank(k, g)).collect();
    let mut betti: Vec<usize> = (0..groups.len())
        .map(|p| groups[p].len() - ranks[p] - ranks.get(p + 1).copied().unwrap_or(0))
        .collect();
    while betti.last() == Some(&0) {
        betti.pop();
    }
    betti
}

/// True when the sublevel complex of `a` at `t` is contained in that of `b`
/// and the inclusion induces isomorphisms on Z/2 homology in every
/// dimension.
pub fn inclusion_is_isomorphism(a: &FilteredComplex, b: &FilteredComplex, t: f64) -> bool {
    let ga = by_dim(a, t);
    let gb = by_dim(b, t);
    if ga
        .iter()
        .flatten()
        .any(|s| b.value(s).is_none_or(|v| v > t))
    {
        return false;
    }
    let in_b = |s: &Simplex| b.position(s).expect("checked above");
    let top = ga.len().max(gb.len());
    let empty = Vec::new();
    for p in 0..top {
        let a_p = ga.get(p).unwrap_or(&empty);
        let a_next = ga.get(p + 1).unwrap_or(&empty);
        let b_p = gb.get(p).unwrap_or(&empty);
        let b_next = gb.get(p + 1).unwrap_or(&empty);

        // Cycles of A in dimension p, as chains over the positions in B.
        let mut red = Reducer::new(true);
        let mut cycles = Vec::new();
        for s in a_p {
            if let Reduced::Zero(src) = red.push(in_b(s), boundary(b, s)) {
                cycles.push(src);
            }
        }
        let beta_a = cycles.len() - boundary_rank(b, a_next);

        let mut image = Reducer::new(false);
        for (j, s) in b_next.iter().enumerate() {
            image.push(j, boundary(b, s));
        }
        let boundaries = image.rank();
        let beta_b = b_p.len() - boundary_rank(b, b_p) - boundaries;
        for (j, z) in cycles.into_iter().enumerate() {
            image.push(b_next.len() + j, z);
        }
        let induced = image.rank() - boundaries;
        if beta_a != induced || beta_b != induced {
            return false;
        }
    }
    true
}

/// Result of [`compare_barcodes`]: all barcodes, and one line per bar of a
/// filtration that has no partner in the first filtration or vice versa.
#[derive(Debug, Clone, PartialEq)]
pub struct BarcodeComparison {
    pub equal: bool,
    pub barcodes: Vec<Barcode>,
    pub diff: Vec<String>,
}

fn describe(b: &Bar) -> String {
    format!("H{} [{}, {})", b.dim, sig12(b.birth), sig12(b.death))
}

/// Compares the barcodes of all filtrations against the first one as
/// multisets, matching endpoints within `tol` relative to `1 + |value|`.
/// All filtrations must be over the same point set.
pub fn compare_barcodes(filtrations: &[FilteredComplex], tol: f64) -> Result<BarcodeComparison> {
    if let Some(first) = filtrations.first() {
        if let Some(k) = filtrations
            .iter()
            .find(|k| k.num_points() != first.num_points() || k.dim() != first.dim())
        {
            return Err(Error::precondition(format!(
                "filtrations over different point sets ({} vs {} points in dimension {} vs {})",
                first.num_points(),
                k.num_points(),
                first.dim(),
                k.dim()
            )));
        }
    }
    let barcodes: Vec<Barcode> = filtrations.par_iter().map(compute_barcode).collect();
    let mut diff = Vec::new();
    for (i, other) in barcodes.iter().enumerate().skip(1) {
        let reference = &barcodes[0];
        let mut unused: HashMap<usize, Vec<usize>> = HashMap::new();
        for (j, b) in other.bars().iter().enumerate() {
            unused.entry(b.dim).or_default().push(j);
        }
        for a in reference.bars() {
            let pool = unused.entry(a.dim).or_default();
            match pool
                .iter()
                .position(|&j| a.approx_eq(&other.bars()[j], tol))
            {
                Some(pos) => {
                    pool.remove(pos);
                }
                None => diff.push(format!("filtration {i} lacks {}", describe(a))),
            }
        }
        let mut extra: Vec<usize> = unused.into_values().flatten().collect();
        extra.sort_unstable();
        for j in extra {
            diff.push(format!(
                "filtration {i} has extra {}",
                describe(&other.bars()[j])
            ));
        }
    }
    Ok(BarcodeComparison {
        equal: diff.is_empty(),
        barcodes,
        diff,
    })
}
