use crate::complexes::{build_cech, build_delaunay, build_selective_delaunay, FilteredComplex};
use crate::geometry::{check_general_position, WeightedPointSet};
use crate::{Error, Result, Simplex, Tolerances};

use super::sequence::{verify_collapse, CollapseFailure};
use super::stages::{collapse_restricted_to_selective, collapse_selective_to_restricted};

/// Outcome of [`zigzag_connect`]: complex sizes, every inclusion of the
/// diagram, and every arrow checked by replaying a collapse.
#[derive(Debug, Clone)]
pub struct ZigzagReport {
    pub sizes: Vec<(String, usize)>,
    pub inclusions: Vec<(String, bool)>,
    pub collapses: Vec<(String, std::result::Result<(), CollapseFailure>)>,
}

impl ZigzagReport {
    pub fn all_ok(&self) -> bool {
        self.inclusions.iter().all(|(_, ok)| *ok) && self.collapses.iter().all(|(_, r)| r.is_ok())
    }
}

/// `X ∪ Y` with the points of `X` first, then those of `Y` not already in
/// `X`; also returns the index of every point of `Y` in the union.
pub fn union_point_set(
    x: &WeightedPointSet,
    y: &WeightedPointSet,
) -> Result<(WeightedPointSet, Vec<usize>)> {
    if !y.is_empty() && !x.is_empty() && x.dim() != y.dim() {
        return Err(Error::precondition(
            "point sets live in different dimensions",
        ));
    }
    let mut points = x.points().to_vec();
    let mut y_map = Vec::with_capacity(y.len());
    for p in y.points() {
        let at = points.iter().position(|q| q == p).unwrap_or_else(|| {
            points.push(p.clone());
            points.len() - 1
        });
        y_map.push(at);
    }
    let dim = if x.is_empty() { y.dim() } else { x.dim() };
    Ok((WeightedPointSet::new(dim, points)?, y_map))
}

fn mapped(k: &FilteredComplex, map: &[usize]) -> Vec<Simplex> {
    k.simplices()
        .map(|s| {
            Simplex::new(s.vertices().iter().map(|&v| map[v]).collect()).expect("injective map")
        })
        .collect()
}

fn included(a: &[Simplex], b: &FilteredComplex) -> bool {
    a.iter().all(|s| b.contains(s))
}

/// Replays both stages of `Del_r(X, E) ↘ Del_r(X, F)`.
fn selective_collapse(
    x: &WeightedPointSet,
    e: &[usize],
    f: &[usize],
    cap: f64,
    tol: &Tolerances,
) -> Result<std::result::Result<(), CollapseFailure>> {
    let first = collapse_selective_to_restricted(x, e, f, cap, tol)?;
    let second = collapse_restricted_to_selective(x, e, f, cap, tol)?;
    let target = build_selective_delaunay(x, f, cap, None, tol)?;
    let start = first.start.clone();
    let all = first.then(second);
    Ok(verify_collapse(&start, &all.steps, &target))
}

/// Builds the Delaunay and Čech complexes of `X`, `Y` and `X ∪ Y` together
/// with `Del_r(X ∪ Y, X)` and `Del_r(X ∪ Y, Y)`, checks every inclusion
/// between them, and replays the collapses
/// `Čech_r ↘ Del_r` (for `X` and `Y`), `Čech_r(X ∪ Y) ↘ Del_r(X ∪ Y, ·)` and
/// `Del_r(X ∪ Y, ·) ↘ Del_r(X ∪ Y)`.
pub fn zigzag_connect(
    x: &WeightedPointSet,
    y: &WeightedPointSet,
    cap: f64,
    tol: &Tolerances,
) -> Result<ZigzagReport> {
    let (u, y_map) = union_point_set(x, y)?;
    let gp = check_general_position(&u, tol);
    if !gp.is_ok() {
        return Err(Error::degenerate(format!(
            "the union is not in general position ({} violations)",
            gp.violations.len()
        )));
    }
    let x_map: Vec<usize> = (0..x.len()).collect();
    let x_idx = x_map.clone();
    let mut y_idx = y_map.clone();
    y_idx.sort_unstable();
    y_idx.dedup();

    let del_x = build_delaunay(x, cap, tol)?;
    let del_y = build_delaunay(y, cap, tol)?;
    let del_u = build_delaunay(&u, cap, tol)?;
    let del_ux = build_selective_delaunay(&u, &x_idx, cap, None, tol)?;
    let del_uy = build_selective_delaunay(&u, &y_idx, cap, None, tol)?;
    let cech_x = build_cech(x, cap, None, tol)?;
    let cech_y = build_cech(y, cap, None, tol)?;
    let cech_u = build_cech(&u, cap, None, tol)?;

    let sizes = [
        ("Del(X)", &del_x),
        ("Del(Y)", &del_y),
        ("Del(X∪Y)", &del_u),
        ("Del(X∪Y,X)", &del_ux),
        ("Del(X∪Y,Y)", &del_uy),
        ("Čech(X)", &cech_x),
        ("Čech(Y)", &cech_y),
        ("Čech(X∪Y)", &cech_u),
    ]
    .iter()
    .map(|(n, k)| (n.to_string(), k.len()))
    .collect();

    let own = |k: &FilteredComplex| -> Vec<Simplex> { k.simplices().cloned().collect() };
    let inclusions = vec![
        ("Del(X) ⊆ Čech(X)", included(&own(&del_x), &cech_x)),
        ("Del(Y) ⊆ Čech(Y)", included(&own(&del_y), &cech_y)),
        (
            "Čech(X) ⊆ Čech(X∪Y)",
            included(&mapped(&cech_x, &x_map), &cech_u),
        ),
        (
            "Čech(Y) ⊆ Čech(X∪Y)",
            included(&mapped(&cech_y, &y_map), &cech_u),
        ),
        ("Del(X∪Y,X) ⊆ Čech(X∪Y)", included(&own(&del_ux), &cech_u)),
        ("Del(X∪Y,Y) ⊆ Čech(X∪Y)", included(&own(&del_uy), &cech_u)),
        (
            "Del(X) ⊆ Del(X∪Y,X)",
            included(&mapped(&del_x, &x_map), &del_ux),
        ),
        (
            "Del(Y) ⊆ Del(X∪Y,Y)",
            included(&mapped(&del_y, &y_map), &del_uy),
        ),
        ("Del(X∪Y) ⊆ Del(X∪Y,X)", included(&own(&del_u), &del_ux)),
        ("Del(X∪Y) ⊆ Del(X∪Y,Y)", included(&own(&del_u), &del_uy)),
    ]
    .into_iter()
    .map(|(n, ok)| (n.to_string(), ok))
    .collect();

    let all = u.all_vertices();
    let collapses = vec![
        (
            "Čech(X) ↘ Del(X)",
            selective_collapse(x, &[], &x.all_vertices(), cap, tol)?,
        ),
        (
            "Čech(Y) ↘ Del(Y)",
            selective_collapse(y, &[], &y.all_vertices(), cap, tol)?,
        ),
        (
            "Čech(X∪Y) ↘ Del(X∪Y,X)",
            selective_collapse(&u, &[], &x_idx, cap, tol)?,
        ),
        (
            "Čech(X∪Y) ↘ Del(X∪Y,Y)",
            selective_collapse(&u, &[], &y_idx, cap, tol)?,
        ),
        (
            "Del(X∪Y,X) ↘ Del(X∪Y)",
            selective_collapse(&u, &x_idx, &all, cap, tol)?,
        ),
        (
            "Del(X∪Y,Y) ↘ Del(X∪Y)",
            selective_collapse(&u, &y_idx, &all, cap, tol)?,
        ),
    ]
    .into_iter()
    .map(|(n, r)| (n.to_string(), r))
    .collect();

    Ok(ZigzagReport {
        sizes,
        inclusions,
        collapses,
    })
}
