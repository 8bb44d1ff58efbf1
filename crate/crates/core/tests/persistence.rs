mod common;

use common::{equilateral, obtuse, planar, random_gp, rng};
use delcech::complexes::{
    build_cech, build_delaunay, build_delaunay_cech, ComplexKind, FilteredComplex,
};
use delcech::geometry::{perturb, WeightedPoint, WeightedPointSet};
use delcech::morse::{critical_simplices, radius_gradient};
use delcech::persistence::{
    betti_by_rank, compare_barcodes, compute_barcode, compute_barcode_verbose,
    inclusion_is_isomorphism, Bar, Barcode,
};
use delcech::wrap::wrap_complex;
use delcech::{Simplex, Tolerances};
use rand::Rng;

const INF: f64 = f64::INFINITY;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn bar(dim: usize, birth: f64, death: f64) -> Bar {
    Bar { dim, birth, death }
}

fn assert_bars(got: &Barcode, want: &[Bar]) {
    assert_eq!(got.len(), want.len(), "{got:?}");
    for (g, w) in got.bars().iter().zip(want) {
        assert!(g.approx_eq(w, 1e-9), "{g:?} vs {w:?}");
    }
}

fn four(x: &WeightedPointSet) -> Vec<FilteredComplex> {
    let t = tol();
    vec![
        build_cech(x, INF, None, &t).unwrap(),
        build_delaunay_cech(x, INF, &t).unwrap(),
        build_delaunay(x, INF, &t).unwrap(),
        wrap_complex(x, INF, &t).unwrap(),
    ]
}

#[test]
fn equilateral_cech_golden_barcode() {
    let k = build_cech(&equilateral(), INF, None, &tol()).unwrap();
    let b = compute_barcode(&k);
    assert_bars(
        &b,
        &[
            bar(0, 0.0, 0.25),
            bar(0, 0.0, 0.25),
            bar(0, 0.0, INF),
            bar(1, 0.25, 1.0 / 3.0),
        ],
    );
}

#[test]
fn single_point() {
    let x = planar(&[[0.3, 0.4]]);
    let b = compute_barcode(&build_cech(&x, INF, None, &tol()).unwrap());
    assert_eq!(b.bars(), &[bar(0, 0.0, INF)]);
    let x = WeightedPointSet::new(
        2,
        vec![WeightedPoint {
            coords: vec![0.0, 0.0],
            weight: 0.5,
        }],
    )
    .unwrap();
    let b = compute_barcode(&build_delaunay(&x, INF, &tol()).unwrap());
    assert_eq!(b.bars(), &[bar(0, -0.5, INF)]);
}

#[test]
fn obtuse_delaunay_drops_the_apparent_pair() {
    let k = build_delaunay(&obtuse(), INF, &tol()).unwrap();
    let (b, zero) = compute_barcode_verbose(&k);
    assert_bars(
        &b,
        &[bar(0, 0.0, 1.25), bar(0, 0.0, 1.25), bar(0, 0.0, INF)],
    );
    assert_eq!(zero.len(), 1);
    assert!(zero[0].approx_eq(&bar(1, 6.25, 6.25), 1e-9));
}

#[test]
fn obtuse_four_filtrations_agree() {
    let cmp = compare_barcodes(&four(&obtuse()), 1e-9).unwrap();
    assert!(cmp.equal, "{:?}", cmp.diff);
    assert_eq!(cmp.barcodes.len(), 4);
}

#[test]
fn translation_and_perturbed_square() {
    let t = tol();
    let x = planar(&[[0.0, 0.0], [1.0, 0.2], [0.3, 1.1]]);
    let y = planar(&[[5.0, -2.0], [6.0, -1.8], [5.3, -0.9]]);
    let cmp = compare_barcodes(
        &[
            build_cech(&x, INF, None, &t).unwrap(),
            build_cech(&y, INF, None, &t).unwrap(),
        ],
        1e-9,
    )
    .unwrap();
    assert!(cmp.equal, "{:?}", cmp.diff);

    let square = planar(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.5, 0.5]]);
    let x = perturb(&square, 1e-3, 3).unwrap();
    let cmp = compare_barcodes(
        &[
            build_cech(&x, INF, None, &t).unwrap(),
            build_delaunay(&x, INF, &t).unwrap(),
        ],
        1e-9,
    )
    .unwrap();
    assert!(cmp.equal, "{:?}", cmp.diff);
}

#[test]
fn mismatched_ground_sets_are_rejected() {
    let t = tol();
    let a = build_cech(&obtuse(), INF, None, &t).unwrap();
    let b = build_cech(&planar(&[[0.0, 0.0], [1.0, 0.0]]), INF, None, &t).unwrap();
    assert!(compare_barcodes(&[a, b], 1e-9).is_err());
}

#[test]
fn differing_barcodes_are_reported() {
    let t = tol();
    let a = build_cech(&obtuse(), INF, None, &t).unwrap();
    let b = build_cech(&equilateral(), INF, None, &t).unwrap();
    let cmp = compare_barcodes(&[a, b], 1e-9).unwrap();
    assert!(!cmp.equal);
    assert!(cmp.diff.iter().any(|d| d.contains("extra H1")));
}

#[test]
fn essential_bar_does_not_match_finite_one() {
    assert!(!bar(1, 0.25, INF).approx_eq(&bar(1, 0.25, 1.0 / 3.0), 1e-9));
    assert!(bar(0, 0.0, INF).approx_eq(&bar(0, 1e-12, INF), 1e-9));
    let t = tol();
    let full = build_cech(&equilateral(), INF, None, &t).unwrap();
    let capped = build_cech(&equilateral(), 0.3, None, &t).unwrap();
    let cmp = compare_barcodes(&[full, capped], 1e-9).unwrap();
    assert!(!cmp.equal);
    assert_eq!(cmp.diff.len(), 2, "{:?}", cmp.diff);
}

#[test]
fn csv_round_trip() {
    let b = compute_barcode(&build_cech(&equilateral(), INF, None, &tol()).unwrap());
    let text = b.to_csv();
    assert_eq!(
        text,
        "dim,birth,death\n0,0,0.25\n0,0,0.25\n0,0,inf\n1,0.25,0.333333333333\n"
    );
    let back = Barcode::parse_csv(&text).unwrap();
    assert_eq!(back.len(), 4);
    assert!(back
        .bars()
        .iter()
        .zip(b.bars())
        .all(|(x, y)| x.approx_eq(y, 1e-11)));
    assert!(Barcode::parse_csv("dim,birth,death\n0,1\n").is_err());
}

/// Sample values: every distinct filtration value and midpoints between
/// neighbours.
fn sample_values(k: &FilteredComplex) -> Vec<f64> {
    let mut v: Vec<f64> = k.iter().map(|(_, v)| v).collect();
    v.dedup();
    let mids: Vec<f64> = v.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    v.extend(mids);
    v.push(-10.0);
    v
}

#[test]
fn random_four_way_equality() {
    let mut r = rng(91);
    for round in 0..12 {
        let m = r.random_range(3..=10);
        let x = random_gp(
            &mut r,
            m,
            2 + round % 2,
            if round % 2 == 0 { 0.0 } else { 0.05 },
        );
        let cmp = compare_barcodes(&four(&x), 1e-9).unwrap();
        assert!(cmp.equal, "round {round}: {:?}", cmp.diff);
    }
}

#[test]
fn euler_characteristic_and_rank_oracle() {
    let mut r = rng(92);
    for round in 0..12 {
        let m = r.random_range(3..=6);
        let x = random_gp(
            &mut r,
            m,
            2 + round % 2,
            if round % 3 == 0 { 0.1 } else { 0.0 },
        );
        for k in four(&x) {
            let b = compute_barcode(&k);
            for t in sample_values(&k) {
                let betti = b.betti_at(t);
                let chi: i64 = betti
                    .iter()
                    .enumerate()
                    .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
                    .sum();
                assert_eq!(chi, k.euler_characteristic(t), "round {round} t {t}");
                assert_eq!(betti, betti_by_rank(&k, t), "round {round} t {t}");
            }
        }
    }
}

#[test]
fn wrap_bars_end_at_critical_values() {
    let mut r = rng(93);
    let t = tol();
    for round in 0..12 {
        let m = r.random_range(3..=8);
        let x = random_gp(
            &mut r,
            m,
            2 + round % 2,
            if round % 2 == 0 { 0.0 } else { 0.05 },
        );
        let tri = build_delaunay(&x, INF, &t).unwrap();
        let crit: Vec<f64> =
            critical_simplices(&radius_gradient(&x, &x.all_vertices(), &tri, &t).unwrap())
                .into_iter()
                .map(|(_, v)| v)
                .collect();
        let b = compute_barcode(&wrap_complex(&x, INF, &t).unwrap());
        for e in b
            .bars()
            .iter()
            .flat_map(|b| [b.birth, b.death])
            .filter(|v| v.is_finite())
        {
            assert!(
                crit.iter()
                    .any(|c| (c - e).abs() <= 1e-12 * (1.0 + c.abs())),
                "round {round}: {e}"
            );
        }
    }
}

#[test]
fn hierarchy_inclusions_are_homology_isomorphisms() {
    let mut r = rng(94);
    for round in 0..8 {
        let m = r.random_range(3..=6);
        let x = random_gp(&mut r, m, 2 + round % 2, 0.0);
        let ks = four(&x);
        for t in sample_values(&ks[0]).into_iter().step_by(3) {
            for i in 0..3 {
                assert!(
                    inclusion_is_isomorphism(&ks[i + 1], &ks[i], t),
                    "round {round} t {t} pair {i}"
                );
            }
        }
    }
}

#[test]
fn non_isomorphic_inclusion_is_detected() {
    let s = |v: &[usize]| Simplex::new(v.to_vec()).unwrap();
    let a = FilteredComplex::new(
        2,
        2,
        ComplexKind::Cech,
        vec![],
        INF,
        vec![(s(&[0]), 0.0), (s(&[1]), 0.0)],
    )
    .unwrap();
    let b = FilteredComplex::new(
        2,
        2,
        ComplexKind::Cech,
        vec![],
        INF,
        vec![(s(&[0]), 0.0), (s(&[1]), 0.0), (s(&[0, 1]), 1.0)],
    )
    .unwrap();
    assert!(inclusion_is_isomorphism(&a, &b, 0.5));
    assert!(!inclusion_is_isomorphism(&a, &b, 2.0));
    assert!(!inclusion_is_isomorphism(&b, &a, 2.0));
}
