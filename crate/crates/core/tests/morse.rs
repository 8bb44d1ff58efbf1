mod common;

use common::{all_subsets, equilateral, obtuse, random_gp, rng};
use delcech::complexes::{
    build_cech, build_delaunay, build_selective_delaunay, ComplexKind, FilteredComplex,
};
use delcech::geometry::smallest_sphere;
use delcech::morse::{
    compose_gradients, critical_simplices, gradient_to_string, is_generalized_morse, is_gradient,
    parse_gradient, radius_gradient, sum_refinement, vertex_refine, DiscreteGradient,
    GeneralizedVectorField, Interval,
};
use delcech::{Simplex, Tolerances};
use rand::Rng;

const INF: f64 = f64::INFINITY;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn s(v: &[usize]) -> Simplex {
    Simplex::new(v.to_vec()).unwrap()
}

fn iv(lo: &[usize], up: &[usize]) -> Interval {
    Interval::new(s(lo), s(up)).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

/// Boundary of a triangle, every simplex at value 0.
fn triangle_boundary() -> FilteredComplex {
    let simplices = [
        vec![0],
        vec![1],
        vec![2],
        vec![0, 1],
        vec![1, 2],
        vec![0, 2],
    ]
    .into_iter()
    .map(|v| (s(&v), 0.0))
    .collect();
    FilteredComplex::new(2, 3, ComplexKind::Cech, vec![], INF, simplices).unwrap()
}

fn non_singular(w: &GeneralizedVectorField) -> Vec<(Interval, f64)> {
    (0..w.len())
        .filter(|&i| !w.interval(i).is_singular())
        .map(|i| (w.interval(i).clone(), w.value(i)))
        .collect()
}

#[test]
fn obtuse_cech_gradient() {
    let x = obtuse();
    let k = build_cech(&x, INF, None, &tol()).unwrap();
    let w = radius_gradient(&x, &[], &k, &tol()).unwrap();
    let ns = non_singular(&w);
    assert_eq!(ns.len(), 1);
    assert_eq!(ns[0].0, iv(&[0, 1], &[0, 1, 2]));
    assert!(close(ns[0].1, 4.0));
    assert!(is_generalized_morse(&k, &w));
}

#[test]
fn obtuse_delaunay_gradient() {
    let x = obtuse();
    let k = build_delaunay(&x, INF, &tol()).unwrap();
    let w = radius_gradient(&x, &x.all_vertices(), &k, &tol()).unwrap();
    let ns = non_singular(&w);
    assert_eq!(ns.len(), 1);
    assert_eq!(ns[0].0, iv(&[0, 1], &[0, 1, 2]));
    assert!(close(ns[0].1, 6.25));
    assert_eq!(w.len(), 6);
    assert!(is_generalized_morse(&k, &w));
}

#[test]
fn obtuse_critical_sets_agree() {
    let x = obtuse();
    let expect = [
        (vec![0], 0.0),
        (vec![1], 0.0),
        (vec![2], 0.0),
        (vec![0, 2], 1.25),
        (vec![1, 2], 1.25),
    ];
    for e in [x.all_vertices(), vec![]] {
        let k = build_selective_delaunay(&x, &e, INF, None, &tol()).unwrap();
        let w = radius_gradient(&x, &e, &k, &tol()).unwrap();
        let crit = critical_simplices(&w);
        assert_eq!(crit.len(), expect.len());
        for ((q, v), (eq, ev)) in crit.iter().zip(&expect) {
            assert_eq!(q.vertices(), eq.as_slice());
            assert!(close(*v, *ev));
        }
    }
}

#[test]
fn equilateral_everything_critical() {
    let x = equilateral();
    for e in all_subsets(3) {
        let k = build_selective_delaunay(&x, &e, INF, None, &tol()).unwrap();
        let w = radius_gradient(&x, &e, &k, &tol()).unwrap();
        let crit = critical_simplices(&w);
        assert_eq!(crit.len(), 7, "E={e:?}");
        assert!(close(crit[6].1, 1.0 / 3.0));
        assert!(crit[3..6].iter().all(|(_, v)| close(*v, 0.25)));
    }
}

#[test]
fn equal_values_in_different_intervals_is_not_morse() {
    let x = obtuse();
    let k = build_delaunay(&x, INF, &tol()).unwrap();
    // AB and ABC both at 6.25 but split into singular intervals.
    let ivs: Vec<(Interval, f64)> = k
        .iter()
        .map(|(q, v)| (Interval::singular(q.clone()), v))
        .collect();
    let w = GeneralizedVectorField::from_intervals(&k, ivs).unwrap();
    assert!(!is_generalized_morse(&k, &w));
}

#[test]
fn manufactured_cycle_is_rejected() {
    let k = triangle_boundary();
    let ivs = vec![
        (iv(&[0], &[0, 1]), 0.0),
        (iv(&[1], &[1, 2]), 0.0),
        (iv(&[2], &[0, 2]), 0.0),
    ];
    let w = GeneralizedVectorField::from_intervals(&k, ivs).unwrap();
    assert!(!is_generalized_morse(&k, &w));
    let v = vertex_refine(&w, &[0, 1, 2]);
    assert_eq!(v.pairs.len(), 3);
    assert!(!is_gradient(&v, &k));
}

#[test]
fn from_intervals_rejects_bad_covers() {
    let k = triangle_boundary();
    assert!(GeneralizedVectorField::from_intervals(&k, vec![(iv(&[0], &[0, 1]), 0.0)]).is_err());
    assert!(GeneralizedVectorField::from_intervals(&k, vec![(iv(&[0], &[0, 1, 2]), 0.0)]).is_err());
}

#[test]
fn vertex_refine_examples() {
    let x = obtuse();
    let k = build_delaunay(&x, INF, &tol()).unwrap();
    let w = radius_gradient(&x, &x.all_vertices(), &k, &tol()).unwrap();
    let v = vertex_refine(&w, &x.all_vertices());
    assert_eq!(v.pairs, vec![(s(&[0, 1]), s(&[0, 1, 2]))]);
    assert_eq!(v.critical.len(), 5);
    assert!(is_gradient(&v, &k));

    // [a, abc] refined by b (order b < c).
    let simplices = [
        vec![0],
        vec![1],
        vec![2],
        vec![0, 1],
        vec![0, 2],
        vec![1, 2],
        vec![0, 1, 2],
    ]
    .into_iter()
    .map(|q| {
        (
            s(&q),
            if q == [1] || q == [2] || q == [1, 2] {
                0.0
            } else {
                1.0
            },
        )
    })
    .collect();
    let k = FilteredComplex::new(2, 3, ComplexKind::Cech, vec![], INF, simplices).unwrap();
    let ivs = vec![
        (iv(&[0], &[0, 1, 2]), 1.0),
        (iv(&[1], &[1]), 0.0),
        (iv(&[2], &[2]), 0.0),
        (iv(&[1, 2], &[1, 2]), 0.0),
    ];
    let w = GeneralizedVectorField::from_intervals(&k, ivs).unwrap();
    let v = vertex_refine(&w, &[2, 1, 0]);
    let mut pairs = v.pairs.clone();
    pairs.sort();
    assert_eq!(
        pairs,
        vec![(s(&[0]), s(&[0, 2])), (s(&[0, 1]), s(&[0, 1, 2]))]
    );
    let v = vertex_refine(&w, &[0, 1, 2]);
    let mut pairs = v.pairs.clone();
    pairs.sort();
    assert_eq!(
        pairs,
        vec![(s(&[0]), s(&[0, 1])), (s(&[0, 2]), s(&[0, 1, 2]))]
    );
}

#[test]
fn all_singular_field_refines_to_nothing() {
    let x = equilateral();
    let k = build_cech(&x, INF, None, &tol()).unwrap();
    let w = radius_gradient(&x, &[], &k, &tol()).unwrap();
    let v = vertex_refine(&w, &[0, 1, 2]);
    assert!(v.pairs.is_empty());
    assert_eq!(v.critical.len(), 7);
    assert!(is_gradient(&v, &k));
}

#[test]
fn is_gradient_examples() {
    let k = triangle_boundary();
    assert!(is_gradient(&DiscreteGradient::trivial(&k), &k));
    let cycle = DiscreteGradient {
        pairs: vec![
            (s(&[0]), s(&[0, 1])),
            (s(&[1]), s(&[1, 2])),
            (s(&[2]), s(&[0, 2])),
        ],
        critical: vec![],
    };
    assert!(!is_gradient(&cycle, &k));
    let ok = DiscreteGradient {
        pairs: vec![(s(&[1]), s(&[0, 1])), (s(&[2]), s(&[1, 2]))],
        critical: vec![s(&[0]), s(&[0, 2])],
    };
    assert!(is_gradient(&ok, &k));
    let missing = DiscreteGradient {
        pairs: vec![(s(&[1]), s(&[0, 1]))],
        critical: vec![s(&[0])],
    };
    assert!(!is_gradient(&missing, &k));
    let not_facet = DiscreteGradient {
        pairs: vec![(s(&[2]), s(&[0, 1])), (s(&[1]), s(&[1, 2]))],
        critical: vec![s(&[0]), s(&[0, 2])],
    };
    assert!(!is_gradient(&not_facet, &k));
}

#[test]
fn compose_examples() {
    let x = obtuse();
    let inner = build_delaunay(&x, 4.0, &tol()).unwrap();
    let outer = build_delaunay(&x, INF, &tol()).unwrap();
    let v0 = DiscreteGradient::trivial(&inner);
    let v1 = DiscreteGradient {
        pairs: vec![(s(&[0, 1]), s(&[0, 1, 2]))],
        critical: outer
            .simplices()
            .filter(|q| q.len() < 3 && q != &&s(&[0, 1]))
            .cloned()
            .collect(),
    };
    let c = compose_gradients(&v0, &v1).unwrap();
    assert_eq!(c.pairs.len(), 1);
    assert_eq!(c.critical.len(), 5);
    assert!(is_gradient(&c, &outer));

    let empty = DiscreteGradient::default();
    assert_eq!(compose_gradients(&v0, &empty).unwrap(), v0);
    let bad = DiscreteGradient {
        pairs: vec![(s(&[0]), s(&[0, 2]))],
        critical: vec![],
    };
    assert!(compose_gradients(&v0, &bad).is_err());
}

#[test]
fn sum_refinement_examples() {
    let x = obtuse();
    let k = build_delaunay(&x, INF, &tol()).unwrap();
    let wc = radius_gradient(&x, &[], &k, &tol()).unwrap();
    let wd = radius_gradient(&x, &x.all_vertices(), &k, &tol()).unwrap();
    let w = sum_refinement(&wc, &wd, &k).unwrap();
    let ns = non_singular(&w);
    assert_eq!(ns.len(), 1);
    assert_eq!(ns[0].0, iv(&[0, 1], &[0, 1, 2]));
    assert!(close(ns[0].1, 10.25));
    assert!(is_generalized_morse(&k, &w));

    let same = sum_refinement(&wd, &wd, &k).unwrap();
    assert_eq!(same.intervals(), wd.intervals());
}

#[test]
fn gradient_file_round_trip() {
    let x = obtuse();
    let k = build_delaunay(&x, INF, &tol()).unwrap();
    let w = radius_gradient(&x, &x.all_vertices(), &k, &tol()).unwrap();
    let text = gradient_to_string(&w, "all");
    assert!(text.starts_with("gradient E=all\ninterval lower=0 upper=0 value=0 critical\n"));
    assert!(text.contains("interval lower=0,1 upper=0,1,2 value=6.25\n"));
    let (label, ivs) = parse_gradient(&text).unwrap();
    assert_eq!(label, "all");
    let back = GeneralizedVectorField::from_intervals(&k, ivs).unwrap();
    assert_eq!(back.intervals(), w.intervals());
    assert!(parse_gradient("gradient E=all\ninterval lower=0,1 upper=0,1 value=1\n").is_err());
}

/// Morse axioms for every E, critical-set invariance across E, centeredness
/// of critical simplices, and refinement preserving the critical set.
#[test]
fn random_radius_functions() {
    let mut r = rng(31);
    let t = tol();
    for round in 0..12 {
        let dim = 2 + round % 2;
        let m = r.random_range(3..=6);
        let x = random_gp(&mut r, m, dim, if round % 3 == 0 { 0.2 } else { 0.0 });
        let mut reference: Option<Vec<(Simplex, f64)>> = None;
        for e in all_subsets(m) {
            let k = build_selective_delaunay(&x, &e, INF, None, &t).unwrap();
            let w = radius_gradient(&x, &e, &k, &t).unwrap();
            assert!(is_generalized_morse(&k, &w), "E={e:?}");
            let crit = critical_simplices(&w);
            for (q, _) in &crit {
                let c = smallest_sphere(&x, q.vertices(), &x.all_vertices(), &t)
                    .unwrap()
                    .unwrap();
                assert!(c.coeffs.iter().all(|&l| l > 0.0));
                assert_eq!(c.on_set, c.incl_set);
            }
            match &reference {
                None => reference = Some(crit.clone()),
                Some(rf) => {
                    assert_eq!(rf.len(), crit.len(), "E={e:?}");
                    for ((a, va), (b, vb)) in rf.iter().zip(&crit) {
                        assert_eq!(a, b);
                        assert!(close(*va, *vb));
                    }
                }
            }
            let v = vertex_refine(&w, &x.all_vertices());
            assert!(is_gradient(&v, &k));
            let mut vc = v.critical.clone();
            vc.sort_by(|a, b| a.cmp_dim_lex(b));
            let mut wc: Vec<Simplex> = crit.into_iter().map(|(q, _)| q).collect();
            wc.sort_by(|a, b| a.cmp_dim_lex(b));
            assert_eq!(vc, wc);
        }
    }
}
