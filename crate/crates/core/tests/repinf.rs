mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use common::repinf::*;
use common::{rand_nonzero_q, rng};
use weilkit::complex::CochainComplex;
use weilkit::graded::{GradedMap, GradedSpace};
use weilkit::repinf::*;
use weilkit::scalar::{q, Q};
use weilkit::Error;

#[test]
fn simplicial_identities_hold_for_shipped_sets() {
    for n in 0..=3 {
        let k = FiniteSimplicialSet::standard_simplex(n, 3);
        assert!(k.verify_identities().unwrap() > 0);
    }
    let b = FiniteSimplicialSet::boundary_of_simplex(2, 4).unwrap();
    assert!(b.verify_identities().unwrap() > 0);
    for m in 1..=3 {
        let k = FiniteSimplicialSet::cyclic_nerve(m, 3).unwrap();
        assert!(k.verify_identities().unwrap() > 0);
    }
}

#[test]
fn simplex_counts() {
    // nondecreasing sequences of length p+1 in {0,1,2}
    let k = FiniteSimplicialSet::standard_simplex(2, 3);
    assert_eq!((0..=3).map(|p| k.count(p)).collect::<Vec<_>>(), vec![3, 6, 10, 15]);
    let b = FiniteSimplicialSet::boundary_of_simplex(2, 3).unwrap();
    assert_eq!((0..=3).map(|p| b.count(p)).collect::<Vec<_>>(), vec![3, 6, 9, 12]);
    let nz = FiniteSimplicialSet::cyclic_nerve(2, 3).unwrap();
    assert_eq!((0..=3).map(|p| nz.count(p)).collect::<Vec<_>>(), vec![1, 2, 4, 8]);
    assert!(!k.is_degenerate(2, idx(&k, 2, "[0,1,2]")));
    assert!(k.is_degenerate(2, idx(&k, 2, "[0,1,1]")));
}

#[test]
fn nerve_faces_multiply() {
    let k = FiniteSimplicialSet::cyclic_nerve(3, 2).unwrap();
    let x = idx(&k, 2, "(1|2)");
    assert_eq!(k.label(1, k.face(2, x, 0)), "(2)");
    assert_eq!(k.label(1, k.face(2, x, 1)), "(0)");
    assert_eq!(k.label(1, k.face(2, x, 2)), "(1)");
}

#[test]
fn broken_tables_are_rejected() {
    let labels = vec![vec!["a".to_string(), "b".into()], vec!["aa".into(), "ab".into(), "bb".into()]];
    let good_faces = vec![vec![vec![], vec![]], vec![vec![0, 0], vec![1, 0], vec![1, 1]]];
    let degens = vec![vec![vec![0], vec![2]], vec![vec![], vec![], vec![]]];
    FiniteSimplicialSet::new(labels.clone(), good_faces, degens.clone()).unwrap();
    let bad_faces = vec![vec![vec![], vec![]], vec![vec![0, 1], vec![1, 0], vec![1, 1]]];
    assert!(matches!(FiniteSimplicialSet::new(labels, bad_faces, degens), Err(Error::Input(_))));
}

#[test]
fn front_and_back_faces() {
    let k = FiniteSimplicialSet::standard_simplex(2, 3);
    let x = idx(&k, 2, "[0,1,2]");
    assert_eq!(k.label(1, k.front_face(2, x, 1).unwrap()), "[0,1]");
    assert_eq!(k.label(1, k.back_face(2, x, 1).unwrap()), "[1,2]");
    assert_eq!(k.front_face(2, x, 2).unwrap(), x);
    assert_eq!(k.back_face(2, x, 2).unwrap(), x);
    assert_eq!(k.label(0, k.front_face(2, x, 0).unwrap()), "[0]");
    assert_eq!(k.label(0, k.back_face(2, x, 0).unwrap()), "[2]");
    assert!(k.front_face(2, x, 3).is_err());
    assert!(k.back_face(4, 0, 1).is_err());
}

#[test]
fn faces_are_vertex_restrictions() {
    let k = FiniteSimplicialSet::standard_simplex(3, 3);
    for dim in 0..=3 {
        for x in 0..k.count(dim) {
            let v = k.vertices(dim, x).unwrap().to_vec();
            for p in 0..=dim {
                let f = k.front_face(dim, x, p).unwrap();
                let b = k.back_face(dim, x, p).unwrap();
                assert_eq!(k.vertices(p, f).unwrap(), &v[..=p]);
                assert_eq!(k.vertices(p, b).unwrap(), &v[dim - p..]);
                assert_eq!(k.vertex(dim, x, p).unwrap(), v[p]);
            }
        }
    }
}

#[test]
fn cup_products() {
    let k = FiniteSimplicialSet::standard_simplex(1, 1);
    let s = space(&[0]);
    let scalar = |c: i64| map(&s, &s, 0, &[(0, 0, q(c))]);
    let f0 = Cochain { dim: 0, values: vec![scalar(2), scalar(3)] };
    let g0 = Cochain { dim: 0, values: vec![scalar(5), scalar(7)] };
    let c = cup(&k, &f0, &g0).unwrap();
    assert!(same(&c.values[0], &scalar(10)) && same(&c.values[1], &scalar(21)));
    // (F_1 ∪ F_0)(edge) = F_1(edge) · F_0(v_1)
    let e = idx(&k, 1, "[0,1]");
    let mut vals = vec![scalar(0); 3];
    vals[e] = scalar(11);
    let f1 = Cochain { dim: 1, values: vals };
    let c = cup(&k, &f1, &f0).unwrap();
    assert!(same(&c.values[e], &scalar(33)));
    let c = cup(&k, &f0, &f1).unwrap();
    assert!(same(&c.values[e], &scalar(22)));
    let one = Cochain { dim: 0, values: vec![scalar(1), scalar(1)] };
    for (a, b) in cup(&k, &f1, &one).unwrap().values.iter().zip(&f1.values) {
        assert!(same(a, b));
    }
    for (a, b) in cup(&k, &one, &f1).unwrap().values.iter().zip(&f1.values) {
        assert!(same(a, b));
    }
    let t = space(&[0, 1]);
    let wrong = Cochain { dim: 0, values: vec![id(&t), id(&t)] };
    assert!(matches!(cup(&k, &f0, &wrong), Err(Error::Input(_))));
    assert!(cup(&k, &f1, &f1).is_err());
}

#[test]
fn constant_reps_are_valid_and_normalized() {
    let mut r = rng(1);
    for k in [delta(2), boundary(), Arc::new(FiniteSimplicialSet::cyclic_nerve(2, 3).unwrap())] {
        let rep = RepUpToHomotopy::constant(k.clone(), &rand_complex(&mut r));
        let report = ruth_check(&rep);
        assert!(report.ok());
        assert_eq!(report.checked, (0..=3).map(|p| k.count(p)).sum::<usize>());
        assert!(rep.is_normalized());
    }
}

#[test]
fn f0_must_square_to_zero() {
    let k = delta(1);
    let s = space(&[0, 1, 2]);
    let bad = map(&s, &s, 1, &[(1, 0, q(1)), (2, 1, q(1))]);
    let c = CochainComplex::trivial(s.clone());
    let mut comps: Vec<Vec<GradedMap>> =
        (0..=3).map(|p| RepUpToHomotopy::constant(k.clone(), &c).cochain(p).values.clone()).collect();
    comps[0][1] = bad;
    let rep = RepUpToHomotopy::new(k, vec![s; 2], comps).unwrap();
    assert_eq!(ruth_check(&rep).failure, Some((0, 1)));
}

/// Line bundle over `Δ[2]` with `F_1[i,j] = g_i / g_j`: multiplicative, `F_{≥2} = 0`.
fn honest_local_system(k: &K, g: &[Q], s: &Arc<GradedSpace>, d: &GradedMap) -> Vec<Vec<GradedMap>> {
    (0..=k.p_max())
        .map(|p| {
            (0..k.count(p))
                .map(|x| match p {
                    0 => d.clone(),
                    1 => {
                        let v = k.vertices(1, x).unwrap();
                        id(s).scale(&(g[v[0]].clone() / g[v[1]].clone()))
                    }
                    _ => GradedMap::zero(s.clone(), s.clone(), 1 - p as i64),
                })
                .collect()
        })
        .collect()
}

#[test]
fn honest_local_system_passes_and_corruption_is_located() {
    let k = delta(2);
    let g = [q(2), q(-3), Q::new(5.into(), 7.into())];
    let s = space(&[0, 1]);
    let d = map(&s, &s, 1, &[(1, 0, q(1))]);
    let comps = honest_local_system(&k, &g, &s, &d);
    let rep = RepUpToHomotopy::new(k.clone(), vec![s.clone(); 3], comps.clone()).unwrap();
    assert!(ruth_check(&rep).ok());
    assert!(rep.is_normalized());

    let x = idx(&k, 2, "[0,1,2]");
    let mut bad = comps;
    bad[2][x] = map(&s, &s, -1, &[(0, 1, q(4))]);
    let rep = RepUpToHomotopy::new(k.clone(), vec![s; 3], bad).unwrap();
    let report = ruth_check(&rep);
    assert_eq!(report.failure, Some((2, x)));
    assert!(!ruth_defect(&rep, 2, x).is_zero());
}

#[test]
fn corrupt_homotopy_is_caught_one_dimension_up() {
    // with F_0 = 0 the p = 2 relation does not see F_2; the 3-simplex does
    let k = delta(3);
    let s = space(&[0, 1]);
    let d = GradedMap::zero(s.clone(), s.clone(), 1);
    let mut comps = honest_local_system(&k, &[q(1), q(2), q(3), q(5)], &s, &d);
    let face = idx(&k, 2, "[0,1,3]");
    comps[2][face] = map(&s, &s, -1, &[(0, 1, q(1))]);
    let rep = RepUpToHomotopy::new(k.clone(), vec![s; 4], comps).unwrap();
    assert_eq!(ruth_check(&rep).failure, Some((3, idx(&k, 3, "[0,1,2,3]"))));
}

#[test]
fn typing_errors() {
    let k = delta(1);
    let s = space(&[0]);
    let t = space(&[0, 0]);
    let c = CochainComplex::trivial(s.clone());
    let comps: Vec<Vec<GradedMap>> =
        (0..=3).map(|p| RepUpToHomotopy::constant(k.clone(), &c).cochain(p).values.clone()).collect();
    assert!(RepUpToHomotopy::new(k.clone(), vec![s.clone()], comps.clone()).is_err());
    assert!(RepUpToHomotopy::new(k.clone(), vec![s.clone(), t], comps.clone()).is_err());
    let mut wrong_degree = comps;
    wrong_degree[1][0] = GradedMap::zero(s.clone(), s.clone(), 1);
    assert!(matches!(RepUpToHomotopy::new(k, vec![s.clone(), s], wrong_degree), Err(Error::Input(_))));
}

#[test]
fn hom_differential_of_vertexwise_chain_map_vanishes() {
    let k = delta(2);
    let s = space(&[0, 0, 1]);
    let d = map(&s, &s, 1, &[(2, 0, q(1)), (2, 1, q(-1))]);
    // F_0 = d, F_{≥1} = 0
    let comps = (0..=3)
        .map(|p| {
            (0..k.count(p))
                .map(|_| if p == 0 { d.clone() } else { GradedMap::zero(s.clone(), s.clone(), 1 - p as i64) })
                .collect()
        })
        .collect();
    let rep = Arc::new(RepUpToHomotopy::new(k.clone(), vec![s.clone(); 3], comps).unwrap());
    assert!(ruth_check(&rep).ok());
    assert!(!rep.is_normalized());
    // swapping the two degree-0 basis vectors and negating the top one commutes with d
    let chain = map(&s, &s, 0, &[(1, 0, q(1)), (0, 1, q(1)), (2, 2, q(-1))]);
    assert!(same(&d.compose(&chain), &chain.compose(&d)));
    let mut phi = RepMorphism::zero(rep.clone(), rep.clone(), 0);
    let mut comps = components(&phi, 3);
    comps[0] = vec![chain; 3];
    phi = RepMorphism::new(rep.clone(), rep, 0, comps).unwrap();
    assert!(hom_differential(&phi).is_zero());
}

#[test]
fn identity_is_closed_and_neutral() {
    let mut r = rng(7);
    for k in [delta(2), boundary()] {
        let a = rand_rep(&mut r, &k);
        let b = rand_rep(&mut r, &k);
        let ida = RepMorphism::identity(a.clone());
        assert!(hom_differential(&ida).is_zero());
        let phi = rand_morphism(&mut r, &a, &b, 1);
        let idb = RepMorphism::identity(b.clone());
        assert!(same_morphism(&compose_morphisms(&phi, &ida).unwrap(), &phi));
        assert!(same_morphism(&compose_morphisms(&idb, &phi).unwrap(), &phi));
    }
}

#[test]
fn mismatched_composition_is_an_input_error() {
    let mut r = rng(8);
    let k = delta(2);
    let a = rand_rep(&mut r, &k);
    let b = rand_rep(&mut r, &k);
    let phi = rand_morphism(&mut r, &a, &b, 0);
    assert!(matches!(compose_morphisms(&phi, &phi), Err(Error::Input(_))));
}

#[test]
fn gauged_reps_are_isomorphic_to_their_seed() {
    let mut r = rng(9);
    for k in [delta(2), boundary()] {
        for _ in 0..3 {
            let base = Arc::new(RepUpToHomotopy::constant(k.clone(), &rand_complex(&mut r)));
            let (rep, comps) = gauge(&mut r, &base);
            assert!(ruth_check(&rep).ok());
            let phi = RepMorphism::new(base.clone(), rep.clone(), 0, comps).unwrap();
            assert!(hom_differential(&phi).is_zero());
            let inv = phi.inverse().unwrap();
            assert!(hom_differential(&inv).is_zero());
            assert!(same_morphism(&compose_morphisms(&inv, &phi).unwrap(), &RepMorphism::identity(base.clone())));
            assert!(same_morphism(&compose_morphisms(&phi, &inv).unwrap(), &RepMorphism::identity(rep.clone())));
        }
    }
}

#[test]
fn trivial_hom_complex_computes_simplicial_cohomology() {
    // Hom(ℝ, ℝ) is the (truncated) cochain complex of K with rational coefficients
    let cases: Vec<(K, Vec<usize>)> = vec![
        (delta(2), vec![1, 0, 0]),
        (boundary(), vec![1, 1, 0]),
        (Arc::new(FiniteSimplicialSet::cyclic_nerve(2, 3).unwrap()), vec![1, 0, 0]),
    ];
    for (k, expected) in cases {
        let t = Arc::new(RepUpToHomotopy::trivial(k.clone()));
        let h = rep_hom_complex(&t, &t).unwrap();
        let coh = h.complex.cohomology();
        let got: Vec<usize> = (0..3).map(|n| coh.dim(n)).collect();
        assert_eq!(got, expected);
    }
}

#[test]
fn holonomy_is_seen_by_the_hom_complex() {
    // H^0 Hom(ℝ, L) = invariants of the holonomy
    let k = boundary();
    let s = space(&[0]);
    let t = Arc::new(RepUpToHomotopy::trivial(k.clone()));
    for (h, expected) in [(1, 1), (2, 0), (-1, 0)] {
        let rep = Arc::new(holonomy_rep(&k, &s, &map(&s, &s, 0, &[(0, 0, q(h))])));
        assert!(ruth_check(&rep).ok());
        let hom = rep_hom_complex(&t, &rep).unwrap();
        assert_eq!(hom.complex.cohomology().dim(0), expected, "holonomy {h}");
    }
}

#[test]
fn hom_complex_coordinates_roundtrip() {
    let mut r = rng(11);
    let k = boundary();
    let a = rand_rep(&mut r, &k);
    let b = rand_rep(&mut r, &k);
    let h = rep_hom_complex(&a, &b).unwrap();
    for n in -2..=3 {
        let phi = rand_morphism(&mut r, &a, &b, n);
        let c = h.coords(&phi);
        assert!(same_morphism(&h.morphism(n, &c).unwrap(), &phi));
        if !c.is_empty() {
            assert!(h.morphism(n + 1, &c).is_err());
        }
        let dc = h.complex.d.apply(&c);
        let dphi = hom_differential(&phi);
        assert_eq!(h.coords(&dphi), dc);
    }
    let fc = h.filtered();
    assert_eq!(fc.levels().len(), h.dim());
}

#[test]
fn pullback_examples() {
    let mut r = rng(12);
    let k = delta(2);
    let rep = rand_rep(&mut r, &k);

    let idk = SimplicialMap::identity(k.clone());
    let same_rep = pullback(&idk, &rep).unwrap();
    for p in 0..=3 {
        for x in 0..k.count(p) {
            assert!(same(same_rep.component(p, x), rep.component(p, x)));
        }
    }

    let edge = SimplicialMap::from_vertex_map(delta(1), k.clone(), &[0, 2]).unwrap();
    let on_edge = pullback(&edge, &rep).unwrap();
    assert!(ruth_check(&on_edge).ok());
    let e = idx(on_edge.simplicial_set(), 1, "[0,1]");
    assert!(same(on_edge.component(1, e), rep.component(1, idx(&k, 1, "[0,2]"))));

    let honest = {
        let s = space(&[0, 1]);
        let d = map(&s, &s, 1, &[(1, 0, q(1))]);
        Arc::new(
            RepUpToHomotopy::new(k.clone(), vec![s.clone(); 3], honest_local_system(&k, &[q(1), q(2), q(3)], &s, &d))
                .unwrap(),
        )
    };
    let constant = SimplicialMap::from_vertex_map(k.clone(), k.clone(), &[1, 1, 1]).unwrap();
    let flat = pullback(&constant, &honest).unwrap();
    assert!(ruth_check(&flat).ok());
    assert!(flat.fibers().iter().all(|f| **f == **honest.fiber(1)));
    for p in 2..=3 {
        assert!(flat.cochain(p).is_zero());
    }
    for x in 0..k.count(1) {
        assert!(same(flat.component(1, x), &id(honest.fiber(1))));
    }
}

#[test]
fn non_simplicial_maps_are_rejected() {
    let k = delta(1);
    assert!(matches!(SimplicialMap::from_vertex_map(k.clone(), k.clone(), &[1, 0]), Err(Error::Input(_))));
    let maps = vec![vec![1, 0], vec![0, 1, 2], vec![0, 1, 2, 3], vec![0, 1, 2, 3, 4]];
    assert!(matches!(SimplicialMap::new(k.clone(), k.clone(), maps), Err(Error::Input(_))));
    let rep = RepUpToHomotopy::trivial(delta(2));
    assert!(pullback(&SimplicialMap::identity(k), &rep).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rep_dg_category_axioms(seed in any::<u64>()) {
        dg_axioms_trial(seed);
    }

    #[test]
    fn random_reps_satisfy_the_structure_relation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = if r.gen_bool(0.5) { delta(2) } else { boundary() };
        let rep = rand_rep(&mut r, &k);
        prop_assert!(ruth_check(&rep).ok());
    }

    #[test]
    fn scalar_entries_scale_linearly(seed in any::<u64>()) {
        let mut r = rng(seed);
        let k = boundary();
        let a = rand_rep(&mut r, &k);
        let b = rand_rep(&mut r, &k);
        let phi = rand_morphism(&mut r, &a, &b, 0);
        let c = rand_nonzero_q(&mut r);
        let lhs = hom_differential(&phi.scale(&c));
        prop_assert!(same_morphism(&lhs, &hom_differential(&phi).scale(&c)));
    }
}
