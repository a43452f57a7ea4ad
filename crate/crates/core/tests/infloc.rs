mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;
use rand::Rng;

use common::infloc::*;
use common::rng;
use weilkit::complex::subcomplex_cohomology_dims;
use weilkit::dgla::algebra::Cdga;
use weilkit::infloc::*;
use weilkit::lie;
use weilkit::linalg::{add_scaled, add_term_owned, common_kernel, kernel, unit, SVec};
use weilkit::scalar::{q, sign, Q};
use weilkit::weil::{ce_algebra, first_invariant, polynomial_in_weil, AlgebraicConnection};
use weilkit::Error;

#[test]
fn trivial_object_and_its_endomorphisms() {
    let w = weil(&lie::su2(), 3);
    let one = Arc::new(trivial_object(w.clone()));
    assert!(one.report.is_valid());
    let h = hom_complex(&one, &one).unwrap();
    for k in 0..=6 {
        assert_eq!(h.in_degree(k).len(), w.gdg.basic_subspace(k).len(), "degree {k}");
    }
    assert!(h.complex.d.is_zero());
    assert_eq!(h.window, (0, 6));
}

#[test]
fn gauss_manin_is_basic_for_all_fixtures() {
    for g in lie::fixtures() {
        let gm = gauss_manin(&g, 2).unwrap();
        assert!(gm.report.is_valid(), "{}", g.name);
    }
}

#[test]
fn gauss_manin_abelian_has_only_w_terms() {
    let g = lie::abelian3();
    let gm = gauss_manin(&g, 2).unwrap();
    let alg = gm.w.alg();
    assert!(!gm.alpha.is_empty());
    for i in gm.alpha.keys() {
        let (ia, _, _) = gm.end.split(*i);
        assert_eq!(alg.degree(ia), 2);
        assert!(gm.w.is_pure_w(ia));
    }
    // both pieces of the residual vanish on their own
    assert!(gm.end.d(&gm.alpha).is_empty());
    assert!(gm.end.mul_end(&gm.alpha, &gm.alpha).is_empty());
}

#[test]
fn gauss_manin_total_differential_expands_entrywise() {
    let g = lie::su2();
    let gm = gauss_manin(&g, 2).unwrap();
    let ce = ce_algebra(&g).unwrap();
    let w = &gm.w;
    let alg = w.alg();
    let n = gm.dim();
    let d = gm.total_differential();
    for j in 0..alg.dim() * n {
        let (ia, v) = (j / n, j % n);
        let a = unit(ia);
        let mut expected = SVec::new();
        let put = |out: &mut SVec, av: &SVec, vv: &SVec, c: &Q| {
            for (x, p) in av {
                for (y, s) in vv {
                    add_term_owned(out, x * n + y, c * p * s);
                }
            }
        };
        put(&mut expected, &alg.diff(&a), &unit(v), &Q::one());
        put(&mut expected, &a, &ce.d().apply(&unit(v)), &sign(alg.degree(ia)));
        for b in 0..g.dim() {
            put(&mut expected, &alg.mul(&w.t(b), &a), &ce.lie_derivative(b).apply(&unit(v)), &Q::one());
            put(&mut expected, &alg.mul(&w.w(b), &a), &ce.contraction(b).apply(&unit(v)), &-sign(alg.degree(ia)));
        }
        assert_eq!(d.col(j), &expected, "column {}", d.source.label(j));
    }
}

#[test]
fn contraction_violation_is_reported_with_its_generator() {
    let g = lie::su2();
    let gm = gauss_manin(&g, 2).unwrap();
    let ce = ce_algebra(&g).unwrap();
    let w = gm.w.clone();
    let t12 = w.alg().mul(&w.t(0), &w.t(1));
    let mut alpha = gm.alpha.clone();
    add_scaled(&mut alpha, &q(1), &gm.end.elem(&t12, &ce.contraction(2).nonzero_entries()));
    let rep = check_object(w.clone(), gm.v().clone(), alpha.clone()).unwrap().report;
    assert!(rep.basic_violations.contains(&BasicViolation::Contraction { x: "e1".into() }));
    assert!(rep.basic_violations.contains(&BasicViolation::Contraction { x: "e2".into() }));
    assert!(!rep.basic_violations.contains(&BasicViolation::Contraction { x: "e3".into() }));
    match make_object(w, gm.v().clone(), alpha) {
        Err(Error::Verification(msg)) => assert!(msg.contains("i_e1"), "{msg}"),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn dropping_the_w_component_breaks_flatness() {
    let g = lie::su2();
    let gm = gauss_manin(&g, 2).unwrap();
    let w = gm.w.clone();
    let alpha: SVec = gm
        .alpha
        .iter()
        .filter(|(i, _)| w.alg().degree(gm.end.split(**i).0) == 1)
        .map(|(i, c)| (*i, c.clone()))
        .collect();
    let rep = check_object(w.clone(), gm.v().clone(), alpha.clone()).unwrap().report;
    assert!(!rep.mc_residual.is_empty());
    assert!(rep.basic_violations.is_empty());
    assert!(make_object(w, gm.v().clone(), alpha).is_err());
}

#[test]
fn alpha_of_wrong_degree_is_an_input_error() {
    let w = weil(&lie::su2(), 2);
    let one = trivial_object(w.clone());
    let bad: SVec = [(one.end.index(w.w_basis(0), 0, 0), q(1))].into_iter().collect();
    assert!(matches!(check_object(w, one.v().clone(), bad), Err(Error::Input(_))));
}

#[test]
fn hom_from_trivial_to_gauss_manin() {
    let g = lie::su2();
    let gm = Arc::new(gauss_manin(&g, 3).unwrap());
    let one = Arc::new(trivial_object(gm.w.clone()));
    let h = hom_complex(&one, &gm).unwrap();
    assert_eq!(h.window, (0, 6));
    let dims = h.cohomology_window();
    let got: Vec<usize> = (0..=6).map(|k| dims[&k]).collect();
    assert_eq!(got, invariant_weil_cohomology(&gm.w, 0..=6));
    assert_eq!(got, vec![1, 0, 0, 0, 0, 0, 0]);
    // dimensions of the basic part match the invariant part of Wg degree by degree
    for k in 0..=6 {
        let src = gm.w.alg().space().in_degree_lex(k);
        let blocks: Vec<Vec<SVec>> = (0..g.dim()).map(|x| gm.w.gdg.lie_derivative(x).block(&src, &src)).collect();
        let refs: Vec<&[SVec]> = blocks.iter().map(|b| b.as_slice()).collect();
        assert_eq!(h.in_degree(k).len(), common_kernel(src.len(), &refs).len(), "degree {k}");
    }
}

/// With `A = CE(g)` and its canonical connection the base is a point and the
/// bundle is `G` itself; the basic part of `CE(g) ⊗ CE(g)` under `D_θ` has the
/// cohomology of `CE(g)`.
#[test]
fn gauss_manin_over_the_group_itself() {
    let g = lie::su2();
    let w = weil(&g, 3);
    let gm = Arc::new(gauss_manin_over(w.clone()).unwrap());
    let one = Arc::new(trivial_object(w.clone()));
    let ce = ce_algebra(&g).unwrap();
    let cw = ChernWeilFunctor::new(&AlgebraicConnection::canonical_ce(&ce), w).unwrap();
    let (src, tgt) = (cw.object(&one).unwrap(), cw.object(&gm).unwrap());
    let th = cw.hom_tensor(&src, &tgt);
    let mut basis: BTreeMap<i64, Vec<SVec>> = BTreeMap::new();
    for k in -1..=7 {
        let idx = th.space().in_degree(k);
        let mut cols = Vec::new();
        let mut rows = std::collections::HashMap::new();
        for &j in &idx {
            let e = unit(j);
            let mut col = SVec::new();
            for x in 0..g.dim() {
                for (o, img) in [
                    contract_elem(&ce, &th, x, &e),
                    lie_elem(&ce, &th, one.lie_derivative(x), gm.lie_derivative(x), x, &e),
                ]
                .into_iter()
                .enumerate()
                {
                    for (r, v) in img {
                        let next = rows.len();
                        let local = *rows.entry((x, o, r)).or_insert(next);
                        col.insert(local, v);
                    }
                }
            }
            cols.push(col);
        }
        let ker: Vec<SVec> =
            kernel(&cols).into_iter().map(|v| v.into_iter().map(|(i, c)| (idx[i], c)).collect()).collect();
        assert!(ker.iter().all(|v| cw.is_basic(&src, &tgt, &th, v)));
        basis.insert(k, ker);
    }
    let d = |x: &SVec| cw.partial(&src, &tgt, &th, x);
    let dims = subcomplex_cohomology_dims(&basis, &d);
    let got: Vec<usize> = (0..=6).map(|k| dims[&k]).collect();
    assert_eq!(got, vec![1, 0, 0, 1, 0, 0, 0]);
}

#[test]
fn partial_is_the_operator_commutator() {
    let g = lie::su2();
    let w = weil(&g, 2);
    let cone = Arc::new(adjoint_cone(w.clone()).unwrap());
    let gm = Arc::new(gauss_manin_over(w.clone()).unwrap());
    let h = hom_complex(&cone, &gm).unwrap();
    let d_src = cone.total_differential();
    let d_tgt = gm.total_differential();
    let mut r = rng(11);
    for k in [-1, 0, 1, 2] {
        let phi = rand_in_degree(&h, &mut r, k);
        let dphi = h.partial(&phi);
        for j in 0..d_src.source.dim() {
            let e = unit(j);
            let lhs = h.tensor.act(&dphi, &e);
            let mut rhs = d_tgt.apply(&h.tensor.act(&phi, &e));
            add_scaled(&mut rhs, &-sign(k), &h.tensor.act(&phi, &d_src.apply(&e)));
            assert_eq!(lhs, rhs, "degree {k}, column {j}");
        }
    }
}

#[test]
fn partial_preserves_basics_and_squares_to_zero() {
    let g = lie::su2();
    let w = weil(&g, 2);
    let cone = Arc::new(adjoint_cone(w.clone()).unwrap());
    let gm = Arc::new(gauss_manin_over(w.clone()).unwrap());
    let h = hom_complex(&gm, &cone).unwrap();
    let mut r = rng(5);
    for k in -3..=3 {
        let phi = rand_in_degree(&h, &mut r, k);
        let dphi = h.partial(&phi);
        assert!(h.is_basic(&phi));
        assert!(h.is_basic(&dphi));
        assert!(h.partial(&dphi).is_empty());
    }
}

#[test]
fn composition_is_unital_associative_and_leibniz() {
    let pool = Pool::su2();
    let mut r = rng(7);
    let n = pool.objects.len();
    for _ in 0..6 {
        let (a, b, c, d) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
        let f = pool.rand_morphism(&mut r, a, b);
        let g = pool.rand_morphism(&mut r, b, c);
        let h = pool.rand_morphism(&mut r, c, d);
        let id = Morphism::identity(&pool.objects[b]);
        assert_eq!(compose(&id, &f).unwrap().value, f.value);
        assert_eq!(compose(&g, &id).unwrap().value, g.value);
        let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        let right = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        assert_eq!(left.value, right.value);
        let gf = compose(&g, &f).unwrap();
        assert!(gf.is_basic());
        let lhs = gf.partial();
        let mut rhs = compose(&g.partial(), &f).unwrap().value;
        let sg = g.degree().map(sign).unwrap_or_else(Q::one);
        add_scaled(&mut rhs, &sg, &compose(&g, &f.partial()).unwrap().value);
        assert_eq!(lhs.value, rhs);
    }
}

#[test]
fn composition_rejects_mismatched_objects() {
    let pool = Pool::su2();
    let mut r = rng(1);
    let f = pool.rand_morphism(&mut r, 0, 1);
    let g = pool.rand_morphism(&mut r, 0, 2);
    assert!(matches!(compose(&g, &f), Err(Error::Input(_))));
}

#[test]
fn identity_is_closed() {
    for obj in Pool::su2().objects {
        assert!(Morphism::identity(&obj).partial().value.is_empty());
    }
}

#[test]
fn extension_by_zero_is_a_direct_sum() {
    let w = weil(&lie::su2(), 2);
    let cone = Arc::new(adjoint_cone(w.clone()).unwrap());
    let one = Arc::new(trivial_object(w.clone()));
    let h = hom_complex(&cone, &one).unwrap();
    let ext = extension(&h, &SVec::new()).unwrap();
    assert_eq!(ext.dim(), cone.dim() + 1);
    // degree of the zero morphism is taken to be 0, so the line sits in degree 1
    assert_eq!(ext.v().space.degree(cone.dim()), 1);
    assert_eq!(ext.alpha.len(), cone.alpha.len());
    assert!(ext.v().d.col(cone.dim()).is_empty());
}

#[test]
fn extension_of_a_line_by_a_degree_one_morphism() {
    let w = weil(&lie::su2(), 2);
    let v = line(&w, -1);
    let one = Arc::new(trivial_object(w.clone()));
    let h = hom_complex(&v, &one).unwrap();
    let gamma = h.tensor.elem(&unit(w.alg().unit()), &[(0, 0, q(1))]);
    let ext = extension(&h, &gamma).unwrap();
    assert!(ext.report.is_valid());
    assert_eq!(ext.dim(), 2);
    assert_eq!(ext.v().space.degrees(), &[-1, 0]);
}

#[test]
fn extension_of_trivial_object_by_casimir() {
    let g = lie::su2();
    let w = weil(&g, 2);
    let one = Arc::new(trivial_object(w.clone()));
    let h = hom_complex(&one, &one).unwrap();
    let (_, p, sym) = first_invariant(&g, 2).unwrap();
    let casimir = polynomial_in_weil(&sym, &p, &w).unwrap();
    let gamma = h.tensor.elem(&casimir, &[(0, 0, q(1))]);
    let ext = extension(&h, &gamma).unwrap();
    assert!(ext.report.is_valid());
    assert_eq!(ext.v().space.degrees(), &[0, -3]);
}

#[test]
fn extension_rejects_open_gamma() {
    let w = weil(&lie::su2(), 2);
    let gm = Arc::new(gauss_manin_over(w.clone()).unwrap());
    let one = Arc::new(trivial_object(w.clone()));
    let h = hom_complex(&gm, &one).unwrap();
    let mut r = rng(3);
    let open = (-3..=2)
        .map(|k| rand_in_degree(&h, &mut r, k))
        .find(|x| !h.partial(x).is_empty())
        .expect("some basic element is not closed");
    assert!(matches!(extension(&h, &open), Err(Error::Input(_))));
}

#[test]
fn gauge_moves_are_intertwined_by_id_minus_eta() {
    let w = weil(&lie::su2(), 2);
    let one = Arc::new(trivial_object(w.clone()));
    let sources =
        vec![line(&w, -1), Arc::new(adjoint_cone(w.clone()).unwrap()), Arc::new(gauss_manin_over(w.clone()).unwrap())];
    let mut r = rng(29);
    let mut checked = 0;
    for v in &sources {
        let h = hom_complex(v, &one).unwrap();
        for l in (-2..=4).flat_map(|l| [l; 3]) {
            let gamma = rand_closed(&h, &mut r, l);
            let eta = rand_in_degree(&h, &mut r, l - 1);
            if eta.is_empty() {
                continue;
            }
            let mut moved = gamma.clone();
            add_scaled(&mut moved, &Q::one(), &h.partial(&eta));
            let (Ok(e1), Ok(e2)) = (extension(&h, &gamma), extension(&h, &moved)) else {
                panic!("extension failed");
            };
            let f = gauge_map(&h, &e1, &eta, l);
            assert!(intertwines(&e1, &e2, &f));
            // operator form on Wg ⊗ (V ⊕ ℝ)
            let d1 = e1.total_differential();
            let d2 = e2.total_differential();
            for j in 0..d1.source.dim() {
                let x = unit(j);
                assert_eq!(d2.apply(&e1.end.act(&f, &x)), e1.end.act(&f, &d1.apply(&x)));
            }
            checked += 1;
        }
    }
    assert!(checked >= 10, "{checked}");
}

#[test]
fn chern_weil_of_universal_connection_is_identity() {
    let g = lie::su2();
    let w = weil(&g, 2);
    let theta = AlgebraicConnection::universal(&w);
    let cw = ChernWeilFunctor::new(&theta, w.clone()).unwrap();
    let pool = Pool::su2();
    let mut r = rng(2);
    for (i, obj) in pool.objects.iter().enumerate() {
        let obj = Arc::new(make_object(w.clone(), obj.v().clone(), obj.alpha.clone()).unwrap());
        let img = cw.object(&obj).unwrap();
        assert_eq!(img.alpha, obj.alpha);
        assert!(img.mc && img.basic_violations.is_empty());
        let h = hom_complex(&obj, &obj).unwrap();
        let phi = rand_in_degree(&h, &mut r, (i as i64) - 1);
        let m = Morphism::new(obj.clone(), obj.clone(), phi.clone()).unwrap();
        assert_eq!(cw.morphism(&m, &cw.hom_tensor(&img, &img)), phi);
    }
}

#[test]
fn chern_weil_of_canonical_ce_connection_kills_w() {
    let g = lie::su2();
    let w = weil(&g, 2);
    let gm = Arc::new(gauss_manin_over(w.clone()).unwrap());
    let ce = ce_algebra(&g).unwrap();
    let theta = AlgebraicConnection::canonical_ce(&ce);
    let img = cw_functor(&theta, w.clone(), &gm).unwrap();
    let mut expected = SVec::new();
    for a in 0..g.dim() {
        add_scaled(
            &mut expected,
            &Q::one(),
            &img.end.elem(&ce.alg.gen_vec(a), &ce.lie_derivative(a).nonzero_entries()),
        );
    }
    assert_eq!(img.alpha, expected);
    assert!(img.mc);
    assert!(img.basic_violations.is_empty());
}

#[test]
fn chern_weil_functor_laws_on_random_morphisms() {
    let g = lie::su2();
    let pool = Pool::su2();
    let w = pool.objects[0].w.clone();
    let ce = ce_algebra(&g).unwrap();
    let thetas = [AlgebraicConnection::universal(&w), AlgebraicConnection::canonical_ce(&ce)];
    let mut r = rng(41);
    for theta in &thetas {
        let cw = ChernWeilFunctor::new(theta, w.clone()).unwrap();
        let imgs: Vec<CwObject> = pool.objects.iter().map(|o| cw.object(o).unwrap()).collect();
        for img in &imgs {
            assert!(img.mc);
            assert!(img.basic_violations.is_empty());
            let th = cw.hom_tensor(img, img);
            assert_eq!(cw.morphism(&Morphism::identity(&img.source), &th), th.identity());
        }
        for _ in 0..4 {
            let n = pool.objects.len();
            let (a, b, c) = (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n));
            let f = pool.rand_morphism(&mut r, a, b);
            let h = pool.rand_morphism(&mut r, b, c);
            let th_ab = cw.hom_tensor(&imgs[a], &imgs[b]);
            let th_bc = cw.hom_tensor(&imgs[b], &imgs[c]);
            let th_ac = cw.hom_tensor(&imgs[a], &imgs[c]);
            let cf = cw.morphism(&f, &th_ab);
            assert!(cw.is_basic(&imgs[a], &imgs[b], &th_ab, &cf));
            assert_eq!(cw.morphism(&f.partial(), &th_ab), cw.partial(&imgs[a], &imgs[b], &th_ab, &cf));
            let ch = cw.morphism(&h, &th_bc);
            let composite = cw.morphism(&compose(&h, &f).unwrap(), &th_ac);
            assert_eq!(composite, th_bc.mul(&ch, &th_ab, &cf, &th_ac));
        }
    }
}
