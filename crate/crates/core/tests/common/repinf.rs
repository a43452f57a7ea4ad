//! Representations up to homotopy over small simplicial sets.

use std::sync::Arc;

use num_traits::One;
use rand::Rng;

use super::{rand_q, rng};
use weilkit::complex::CochainComplex;
use weilkit::graded::{GradedMap, GradedSpace};
use weilkit::linalg::SVec;
use weilkit::repinf::*;
use weilkit::scalar::{sign, Q};

pub type K = Arc<FiniteSimplicialSet>;

pub fn delta(n: usize) -> K {
    Arc::new(FiniteSimplicialSet::standard_simplex(n, 3))
}

pub fn boundary() -> K {
    Arc::new(FiniteSimplicialSet::boundary_of_simplex(2, 3).unwrap())
}

pub fn idx(k: &FiniteSimplicialSet, p: usize, label: &str) -> usize {
    k.index_of(p, label).unwrap_or_else(|| panic!("no simplex {label}"))
}

pub fn space(degrees: &[i64]) -> Arc<GradedSpace> {
    Arc::new(GradedSpace::new(degrees.iter().enumerate().map(|(i, d)| (format!("e{i}"), *d)).collect()).unwrap())
}

pub fn map(s: &Arc<GradedSpace>, t: &Arc<GradedSpace>, degree: i64, entries: &[(usize, usize, Q)]) -> GradedMap {
    let mut cols = vec![SVec::new(); s.dim()];
    for (r, c, v) in entries {
        cols[*c].insert(*r, v.clone());
    }
    GradedMap::from_cols(s.clone(), t.clone(), degree, cols).unwrap()
}

pub fn id(s: &Arc<GradedSpace>) -> GradedMap {
    map(s, s, 0, &(0..s.dim()).map(|i| (i, i, Q::one())).collect::<Vec<_>>())
}

pub fn same(a: &GradedMap, b: &GradedMap) -> bool {
    a.degree == b.degree && a.add(b, &-Q::one()).is_zero()
}

pub fn same_morphism(a: &RepMorphism, b: &RepMorphism) -> bool {
    a.add(b, &-Q::one()).unwrap().is_zero()
}

pub fn rand_map(r: &mut impl Rng, s: &Arc<GradedSpace>, t: &Arc<GradedSpace>, degree: i64) -> GradedMap {
    let mut e = Vec::new();
    for c in 0..s.dim() {
        for row in 0..t.dim() {
            if t.degree(row) == s.degree(c) + degree {
                e.push((row, c, rand_q(r)));
            }
        }
    }
    map(s, t, degree, &e)
}

pub fn rand_invertible(r: &mut impl Rng, s: &Arc<GradedSpace>) -> GradedMap {
    loop {
        let m = rand_map(r, s, s, 0);
        if m.inverse().is_some() {
            return m;
        }
    }
}

/// A complex of dimension at most 3 with degrees in {−1, 0, 1}.
pub fn rand_complex(r: &mut impl Rng) -> CochainComplex {
    let n = r.gen_range(1..=3);
    let degrees: Vec<i64> = (0..n).map(|_| r.gen_range(-1..=1)).collect();
    let s = space(&degrees);
    let step: i64 = r.gen_range(-1..=0);
    let mut e = Vec::new();
    for c in 0..n {
        for row in 0..n {
            if degrees[c] == step && degrees[row] == step + 1 {
                e.push((row, c, rand_q(r)));
            }
        }
    }
    CochainComplex::new(s.clone(), map(&s, &s, 1, &e)).unwrap()
}

/// Local system on `∂Δ[2]` with holonomy `h` along the edge `[0,2]`.
pub fn holonomy_rep(k: &K, s: &Arc<GradedSpace>, h: &GradedMap) -> RepUpToHomotopy {
    let edge = idx(k, 1, "[0,2]");
    let f = (0..=k.p_max())
        .map(|p| {
            (0..k.count(p))
                .map(|x| match p {
                    0 => GradedMap::zero(s.clone(), s.clone(), 1),
                    1 if x == edge => h.clone(),
                    1 => id(s),
                    _ => GradedMap::zero(s.clone(), s.clone(), 1 - p as i64),
                })
                .collect()
        })
        .collect();
    RepUpToHomotopy::new(k.clone(), vec![s.clone(); k.count(0)], f).unwrap()
}

pub fn components(m: &RepMorphism, p_max: usize) -> Vec<Vec<GradedMap>> {
    (0..=p_max).map(|p| m.cochain(p).values.clone()).collect()
}

pub fn rand_morphism(r: &mut impl Rng, a: &Arc<RepUpToHomotopy>, b: &Arc<RepUpToHomotopy>, n: i64) -> RepMorphism {
    let k = a.simplicial_set().clone();
    let comps = (0..=k.p_max())
        .map(|p| {
            (0..k.count(p))
                .map(|x| {
                    let s = a.fiber(k.vertex(p, x, p).unwrap());
                    let t = b.fiber(k.vertex(p, x, 0).unwrap());
                    rand_map(r, s, t, n - p as i64)
                })
                .collect()
        })
        .collect();
    RepMorphism::new(a.clone(), b.clone(), n, comps).unwrap()
}

/// Transport of `R` along a random degree-0 isomorphism φ:
/// `F' = (F ∘ φ − ∂_{F,F} φ) ∘ φ^{-1}`, so that `∂_{F,F'} φ = 0`.
pub fn gauge(r: &mut impl Rng, base: &Arc<RepUpToHomotopy>) -> (Arc<RepUpToHomotopy>, Vec<Vec<GradedMap>>) {
    let k = base.simplicial_set().clone();
    let mut phi = rand_morphism(r, base, base, 0);
    let mut comps = components(&phi, k.p_max());
    comps[0] = base.fibers().iter().map(|s| rand_invertible(r, s)).collect();
    phi = RepMorphism::new(base.clone(), base.clone(), 0, comps).unwrap();
    let f_as_morphism = RepMorphism::new(
        base.clone(),
        base.clone(),
        1,
        (0..=k.p_max()).map(|p| base.cochain(p).values.clone()).collect(),
    )
    .unwrap();
    let g = compose_morphisms(&f_as_morphism, &phi).unwrap().add(&hom_differential(&phi), &-Q::one()).unwrap();
    let inv = phi.inverse().unwrap();
    let f_new = compose_morphisms(&g, &inv).unwrap();
    let rep = RepUpToHomotopy::new(k.clone(), base.fibers().to_vec(), components(&f_new, k.p_max())).unwrap();
    (Arc::new(rep), components(&phi, k.p_max()))
}

/// A random valid representation over `k` with fiber dimension at most 3.
pub fn rand_rep(r: &mut impl Rng, k: &K) -> Arc<RepUpToHomotopy> {
    let base = if k.index_of(2, "[0,1,2]").is_none() && r.gen_bool(0.5) {
        let s = rand_complex(r).space.clone();
        let h = rand_invertible(r, &s);
        holonomy_rep(k, &s, &h)
    } else {
        RepUpToHomotopy::constant(k.clone(), &rand_complex(r))
    };
    let base = Arc::new(base);
    assert!(ruth_check(&base).ok());
    gauge(r, &base).0
}

pub fn rand_map_into(r: &mut impl Rng, k: &K) -> (K, SimplicialMap) {
    let is_delta = k.index_of(2, "[0,1,2]").is_some();
    let choices: Vec<(K, Vec<usize>)> = if is_delta {
        vec![
            (delta(1), vec![0, 2]),
            (delta(2), vec![0, 0, 1]),
            (delta(2), vec![0, 1, 1]),
            (delta(2), vec![2, 2, 2]),
            (boundary(), vec![0, 1, 2]),
            (delta(3), vec![0, 1, 1, 2]),
        ]
    } else {
        vec![(delta(1), vec![0, 2]), (delta(1), vec![1, 2]), (delta(2), vec![0, 1, 1]), (boundary(), vec![0, 0, 1])]
    };
    let (src, v) = choices[r.gen_range(0..choices.len())].clone();
    let f = SimplicialMap::from_vertex_map(src.clone(), k.clone(), &v).unwrap();
    (src, f)
}

/// `∂² = 0`, Leibniz, associativity, units and pullback along a random map, on a
/// random triple of representations over `Δ[2]` (even seeds) or `∂Δ[2]` (odd seeds).
pub fn dg_axioms_trial(seed: u64) {
    let mut r = rng(seed);
    let k = if seed % 2 == 0 { delta(2) } else { boundary() };
    let reps: Vec<_> = (0..3).map(|_| rand_rep(&mut r, &k)).collect();
    let n: Vec<i64> = (0..3).map(|_| r.gen_range(-1..=1)).collect();
    let phi = rand_morphism(&mut r, &reps[0], &reps[1], n[0]);
    let psi = rand_morphism(&mut r, &reps[1], &reps[2], n[1]);
    let chi = rand_morphism(&mut r, &reps[2], &reps[0], n[2]);

    assert!(hom_differential(&hom_differential(&phi)).is_zero(), "∂² ≠ 0");

    let psi_phi = compose_morphisms(&psi, &phi).unwrap();
    let lhs = hom_differential(&psi_phi);
    let rhs = compose_morphisms(&hom_differential(&psi), &phi)
        .unwrap()
        .add(&compose_morphisms(&psi, &hom_differential(&phi)).unwrap(), &sign(n[1]))
        .unwrap();
    assert!(same_morphism(&lhs, &rhs), "Leibniz");

    let left = compose_morphisms(&chi, &psi_phi).unwrap();
    let right = compose_morphisms(&compose_morphisms(&chi, &psi).unwrap(), &phi).unwrap();
    assert!(same_morphism(&left, &right), "associativity");

    let id0 = RepMorphism::identity(reps[0].clone());
    assert!(same_morphism(&compose_morphisms(&phi, &id0).unwrap(), &phi));
    assert!(hom_differential(&id0).is_zero());

    // pullback is a DG functor
    let (_, f) = rand_map_into(&mut r, &k);
    let pulled: Vec<_> = reps.iter().map(|x| Arc::new(pullback(&f, x).unwrap())).collect();
    for p in &pulled {
        assert!(ruth_check(p).ok(), "pullback breaks the structure relation");
    }
    let fphi = pullback_morphism(&f, &phi, pulled[0].clone(), pulled[1].clone()).unwrap();
    let fpsi = pullback_morphism(&f, &psi, pulled[1].clone(), pulled[2].clone()).unwrap();
    let f_dphi = pullback_morphism(&f, &hom_differential(&phi), pulled[0].clone(), pulled[1].clone()).unwrap();
    assert!(same_morphism(&hom_differential(&fphi), &f_dphi));
    let f_comp = pullback_morphism(&f, &psi_phi, pulled[0].clone(), pulled[2].clone()).unwrap();
    assert!(same_morphism(&compose_morphisms(&fpsi, &fphi).unwrap(), &f_comp));
}
