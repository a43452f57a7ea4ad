//! Random finite DG categories and natural transformations between DG functors.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;

use weilkit::complex::CochainComplex;
use weilkit::dgcat::*;
use weilkit::linalg::{add_scaled, scaled, SVec};
use weilkit::scalar::q;

use super::{complex, rand_nonzero_q, rand_q};

pub fn rand_of_degree(r: &mut impl Rng, cat: &FiniteDGCategory, a: usize, b: usize, k: i64) -> SVec {
    let mut v = SVec::new();
    for i in cat.hom(a, b).space.in_degree(k) {
        weilkit::linalg::add_term(&mut v, i, &rand_q(r));
    }
    v
}

/// Closed invertible degree-0 endomorphism `id + [d, h]` of every object.
pub fn rand_automorphisms(r: &mut impl Rng, cat: &FiniteDGCategory) -> Vec<(SVec, SVec)> {
    (0..cat.object_count())
        .map(|a| loop {
            let h = rand_of_degree(r, cat, a, a, -1);
            let mut u = cat.identity(a).clone();
            add_scaled(&mut u, &q(1), &cat.d(a, a, &h));
            let u = scaled(&u, &rand_nonzero_q(r));
            if let Some(inv) = cat.inverse(a, a, &u) {
                break (u, inv);
            }
        })
        .collect()
}

/// `G(f) = u_b F(f) u_a^{-1}` for a DG endofunctor `F` with identity object map.
pub fn conjugate(f: &Arc<AInftyFunctor>, u: &[(SVec, SVec)]) -> Arc<AInftyFunctor> {
    let c = &f.source;
    let n = c.object_count();
    let images: Vec<Vec<SVec>> = (0..n * n)
        .map(|ab| {
            let (a, b) = (ab / n, ab % n);
            (0..c.hom(a, b).dim())
                .map(|i| {
                    let fi = f.eval(&[(a, b, i)]);
                    c.compose(a, b, b, &u[b].0, &c.compose(a, a, b, &fi, &u[a].1))
                })
                .collect()
        })
        .collect();
    Arc::new(AInftyFunctor::dg(c.clone(), c.clone(), (0..n).collect(), &images).unwrap())
}

/// `λ_0 = u: F ⇒ conj_u F`.
pub fn conjugation_nat(f: &Arc<AInftyFunctor>, g: &Arc<AInftyFunctor>, u: &[(SVec, SVec)]) -> AInftyNat {
    AInftyNat::new(f.clone(), g.clone(), u.iter().map(|p| p.0.clone()).collect(), Vec::new()).unwrap()
}

/// `λ_0(A) = id + d h_A`, `λ_1(↓f) = (−1)^{|f|+1} F(f) h_{A_0} + h_{A_1} F(f)`: `F ⇒ F`.
pub fn homotopy_nat(r: &mut impl Rng, f: &Arc<AInftyFunctor>) -> AInftyNat {
    let c = &f.source;
    let n = c.object_count();
    let h: Vec<SVec> = (0..n).map(|a| rand_of_degree(r, c, a, a, -1)).collect();
    let lambda0 = (0..n)
        .map(|a| {
            let mut l = c.identity(a).clone();
            add_scaled(&mut l, &q(1), &c.d(a, a, &h[a]));
            l
        })
        .collect();
    let mut l1 = HashMap::new();
    for w in c.basis_words(1) {
        let (a, b, i) = w[0];
        let fi = f.eval(&w);
        let s = if c.degree(a, b, i) % 2 == 0 { q(-1) } else { q(1) };
        let mut v = scaled(&c.compose(a, a, b, &fi, &h[a]), &s);
        add_scaled(&mut v, &q(1), &c.compose(a, b, b, &h[b], &fi));
        if !v.is_empty() {
            l1.insert(w, v);
        }
    }
    AInftyNat::new(f.clone(), f.clone(), lambda0, vec![l1]).unwrap()
}

/// Two filtered complexes of dimension ≤ 2 whose filtration-preserving Hom
/// spaces all have dimension between 1 and 3.
pub fn rand_small_category(r: &mut impl Rng) -> Arc<FiniteDGCategory> {
    loop {
        let objs: Vec<(String, CochainComplex, Vec<i64>)> = ["A", "B"]
            .iter()
            .map(|name| {
                let dim = r.gen_range(1..=2);
                let k = r.gen_range(-1..=1);
                let levels: Vec<i64> = (0..dim).map(|_| r.gen_range(0..=1)).collect();
                if dim == 1 {
                    return (name.to_string(), complex(&[("p", k)], &[]), levels);
                }
                let k2 = if r.gen_bool(0.5) { k + 1 } else { r.gen_range(-1..=1) };
                // δ p = c·q needs level(q) ≥ level(p)
                let mut entries = Vec::new();
                if k2 == k + 1 && levels[1] >= levels[0] && r.gen_bool(0.7) {
                    let c = rand_nonzero_q(r);
                    entries.push(("q", "p", c));
                }
                let s = Arc::new(weilkit::graded::GradedSpace::new(vec![("p".into(), k), ("q".into(), k2)]).unwrap());
                let e: Vec<_> = entries.into_iter().map(|(t, f, c)| (t.to_string(), f.to_string(), c)).collect();
                let d = weilkit::graded::GradedMap::from_entries(s.clone(), s.clone(), 1, &e).unwrap();
                (name.to_string(), CochainComplex::new(s, d).unwrap(), levels)
            })
            .collect();
        let cat = FiniteDGCategory::filtered(objs).unwrap();
        let ok = (0..2).all(|a| (0..2).all(|b| (1..=3).contains(&cat.hom(a, b).dim())));
        if ok {
            return Arc::new(cat);
        }
    }
}
