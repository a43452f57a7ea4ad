//! Objects and morphisms of the infinitesimal local system category.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use super::rand_q;
use weilkit::complex::{subcomplex_cohomology_dims, CochainComplex};
use weilkit::dgla::algebra::Cdga;
use weilkit::graded::GradedSpace;
use weilkit::infloc::*;
use weilkit::lie::{self, LieAlgebra};
use weilkit::linalg::{add_term_owned, common_kernel, kernel, SVec};
use weilkit::weil::{weil_algebra, WeilAlgebra};

pub fn weil(g: &LieAlgebra, s: u32) -> Arc<WeilAlgebra> {
    Arc::new(weil_algebra(g, s).unwrap())
}

pub fn line(w: &Arc<WeilAlgebra>, degree: i64) -> Arc<BasicObject> {
    let sp = Arc::new(GradedSpace::new(vec![("v".into(), degree)]).unwrap());
    Arc::new(constant_object(w.clone(), Arc::new(CochainComplex::trivial(sp))).unwrap())
}

pub fn rand_in_degree(h: &HomComplex, r: &mut impl Rng, k: i64) -> SVec {
    let mut c = SVec::new();
    for i in h.in_degree(k) {
        add_term_owned(&mut c, i, rand_q(r));
    }
    h.element(&c)
}

/// Random closed element of degree `k`, from the kernel of `∂` in basis coordinates.
pub fn rand_closed(h: &HomComplex, r: &mut impl Rng, k: i64) -> SVec {
    let here = h.in_degree(k);
    let next = h.in_degree(k + 1);
    let ker = kernel(&h.complex.d.block(&here, &next));
    let mut c = SVec::new();
    for z in ker {
        let x = rand_q(r);
        for (i, v) in z {
            add_term_owned(&mut c, here[i], &x * v);
        }
    }
    h.element(&c)
}

/// `Hom(1, GM)` is the basic part of `Wg ⊗ CE(g)`, which the connection `t`
/// identifies with the `g`-invariant part of `Wg`. Oracle: cohomology of the
/// subcomplex of `Wg(s)` cut out by all `L_x`.
pub fn invariant_weil_cohomology(w: &WeilAlgebra, ks: std::ops::RangeInclusive<i64>) -> Vec<usize> {
    let sp = w.alg().space();
    let mut basis = BTreeMap::new();
    for k in *ks.start() - 1..=*ks.end() + 1 {
        let src = sp.in_degree_lex(k);
        let blocks: Vec<Vec<SVec>> = (0..w.g().dim()).map(|x| w.gdg.lie_derivative(x).block(&src, &src)).collect();
        let refs: Vec<&[SVec]> = blocks.iter().map(|b| b.as_slice()).collect();
        let inv: Vec<SVec> = common_kernel(src.len(), &refs)
            .into_iter()
            .map(|v| v.into_iter().map(|(i, c)| (src[i], c)).collect())
            .collect();
        basis.insert(k, inv);
    }
    let d = w.alg().diff_map().clone();
    let dims = subcomplex_cohomology_dims(&basis, &move |x: &SVec| d.apply(x));
    ks.map(|k| dims[&k]).collect()
}

pub struct Pool {
    pub objects: Vec<Arc<BasicObject>>,
}

impl Pool {
    pub fn su2() -> Self {
        let w = weil(&lie::su2(), 2);
        let objects = vec![
            Arc::new(trivial_object(w.clone())),
            Arc::new(adjoint_cone(w.clone()).unwrap()),
            Arc::new(gauss_manin_over(w.clone()).unwrap()),
        ];
        Pool { objects }
    }

    pub fn rand_morphism(&self, r: &mut impl Rng, i: usize, j: usize) -> Morphism {
        let h = hom_complex(&self.objects[i], &self.objects[j]).unwrap();
        let k = r.gen_range(-2..=3);
        let mut c = SVec::new();
        for b in h.in_degree(k) {
            add_term_owned(&mut c, b, rand_q(r));
        }
        h.morphism(&c)
    }
}
