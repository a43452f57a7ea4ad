//! Chevalley–Eilenberg algebras `CE(g)`, truncated Weil algebras `Wg(s)`,
//! algebraic connections, characteristic homomorphisms and the Chern–Weil map.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::CochainComplex;
use crate::dgla::algebra::{Cdga, GDGAlgebra, Generator, MonomialAlgebra};
use crate::error::{input, Result};
use crate::graded::GradedMap;
use crate::lie::LieAlgebra;
use crate::linalg::{add_scaled, add_term_owned, unit, Echelon, SVec};
use crate::scalar::{qf, Q};

/// `CE(g) = Λ•g*` with `δ e^a = −½ f^a_{bc} e^b e^c`, `i_b e^a = δ^a_b`,
/// `L_b e^a = −f^a_{bc} e^c`.
pub fn ce_algebra(g: &LieAlgebra) -> Result<GDGAlgebra> {
    g.validate()?;
    let n = g.dim();
    let gens = (0..n).map(|a| Generator { label: format!("e^{}", g.label(a)), degree: 1, weight: 0 }).collect();
    let alg = MonomialAlgebra::new(gens, None)?;
    let mut dv = Vec::with_capacity(n);
    for a in 0..n {
        let mut v = SVec::new();
        for b in 0..n {
            for c in 0..n {
                let f = g.f(b, c, a);
                if !f.is_zero() {
                    let bc = alg.mul(&alg.gen_vec(b), &alg.gen_vec(c));
                    add_scaled(&mut v, &(-qf(1, 2) * f), &bc);
                }
            }
        }
        dv.push(v);
    }
    let alg = alg.with_differential(&dv)?;
    let i_values: Vec<Vec<SVec>> =
        (0..n).map(|b| (0..n).map(|a| if a == b { unit(alg.unit()) } else { SVec::new() }).collect()).collect();
    let l_values: Vec<Vec<SVec>> =
        (0..n).map(|b| (0..n).map(|a| coadjoint(g, b, a, |c| alg.gen_vec(c))).collect()).collect();
    GDGAlgebra::new(alg, Arc::new(g.clone()), &i_values, &l_values)
}

/// `−Σ_c f^a_{bc} x^c` where `x^c = gen(c)`.
fn coadjoint(g: &LieAlgebra, b: usize, a: usize, gen: impl Fn(usize) -> SVec) -> SVec {
    let mut v = SVec::new();
    for c in 0..g.dim() {
        let f = g.f(b, c, a);
        if !f.is_zero() {
            add_scaled(&mut v, &-f, &gen(c));
        }
    }
    v
}

/// Weil algebra truncated by symmetric degree: `Λ•g* ⊗ S^{≤s} g*`.
#[derive(Clone, Debug)]
pub struct WeilAlgebra {
    pub gdg: GDGAlgebra,
    pub s: u32,
}

/// `d t^a = w^a − ½ f^a_{bc} t^b t^c`, `d w^a = f^a_{bc} w^b t^c`,
/// `i_b t^a = δ^a_b`, `i_b w^a = 0`, `L_b` by the coadjoint action on both.
pub fn weil_algebra(g: &LieAlgebra, s: u32) -> Result<WeilAlgebra> {
    if s < 1 {
        return input("Weil truncation needs s ≥ 1");
    }
    g.validate()?;
    let n = g.dim();
    let mut gens: Vec<Generator> =
        (0..n).map(|a| Generator { label: format!("t^{}", g.label(a)), degree: 1, weight: 0 }).collect();
    gens.extend((0..n).map(|a| Generator { label: format!("w^{}", g.label(a)), degree: 2, weight: 1 }));
    let alg = MonomialAlgebra::new(gens, Some(s))?;
    let t = |a: usize| alg.gen_vec(a);
    let w = |a: usize| alg.gen_vec(n + a);
    let mut dv = Vec::with_capacity(2 * n);
    for a in 0..n {
        let mut v = w(a);
        for b in 0..n {
            for c in 0..n {
                let f = g.f(b, c, a);
                if !f.is_zero() {
                    add_scaled(&mut v, &(-qf(1, 2) * f), &alg.mul(&t(b), &t(c)));
                }
            }
        }
        dv.push(v);
    }
    for a in 0..n {
        let mut v = SVec::new();
        for b in 0..n {
            for c in 0..n {
                let f = g.f(b, c, a);
                if !f.is_zero() {
                    add_scaled(&mut v, &f, &alg.mul(&w(b), &t(c)));
                }
            }
        }
        dv.push(v);
    }
    let alg = alg.with_differential(&dv)?;
    let t = |a: usize| alg.gen_vec(a);
    let w = |a: usize| alg.gen_vec(n + a);
    let i_values: Vec<Vec<SVec>> =
        (0..n).map(|b| (0..2 * n).map(|k| if k == b { unit(alg.unit()) } else { SVec::new() }).collect()).collect();
    let l_values: Vec<Vec<SVec>> = (0..n)
        .map(|b| {
            let mut vals: Vec<SVec> = (0..n).map(|a| coadjoint(g, b, a, t)).collect();
            vals.extend((0..n).map(|a| coadjoint(g, b, a, w)));
            vals
        })
        .collect();
    let gdg = GDGAlgebra::new(alg, Arc::new(g.clone()), &i_values, &l_values)?;
    Ok(WeilAlgebra { gdg, s })
}

impl WeilAlgebra {
    pub fn g(&self) -> &LieAlgebra {
        &self.gdg.g
    }

    pub fn alg(&self) -> &MonomialAlgebra {
        &self.gdg.alg
    }

    pub fn t(&self, a: usize) -> SVec {
        self.alg().gen_vec(a)
    }

    pub fn w(&self, a: usize) -> SVec {
        self.alg().gen_vec(self.g().dim() + a)
    }

    pub fn t_basis(&self, a: usize) -> usize {
        self.alg().gen_basis(a)
    }

    pub fn w_basis(&self, a: usize) -> usize {
        self.alg().gen_basis(self.g().dim() + a)
    }

    /// Largest `K` such that no basis element of degree `≤ K` has a
    /// differential leaving the truncation; cohomology agrees with the
    /// untruncated algebra up to `K` (which is `2s`).
    pub fn safe_max_degree(&self) -> i64 {
        let sp = self.alg().space();
        let (_, hi) = sp.degree_range().unwrap();
        let first_bad = (0..sp.dim()).filter(|&i| self.alg().diff_overflows(i)).map(|i| sp.degree(i)).min();
        match first_bad {
            Some(k) => k - 1,
            None => hi,
        }
    }

    pub fn complex(&self) -> CochainComplex {
        CochainComplex::new(self.alg().space().clone(), self.alg().diff_map().clone()).expect("d_W squares to zero")
    }

    /// `dim H^k(Wg(s))` for `0 ≤ k ≤ safe_max_degree`.
    pub fn cohomology_safe(&self) -> BTreeMap<i64, usize> {
        let c = self.complex();
        let ks: Vec<i64> = (0..=self.safe_max_degree()).collect();
        let dims = crate::par::map(&ks, |k| c.cohomology_in_degree(*k).0);
        ks.into_iter().zip(dims).collect()
    }

    /// Whether the monomial contains no `t` generator.
    pub fn is_pure_w(&self, i: usize) -> bool {
        self.alg().count_degree(i, 1) == 0
    }
}

/// A degree 1 map `θ: g* → A¹`, stored as `θ(ξ^a)` for the dual basis.
#[derive(Clone, Debug)]
pub struct AlgebraicConnection {
    pub target: Arc<GDGAlgebra>,
    pub theta: Vec<SVec>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConnectionViolation {
    Contraction { x: String, xi: String },
    Equivariance { x: String, xi: String },
    Degree { xi: String },
}

impl AlgebraicConnection {
    pub fn new(target: Arc<GDGAlgebra>, theta: Vec<SVec>) -> Result<Self> {
        if theta.len() != target.g.dim() {
            return input("connection needs one value per dual basis vector");
        }
        Ok(AlgebraicConnection { target, theta })
    }

    /// The universal connection `t(ξ) ↦ t(ξ)` on `Wg`.
    pub fn universal(w: &WeilAlgebra) -> Self {
        let theta = (0..w.g().dim()).map(|a| w.t(a)).collect();
        AlgebraicConnection { target: Arc::new(w.gdg.clone()), theta }
    }

    /// `ξ ↦ ξ ∈ CE¹(g)`.
    pub fn canonical_ce(ce: &GDGAlgebra) -> Self {
        let theta = (0..ce.g.dim()).map(|a| ce.alg.gen_vec(a)).collect();
        AlgebraicConnection { target: Arc::new(ce.clone()), theta }
    }

    fn theta_of(&self, xi: &SVec) -> SVec {
        let mut r = SVec::new();
        for (a, c) in xi {
            add_scaled(&mut r, c, &self.theta[*a]);
        }
        r
    }
}

/// `i_x θ(ξ) = ⟨ξ, x⟩` and `L_x θ(ξ) = θ(ad*_x ξ)` on all basis pairs.
pub fn connection_check(theta: &AlgebraicConnection) -> Vec<ConnectionViolation> {
    let a = &theta.target;
    let g = &a.g;
    let n = g.dim();
    let mut out = Vec::new();
    for xi in 0..n {
        if theta.theta[xi].keys().any(|k| a.alg.degree(*k) != 1) {
            out.push(ConnectionViolation::Degree { xi: g.label(xi).to_string() });
        }
    }
    for x in 0..n {
        for xi in 0..n {
            let lhs = a.contraction(x).apply(&theta.theta[xi]);
            let rhs = if x == xi { unit(a.alg.unit()) } else { SVec::new() };
            if lhs != rhs {
                out.push(ConnectionViolation::Contraction { x: g.label(x).into(), xi: g.label(xi).into() });
            }
            let lhs = a.lie_derivative(x).apply(&theta.theta[xi]);
            let rhs = theta.theta_of(&coadjoint(g, x, xi, unit));
            if lhs != rhs {
                out.push(ConnectionViolation::Equivariance { x: g.label(x).into(), xi: g.label(xi).into() });
            }
        }
    }
    out
}

/// The algebra map `c_θ: Wg(s) → A` with `c(t^a) = θ^a` and
/// `c(w^a) = δθ^a + ½ f^a_{bc} θ^b θ^c`.
#[derive(Clone, Debug)]
pub struct CharacteristicHom {
    pub map: GradedMap,
    pub theta: AlgebraicConnection,
}

pub fn characteristic_hom(theta: &AlgebraicConnection, w: &WeilAlgebra) -> Result<CharacteristicHom> {
    if let Some(v) = connection_check(theta).first() {
        return input(format!("invalid connection: {v:?}"));
    }
    if *w.gdg.g != *theta.target.g {
        return input("connection and Weil algebra are over different Lie algebras");
    }
    let a = &theta.target.alg;
    let g = w.g();
    let n = g.dim();
    let mut gen_img: Vec<SVec> = theta.theta.clone();
    for k in 0..n {
        let mut v = a.diff(&theta.theta[k]);
        for b in 0..n {
            for c in 0..n {
                let f = g.f(b, c, k);
                if !f.is_zero() {
                    add_scaled(&mut v, &(qf(1, 2) * f), &a.mul(&theta.theta[b], &theta.theta[c]));
                }
            }
        }
        gen_img.push(v);
    }
    let wa = w.alg();
    let cols = crate::par::map_range(wa.dim(), |i| {
        let mut acc = unit(a.unit());
        for &gidx in wa.monomial(i) {
            acc = a.mul(&acc, &gen_img[gidx]);
        }
        acc
    });
    let map = GradedMap::from_cols(wa.space().clone(), a.space().clone(), 0, cols)?;
    Ok(CharacteristicHom { map, theta: theta.clone() })
}

impl CharacteristicHom {
    pub fn apply(&self, x: &SVec) -> SVec {
        self.map.apply(x)
    }

    /// Basis elements of `Wg(s)` on which `c ∘ d_W = δ_A ∘ c`, `c ∘ i_x = i_x ∘ c`
    /// or `c ∘ L_x = L_x ∘ c` fails. Elements whose `d_W` leaves the truncation are skipped.
    pub fn violations(&self, w: &WeilAlgebra) -> Vec<String> {
        let a = &self.theta.target;
        let wa = w.alg();
        let mut out = Vec::new();
        for i in 0..wa.dim() {
            let e = unit(i);
            if !wa.diff_overflows(i) && self.apply(&wa.diff(&e)) != a.alg.diff(&self.apply(&e)) {
                out.push(format!("d on {}", wa.space().label(i)));
            }
            for x in 0..w.g().dim() {
                if self.apply(&w.gdg.contraction(x).apply(&e)) != a.contraction(x).apply(&self.apply(&e)) {
                    out.push(format!("i_{} on {}", w.g().label(x), wa.space().label(i)));
                }
                if self.apply(&w.gdg.lie_derivative(x).apply(&e)) != a.lie_derivative(x).apply(&self.apply(&e)) {
                    out.push(format!("L_{} on {}", w.g().label(x), wa.space().label(i)));
                }
            }
        }
        out
    }
}

/// Basis of `(S^k g*)_inv`, as polynomials in the symbols `w^a`
/// (elements of the returned algebra).
pub fn invariant_polynomials(g: &LieAlgebra, k: u32) -> Result<(MonomialAlgebra, Vec<SVec>)> {
    g.validate()?;
    let n = g.dim();
    let gens = (0..n).map(|a| Generator { label: format!("w^{}", g.label(a)), degree: 2, weight: 1 }).collect();
    let sym = MonomialAlgebra::new(gens, Some(k.max(1)))?;
    let ops: Vec<GradedMap> = (0..n)
        .map(|b| {
            let vals: Vec<SVec> = (0..n).map(|a| coadjoint(g, b, a, |c| sym.gen_vec(c))).collect();
            sym.derivation(&vals, 0).map(|x| x.0)
        })
        .collect::<Result<_>>()?;
    let src = sym.space().in_degree_lex(2 * k as i64);
    let blocks: Vec<Vec<SVec>> = ops.iter().map(|o| o.block(&src, &src)).collect();
    let refs: Vec<&[SVec]> = blocks.iter().map(|b| b.as_slice()).collect();
    let basis = crate::linalg::common_kernel(src.len(), &refs)
        .into_iter()
        .map(|v| v.into_iter().map(|(i, c)| (src[i], c)).collect())
        .collect();
    Ok((sym, basis))
}

/// Transport a polynomial in the `w^a` into `Wg(s)` by matching monomial labels.
pub fn polynomial_in_weil(sym: &MonomialAlgebra, p: &SVec, w: &WeilAlgebra) -> Result<SVec> {
    let mut out = SVec::new();
    for (i, c) in p {
        let label = sym.space().label(*i);
        let Some(j) = w.alg().space().index_of(label) else {
            return input(format!("monomial {label} is outside the truncation"));
        };
        add_term_owned(&mut out, j, c.clone());
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernWeilClass {
    pub element: SVec,
    pub degree: i64,
    pub closed: bool,
    pub basic: bool,
    /// Coordinates in a basis of `H^degree(A_bas)`.
    pub class: Vec<Q>,
}

/// `c_θ(p)` for an invariant polynomial `p ∈ (Wg)_bas`, and its class in `H(A_bas)`.
pub fn chern_weil(ch: &CharacteristicHom, w: &WeilAlgebra, p: &SVec) -> Result<ChernWeilClass> {
    let deg = match w.alg().space().homogeneous_degree(p) {
        None => 0,
        Some(Ok(k)) => k,
        Some(Err(())) => return input("polynomial is not homogeneous"),
    };
    if !w.gdg.is_basic(p) || !p.keys().all(|i| w.is_pure_w(*i)) {
        return input("polynomial is not invariant");
    }
    let a = &ch.theta.target;
    let element = ch.apply(p);
    let closed = a.alg.diff(&element).is_empty();
    let basic = a.is_basic(&element);
    let class = basic_class(a, deg, &element);
    Ok(ChernWeilClass { element, degree: deg, closed, basic, class })
}

/// Coordinates of a closed basic element in a basis of `H^k(A_bas)`.
pub fn basic_class(a: &GDGAlgebra, k: i64, x: &SVec) -> Vec<Q> {
    let here = a.basic_subspace(k);
    let below = a.basic_subspace(k - 1);
    let d = a.alg.diff_map();
    // closed basic elements
    let imgs: Vec<SVec> = here.iter().map(|v| d.apply(v)).collect();
    let ker = crate::linalg::kernel(&imgs);
    let cycles: Vec<SVec> = ker
        .iter()
        .map(|c| {
            let mut v = SVec::new();
            for (i, x) in c {
                add_scaled(&mut v, x, &here[*i]);
            }
            v
        })
        .collect();
    let mut e = Echelon::tracked();
    for b in &below {
        e.insert(&d.apply(b));
    }
    // insertion index of every cycle that becomes a cohomology basis vector
    let mut rep_slot = Vec::new();
    for (j, z) in cycles.iter().enumerate() {
        if e.insert(z) {
            rep_slot.push(below.len() + j);
        }
    }
    let Some(coords) = e.solve(x) else { return Vec::new() };
    rep_slot.iter().map(|s| coords.get(s).cloned().unwrap_or_else(Q::zero)).collect()
}

/// Degree of the quadratic Casimir-like invariant: the first positive `k`
/// with a nonzero invariant in `S^k g*`, if any up to `k_max`.
pub fn first_invariant(g: &LieAlgebra, k_max: u32) -> Option<(u32, SVec, MonomialAlgebra)> {
    for k in 1..=k_max {
        let (sym, b) = invariant_polynomials(g, k).ok()?;
        if let Some(p) = b.into_iter().next() {
            return Some((k, p, sym));
        }
    }
    None
}

pub fn one_vec(a: &dyn Cdga) -> SVec {
    let mut v = SVec::new();
    v.insert(a.unit(), Q::one());
    v
}
