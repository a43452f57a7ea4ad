//! `A ⊗ L` for a commutative DG algebra `A` and a DGLA `L`, and the
//! associative version `A ⊗ Hom(V, V')` used for Maurer–Cartan twisting.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::algebra::Cdga;
use super::{hom_space, Dgla};
use crate::complex::CochainComplex;
use crate::error::{input, Result};
use crate::graded::GradedSpace;
use crate::linalg::{add_scaled, add_term_owned, SVec};
use crate::scalar::{sign, Q};

fn tensor_space(a: &GradedSpace, l: &GradedSpace) -> GradedSpace {
    let mut basis = Vec::with_capacity(a.dim() * l.dim());
    for i in 0..a.dim() {
        for x in 0..l.dim() {
            basis.push((format!("{}⊗{}", a.label(i), l.label(x)), a.degree(i) + l.degree(x)));
        }
    }
    GradedSpace::new(basis).expect("tensor labels are unique")
}

/// `[a⊗x, b⊗y] = (−1)^{|x||b|} ab ⊗ [x,y]`, `d(a⊗x) = da⊗x + (−1)^{|a|} a⊗dx`.
/// Basis index `i_a · dim L + i_x`.
pub struct TensorDgla {
    pub a: Arc<dyn Cdga>,
    pub l: Arc<dyn Dgla>,
    space: Arc<GradedSpace>,
}

impl TensorDgla {
    pub fn new(a: Arc<dyn Cdga>, l: Arc<dyn Dgla>) -> Self {
        let space = Arc::new(tensor_space(a.space(), l.space()));
        TensorDgla { a, l, space }
    }

    pub fn index(&self, ia: usize, x: usize) -> usize {
        ia * self.l.dim() + x
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.l.dim(), i % self.l.dim())
    }

    /// `a ⊗ x` for vectors `a ∈ A`, `x ∈ L`.
    pub fn elem(&self, a: &SVec, x: &SVec) -> SVec {
        let mut r = SVec::new();
        for (i, c) in a {
            for (j, e) in x {
                add_term_owned(&mut r, self.index(*i, *j), c * e);
            }
        }
        r
    }

    /// Decompose by a grading of the `A` factor.
    pub fn components(&self, v: &SVec, grading: &dyn Fn(usize) -> i64) -> BTreeMap<i64, SVec> {
        let mut out: BTreeMap<i64, SVec> = BTreeMap::new();
        for (i, c) in v {
            let (ia, _) = self.split(*i);
            out.entry(grading(ia)).or_default().insert(*i, c.clone());
        }
        out
    }
}

impl Dgla for TensorDgla {
    fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    fn bracket_basis(&self, i: usize, j: usize) -> SVec {
        let (ia, x) = self.split(i);
        let (ib, y) = self.split(j);
        let xy = self.l.bracket_basis(x, y);
        if xy.is_empty() {
            return SVec::new();
        }
        let ab = self.a.mul_basis(ia, ib);
        let s = sign(self.l.degree(x) * self.a.degree(ib));
        let mut r = SVec::new();
        for (k, c) in &ab {
            for (m, e) in &xy {
                add_term_owned(&mut r, self.index(*k, *m), &s * c * e);
            }
        }
        r
    }

    fn diff_basis(&self, i: usize) -> SVec {
        let (ia, x) = self.split(i);
        let mut r = SVec::new();
        for (k, c) in self.a.diff_map().col(ia) {
            add_term_owned(&mut r, self.index(*k, x), c.clone());
        }
        let s = sign(self.a.degree(ia));
        for (m, e) in self.l.diff_basis(x) {
            add_term_owned(&mut r, self.index(ia, m), &s * e);
        }
        r
    }
}

/// `tensor_dgla(A, L) = A ⊗ L`.
pub fn tensor_dgla(a: Arc<dyn Cdga>, l: Arc<dyn Dgla>) -> TensorDgla {
    TensorDgla::new(a, l)
}

/// `A ⊗ Hom(V, V')` with product `(a⊗f)(b⊗g) = (−1)^{|f||b|} ab ⊗ f∘g` and
/// differential `d(a⊗f) = da⊗f + (−1)^{|a|} a⊗(δ'f − (−1)^{|f|} fδ)`.
/// Basis index `(i_a · dim V' + r) · dim V + c` for `a ⊗ (e_c ↦ e'_r)`.
#[derive(Clone)]
pub struct TensorHom {
    pub a: Arc<dyn Cdga>,
    pub src: Arc<CochainComplex>,
    pub tgt: Arc<CochainComplex>,
    hom: Arc<GradedSpace>,
    space: Arc<GradedSpace>,
}

impl std::fmt::Debug for TensorHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TensorHom({} × {})", self.a.dim(), self.hom.dim())
    }
}

impl TensorHom {
    pub fn new(a: Arc<dyn Cdga>, src: Arc<CochainComplex>, tgt: Arc<CochainComplex>) -> Self {
        let hom = Arc::new(hom_space(&src.space, &tgt.space));
        let space = Arc::new(tensor_space(a.space(), &hom));
        TensorHom { a, src, tgt, hom, space }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn hom_space(&self) -> &Arc<GradedSpace> {
        &self.hom
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.space.degree(i)
    }

    fn n(&self) -> usize {
        self.src.dim()
    }

    fn m(&self) -> usize {
        self.tgt.dim()
    }

    pub fn index(&self, ia: usize, r: usize, c: usize) -> usize {
        (ia * self.m() + r) * self.n() + c
    }

    /// `(i_a, r, c)`
    pub fn split(&self, i: usize) -> (usize, usize, usize) {
        let h = self.m() * self.n();
        (i / h, (i % h) / self.n(), i % self.n())
    }

    pub fn hom_degree(&self, r: usize, c: usize) -> i64 {
        self.tgt.space.degree(r) - self.src.space.degree(c)
    }

    /// `1 ⊗ id`; only defined when source and target coincide.
    pub fn identity(&self) -> SVec {
        let u = self.a.unit();
        (0..self.n()).map(|c| (self.index(u, c, c), Q::one())).collect()
    }

    /// `a ⊗ f` with `f` given as `(r, c, value)` entries.
    pub fn elem(&self, a: &SVec, f: &[(usize, usize, Q)]) -> SVec {
        let mut out = SVec::new();
        for (ia, x) in a {
            for (r, c, v) in f {
                add_term_owned(&mut out, self.index(*ia, *r, *c), x * v);
            }
        }
        out
    }

    pub fn d(&self, x: &SVec) -> SVec {
        let dsrc = &self.src.d;
        let dtgt = &self.tgt.d;
        let mut out = SVec::new();
        for (i, v) in x {
            let (ia, r, c) = self.split(*i);
            for (k, e) in self.a.diff_map().col(ia) {
                add_term_owned(&mut out, self.index(*k, r, c), v * e);
            }
            let sa = sign(self.a.degree(ia));
            for (k, e) in dtgt.col(r) {
                add_term_owned(&mut out, self.index(ia, *k, c), &sa * v * e);
            }
            let sf = -&sa * sign(self.hom_degree(r, c));
            for j in 0..self.n() {
                let e = dsrc.entry(c, j);
                if !num_traits::Zero::is_zero(&e) {
                    add_term_owned(&mut out, self.index(ia, r, j), &sf * v * e);
                }
            }
        }
        out
    }

    /// Product `x · y` for `x ∈ A⊗Hom(V', V'')` (`self`) and `y ∈ right = A⊗Hom(V, V')`,
    /// landing in `out = A⊗Hom(V, V'')`.
    pub fn mul(&self, x: &SVec, right: &TensorHom, y: &SVec, out: &TensorHom) -> SVec {
        let mut res = SVec::new();
        // index y by its middle row for the contraction f∘g
        let mut by_row: BTreeMap<usize, Vec<(usize, usize, &Q)>> = BTreeMap::new();
        for (j, w) in y {
            let (ib, r2, c2) = right.split(*j);
            by_row.entry(r2).or_default().push((ib, c2, w));
        }
        for (i, v) in x {
            let (ia, r1, c1) = self.split(*i);
            let Some(ys) = by_row.get(&c1) else { continue };
            let fdeg = self.hom_degree(r1, c1);
            for (ib, c2, w) in ys {
                let s = sign(fdeg * self.a.degree(*ib));
                let coeff = &s * v * *w;
                for (k, e) in self.a.mul_basis(ia, *ib) {
                    add_term_owned(&mut res, out.index(k, r1, *c2), &coeff * e);
                }
            }
        }
        res
    }

    /// `x · y` with everything in `self` (an endomorphism algebra).
    pub fn mul_end(&self, x: &SVec, y: &SVec) -> SVec {
        self.mul(x, self, y, self)
    }

    /// `dα + α·α`, which equals `dα + ½[α, α]` for odd `α`.
    pub fn mc_residual(&self, alpha: &SVec) -> Result<SVec> {
        if alpha.keys().any(|i| self.degree(*i) != 1) {
            return input("Maurer–Cartan elements have degree 1");
        }
        let mut r = self.d(alpha);
        add_scaled(&mut r, &Q::one(), &self.mul_end(alpha, alpha));
        Ok(r)
    }

    /// Apply `x ∈ A⊗Hom(V, V')` to `y ∈ A⊗V` (index `i_a · dim V + v`),
    /// giving an element of `A⊗V'`: `(b⊗f)(a⊗v) = (−1)^{|f||a|} ba ⊗ f(v)`.
    pub fn act(&self, x: &SVec, y: &SVec) -> SVec {
        let mut res = SVec::new();
        let n = self.n();
        for (i, v) in x {
            let (ib, r, c) = self.split(*i);
            let fdeg = self.hom_degree(r, c);
            for (j, w) in y {
                let (ia, vv) = (j / n, j % n);
                if vv != c {
                    continue;
                }
                let s = sign(fdeg * self.a.degree(ia));
                for (k, e) in self.a.mul_basis(ib, ia) {
                    add_term_owned(&mut res, k * self.m() + r, &s * v * w * e);
                }
            }
        }
        res
    }

    /// Decompose by a grading of the `A` factor.
    pub fn components(&self, v: &SVec, grading: &dyn Fn(usize) -> i64) -> BTreeMap<i64, SVec> {
        let mut out: BTreeMap<i64, SVec> = BTreeMap::new();
        for (i, c) in v {
            let (ia, _, _) = self.split(*i);
            out.entry(grading(ia)).or_default().insert(*i, c.clone());
        }
        out
    }

    /// Graded space `A ⊗ V` for the source complex, index `i_a · dim V + v`.
    pub fn source_tensor_space(&self) -> GradedSpace {
        tensor_space(self.a.space(), &self.src.space)
    }
}

/// Component residuals of `dα + α∧α` split by a partial-degree grading of
/// `A`; all vanish exactly when `α` is Maurer–Cartan.
pub fn mc_residual_components(
    t: &TensorHom,
    alpha: &SVec,
    grading: &dyn Fn(usize) -> i64,
) -> Result<BTreeMap<i64, SVec>> {
    let r = t.mc_residual(alpha)?;
    Ok(t.components(&r, grading))
}
