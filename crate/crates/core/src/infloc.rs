//! Basic g-L∞ spaces over a truncated Weil algebra and the DG category they form.
//!
//! An object is a finite complex `V` with a Maurer–Cartan element
//! `α ∈ Wg(s) ⊗ End(V)`. The Lie derivative `L_x` on `V` is read off from the
//! `t^x ⊗ End(V)` slot of `α`. Morphisms live in `(Wg(s) ⊗ Hom(V, V'))_bas`
//! with `∂φ = D'∘φ − (−1)^k φ∘D`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::CochainComplex;
use crate::dgla::algebra::{Cdga, GDGAlgebra};
use crate::dgla::TensorHom;
use crate::error::{input, structural, Error, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::lie::LieAlgebra;
use crate::linalg::{add_scaled, add_term_owned, kernel, unit, Echelon, SVec};
use crate::scalar::{sign, Q};
use crate::spectral::FilteredComplex;
use crate::weil::{ce_algebra, characteristic_hom, weil_algebra, AlgebraicConnection, CharacteristicHom, WeilAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasicViolation {
    /// `[α, i_x⊗1] ≠ 1⊗L_x`
    Contraction { x: String },
    /// `[α, L_x⊗1 + 1⊗L_x] ≠ 0`
    Invariance { x: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectReport {
    /// `dα + α·α`; empty exactly when `α` is Maurer–Cartan.
    pub mc_residual: SVec,
    pub basic_violations: Vec<BasicViolation>,
    /// `D² = 0` for `D = d_W⊗1 + 1⊗δ_V + α` on `Wg(s) ⊗ V`.
    pub d_squared_zero: bool,
    /// `D` maps `(Wg(s) ⊗ V)_bas` into itself.
    pub preserves_basic: bool,
}

impl ObjectReport {
    pub fn is_valid(&self) -> bool {
        self.mc_residual.is_empty() && self.basic_violations.is_empty() && self.d_squared_zero && self.preserves_basic
    }

    fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.mc_residual.is_empty() {
            parts.push(format!("Maurer–Cartan residual has {} nonzero entries", self.mc_residual.len()));
        }
        for v in &self.basic_violations {
            parts.push(match v {
                BasicViolation::Contraction { x } => format!("[α, i_{x}⊗1] ≠ 1⊗L_{x}"),
                BasicViolation::Invariance { x } => format!("[α, L_{x}⊗1 + 1⊗L_{x}] ≠ 0"),
            });
        }
        if !self.d_squared_zero {
            parts.push("D² ≠ 0".into());
        }
        if !self.preserves_basic {
            parts.push("D does not preserve the basic subspace".into());
        }
        parts.join("; ")
    }
}

/// A basic g-L∞ space: an object of the category.
#[derive(Clone, Debug)]
pub struct BasicObject {
    pub w: Arc<WeilAlgebra>,
    /// `Wg(s) ⊗ End(V)`
    pub end: TensorHom,
    pub alpha: SVec,
    lie: Vec<GradedMap>,
    pub report: ObjectReport,
}

/// Shared `Arc<dyn Cdga>` for a Weil algebra.
pub fn weil_cdga(w: &WeilAlgebra) -> Arc<dyn Cdga> {
    Arc::new(w.alg().clone())
}

impl BasicObject {
    pub fn v(&self) -> &Arc<CochainComplex> {
        &self.end.src
    }

    pub fn dim(&self) -> usize {
        self.v().dim()
    }

    /// `L_x` on `V`, the `t^x` coefficient of `α`.
    pub fn lie_derivative(&self, x: usize) -> &GradedMap {
        &self.lie[x]
    }

    /// `D = d_W⊗1 + 1⊗δ_V + α` on `Wg(s) ⊗ V`, basis index `i_a · dim V + v`.
    pub fn total_differential(&self) -> GradedMap {
        let sp = Arc::new(self.end.source_tensor_space());
        let n = self.dim();
        let a = &self.end.a;
        let cols = crate::par::map_range(sp.dim(), |j| {
            let (ia, v) = (j / n, j % n);
            let mut col = SVec::new();
            for (k, e) in a.diff_map().col(ia) {
                add_term_owned(&mut col, k * n + v, e.clone());
            }
            let s = sign(a.degree(ia));
            for (k, e) in self.v().d.col(v) {
                add_term_owned(&mut col, ia * n + k, &s * e);
            }
            add_scaled(&mut col, &Q::one(), &self.end.act(&self.alpha, &unit(j)));
            col
        });
        GradedMap::from_cols(sp.clone(), sp, 1, cols).expect("D has degree one")
    }

    fn same_weil(&self, other: &BasicObject) -> bool {
        self.w.s == other.w.s && *self.w.g() == *other.w.g()
    }
}

/// `i_x` applied to the algebra factor of an element of `A ⊗ Hom(V, V')`.
pub fn contract_elem(a: &GDGAlgebra, th: &TensorHom, x: usize, elem: &SVec) -> SVec {
    let op = a.contraction(x);
    let mut out = SVec::new();
    for (i, v) in elem {
        let (ia, r, c) = th.split(*i);
        for (k, e) in op.col(ia) {
            add_term_owned(&mut out, th.index(*k, r, c), v * e);
        }
    }
    out
}

/// `(L_x⊗1 + 1⊗L_x)` on `A ⊗ Hom(V, V')`, with `L_x f = L'_x∘f − f∘L_x` on `Hom`.
pub fn lie_elem(a: &GDGAlgebra, th: &TensorHom, l_src: &GradedMap, l_tgt: &GradedMap, x: usize, elem: &SVec) -> SVec {
    let op = a.lie_derivative(x);
    let n = th.src.dim();
    let mut out = SVec::new();
    for (i, v) in elem {
        let (ia, r, c) = th.split(*i);
        for (k, e) in op.col(ia) {
            add_term_owned(&mut out, th.index(*k, r, c), v * e);
        }
        for (k, e) in l_tgt.col(r) {
            add_term_owned(&mut out, th.index(ia, *k, c), v * e);
        }
        for j in 0..n {
            let e = l_src.entry(c, j);
            if !e.is_zero() {
                add_term_owned(&mut out, th.index(ia, r, j), -(v * e));
            }
        }
    }
    out
}

fn extract_lie(w: &WeilAlgebra, end: &TensorHom, alpha: &SVec) -> Vec<GradedMap> {
    let sp = end.src.space.clone();
    (0..w.g().dim())
        .map(|x| {
            let tx = w.t_basis(x);
            let mut cols = vec![SVec::new(); sp.dim()];
            for (i, v) in alpha {
                let (ia, r, c) = end.split(*i);
                if ia == tx {
                    add_term_owned(&mut cols[c], r, v.clone());
                }
            }
            GradedMap::from_cols(sp.clone(), sp.clone(), 0, cols).expect("t-linear part of α has degree zero")
        })
        .collect()
}

fn identity_times(end: &TensorHom, f: &GradedMap) -> SVec {
    let u = end.a.unit();
    f.nonzero_entries().into_iter().map(|(r, c, v)| (end.index(u, r, c), v)).collect()
}

/// Common kernel on a block of basis vectors. `images[k][o]` is the image of
/// `block[k]` under operator `o`. Returned in ambient coordinates.
fn block_kernel(block: &[usize], images: &[Vec<SVec>]) -> Vec<SVec> {
    let mut rows: HashMap<(usize, usize), usize> = HashMap::new();
    let cols: Vec<SVec> = images
        .iter()
        .map(|ops| {
            let mut col = SVec::new();
            for (o, img) in ops.iter().enumerate() {
                for (r, v) in img {
                    let next = rows.len();
                    let local = *rows.entry((o, *r)).or_insert(next);
                    col.insert(local, v.clone());
                }
            }
            col
        })
        .collect();
    kernel(&cols).into_iter().map(|k| k.into_iter().map(|(i, c)| (block[i], c)).collect()).collect()
}

/// Basic subspace blocked by a key that all operators respect
/// (total degree, algebra degree, `w`-count). `op_images(j)` lists the images
/// of basis vector `j` under every operator. Returns blocks in key order.
fn basic_blocks<F>(keys: &[(i64, i64, usize)], op_images: F) -> Vec<((i64, i64, usize), Vec<SVec>)>
where
    F: Fn(usize) -> Vec<SVec> + Sync,
{
    let mut groups: BTreeMap<(i64, i64, usize), Vec<usize>> = BTreeMap::new();
    for (j, k) in keys.iter().enumerate() {
        groups.entry(*k).or_default().push(j);
    }
    let groups: Vec<((i64, i64, usize), Vec<usize>)> = groups.into_iter().collect();
    crate::par::map(&groups, |(key, block)| {
        let images: Vec<Vec<SVec>> = block.iter().map(|&j| op_images(j)).collect();
        (*key, block_kernel(block, &images))
    })
}

fn tensor_keys(
    th: &TensorHom,
    wgdeg: impl Fn(usize) -> i64,
    wcount: impl Fn(usize) -> usize,
) -> Vec<(i64, i64, usize)> {
    (0..th.dim())
        .map(|i| {
            let (ia, _, _) = th.split(i);
            (th.degree(i), wgdeg(ia), wcount(ia))
        })
        .collect()
}

/// Verify MC, the basic identities, `D² = 0` and basic-subspace stability.
pub fn check_object(w: Arc<WeilAlgebra>, v: Arc<CochainComplex>, alpha: SVec) -> Result<BasicObject> {
    let end = TensorHom::new(weil_cdga(&w), v.clone(), v);
    if let Some(i) = alpha.keys().find(|i| **i >= end.dim()) {
        return input(format!("index {i} out of range for Wg ⊗ End(V)"));
    }
    let mc_residual = end.mc_residual(&alpha)?;
    let lie = extract_lie(&w, &end, &alpha);
    let gdg = &w.gdg;
    let mut basic_violations = Vec::new();
    for x in 0..w.g().dim() {
        if contract_elem(gdg, &end, x, &alpha) != identity_times(&end, &lie[x]) {
            basic_violations.push(BasicViolation::Contraction { x: w.g().label(x).into() });
        }
        if !lie_elem(gdg, &end, &lie[x], &lie[x], x, &alpha).is_empty() {
            basic_violations.push(BasicViolation::Invariance { x: w.g().label(x).into() });
        }
    }
    let mut obj = BasicObject {
        w,
        end,
        alpha,
        lie,
        report: ObjectReport { mc_residual, basic_violations, d_squared_zero: false, preserves_basic: false },
    };
    let d = obj.total_differential();
    obj.report.d_squared_zero = d.compose(&d).is_zero();
    obj.report.preserves_basic = tensor_basic_preserved(&obj, &d);
    Ok(obj)
}

/// Basic subspace of `Wg(s) ⊗ V` (index `i_a · dim V + v`) and whether `D` preserves it.
fn tensor_basic_preserved(obj: &BasicObject, d: &GradedMap) -> bool {
    let n = obj.dim();
    let w = &obj.w;
    let gdg = &w.gdg;
    let vs = &obj.v().space;
    let keys: Vec<(i64, i64, usize)> = (0..w.alg().dim() * n)
        .map(|j| {
            let (ia, v) = (j / n, j % n);
            (w.alg().degree(ia) + vs.degree(v), w.alg().degree(ia), w.alg().count_degree(ia, 2))
        })
        .collect();
    let apply = |x: usize, vec: &SVec| -> Vec<SVec> {
        let mut ic = SVec::new();
        let mut lc = SVec::new();
        for (j, c) in vec {
            let (ia, v) = (j / n, j % n);
            for (k, e) in gdg.contraction(x).col(ia) {
                add_term_owned(&mut ic, k * n + v, c * e);
            }
            for (k, e) in gdg.lie_derivative(x).col(ia) {
                add_term_owned(&mut lc, k * n + v, c * e);
            }
            for (k, e) in obj.lie[x].col(v) {
                add_term_owned(&mut lc, ia * n + k, c * e);
            }
        }
        vec![ic, lc]
    };
    let ngen = w.g().dim();
    let blocks = basic_blocks(&keys, |j| (0..ngen).flat_map(|x| apply(x, &unit(j))).collect());
    let all: Vec<SVec> = blocks.into_iter().flat_map(|(_, b)| b).collect();
    crate::par::map(&all, |b| {
        let db = d.apply(b);
        (0..ngen).all(|x| apply(x, &db).iter().all(|v| v.is_empty()))
    })
    .into_iter()
    .all(|ok| ok)
}

/// Build an object, rejecting `α` unless every check passes.
pub fn make_object(w: Arc<WeilAlgebra>, v: Arc<CochainComplex>, alpha: SVec) -> Result<BasicObject> {
    let obj = check_object(w, v, alpha)?;
    if obj.report.is_valid() {
        Ok(obj)
    } else {
        Err(Error::Verification(obj.report.summary()))
    }
}

/// A complex with `α = 0`: every operator acts trivially.
pub fn constant_object(w: Arc<WeilAlgebra>, v: Arc<CochainComplex>) -> Result<BasicObject> {
    make_object(w, v, SVec::new())
}

/// One-dimensional complex in degree 0 with `α = 0`.
pub fn trivial_object(w: Arc<WeilAlgebra>) -> BasicObject {
    let sp = Arc::new(GradedSpace::new(vec![("1".into(), 0)]).expect("single label"));
    constant_object(w, Arc::new(CochainComplex::trivial(sp))).expect("the constant system is basic")
}

/// `α = t^a ⊗ L_a − w^a ⊗ i_a` for a g-DG space `V` with contractions `i_a`
/// and Lie derivatives `L_a`.
pub fn from_g_dg_space(
    w: Arc<WeilAlgebra>,
    v: Arc<CochainComplex>,
    contractions: &[GradedMap],
    lie_derivatives: &[GradedMap],
) -> Result<BasicObject> {
    let n = w.g().dim();
    if contractions.len() != n || lie_derivatives.len() != n {
        return input("one contraction and one Lie derivative per basis vector of g");
    }
    if contractions.iter().any(|m| m.degree != -1) || lie_derivatives.iter().any(|m| m.degree != 0) {
        return input("contractions have degree −1 and Lie derivatives degree 0");
    }
    let end = TensorHom::new(weil_cdga(&w), v.clone(), v.clone());
    let mut alpha = SVec::new();
    for a in 0..n {
        add_scaled(&mut alpha, &Q::one(), &end.elem(&w.t(a), &lie_derivatives[a].nonzero_entries()));
        add_scaled(&mut alpha, &-Q::one(), &end.elem(&w.w(a), &contractions[a].nonzero_entries()));
    }
    make_object(w, v, alpha)
}

/// `α_CE = t^a ⊗ L_a − w^a ⊗ i_a` on `V = CE(g)`.
pub fn gauss_manin(g: &LieAlgebra, s: u32) -> Result<BasicObject> {
    if s < 2 {
        return input("the Gauss–Manin object needs s ≥ 2");
    }
    let w = Arc::new(weil_algebra(g, s)?);
    gauss_manin_over(w)
}

/// The Gauss–Manin object over a given Weil algebra.
pub fn gauss_manin_over(w: Arc<WeilAlgebra>) -> Result<BasicObject> {
    let g = w.g().clone();
    let ce = ce_algebra(&g)?;
    let v = Arc::new(CochainComplex::new(ce.alg.space().clone(), ce.d().clone())?);
    let i: Vec<GradedMap> = (0..g.dim()).map(|a| ce.contraction(a).clone()).collect();
    let l: Vec<GradedMap> = (0..g.dim()).map(|a| ce.lie_derivative(a).clone()).collect();
    from_g_dg_space(w, v, &i, &l)
}

/// The cone of the identity of the adjoint representation: `g` in degrees
/// −1 and 0, `δ = id`, `L_a = ad_a` on both copies, `i_a = ad_a` from degree 0
/// to degree −1.
pub fn adjoint_cone(w: Arc<WeilAlgebra>) -> Result<BasicObject> {
    let g = w.g().clone();
    let n = g.dim();
    let mut basis: Vec<(String, i64)> = (0..n).map(|a| (format!("↓{}", g.label(a)), -1)).collect();
    basis.extend((0..n).map(|a| (g.label(a).to_string(), 0)));
    let sp = Arc::new(GradedSpace::new(basis)?);
    let mut dcols = vec![SVec::new(); 2 * n];
    for (a, col) in dcols.iter_mut().enumerate().take(n) {
        col.insert(n + a, Q::one());
    }
    let v = Arc::new(CochainComplex::new(sp.clone(), GradedMap::from_cols(sp.clone(), sp.clone(), 1, dcols)?)?);
    let mut ics = Vec::new();
    let mut lcs = Vec::new();
    for a in 0..n {
        let mut icols = vec![SVec::new(); 2 * n];
        let mut lcols = vec![SVec::new(); 2 * n];
        for b in 0..n {
            for (c, f) in g.bracket_basis(a, b) {
                add_term_owned(&mut icols[n + b], *c, f.clone());
                add_term_owned(&mut lcols[b], *c, f.clone());
                add_term_owned(&mut lcols[n + b], n + c, f.clone());
            }
        }
        ics.push(GradedMap::from_cols(sp.clone(), sp.clone(), -1, icols)?);
        lcs.push(GradedMap::from_cols(sp.clone(), sp.clone(), 0, lcols)?);
    }
    from_g_dg_space(w, v, &ics, &lcs)
}

/// A morphism: an element of `Wg(s) ⊗ Hom(V, V')`.
#[derive(Clone, Debug)]
pub struct Morphism {
    pub source: Arc<BasicObject>,
    pub target: Arc<BasicObject>,
    pub value: SVec,
}

fn hom_tensor(src: &BasicObject, tgt: &BasicObject) -> TensorHom {
    TensorHom::new(src.end.a.clone(), src.v().clone(), tgt.v().clone())
}

/// `∂φ = dφ + α'φ − (−1)^{|φ|} φα`, term by term.
fn partial_raw(th: &TensorHom, src: &BasicObject, tgt: &BasicObject, x: &SVec) -> SVec {
    let mut r = th.d(x);
    add_scaled(&mut r, &Q::one(), &tgt.end.mul(&tgt.alpha, th, x, th));
    let (even, odd): (SVec, SVec) = x.iter().map(|(i, c)| (*i, c.clone())).partition(|(i, _)| th.degree(*i) % 2 == 0);
    add_scaled(&mut r, &-Q::one(), &th.mul(&even, &src.end, &src.alpha, th));
    add_scaled(&mut r, &Q::one(), &th.mul(&odd, &src.end, &src.alpha, th));
    r
}

impl Morphism {
    pub fn new(source: Arc<BasicObject>, target: Arc<BasicObject>, value: SVec) -> Result<Self> {
        if !source.same_weil(&target) {
            return input("objects live over different Weil algebras");
        }
        let dim = source.end.a.dim() * source.dim() * target.dim();
        if value.keys().any(|i| *i >= dim) {
            return input("morphism index out of range");
        }
        Ok(Morphism { source, target, value })
    }

    pub fn identity(obj: &Arc<BasicObject>) -> Self {
        Morphism { source: obj.clone(), target: obj.clone(), value: obj.end.identity() }
    }

    pub fn tensor(&self) -> TensorHom {
        hom_tensor(&self.source, &self.target)
    }

    pub fn degree(&self) -> Option<i64> {
        let th = self.tensor();
        let mut it = self.value.keys().map(|i| th.degree(*i));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn partial(&self) -> Morphism {
        let th = self.tensor();
        let value = partial_raw(&th, &self.source, &self.target, &self.value);
        Morphism { source: self.source.clone(), target: self.target.clone(), value }
    }

    pub fn is_basic(&self) -> bool {
        let th = self.tensor();
        let gdg = &self.source.w.gdg;
        (0..self.source.w.g().dim()).all(|x| {
            contract_elem(gdg, &th, x, &self.value).is_empty()
                && lie_elem(gdg, &th, &self.source.lie[x], &self.target.lie[x], x, &self.value).is_empty()
        })
    }
}

/// `ψ ∘ φ`: algebra product on `Wg` and composition on `Hom`, with Koszul signs.
pub fn compose(psi: &Morphism, phi: &Morphism) -> Result<Morphism> {
    if !Arc::ptr_eq(&psi.source, &phi.target) {
        return input("composition of morphisms with mismatched objects");
    }
    let left = psi.tensor();
    let right = phi.tensor();
    let out = hom_tensor(&phi.source, &psi.target);
    let value = left.mul(&psi.value, &right, &phi.value, &out);
    Ok(Morphism { source: phi.source.clone(), target: psi.target.clone(), value })
}

/// `(Wg(s) ⊗ Hom(V, V'))_bas` with `∂_{D,D'}`, in a basis of basic elements.
#[derive(Clone, Debug)]
pub struct HomComplex {
    pub source: Arc<BasicObject>,
    pub target: Arc<BasicObject>,
    pub tensor: TensorHom,
    basis: Vec<SVec>,
    levels: Vec<i64>,
    pub complex: CochainComplex,
    /// Degrees whose cohomology agrees with the untruncated Weil algebra.
    pub window: (i64, i64),
}

pub fn hom_complex(source: &Arc<BasicObject>, target: &Arc<BasicObject>) -> Result<HomComplex> {
    if !source.same_weil(target) {
        return input("objects live over different Weil algebras");
    }
    let th = hom_tensor(source, target);
    let w = &source.w;
    let gdg = &w.gdg;
    let alg = w.alg();
    let keys = tensor_keys(&th, |ia| alg.degree(ia), |ia| alg.count_degree(ia, 2));
    let ngen = w.g().dim();
    let blocks = basic_blocks(&keys, |j| {
        let e = unit(j);
        (0..ngen)
            .flat_map(|x| [contract_elem(gdg, &th, x, &e), lie_elem(gdg, &th, &source.lie[x], &target.lie[x], x, &e)])
            .collect()
    });
    let mut by_degree: BTreeMap<i64, Vec<(i64, SVec)>> = BTreeMap::new();
    for ((deg, wdeg, _), vecs) in blocks {
        by_degree.entry(deg).or_default().extend(vecs.into_iter().map(|v| (wdeg, v)));
    }
    let mut basis = Vec::new();
    let mut levels = Vec::new();
    let mut labels = Vec::new();
    let mut position: BTreeMap<i64, usize> = BTreeMap::new();
    for (deg, vecs) in &by_degree {
        position.insert(*deg, basis.len());
        for (j, (wdeg, v)) in vecs.iter().enumerate() {
            labels.push((format!("φ{deg}.{j}"), *deg));
            levels.push(*wdeg);
            basis.push(v.clone());
        }
    }
    let echelons: BTreeMap<i64, Echelon> = by_degree
        .iter()
        .map(|(deg, vecs)| {
            let mut e = Echelon::tracked();
            for (_, v) in vecs {
                e.insert(v);
            }
            (*deg, e)
        })
        .collect();
    let degrees: Vec<i64> = labels.iter().map(|(_, d)| *d).collect();
    let cols: Vec<Option<SVec>> = crate::par::map_range(basis.len(), |j| {
        let img = partial_raw(&th, source, target, &basis[j]);
        if img.is_empty() {
            return Some(SVec::new());
        }
        let k = degrees[j] + 1;
        let coords = echelons.get(&k)?.solve(&img)?;
        Some(coords.into_iter().map(|(i, c)| (position[&k] + i, c)).collect())
    });
    let Some(cols) = cols.into_iter().collect::<Option<Vec<SVec>>>() else {
        return structural("∂ leaves the basic subspace");
    };
    let space = Arc::new(GradedSpace::new(labels)?);
    let d = GradedMap::from_cols(space.clone(), space.clone(), 1, cols)?;
    let complex = CochainComplex::new(space, d)?;
    let hmin = th.hom_space().degree_range().map(|r| r.0).unwrap_or(0);
    let window = (hmin, w.safe_max_degree() + hmin);
    Ok(HomComplex { source: source.clone(), target: target.clone(), tensor: th, basis, levels, complex, window })
}

impl HomComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis vectors in `Wg(s) ⊗ Hom(V, V')` coordinates.
    pub fn basis(&self) -> &[SVec] {
        &self.basis
    }

    /// Basis indices in degree `k`.
    pub fn in_degree(&self, k: i64) -> Vec<usize> {
        self.complex.space.in_degree(k)
    }

    /// The ambient element with the given basis coordinates.
    pub fn element(&self, coords: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, c) in coords {
            add_scaled(&mut out, c, &self.basis[*i]);
        }
        out
    }

    pub fn morphism(&self, coords: &SVec) -> Morphism {
        Morphism { source: self.source.clone(), target: self.target.clone(), value: self.element(coords) }
    }

    /// `∂_{D,D'}` on an ambient element.
    pub fn partial(&self, x: &SVec) -> SVec {
        partial_raw(&self.tensor, &self.source, &self.target, x)
    }

    pub fn is_basic(&self, x: &SVec) -> bool {
        let m = Morphism { source: self.source.clone(), target: self.target.clone(), value: x.clone() };
        m.is_basic()
    }

    /// Filtration by the Weil degree of the algebra factor.
    pub fn filtered(&self) -> FilteredComplex {
        FilteredComplex::new(self.complex.clone(), self.levels.clone()).expect("∂ does not lower the Weil degree")
    }

    /// `dim H^k` for `k` in the safe window.
    pub fn cohomology_window(&self) -> BTreeMap<i64, usize> {
        let ks: Vec<i64> = (self.window.0..=self.window.1).collect();
        let dims = crate::par::map(&ks, |k| self.complex.cohomology_in_degree(*k).0);
        ks.into_iter().zip(dims).collect()
    }
}

/// `V ⋊_γ ℝ`: `V ⊕ ℝ` with the line in degree `1 − l` and MC element `α_V + ι(γ)`,
/// where `ι(x) = (−1)^{(1−l)|x|} σ x` composes with the shift `σ: ℝ → ℝ[1−l]`.
pub fn extension(hom: &HomComplex, gamma: &SVec) -> Result<BasicObject> {
    let t = &hom.target;
    if t.dim() != 1 || t.v().space.degree(0) != 0 || !t.alpha.is_empty() {
        return input("extensions are by morphisms into the trivial object");
    }
    let l = match hom.tensor.space().homogeneous_degree(gamma) {
        None => 0,
        Some(Ok(l)) => l,
        Some(Err(())) => return input("γ is not homogeneous"),
    };
    if !hom.is_basic(gamma) {
        return input("γ is not basic");
    }
    if !hom.partial(gamma).is_empty() {
        return input("γ is not closed");
    }
    let (ext, ext_end) = extended_space(&hom.source, 1 - l)?;
    let mut alpha = reindex_end(&hom.source, &ext_end, &hom.source.alpha);
    add_scaled(&mut alpha, &Q::one(), &line_transport(hom, &ext_end, gamma, 1 - l));
    make_object(hom.source.w.clone(), ext, alpha)
}

fn extended_space(v: &BasicObject, m: i64) -> Result<(Arc<CochainComplex>, TensorHom)> {
    let vs = &v.v().space;
    let mut basis: Vec<(String, i64)> = vs.labels().iter().cloned().zip(vs.degrees().iter().copied()).collect();
    basis.push((format!("ℝ[{}]", -m), m));
    let sp = Arc::new(GradedSpace::new(basis)?);
    let n = v.dim();
    let mut cols: Vec<SVec> = v.v().d.cols().to_vec();
    cols.push(SVec::new());
    let d = GradedMap::from_cols(sp.clone(), sp.clone(), 1, cols)?;
    debug_assert_eq!(sp.dim(), n + 1);
    let c = Arc::new(CochainComplex::new(sp, d)?);
    let end = TensorHom::new(v.end.a.clone(), c.clone(), c.clone());
    Ok((c, end))
}

fn reindex_end(v: &BasicObject, ext: &TensorHom, x: &SVec) -> SVec {
    x.iter()
        .map(|(i, c)| {
            let (ia, r, cc) = v.end.split(*i);
            (ext.index(ia, r, cc), c.clone())
        })
        .collect()
}

/// `ι(x)` for `x ∈ Wg ⊗ Hom(V, ℝ)`, placed in the `V → line` block of `ext`.
fn line_transport(hom: &HomComplex, ext: &TensorHom, x: &SVec, m: i64) -> SVec {
    let line = hom.source.dim();
    x.iter()
        .map(|(i, c)| {
            let (ia, _, col) = hom.tensor.split(*i);
            let s = sign(m * hom.tensor.degree(*i));
            (ext.index(ia, line, col), s * c)
        })
        .collect()
}

/// The map `id − ι(η)` from `V ⋊_γ ℝ` to `V ⋊_{γ+∂η} ℝ`, as an element of
/// `Wg ⊗ End(V ⊕ ℝ)`. `l` is the degree of `γ`.
pub fn gauge_map(hom: &HomComplex, ext: &BasicObject, eta: &SVec, l: i64) -> SVec {
    let mut out = ext.end.identity();
    add_scaled(&mut out, &-Q::one(), &line_transport(hom, &ext.end, eta, 1 - l));
    out
}

/// Whether a degree-0 element `f` satisfies `D'∘f = f∘D`.
pub fn intertwines(from: &BasicObject, to: &BasicObject, f: &SVec) -> bool {
    let th = hom_tensor(from, to);
    partial_raw(&th, from, to, f).is_empty()
}

/// The image of an object under the Chern–Weil functor for a connection on `A`.
#[derive(Clone, Debug)]
pub struct CwObject {
    pub source: Arc<BasicObject>,
    /// `A ⊗ End(V)`
    pub end: TensorHom,
    pub alpha: SVec,
    pub mc: bool,
    /// `[α_θ, i_x⊗1] = 1⊗L_x` and `[α_θ, L_x⊗1 + 1⊗L_x] = 0` in `A ⊗ End(V)`.
    pub basic_violations: Vec<BasicViolation>,
}

/// `c_θ ⊗ 1` on objects and morphisms.
#[derive(Clone, Debug)]
pub struct ChernWeilFunctor {
    pub ch: CharacteristicHom,
    pub w: Arc<WeilAlgebra>,
    a: Arc<dyn Cdga>,
}

impl ChernWeilFunctor {
    pub fn new(theta: &AlgebraicConnection, w: Arc<WeilAlgebra>) -> Result<Self> {
        let ch = characteristic_hom(theta, &w)?;
        let a: Arc<dyn Cdga> = Arc::new(theta.target.alg.clone());
        Ok(ChernWeilFunctor { ch, w, a })
    }

    pub fn target(&self) -> &GDGAlgebra {
        &self.ch.theta.target
    }

    fn push(&self, from: &TensorHom, to: &TensorHom, x: &SVec) -> SVec {
        let mut out = SVec::new();
        for (i, v) in x {
            let (ia, r, c) = from.split(*i);
            for (k, e) in self.ch.map.col(ia) {
                add_term_owned(&mut out, to.index(*k, r, c), v * e);
            }
        }
        out
    }

    pub fn object(&self, v: &Arc<BasicObject>) -> Result<CwObject> {
        if *v.w.g() != *self.w.g() || v.w.s != self.w.s {
            return input("object lives over a different Weil algebra");
        }
        let end = TensorHom::new(self.a.clone(), v.v().clone(), v.v().clone());
        let alpha = self.push(&v.end, &end, &v.alpha);
        let mc = end.mc_residual(&alpha)?.is_empty();
        let a = self.target();
        let mut basic_violations = Vec::new();
        for x in 0..self.w.g().dim() {
            if contract_elem(a, &end, x, &alpha) != identity_times(&end, &v.lie[x]) {
                basic_violations.push(BasicViolation::Contraction { x: self.w.g().label(x).into() });
            }
            if !lie_elem(a, &end, &v.lie[x], &v.lie[x], x, &alpha).is_empty() {
                basic_violations.push(BasicViolation::Invariance { x: self.w.g().label(x).into() });
            }
        }
        Ok(CwObject { source: v.clone(), end, alpha, mc, basic_violations })
    }

    /// `A ⊗ Hom(V, V')` for a pair of image objects.
    pub fn hom_tensor(&self, src: &CwObject, tgt: &CwObject) -> TensorHom {
        TensorHom::new(self.a.clone(), src.source.v().clone(), tgt.source.v().clone())
    }

    /// `(c_θ ⊗ 1) φ`
    pub fn morphism(&self, phi: &Morphism, out: &TensorHom) -> SVec {
        self.push(&phi.tensor(), out, &phi.value)
    }

    /// `∂_{D_θ, D'_θ}` on `A ⊗ Hom(V, V')`.
    pub fn partial(&self, src: &CwObject, tgt: &CwObject, th: &TensorHom, x: &SVec) -> SVec {
        let mut r = th.d(x);
        add_scaled(&mut r, &Q::one(), &tgt.end.mul(&tgt.alpha, th, x, th));
        let (even, odd): (SVec, SVec) =
            x.iter().map(|(i, c)| (*i, c.clone())).partition(|(i, _)| th.degree(*i) % 2 == 0);
        add_scaled(&mut r, &-Q::one(), &th.mul(&even, &src.end, &src.alpha, th));
        add_scaled(&mut r, &Q::one(), &th.mul(&odd, &src.end, &src.alpha, th));
        r
    }

    /// Whether `x ∈ A ⊗ Hom(V, V')` is annihilated by `i_x⊗1` and `L_x⊗1 + 1⊗L_x`.
    pub fn is_basic(&self, src: &CwObject, tgt: &CwObject, th: &TensorHom, x: &SVec) -> bool {
        let a = self.target();
        (0..self.w.g().dim()).all(|g| {
            contract_elem(a, th, g, x).is_empty()
                && lie_elem(a, th, &src.source.lie[g], &tgt.source.lie[g], g, x).is_empty()
        })
    }
}

/// `(c_θ ⊗ 1) α_V` for the characteristic homomorphism of `θ`.
pub fn cw_functor(theta: &AlgebraicConnection, w: Arc<WeilAlgebra>, v: &Arc<BasicObject>) -> Result<CwObject> {
    ChernWeilFunctor::new(theta, w)?.object(v)
}
