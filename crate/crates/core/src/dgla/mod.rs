//! DG Lie algebras: structure-constant tables, the endomorphism DGLA of a
//! complex, tensor products with commutative DG algebras, the Cartan DGLA
//! `Tg`, and Maurer–Cartan elements.

pub mod algebra;
pub mod tensor;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::CochainComplex;
use crate::error::{input, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::lie::LieAlgebra;
use crate::linalg::{add_scaled, add_term_owned, unit, SVec};
use crate::scalar::{qf, sign, Q};

pub use algebra::{Cdga, GDGAlgebra, Generator, MonomialAlgebra};
pub use tensor::{TensorDgla, TensorHom};

/// A DG Lie algebra with a finite basis, possibly evaluated lazily.
pub trait Dgla: Send + Sync {
    fn space(&self) -> &Arc<GradedSpace>;
    fn bracket_basis(&self, i: usize, j: usize) -> SVec;
    fn diff_basis(&self, i: usize) -> SVec;

    fn dim(&self) -> usize {
        self.space().dim()
    }

    fn degree(&self, i: usize) -> i64 {
        self.space().degree(i)
    }

    fn bracket(&self, x: &SVec, y: &SVec) -> SVec {
        let mut r = SVec::new();
        for (i, a) in x {
            for (j, b) in y {
                add_scaled(&mut r, &(a * b), &self.bracket_basis(*i, *j));
            }
        }
        r
    }

    fn diff(&self, x: &SVec) -> SVec {
        let mut r = SVec::new();
        for (i, a) in x {
            add_scaled(&mut r, a, &self.diff_basis(*i));
        }
        r
    }

    /// Pairs whose brackets were supplied inconsistently in both orders.
    fn input_conflicts(&self) -> Vec<(usize, usize)> {
        Vec::new()
    }
}

/// Structure constants for pairs `i ≤ j`; the other order follows from
/// graded antisymmetry.
#[derive(Clone, Debug)]
pub struct DGLieAlgebra {
    space: Arc<GradedSpace>,
    table: BTreeMap<(usize, usize), SVec>,
    d: GradedMap,
    conflicts: Vec<(usize, usize)>,
}

impl DGLieAlgebra {
    /// Brackets `[b_i, b_j] = v` may be listed in either order. Pairs listed
    /// in both orders inconsistently, and nonzero `[x, x]` for even `x`, are
    /// kept and reported by [`verify_dgla`] as antisymmetry failures.
    pub fn new(space: Arc<GradedSpace>, brackets: &[(usize, usize, SVec)], d: GradedMap) -> Result<Self> {
        if d.degree != 1 || *d.source != *space || *d.target != *space {
            return input("differential must be a degree 1 endomorphism of the space");
        }
        let n = space.dim();
        let mut given: BTreeMap<(usize, usize), SVec> = BTreeMap::new();
        for (i, j, v) in brackets {
            if *i >= n || *j >= n {
                return input("bracket index out of range");
            }
            let want = space.degree(*i) + space.degree(*j);
            if v.keys().any(|k| space.degree(*k) != want) {
                return input(format!("[{}, {}] has the wrong degree", space.label(*i), space.label(*j)));
            }
            let e = given.entry((*i, *j)).or_default();
            add_scaled(e, &Q::one(), v);
        }
        let mut table = BTreeMap::new();
        let mut conflicts = Vec::new();
        for (&(i, j), v) in &given {
            let eps = -sign(space.degree(i) * space.degree(j));
            if i < j {
                if let Some(w) = given.get(&(j, i)) {
                    if crate::linalg::scaled(w, &eps) != *v {
                        conflicts.push((i, j));
                    }
                }
                if !v.is_empty() {
                    table.insert((i, j), v.clone());
                }
            } else if i > j {
                if !given.contains_key(&(j, i)) && !v.is_empty() {
                    table.insert((j, i), crate::linalg::scaled(v, &eps));
                }
            } else {
                if space.degree(i) % 2 == 0 && !v.is_empty() {
                    conflicts.push((i, i));
                }
                if !v.is_empty() {
                    table.insert((i, i), v.clone());
                }
            }
        }
        Ok(DGLieAlgebra { space, table, d, conflicts })
    }

    /// A Lie algebra in degree 0 with zero differential.
    pub fn from_lie(g: &LieAlgebra) -> Self {
        let space = g.space();
        let mut brackets = Vec::new();
        for a in 0..g.dim() {
            for b in a + 1..g.dim() {
                brackets.push((a, b, g.bracket_basis(a, b).clone()));
            }
        }
        let d = GradedMap::zero(space.clone(), space.clone(), 1);
        DGLieAlgebra::new(space, &brackets, d).unwrap()
    }

    pub fn differential(&self) -> &GradedMap {
        &self.d
    }
}

impl Dgla for DGLieAlgebra {
    fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    fn bracket_basis(&self, i: usize, j: usize) -> SVec {
        if i <= j {
            self.table.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            let eps = -sign(self.space.degree(i) * self.space.degree(j));
            self.table.get(&(j, i)).map(|v| crate::linalg::scaled(v, &eps)).unwrap_or_default()
        }
    }

    fn diff_basis(&self, i: usize) -> SVec {
        self.d.col(i).clone()
    }

    fn input_conflicts(&self) -> Vec<(usize, usize)> {
        self.conflicts.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DglaViolation {
    Antisymmetry(String, String),
    Jacobi(String, String, String),
    Leibniz(String, String),
    DSquared(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglaReport {
    pub violations: Vec<DglaViolation>,
}

impl DglaReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of antisymmetry, Jacobi, Leibniz and `d² = 0` on basis elements.
pub fn verify_dgla(l: &dyn Dgla) -> DglaReport {
    let n = l.dim();
    let sp = l.space();
    let lbl = |i: usize| sp.label(i).to_string();
    let deg = |i: usize| sp.degree(i);
    let per_i = crate::par::map_range(n, |i| {
        let mut v = Vec::new();
        let ei = unit(i);
        if !l.diff(&l.diff_basis(i)).is_empty() {
            v.push(DglaViolation::DSquared(lbl(i)));
        }
        for j in i..n {
            let ej = unit(j);
            let bij = l.bracket_basis(i, j);
            let bji = l.bracket_basis(j, i);
            if crate::linalg::scaled(&bji, &-sign(deg(i) * deg(j))) != bij
                || (i == j && deg(i) % 2 == 0 && !bij.is_empty())
            {
                v.push(DglaViolation::Antisymmetry(lbl(i), lbl(j)));
            }
            // d[x,y] = [dx,y] + (−1)^{|x|}[x,dy]
            let lhs = l.diff(&bij);
            let mut rhs = l.bracket(&l.diff_basis(i), &ej);
            add_scaled(&mut rhs, &sign(deg(i)), &l.bracket(&ei, &l.diff_basis(j)));
            if lhs != rhs {
                v.push(DglaViolation::Leibniz(lbl(i), lbl(j)));
            }
            for k in j..n {
                let ek = unit(k);
                // [x,[y,z]] = [[x,y],z] + (−1)^{|x||y|}[y,[x,z]]
                let lhs = l.bracket(&ei, &l.bracket_basis(j, k));
                let mut rhs = l.bracket(&bij, &ek);
                add_scaled(&mut rhs, &sign(deg(i) * deg(j)), &l.bracket(&ej, &l.bracket_basis(i, k)));
                if lhs != rhs {
                    v.push(DglaViolation::Jacobi(lbl(i), lbl(j), lbl(k)));
                }
            }
        }
        v
    });
    let mut violations: Vec<DglaViolation> =
        l.input_conflicts().into_iter().map(|(i, j)| DglaViolation::Antisymmetry(lbl(i), lbl(j))).collect();
    violations.extend(per_i.into_iter().flatten());
    violations.dedup();
    DglaReport { violations }
}

/// Label of the elementary map `e_c ↦ e_r` in `Hom(V, V')`.
pub fn hom_label(target: &str, source: &str) -> String {
    format!("{target}<-{source}")
}

/// Basis of `Hom(V, V')`: elementary matrices, index `r * dim V + c`.
pub fn hom_space(v: &GradedSpace, w: &GradedSpace) -> GradedSpace {
    let mut basis = Vec::with_capacity(v.dim() * w.dim());
    for r in 0..w.dim() {
        for c in 0..v.dim() {
            basis.push((hom_label(w.label(r), v.label(c)), w.degree(r) - v.degree(c)));
        }
    }
    GradedSpace::new(basis).expect("hom labels are unique")
}

/// `End(V)` with the graded commutator and `d f = δ∘f − (−1)^{|f|} f∘δ`.
pub fn end_dgla(v: &CochainComplex) -> DGLieAlgebra {
    let n = v.dim();
    let space = Arc::new(hom_space(&v.space, &v.space));
    let deg = |i: usize| space.degree(i);
    let mut brackets = Vec::new();
    for i in 0..n * n {
        let (r1, c1) = (i / n, i % n);
        for j in i..n * n {
            let (r2, c2) = (j / n, j % n);
            let mut b = SVec::new();
            if c1 == r2 {
                add_term_owned(&mut b, r1 * n + c2, Q::one());
            }
            if c2 == r1 {
                add_term_owned(&mut b, r2 * n + c1, -sign(deg(i) * deg(j)));
            }
            if !b.is_empty() {
                brackets.push((i, j, b));
            }
        }
    }
    let delta = &v.d;
    let cols = (0..n * n)
        .map(|i| {
            let (r, c) = (i / n, i % n);
            let mut out = SVec::new();
            // δ ∘ E_rc = Σ_k δ_kr E_kc
            for (k, x) in delta.col(r) {
                add_term_owned(&mut out, k * n + c, x.clone());
            }
            // E_rc ∘ δ = Σ_j δ_cj E_rj
            let s = -sign(deg(i));
            for j in 0..n {
                let x = delta.entry(c, j);
                if !x.is_zero() {
                    add_term_owned(&mut out, r * n + j, &s * x);
                }
            }
            out
        })
        .collect();
    let d = GradedMap::from_cols(space.clone(), space.clone(), 1, cols).expect("degrees are consistent");
    DGLieAlgebra::new(space, &brackets, d).expect("commutator brackets are homogeneous")
}

/// The Cartan DGLA `Tg` on `↓g ⊕ g`: generators `i(x)` in degree −1 and
/// `L(x)` in degree 0, with `d i(x) = L(x)`, `[L(x), L(y)] = L([x,y])`,
/// `[L(x), i(y)] = i([x,y])`, `[i(x), i(y)] = 0`.
pub fn tg(g: &LieAlgebra) -> Result<DGLieAlgebra> {
    g.validate()?;
    let n = g.dim();
    let mut basis = Vec::new();
    for a in 0..n {
        basis.push((format!("i({})", g.label(a)), -1));
    }
    for a in 0..n {
        basis.push((format!("L({})", g.label(a)), 0));
    }
    let space = Arc::new(GradedSpace::new(basis)?);
    let shift = |v: &SVec, by: usize| -> SVec { v.iter().map(|(k, c)| (k + by, c.clone())).collect() };
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let f = g.bracket_basis(a, b);
            if a < b {
                brackets.push((n + a, n + b, shift(f, n)));
            }
            brackets.push((n + a, b, shift(f, 0)));
        }
    }
    let cols = (0..2 * n).map(|i| if i < n { unit(n + i) } else { SVec::new() }).collect();
    let d = GradedMap::from_cols(space.clone(), space.clone(), 1, cols)?;
    DGLieAlgebra::new(space, &brackets, d)
}

/// Result of a Maurer–Cartan test: `residual = dx + ½[x, x]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McResult {
    pub holds: bool,
    pub residual: SVec,
}

pub fn mc_residual(l: &dyn Dgla, x: &SVec) -> Result<SVec> {
    if x.keys().any(|i| l.degree(*i) != 1) {
        return input("Maurer–Cartan elements have degree 1");
    }
    let mut r = l.diff(x);
    add_scaled(&mut r, &qf(1, 2), &l.bracket(x, x));
    Ok(r)
}

pub fn mc_check(l: &dyn Dgla, x: &SVec) -> Result<McResult> {
    let residual = mc_residual(l, x)?;
    Ok(McResult { holds: residual.is_empty(), residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie;

    #[test]
    fn fixtures_are_dglas() {
        for g in lie::fixtures() {
            assert!(verify_dgla(&DGLieAlgebra::from_lie(&g)).is_valid());
            assert!(verify_dgla(&tg(&g).unwrap()).is_valid(), "T{}", g.name);
        }
    }

    #[test]
    fn tg_relations() {
        let t = tg(&lie::su2()).unwrap();
        let sp = t.space().clone();
        let idx = |s: &str| sp.index_of(s).unwrap();
        assert_eq!(t.diff_basis(idx("i(e1)")), unit(idx("L(e1)")));
        assert_eq!(t.bracket_basis(idx("L(e1)"), idx("i(e2)")), unit(idx("i(e3)")));
        for a in ["e1", "e2", "e3"] {
            for b in ["e1", "e2", "e3"] {
                assert!(t.bracket_basis(idx(&format!("i({a})")), idx(&format!("i({b})"))).is_empty());
            }
        }
    }

    #[test]
    fn odd_square_is_allowed_even_square_is_not() {
        let sp = Arc::new(GradedSpace::new(vec![("x".into(), 0), ("y".into(), 1), ("z".into(), 2)]).unwrap());
        let d = GradedMap::zero(sp.clone(), sp.clone(), 1);
        let ok = DGLieAlgebra::new(sp.clone(), &[(1, 1, unit(2))], d.clone()).unwrap();
        assert!(!verify_dgla(&ok).violations.iter().any(|v| matches!(v, DglaViolation::Antisymmetry(..))));
        let bad = DGLieAlgebra::new(sp, &[(0, 1, unit(1)), (1, 0, unit(1))], d).unwrap();
        assert!(verify_dgla(&bad).violations.iter().any(|v| matches!(v, DglaViolation::Antisymmetry(..))));
    }

    #[test]
    fn mc_rejects_wrong_degree() {
        let g = DGLieAlgebra::from_lie(&lie::su2());
        assert!(mc_check(&g, &unit(0)).is_err());
        assert!(mc_check(&g, &SVec::new()).unwrap().holds);
    }
}
