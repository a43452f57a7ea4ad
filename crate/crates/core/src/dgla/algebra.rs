//! Graded-commutative DG algebras on monomial bases, optionally truncated by
//! a weight, and their g-DG enrichments with contractions and Lie derivatives.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use crate::error::{input, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::lie::LieAlgebra;
use crate::linalg::{add_scaled, add_term_owned, SVec};
use crate::scalar::{q, sign, Q};
use crate::sign::koszul_sort;

/// Commutative DG algebra with a finite basis.
pub trait Cdga: Send + Sync {
    fn space(&self) -> &Arc<GradedSpace>;
    fn mul_basis(&self, i: usize, j: usize) -> SVec;
    fn diff_map(&self) -> &GradedMap;
    fn unit(&self) -> usize;

    /// Whether the untruncated product of two basis elements leaves the basis.
    fn mul_overflows(&self, _i: usize, _j: usize) -> bool {
        false
    }

    /// Whether the untruncated differential of a basis element leaves the basis.
    fn diff_overflows(&self, _i: usize) -> bool {
        false
    }

    fn dim(&self) -> usize {
        self.space().dim()
    }

    fn degree(&self, i: usize) -> i64 {
        self.space().degree(i)
    }

    fn mul(&self, x: &SVec, y: &SVec) -> SVec {
        let mut r = SVec::new();
        for (i, a) in x {
            for (j, b) in y {
                add_scaled(&mut r, &(a * b), &self.mul_basis(*i, *j));
            }
        }
        r
    }

    fn diff(&self, x: &SVec) -> SVec {
        self.diff_map().apply(x)
    }
}

impl std::fmt::Debug for dyn Cdga {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Cdga(dim {})", self.dim())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub label: String,
    pub degree: i64,
    pub weight: u32,
}

/// Free graded-commutative algebra on finitely many generators, divided by
/// the ideal of monomials whose total weight exceeds `cap`.
///
/// Monomials are sorted generator words; odd generators occur at most once.
#[derive(Clone, Debug)]
pub struct MonomialAlgebra {
    gens: Vec<Generator>,
    cap: Option<u32>,
    monos: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    space: Arc<GradedSpace>,
    d: GradedMap,
    d_overflow: Vec<bool>,
}

impl MonomialAlgebra {
    /// Algebra with zero differential. Even generators need positive weight
    /// and a cap so that the basis is finite.
    pub fn new(gens: Vec<Generator>, cap: Option<u32>) -> Result<Self> {
        for g in &gens {
            if g.degree % 2 == 0 && (g.weight == 0 || cap.is_none()) {
                return input(format!("even generator {} needs positive weight and a cap", g.label));
            }
        }
        let mut monos = Vec::new();
        enumerate(&gens, cap, 0, 0, &mut Vec::new(), &mut monos);
        let deg = |m: &Vec<usize>| m.iter().map(|&g| gens[g].degree).sum::<i64>();
        monos.sort_by(|a, b| deg(a).cmp(&deg(b)).then(a.len().cmp(&b.len())).then(a.cmp(b)));
        let index = monos.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let basis = monos
            .iter()
            .map(|m| {
                let label = if m.is_empty() {
                    "1".to_string()
                } else {
                    m.iter().map(|&g| gens[g].label.as_str()).collect::<Vec<_>>().join("·")
                };
                (label, deg(m))
            })
            .collect();
        let space = Arc::new(GradedSpace::new(basis)?);
        let d = GradedMap::zero(space.clone(), space.clone(), 1);
        let d_overflow = vec![false; monos.len()];
        Ok(MonomialAlgebra { gens, cap, monos, index, space, d, d_overflow })
    }

    /// The ground field, concentrated in degree 0.
    pub fn ground() -> Self {
        MonomialAlgebra::new(Vec::new(), None).unwrap()
    }

    /// Install the differential given by its values on generators.
    pub fn with_differential(mut self, values: &[SVec]) -> Result<Self> {
        let (d, ov) = self.derivation(values, 1)?;
        if !d.compose(&d).is_zero() {
            return crate::error::structural("differential does not square to zero");
        }
        self.d = d;
        self.d_overflow = ov;
        Ok(self)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn cap(&self) -> Option<u32> {
        self.cap
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.label == label)
    }

    /// Basis index of the monomial consisting of one generator.
    pub fn gen_basis(&self, g: usize) -> usize {
        self.index[&vec![g]]
    }

    pub fn gen_vec(&self, g: usize) -> SVec {
        crate::linalg::unit(self.gen_basis(g))
    }

    pub fn monomial(&self, i: usize) -> &[usize] {
        &self.monos[i]
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.monos[i].iter().map(|&g| self.gens[g].weight).sum()
    }

    /// Number of generators of degree `deg` in the monomial.
    pub fn count_degree(&self, i: usize, deg: i64) -> usize {
        self.monos[i].iter().filter(|&&g| self.gens[g].degree == deg).count()
    }

    /// Basis index of a generator word, with the sign of sorting it.
    /// `Ok(None)` when the word vanishes; `Err(())` when it exceeds the cap.
    fn word(&self, w: &[usize]) -> std::result::Result<Option<(i64, usize)>, ()> {
        let weight: u32 = w.iter().map(|&g| self.gens[g].weight).sum();
        if let Some(c) = self.cap {
            if weight > c {
                return Err(());
            }
        }
        let mut letters: Vec<(usize, i64)> = w.iter().map(|&g| (g, self.gens[g].degree)).collect();
        let Some(s) = koszul_sort(&mut letters) else { return Ok(None) };
        let key: Vec<usize> = letters.into_iter().map(|(g, _)| g).collect();
        Ok(Some((s, self.index[&key])))
    }

    /// Extend values on generators to a derivation of the given degree.
    /// Also reports which basis elements have images leaving the truncation.
    pub fn derivation(&self, values: &[SVec], degree: i64) -> Result<(GradedMap, Vec<bool>)> {
        if values.len() != self.gens.len() {
            return input("one value per generator is required");
        }
        for (g, v) in values.iter().enumerate() {
            for k in v.keys() {
                if self.space.degree(*k) != self.gens[g].degree + degree {
                    return input(format!("derivation value on {} has the wrong degree", self.gens[g].label));
                }
            }
        }
        let results = crate::par::map_range(self.monos.len(), |i| {
            let m = &self.monos[i];
            let mut out = SVec::new();
            let mut overflow = false;
            let mut prefix_deg = 0i64;
            for (pos, &g) in m.iter().enumerate() {
                let s0 = sign(degree * prefix_deg);
                for (t, c) in &values[g] {
                    let mut w: Vec<usize> = m[..pos].to_vec();
                    w.extend_from_slice(&self.monos[*t]);
                    w.extend_from_slice(&m[pos + 1..]);
                    match self.word(&w) {
                        Ok(Some((s, idx))) => add_term_owned(&mut out, idx, &s0 * c * q(s)),
                        Ok(None) => {}
                        Err(()) => overflow = true,
                    }
                }
                prefix_deg += self.gens[g].degree;
            }
            (out, overflow)
        });
        let (cols, ov): (Vec<SVec>, Vec<bool>) = results.into_iter().unzip();
        Ok((GradedMap::from_cols(self.space.clone(), self.space.clone(), degree, cols)?, ov))
    }
}

fn enumerate(
    gens: &[Generator],
    cap: Option<u32>,
    g: usize,
    weight: u32,
    cur: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if g == gens.len() {
        out.push(cur.clone());
        return;
    }
    let gen = &gens[g];
    let max_exp = if gen.degree % 2 != 0 { 1 } else { (cap.unwrap() - weight) / gen.weight };
    for e in 0..=max_exp {
        let w = weight + e * gen.weight;
        if cap.map_or(false, |c| w > c) {
            break;
        }
        let len = cur.len();
        cur.extend(std::iter::repeat(g).take(e as usize));
        enumerate(gens, cap, g + 1, w, cur, out);
        cur.truncate(len);
    }
}

impl Cdga for MonomialAlgebra {
    fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    fn mul_basis(&self, i: usize, j: usize) -> SVec {
        let mut w = self.monos[i].clone();
        w.extend_from_slice(&self.monos[j]);
        match self.word(&w) {
            Ok(Some((s, idx))) => std::iter::once((idx, q(s))).collect(),
            _ => SVec::new(),
        }
    }

    fn diff_map(&self) -> &GradedMap {
        &self.d
    }

    fn unit(&self) -> usize {
        self.index[&Vec::new()]
    }

    fn mul_overflows(&self, i: usize, j: usize) -> bool {
        self.cap.map_or(false, |c| self.weight(i) + self.weight(j) > c)
    }

    fn diff_overflows(&self, i: usize) -> bool {
        self.d_overflow[i]
    }
}

/// Commutative g-DG algebra: a [`MonomialAlgebra`] with contractions `i_a`
/// (degree −1) and Lie derivatives `L_a` (degree 0), one per basis vector of `g`.
#[derive(Clone, Debug)]
pub struct GDGAlgebra {
    pub alg: MonomialAlgebra,
    pub g: Arc<LieAlgebra>,
    contractions: Vec<GradedMap>,
    lie_derivatives: Vec<GradedMap>,
}

/// A failed operator identity, named as in `[d, i_a] = L_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanViolation {
    pub identity: &'static str,
    pub a: String,
    pub b: Option<String>,
}

impl GDGAlgebra {
    /// `i_values[a][g]` and `l_values[a][g]` are the values of `i_a`, `L_a` on generator `g`.
    pub fn new(
        alg: MonomialAlgebra,
        g: Arc<LieAlgebra>,
        i_values: &[Vec<SVec>],
        l_values: &[Vec<SVec>],
    ) -> Result<Self> {
        if i_values.len() != g.dim() || l_values.len() != g.dim() {
            return input("one contraction and one Lie derivative per basis vector of g");
        }
        let mut contractions = Vec::new();
        let mut lie_derivatives = Vec::new();
        for a in 0..g.dim() {
            contractions.push(alg.derivation(&i_values[a], -1)?.0);
            lie_derivatives.push(alg.derivation(&l_values[a], 0)?.0);
        }
        Ok(GDGAlgebra { alg, g, contractions, lie_derivatives })
    }

    pub fn contraction(&self, a: usize) -> &GradedMap {
        &self.contractions[a]
    }

    pub fn lie_derivative(&self, a: usize) -> &GradedMap {
        &self.lie_derivatives[a]
    }

    pub fn d(&self) -> &GradedMap {
        self.alg.diff_map()
    }

    fn combo(&self, ops: &[GradedMap], coeffs: &SVec, degree: i64) -> GradedMap {
        let sp = self.alg.space().clone();
        let mut r = GradedMap::zero(sp.clone(), sp, degree);
        for (c, x) in coeffs {
            r = r.add(&ops[*c], x);
        }
        r
    }

    /// The five Cartan identities, checked as operator identities on the
    /// whole (truncated) algebra.
    pub fn cartan_violations(&self) -> Vec<CartanViolation> {
        let n = self.g.dim();
        let d = self.d();
        let lbl = |a: usize| self.g.label(a).to_string();
        let mut out = Vec::new();
        for a in 0..n {
            if !d.commutator(&self.contractions[a]).add(&self.lie_derivatives[a], &-Q::one()).is_zero() {
                out.push(CartanViolation { identity: "[d, i_a] = L_a", a: lbl(a), b: None });
            }
            if !d.commutator(&self.lie_derivatives[a]).is_zero() {
                out.push(CartanViolation { identity: "[d, L_a] = 0", a: lbl(a), b: None });
            }
        }
        for a in 0..n {
            for b in 0..n {
                let f = self.g.bracket_basis(a, b);
                let ll = self.lie_derivatives[a].commutator(&self.lie_derivatives[b]);
                if !ll.add(&self.combo(&self.lie_derivatives, f, 0), &-Q::one()).is_zero() {
                    out.push(CartanViolation { identity: "[L_a, L_b] = L_[a,b]", a: lbl(a), b: Some(lbl(b)) });
                }
                let li = self.lie_derivatives[a].commutator(&self.contractions[b]);
                if !li.add(&self.combo(&self.contractions, f, -1), &-Q::one()).is_zero() {
                    out.push(CartanViolation { identity: "[L_a, i_b] = i_[a,b]", a: lbl(a), b: Some(lbl(b)) });
                }
                if !self.contractions[a].commutator(&self.contractions[b]).is_zero() {
                    out.push(CartanViolation { identity: "[i_a, i_b] = 0", a: lbl(a), b: Some(lbl(b)) });
                }
            }
        }
        out
    }

    /// Basis of the basic elements in degree `k`: common kernel of all `i_a`, `L_a`.
    pub fn basic_subspace(&self, k: i64) -> Vec<SVec> {
        let sp = self.alg.space();
        let src = sp.in_degree_lex(k);
        let below = sp.in_degree_lex(k - 1);
        let blocks: Vec<Vec<SVec>> = (0..self.g.dim())
            .flat_map(|a| [self.contractions[a].block(&src, &below), self.lie_derivatives[a].block(&src, &src)])
            .collect();
        let refs: Vec<&[SVec]> = blocks.iter().map(|b| b.as_slice()).collect();
        crate::linalg::common_kernel(src.len(), &refs)
            .into_iter()
            .map(|v| v.into_iter().map(|(i, c)| (src[i], c)).collect())
            .collect()
    }

    pub fn is_basic(&self, x: &SVec) -> bool {
        (0..self.g.dim())
            .all(|a| self.contractions[a].apply(x).is_empty() && self.lie_derivatives[a].apply(x).is_empty())
    }
}

/// Check that `op` is a graded derivation on all pairs of basis elements.
pub fn is_derivation(alg: &dyn Cdga, op: &GradedMap) -> bool {
    let n = alg.dim();
    let res = crate::par::map_range(n, |i| {
        let di = op.apply(&crate::linalg::unit(i));
        (0..n).all(|j| {
            let xy = alg.mul_basis(i, j);
            let lhs = op.apply(&xy);
            let mut rhs = alg.mul(&di, &crate::linalg::unit(j));
            let dj = op.apply(&crate::linalg::unit(j));
            add_scaled(&mut rhs, &sign(op.degree * alg.degree(i)), &alg.mul(&crate::linalg::unit(i), &dj));
            lhs == rhs
        })
    });
    res.into_iter().all(|b| b)
}
