//! Symmetric coalgebras on `↓L`, the coderivation encoding a DGLA, L∞
//! morphisms, the Chevalley–Eilenberg algebra of a DGLA, and the
//! correspondence between Maurer–Cartan elements of `CE(L) ⊗ L'` and L∞
//! morphisms `L → L'`.
//!
//! Words are sorted lists of letter indices; the letter `i` stands for `↓x_i`
//! with degree `|x_i| − 1`. A word whose sorting would repeat an odd letter is zero.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::dgla::{Cdga, Dgla, TensorDgla};
use crate::error::{input, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::{add_term_owned, SVec};
use crate::scalar::{q, sign, Q};
use crate::sign::{koszul_sign_unchecked, koszul_sort, move_pair_to_front, move_to_front, shuffles};

pub type Word = Vec<usize>;
/// Element of `⊙(↓L)` as a map from canonical words to coefficients.
pub type SymVec = BTreeMap<Word, Q>;

fn add_sym(v: &mut SymVec, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    match v.entry(w) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
        Entry::Vacant(x) => {
            x.insert(c);
        }
    }
}

/// Sort a list of letters, returning the Koszul sign and the canonical word.
pub fn canonical(letters: &[usize], degs: &[i64]) -> Option<(i64, Word)> {
    let mut w: Vec<(usize, i64)> = letters.iter().map(|&l| (l, degs[l])).collect();
    let s = koszul_sort(&mut w)?;
    Some((s, w.into_iter().map(|(l, _)| l).collect()))
}

pub fn word_degree(w: &[usize], degs: &[i64]) -> i64 {
    w.iter().map(|&l| degs[l]).sum()
}

/// Suspended degrees `|x_i| − 1` of the letters of `↓L`.
pub fn suspended_degrees(l: &dyn Dgla) -> Vec<i64> {
    (0..l.dim()).map(|i| l.degree(i) - 1).collect()
}

/// All canonical words of length `0..=w_max`.
pub fn words_up_to(degs: &[i64], w_max: usize) -> Vec<Word> {
    fn rec(degs: &[i64], start: usize, left: usize, cur: &mut Word, out: &mut Vec<Word>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for l in start..degs.len() {
            if cur.last() == Some(&l) && degs[l] % 2 != 0 {
                continue;
            }
            cur.push(l);
            rec(degs, l, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(degs, 0, w_max, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

/// Coproduct `Δ(v_1⋯v_n) = Σ_i Σ_{σ ∈ Sh(i, n−i)} ε(σ) (v_σ(1)⋯v_σ(i)) ⊗ (v_σ(i+1)⋯v_σ(n))`.
pub fn coproduct(w: &[usize], degs: &[i64]) -> Vec<(Q, Word, Word)> {
    let n = w.len();
    let wd: Vec<i64> = w.iter().map(|&l| degs[l]).collect();
    let mut out = Vec::new();
    for i in 0..=n {
        for sigma in shuffles(&[i, n - i]) {
            let e = koszul_sign_unchecked(&sigma, &wd);
            let left: Word = sigma[..i].iter().map(|&k| w[k]).collect();
            let right: Word = sigma[i..].iter().map(|&k| w[k]).collect();
            out.push((q(e), left, right));
        }
    }
    out
}

/// The coderivation `D` of a DGLA, applied to a canonical word.
///
/// `D(↓x_1⋯↓x_n) = Σ_i ε(σ_i) ↓(dx_i) ⊙ ⋯ + Σ_{i<j} ε(σ_ij) (−1)^{|↓x_i|} ↓[x_i,x_j] ⊙ ⋯`
pub fn coderivation_apply(l: &dyn Dgla, degs: &[i64], w: &[usize]) -> SymVec {
    let n = w.len();
    let wd: Vec<i64> = w.iter().map(|&k| degs[k]).collect();
    let mut out = SymVec::new();
    for i in 0..n {
        let e = move_to_front(&wd, i);
        let rest: Vec<usize> = (0..n).filter(|&k| k != i).map(|k| w[k]).collect();
        for (m, c) in l.diff_basis(w[i]) {
            let mut letters = vec![m];
            letters.extend_from_slice(&rest);
            if let Some((s, cw)) = canonical(&letters, degs) {
                add_sym(&mut out, cw, q(e * s) * c);
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let e = move_pair_to_front(&wd, i, j) * crate::sign::pm(wd[i]);
            let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).map(|k| w[k]).collect();
            for (m, c) in l.bracket_basis(w[i], w[j]) {
                let mut letters = vec![m];
                letters.extend_from_slice(&rest);
                if let Some((s, cw)) = canonical(&letters, degs) {
                    add_sym(&mut out, cw, q(e * s) * c);
                }
            }
        }
    }
    out
}

pub fn coderivation_apply_vec(l: &dyn Dgla, degs: &[i64], v: &SymVec) -> SymVec {
    let mut out = SymVec::new();
    for (w, c) in v {
        for (u, e) in coderivation_apply(l, degs, w) {
            add_sym(&mut out, u, c * e);
        }
    }
    out
}

/// The truncated coalgebra `⊙^{≤W}(↓L)` with its codifferential.
pub struct SymCoalgebra {
    pub degs: Vec<i64>,
    pub w_max: usize,
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl SymCoalgebra {
    pub fn new(l: &dyn Dgla, w_max: usize) -> Self {
        let degs = suspended_degrees(l);
        let words = words_up_to(&degs, w_max);
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        SymCoalgebra { degs, w_max, words, index }
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Words on which `D²` does not vanish.
    pub fn d_squared_failures(&self, l: &dyn Dgla) -> Vec<Word> {
        let res = crate::par::map(&self.words, |w| {
            let dw = coderivation_apply(l, &self.degs, w);
            coderivation_apply_vec(l, &self.degs, &dw).is_empty()
        });
        self.words.iter().zip(res).filter(|(_, ok)| !ok).map(|(w, _)| w.clone()).collect()
    }

    /// Coassociativity and cocommutativity on every word.
    pub fn coalgebra_failures(&self) -> Vec<Word> {
        let degs = &self.degs;
        self.words
            .iter()
            .filter(|w| {
                // (Δ⊗1)Δ vs (1⊗Δ)Δ as maps into triples of canonical words
                let mut left: BTreeMap<(Word, Word, Word), Q> = BTreeMap::new();
                let mut right: BTreeMap<(Word, Word, Word), Q> = BTreeMap::new();
                let mut swapped: BTreeMap<(Word, Word), Q> = BTreeMap::new();
                let mut plain: BTreeMap<(Word, Word), Q> = BTreeMap::new();
                for (c, a, b) in coproduct(w, degs) {
                    *plain.entry((a.clone(), b.clone())).or_insert_with(Q::zero) += &c;
                    let s = sign(word_degree(&a, degs) * word_degree(&b, degs));
                    *swapped.entry((b.clone(), a.clone())).or_insert_with(Q::zero) += &c * &s;
                    for (c2, a1, a2) in coproduct(&a, degs) {
                        *left.entry((a1, a2, b.clone())).or_insert_with(Q::zero) += &c * &c2;
                    }
                    for (c2, b1, b2) in coproduct(&b, degs) {
                        *right.entry((a.clone(), b1, b2)).or_insert_with(Q::zero) += &c * &c2;
                    }
                }
                left.retain(|_, v| !v.is_zero());
                right.retain(|_, v| !v.is_zero());
                plain.retain(|_, v| !v.is_zero());
                swapped.retain(|_, v| !v.is_zero());
                left != right || plain != swapped
            })
            .cloned()
            .collect()
    }
}

/// Product in `⊙(↓L')` of a list of elements of `↓L'` (given as `L'` coordinates).
fn sym_product(factors: &[&SVec], degs: &[i64]) -> SymVec {
    let mut acc: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), Q::one())];
    for f in factors {
        let mut next = Vec::with_capacity(acc.len() * f.len());
        for (w, c) in &acc {
            for (l, e) in *f {
                let mut w2 = w.clone();
                w2.push(*l);
                next.push((w2, c * e));
            }
        }
        acc = next;
    }
    let mut out = SymVec::new();
    for (w, c) in acc {
        if let Some((s, cw)) = canonical(&w, degs) {
            add_sym(&mut out, cw, q(s) * c);
        }
    }
    out
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(Q::one(), |a, k| a * q(k))
}

/// Ordered compositions of `n` into positive parts.
fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// An L∞ morphism truncated at word length `W`: `Φ(w) ∈ ↓L'` for canonical
/// words `w` of length `1..=W`, stored as `L'` coordinates.
#[derive(Clone)]
pub struct LInftyMorphism {
    pub source: Arc<dyn Dgla>,
    pub target: Arc<dyn Dgla>,
    pub w_max: usize,
    pub components: BTreeMap<Word, SVec>,
}

impl LInftyMorphism {
    pub fn new(
        source: Arc<dyn Dgla>,
        target: Arc<dyn Dgla>,
        w_max: usize,
        components: BTreeMap<Word, SVec>,
    ) -> Result<Self> {
        let sd = suspended_degrees(source.as_ref());
        for (w, v) in &components {
            if w.is_empty() || w.len() > w_max {
                return input("components live on words of length 1..=W");
            }
            if canonical(w, &sd).map(|(_, c)| c) != Some(w.clone()) {
                return input("component words must be canonical");
            }
            let want = word_degree(w, &sd) + 1;
            if v.keys().any(|k| target.degree(*k) != want) {
                return input("components must have degree 0 as maps ⊙(↓L) → ↓L'");
            }
        }
        let components = components.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        Ok(LInftyMorphism { source, target, w_max, components })
    }

    /// Strict morphism from a linear map `L → L'` given by columns.
    pub fn strict(source: Arc<dyn Dgla>, target: Arc<dyn Dgla>, w_max: usize, cols: &[SVec]) -> Result<Self> {
        let comps = cols.iter().enumerate().map(|(i, v)| (vec![i], v.clone())).collect();
        LInftyMorphism::new(source, target, w_max, comps)
    }

    pub fn component(&self, w: &[usize]) -> Option<&SVec> {
        self.components.get(w)
    }

    /// `Φ(v)` extended linearly.
    pub fn apply(&self, v: &SymVec) -> SVec {
        let mut out = SVec::new();
        for (w, c) in v {
            if let Some(y) = self.components.get(w) {
                crate::linalg::add_scaled(&mut out, c, y);
            }
        }
        out
    }

    /// The coalgebra lift `Φ̄` on a canonical word.
    pub fn lift(&self, w: &[usize]) -> SymVec {
        let sd = suspended_degrees(self.source.as_ref());
        let td = suspended_degrees(self.target.as_ref());
        coalgebra_lift(&|u: &[usize]| self.components.get(u).cloned().unwrap_or_default(), w, &sd, &td)
    }

    pub fn lift_vec(&self, v: &SymVec) -> SymVec {
        let mut out = SymVec::new();
        for (w, c) in v {
            for (u, e) in self.lift(w) {
                add_sym(&mut out, u, c * e);
            }
        }
        out
    }
}

/// `φ̄(v_1⋯v_n) = Σ_{i_1+⋯+i_p=n} Σ_{σ ∈ Sh(i_1,…,i_p)} ε(σ) (1/p!) Π_k φ(block_k)`.
/// The empty word maps to the empty word.
pub fn coalgebra_lift(phi: &dyn Fn(&[usize]) -> SVec, w: &[usize], sd: &[i64], td: &[i64]) -> SymVec {
    let n = w.len();
    let mut out = SymVec::new();
    if n == 0 {
        out.insert(Vec::new(), Q::one());
        return out;
    }
    let wd: Vec<i64> = w.iter().map(|&l| sd[l]).collect();
    for comp in compositions(n) {
        let p = comp.len();
        let inv = factorial(p).recip();
        for sigma in shuffles(&comp) {
            let e = koszul_sign_unchecked(&sigma, &wd);
            let mut vals = Vec::with_capacity(p);
            let mut start = 0;
            let mut ok = true;
            for &len in &comp {
                let letters: Vec<usize> = sigma[start..start + len].iter().map(|&k| w[k]).collect();
                start += len;
                // blocks are increasing subsequences of a canonical word, hence canonical
                let v = phi(&letters);
                if v.is_empty() {
                    ok = false;
                    break;
                }
                vals.push(v);
            }
            if !ok {
                continue;
            }
            let refs: Vec<&SVec> = vals.iter().collect();
            let c = q(e) * &inv;
            for (u, x) in sym_product(&refs, td) {
                add_sym(&mut out, u, &c * x);
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LInftyCheck {
    pub holds: bool,
    pub first_failure: Option<Word>,
}

/// `Φ̄ ∘ D = D' ∘ Φ̄` on every canonical word of length `1..=W`.
pub fn linfty_check(phi: &LInftyMorphism) -> LInftyCheck {
    let l = phi.source.as_ref();
    let lp = phi.target.as_ref();
    let sd = suspended_degrees(l);
    let td = suspended_degrees(lp);
    let words: Vec<Word> = words_up_to(&sd, phi.w_max).into_iter().filter(|w| !w.is_empty()).collect();
    let ok = crate::par::map(&words, |w| {
        let lhs = phi.lift_vec(&coderivation_apply(l, &sd, w));
        let rhs = coderivation_apply_vec(lp, &td, &phi.lift(w));
        lhs == rhs
    });
    let first_failure = words.iter().zip(&ok).find(|(_, ok)| !**ok).map(|(w, _)| w.clone());
    LInftyCheck { holds: first_failure.is_none(), first_failure }
}

/// `CE(L)` truncated at word length `W`: the dual of `⊙^{≤W}(↓L)`, basis `ξ^w`
/// of degree `−|w|`. Product `(ξη)(w) = Σ_{Δw = u⊗v} (−1)^{|η||u|} ξ(u) η(v)`,
/// differential `δξ = (−1)^{|ξ|} ξ ∘ D`.
pub struct CeOfDgla {
    pub coalg: SymCoalgebra,
    labels: Vec<String>,
    space: Arc<GradedSpace>,
    d: GradedMap,
}

pub fn ce_of_dgla(l: &dyn Dgla, w_max: usize) -> CeOfDgla {
    let coalg = SymCoalgebra::new(l, w_max);
    let labels: Vec<String> = (0..l.dim()).map(|i| format!("↓{}", l.space().label(i))).collect();
    let basis = coalg
        .words
        .iter()
        .map(|w| {
            let names: Vec<&str> = w.iter().map(|&k| labels[k].as_str()).collect();
            (format!("ξ[{}]", names.join(",")), -word_degree(w, &coalg.degs))
        })
        .collect();
    let space = Arc::new(GradedSpace::new(basis).expect("word labels are unique"));
    // δ ξ^u = (−1)^{|ξ^u|} Σ_w ⟨u, D w⟩ ξ^w
    let dw = crate::par::map(&coalg.words, |w| coderivation_apply(l, &coalg.degs, w));
    let mut cols = vec![SVec::new(); coalg.words.len()];
    for (wi, img) in dw.iter().enumerate() {
        for (u, c) in img {
            let ui = coalg.index_of(u).expect("D does not lengthen words");
            let s = sign(space.degree(ui));
            add_term_owned(&mut cols[ui], wi, s * c);
        }
    }
    let d = GradedMap::from_cols(space.clone(), space.clone(), 1, cols).expect("D has degree one");
    CeOfDgla { coalg, labels, space, d }
}

impl CeOfDgla {
    pub fn word(&self, i: usize) -> &Word {
        &self.coalg.words[i]
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.coalg.index_of(w)
    }

    pub fn letter_label(&self, k: usize) -> &str {
        &self.labels[k]
    }
}

impl Cdga for CeOfDgla {
    fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    fn mul_basis(&self, i: usize, j: usize) -> SVec {
        let degs = &self.coalg.degs;
        let u = &self.coalg.words[i];
        let v = &self.coalg.words[j];
        if u.len() + v.len() > self.coalg.w_max {
            return SVec::new();
        }
        let mut uv = u.clone();
        uv.extend_from_slice(v);
        let Some((_, w)) = canonical(&uv, degs) else { return SVec::new() };
        let eta = -word_degree(v, degs);
        let mut c = Q::zero();
        for (e, a, b) in coproduct(&w, degs) {
            if &a == u && &b == v {
                c += e * sign(eta * word_degree(&a, degs));
            }
        }
        let mut out = SVec::new();
        add_term_owned(&mut out, self.coalg.index_of(&w).unwrap(), c);
        out
    }

    fn diff_map(&self) -> &GradedMap {
        &self.d
    }

    fn unit(&self) -> usize {
        0
    }

    fn mul_overflows(&self, i: usize, j: usize) -> bool {
        self.coalg.words[i].len() + self.coalg.words[j].len() > self.coalg.w_max
    }
}

/// `α = Σ_w ξ^w ⊗ y_w ↦ Φ(w) = ↓((−1)^{|y_w||w|} y_w)`.
pub fn mc_to_linfty(ce: &CeOfDgla, source: Arc<dyn Dgla>, t: &TensorDgla, alpha: &SVec) -> Result<LInftyMorphism> {
    let mut comps: BTreeMap<Word, SVec> = BTreeMap::new();
    for (i, c) in alpha {
        if t.degree(*i) != 1 {
            return input("Maurer–Cartan elements have degree 1");
        }
        let (iw, y) = t.split(*i);
        let w = ce.word(iw);
        if w.is_empty() {
            return input("the length 0 component must vanish for an L∞ morphism");
        }
        let s = sign(t.l.degree(y) * word_degree(w, &ce.coalg.degs));
        add_term_owned(comps.entry(w.clone()).or_default(), y, s * c);
    }
    LInftyMorphism::new(source, t.l.clone(), ce.coalg.w_max, comps)
}

pub fn linfty_to_mc(ce: &CeOfDgla, t: &TensorDgla, phi: &LInftyMorphism) -> Result<SVec> {
    if phi.w_max != ce.coalg.w_max {
        return input("word-length truncations differ");
    }
    let mut out = SVec::new();
    for (w, v) in &phi.components {
        let Some(iw) = ce.index_of(w) else { return input("word outside the truncation") };
        for (y, c) in v {
            let s = sign(t.l.degree(*y) * word_degree(w, &ce.coalg.degs));
            add_term_owned(&mut out, t.index(iw, *y), s * c);
        }
    }
    Ok(out)
}
