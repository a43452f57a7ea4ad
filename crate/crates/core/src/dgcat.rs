//! Finite DG categories, the Hochschild differential, A∞-functors and
//! A∞-natural transformations.
//!
//! A word `f_{n−1} ⊗ ⋯ ⊗ f_0` of suspended morphisms is stored source first:
//! `word[j]` is a basis element of `↓Hom(A_j, A_{j+1})`. Values of A∞-functors
//! are elements of `↓Hom` recorded by their unsuspended coordinates; values
//! of natural transformations live in `Hom` itself.
//!
//! On `↓Hom` the differential is `−↓d` and composition is
//! `m(↓g ⊗ ↓f) = (−1)^{|g|} ↓(g ∘ f)`; see [`crate::sign`].

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::complex::CochainComplex;
use crate::error::{input, structural, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::{add_scaled, add_term, scaled, unit, Echelon, SVec};
use crate::par::Exec;
use crate::scalar::{sign, Q};
use crate::sign as sg;

/// `(source, target, basis index)` of a basis element of `↓Hom(source, target)`.
pub type Letter = (usize, usize, usize);
pub type Word = Vec<Letter>;
/// Linear combination of basis words.
pub type Chain = BTreeMap<Word, Q>;

#[derive(Clone, Debug)]
pub struct FiniteDGCategory {
    objects: Vec<String>,
    homs: Vec<CochainComplex>,
    /// `comp[(a, b, c)][g][f] = g ∘ f` for basis `g ∈ Hom(b, c)`, `f ∈ Hom(a, b)`.
    comp: HashMap<(usize, usize, usize), Vec<Vec<SVec>>>,
    identities: Vec<SVec>,
}

impl FiniteDGCategory {
    /// `homs[a * n + b] = Hom(a, b)`. Verifies the DG category axioms.
    pub fn new(
        objects: Vec<String>,
        homs: Vec<CochainComplex>,
        comp: HashMap<(usize, usize, usize), Vec<Vec<SVec>>>,
        identities: Vec<SVec>,
    ) -> Result<Self> {
        let n = objects.len();
        if homs.len() != n * n || identities.len() != n {
            return input("a Hom complex per ordered pair and an identity per object are required");
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let Some(t) = comp.get(&(a, b, c)) else {
                        return input(format!("missing composition {} → {} → {}", objects[a], objects[b], objects[c]));
                    };
                    let (db, da, dc) = (homs[b * n + c].dim(), homs[a * n + b].dim(), homs[a * n + c].dim());
                    if t.len() != db
                        || t.iter().any(|row| row.len() != da || row.iter().any(|v| v.keys().any(|k| *k >= dc)))
                    {
                        return input(format!("composition table {a},{b},{c} is malformed"));
                    }
                }
            }
        }
        let cat = FiniteDGCategory { objects, homs, comp, identities };
        if let Err(e) = cat.verify() {
            return structural(e);
        }
        Ok(cat)
    }

    /// Full DG subcategory of cochain complexes on the given objects.
    pub fn from_complexes(objects: Vec<(String, CochainComplex)>) -> Result<Self> {
        Self::sub_dgvect(objects.into_iter().map(|(n, c)| (n, c, None)).collect())
    }

    /// Filtration-preserving maps between filtered complexes: `Hom(V, W)` is
    /// spanned by the matrix units `t ← s` with `level_W(t) ≥ level_V(s)`.
    pub fn filtered(objects: Vec<(String, CochainComplex, Vec<i64>)>) -> Result<Self> {
        for (name, c, l) in &objects {
            if l.len() != c.dim() {
                return input(format!("{name}: one level per basis element is required"));
            }
        }
        Self::sub_dgvect(objects.into_iter().map(|(n, c, l)| (n, c, Some(l))).collect())
    }

    fn sub_dgvect(objects: Vec<(String, CochainComplex, Option<Vec<i64>>)>) -> Result<Self> {
        let n = objects.len();
        let allowed = |a: usize, b: usize, t: usize, s: usize| match (&objects[a].2, &objects[b].2) {
            (Some(la), Some(lb)) => lb[t] >= la[s],
            _ => true,
        };
        // basis of Hom(a, b): matrix units (t, s)
        let mut units: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut index: Vec<HashMap<(usize, usize), usize>> = Vec::new();
        let mut spaces = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let (va, vb) = (&objects[a].1.space, &objects[b].1.space);
                let mut u = Vec::new();
                let mut labels = Vec::new();
                for t in 0..vb.dim() {
                    for s in 0..va.dim() {
                        if allowed(a, b, t, s) {
                            u.push((t, s));
                            labels.push((format!("{}←{}", vb.label(t), va.label(s)), vb.degree(t) - va.degree(s)));
                        }
                    }
                }
                index.push(u.iter().enumerate().map(|(i, p)| (*p, i)).collect());
                units.push(u);
                spaces.push(Arc::new(GradedSpace::new(labels)?));
            }
        }
        let mut homs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = a * n + b;
                let (da, db) = (&objects[a].1.d, &objects[b].1.d);
                let space = spaces[ab].clone();
                let mut cols = Vec::new();
                for &(t, s) in &units[ab] {
                    let k = space.degree(index[ab][&(t, s)]);
                    // d(E_ts) = δ_W E_ts − (−1)^k E_ts δ_V
                    let mut col = SVec::new();
                    for (t2, c) in db.col(t) {
                        let Some(&i) = index[ab].get(&(*t2, s)) else {
                            return structural("differential leaves the filtered Hom space");
                        };
                        add_term(&mut col, i, c);
                    }
                    for s2 in 0..objects[a].1.dim() {
                        let c = da.entry(s, s2);
                        if c.is_zero() {
                            continue;
                        }
                        let Some(&i) = index[ab].get(&(t, s2)) else {
                            return structural("differential leaves the filtered Hom space");
                        };
                        add_term(&mut col, i, &(-sign(k) * c));
                    }
                    cols.push(col);
                }
                let d = GradedMap::from_cols(space.clone(), space.clone(), 1, cols)?;
                homs.push(CochainComplex::new(space, d)?);
            }
        }
        let mut comp = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let table: Vec<Vec<SVec>> = units[b * n + c]
                        .iter()
                        .map(|&(t, s)| {
                            units[a * n + b]
                                .iter()
                                .map(|&(t2, s2)| if s == t2 { unit(index[a * n + c][&(t, s2)]) } else { SVec::new() })
                                .collect()
                        })
                        .collect();
                    comp.insert((a, b, c), table);
                }
            }
        }
        let identities =
            (0..n).map(|a| (0..objects[a].1.dim()).map(|s| (index[a * n + a][&(s, s)], Q::one())).collect()).collect();
        let names = objects.into_iter().map(|o| o.0).collect();
        Self::new(names, homs, comp, identities)
    }

    /// Composition is a chain map, associative and unital; identities are closed of degree 0.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let n = self.objects.len();
        for a in 0..n {
            let id = &self.identities[a];
            let h = self.hom(a, a);
            if id.keys().any(|i| *i >= h.dim() || h.space.degree(*i) != 0) {
                return Err(format!("identity of {} is not of degree 0", self.objects[a]));
            }
            if !h.d.apply(id).is_empty() {
                return Err(format!("identity of {} is not closed", self.objects[a]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for f in 0..self.hom(a, b).dim() {
                    let fv = unit(f);
                    if self.compose(a, b, b, &self.identities[b], &fv) != fv
                        || self.compose(a, a, b, &fv, &self.identities[a]) != fv
                    {
                        return Err(format!(
                            "identities are not neutral on Hom({}, {})",
                            self.objects[a], self.objects[b]
                        ));
                    }
                }
                for c in 0..n {
                    let (hf, hg) = (self.hom(a, b), self.hom(b, c));
                    for g in 0..hg.dim() {
                        for f in 0..hf.dim() {
                            let (gv, fv) = (unit(g), unit(f));
                            let gf = self.compose(a, b, c, &gv, &fv);
                            let k = hg.space.degree(g) + hf.space.degree(f);
                            if gf.keys().any(|i| self.hom(a, c).space.degree(*i) != k) {
                                return Err("composition is not additive in degree".into());
                            }
                            let lhs = self.d(a, c, &gf);
                            let mut rhs = self.compose(a, b, c, &self.d(b, c, &gv), &fv);
                            add_scaled(
                                &mut rhs,
                                &sign(hg.space.degree(g)),
                                &self.compose(a, b, c, &gv, &self.d(a, b, &fv)),
                            );
                            if lhs != rhs {
                                return Err(format!(
                                    "composition {}∘{} violates the Leibniz rule",
                                    hg.space.label(g),
                                    hf.space.label(f)
                                ));
                            }
                            for e in 0..n {
                                for h in 0..self.hom(c, e).dim() {
                                    let hv = unit(h);
                                    let l = self.compose(a, c, e, &hv, &gf);
                                    let r = self.compose(a, b, e, &self.compose(b, c, e, &hv, &gv), &fv);
                                    if l != r {
                                        return Err("composition is not associative".into());
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn hom(&self, a: usize, b: usize) -> &CochainComplex {
        &self.homs[a * self.objects.len() + b]
    }

    pub fn identity(&self, a: usize) -> &SVec {
        &self.identities[a]
    }

    /// Degree of a basis element of `Hom(a, b)`.
    pub fn degree(&self, a: usize, b: usize, i: usize) -> i64 {
        self.hom(a, b).space.degree(i)
    }

    pub fn d(&self, a: usize, b: usize, v: &SVec) -> SVec {
        self.hom(a, b).d.apply(v)
    }

    /// `g ∘ f` for `f ∈ Hom(a, b)`, `g ∈ Hom(b, c)`.
    pub fn compose(&self, a: usize, b: usize, c: usize, g: &SVec, f: &SVec) -> SVec {
        let table = &self.comp[&(a, b, c)];
        let mut out = SVec::new();
        for (i, x) in g {
            for (j, y) in f {
                add_scaled(&mut out, &(x * y), &table[*i][*j]);
            }
        }
        out
    }

    /// Degree of a homogeneous element of `Hom(a, b)`; `None` for zero.
    pub fn degree_of(&self, a: usize, b: usize, v: &SVec) -> Option<std::result::Result<i64, ()>> {
        self.hom(a, b).space.homogeneous_degree(v)
    }

    /// Two-sided inverse of a degree-0 morphism `f: a → b`, if one exists.
    pub fn inverse(&self, a: usize, b: usize, f: &SVec) -> Option<SVec> {
        // unknown g ∈ Hom^0(b, a); columns are (g f, f g) stacked
        let gs = self.hom(b, a).space.in_degree(0);
        let off = self.hom(a, a).dim();
        let mut e = Echelon::tracked();
        for &g in &gs {
            let gv = unit(g);
            let mut col = self.compose(a, b, a, &gv, f);
            for (i, c) in self.compose(b, a, b, f, &gv) {
                col.insert(off + i, c);
            }
            e.insert(&col);
        }
        let mut target = self.identities[a].clone();
        for (i, c) in &self.identities[b] {
            target.insert(off + i, c.clone());
        }
        let coeffs = e.solve(&target)?;
        Some(coeffs.into_iter().map(|(k, c)| (gs[k], c)).collect())
    }

    /// Checks that `w` is a composable word of basis letters.
    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        let n = self.objects.len();
        for (j, &(a, b, i)) in w.iter().enumerate() {
            if a >= n || b >= n || i >= self.hom(a, b).dim() {
                return input(format!("letter {j} is not a basis morphism"));
            }
            if j + 1 < w.len() && w[j + 1].0 != b {
                return input(format!("letters {j} and {} are not composable", j + 1));
            }
        }
        Ok(())
    }

    /// `↓f_{n−1} ⊗ ⋯ ⊗ ↓f_0` with basis labels.
    pub fn word_label(&self, w: &[Letter]) -> String {
        let parts: Vec<String> =
            w.iter().rev().map(|&(a, b, i)| format!("↓{}", self.hom(a, b).space.label(i))).collect();
        if parts.is_empty() {
            "()".into()
        } else {
            parts.join("⊗")
        }
    }

    /// All composable basis words of length `n`.
    pub fn basis_words(&self, n: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        for a in 0..self.objects.len() {
            self.extend_words(a, n, &mut cur, &mut out);
        }
        out
    }

    fn extend_words(&self, from: usize, n: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..self.objects.len() {
            for i in 0..self.hom(from, b).dim() {
                cur.push((from, b, i));
                self.extend_words(b, n, cur, out);
                cur.pop();
            }
        }
    }

    fn letter_degrees(&self, w: &[Letter]) -> Vec<i64> {
        w.iter().map(|&(a, b, i)| self.degree(a, b, i)).collect()
    }
}

fn add_chain(out: &mut Chain, w: Word, c: Q) {
    if c.is_zero() {
        return;
    }
    let e = out.entry(w).or_insert_with(Q::zero);
    *e += c;
    if e.is_zero() {
        // keep chains free of explicit zeros
        let key: Vec<Word> = out.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in key {
            out.remove(&k);
        }
    }
}

/// The Hochschild differential `b = b_1 + b_2` on a chain of basis words.
pub fn hochschild_b(cat: &FiniteDGCategory, chain: &Chain) -> Result<Chain> {
    let mut out = Chain::new();
    for (w, c) in chain {
        if w.is_empty() {
            return input("the empty word is not a Hochschild chain");
        }
        cat.check_word(w)?;
        for (v, x) in b_word(cat, w) {
            add_chain(&mut out, v, c * x);
        }
    }
    Ok(out)
}

fn b_word(cat: &FiniteDGCategory, w: &[Letter]) -> Chain {
    let h = cat.letter_degrees(w);
    let n = w.len();
    let mut out = Chain::new();
    for i in 0..n {
        let e = sg::hochschild_b1_exponent(&h, i) + sg::suspended_differential_exponent();
        let (a, b, k) = w[i];
        for (j, x) in cat.d(a, b, &unit(k)) {
            let mut v = w.to_vec();
            v[i] = (a, b, j);
            add_chain(&mut out, v, sign(e) * x);
        }
    }
    for i in 0..n.saturating_sub(1) {
        let e = sg::hochschild_b2_exponent(&h, i) + sg::suspended_composition_exponent(h[i + 1]);
        let (a, b, f) = w[i];
        let (_, c, g) = w[i + 1];
        for (j, x) in cat.compose(a, b, c, &unit(g), &unit(f)) {
            let mut v = w[..i].to_vec();
            v.push((a, c, j));
            v.extend_from_slice(&w[i + 2..]);
            add_chain(&mut out, v, sign(e) * x);
        }
    }
    out
}

/// Result of a coherence check: the first failing word, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceReport {
    pub failure: Option<(usize, Word)>,
    pub checked: usize,
}

impl CoherenceReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

fn check_table(
    cat_src: &FiniteDGCategory,
    cat_tgt: &FiniteDGCategory,
    table: &HashMap<Word, SVec>,
    n: usize,
    ends: impl Fn(usize, usize) -> (usize, usize),
    shift: i64,
    name: &str,
) -> Result<()> {
    for (w, v) in table {
        if w.len() != n {
            return input(format!("{name}_{n} is given on a word of length {}", w.len()));
        }
        cat_src.check_word(w)?;
        let (s, t) = ends(w[0].0, w[n - 1].1);
        let space = &cat_tgt.hom(s, t).space;
        if v.keys().any(|k| *k >= space.dim()) {
            return input(format!("{name}_{n}({}) has coordinates out of range", cat_src.word_label(w)));
        }
        let want: i64 = cat_src.letter_degrees(w).iter().map(|h| h - 1).sum::<i64>() + shift;
        if v.keys().any(|k| space.degree(*k) != want) {
            return input(format!("{name}_{n}({}) is not of degree {want}", cat_src.word_label(w)));
        }
    }
    Ok(())
}

/// An A∞-functor: an object map and components `F_n` on basis words,
/// valued in `↓Hom`. Missing words and `n` beyond the table are zero.
#[derive(Clone, Debug)]
pub struct AInftyFunctor {
    pub source: Arc<FiniteDGCategory>,
    pub target: Arc<FiniteDGCategory>,
    object_map: Vec<usize>,
    components: Vec<HashMap<Word, SVec>>,
}

impl AInftyFunctor {
    /// `components[n − 1]` holds `F_n`.
    pub fn new(
        source: Arc<FiniteDGCategory>,
        target: Arc<FiniteDGCategory>,
        object_map: Vec<usize>,
        components: Vec<HashMap<Word, SVec>>,
    ) -> Result<Self> {
        if object_map.len() != source.object_count() || object_map.iter().any(|o| *o >= target.object_count()) {
            return input("object map does not match the categories");
        }
        for (k, table) in components.iter().enumerate() {
            check_table(&source, &target, table, k + 1, |a, b| (object_map[a], object_map[b]), 1, "F")?;
        }
        Ok(AInftyFunctor { source, target, object_map, components })
    }

    /// A functor with `F_{≥2} = 0`; `images[a * n + b][i]` is the image of the
    /// `i`-th basis morphism of `Hom(a, b)`.
    pub fn dg(
        source: Arc<FiniteDGCategory>,
        target: Arc<FiniteDGCategory>,
        object_map: Vec<usize>,
        images: &[Vec<SVec>],
    ) -> Result<Self> {
        let n = source.object_count();
        if images.len() != n * n {
            return input("one image table per ordered pair is required");
        }
        let mut f1 = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if images[a * n + b].len() != source.hom(a, b).dim() {
                    return input("image table does not match the Hom dimension");
                }
                for (i, v) in images[a * n + b].iter().enumerate() {
                    if !v.is_empty() {
                        f1.insert(vec![(a, b, i)], v.clone());
                    }
                }
            }
        }
        Self::new(source, target, object_map, vec![f1])
    }

    pub fn identity(cat: Arc<FiniteDGCategory>) -> Self {
        let n = cat.object_count();
        let images: Vec<Vec<SVec>> =
            (0..n * n).map(|ab| (0..cat.hom(ab / n, ab % n).dim()).map(unit).collect()).collect();
        Self::dg(cat.clone(), cat, (0..n).collect(), &images).expect("identity is well typed")
    }

    pub fn object(&self, a: usize) -> usize {
        self.object_map[a]
    }

    pub fn n_max(&self) -> usize {
        self.components.len()
    }

    pub fn is_dg(&self) -> bool {
        self.components.iter().skip(1).all(|t| t.values().all(|v| v.is_empty()))
    }

    pub fn components(&self, n: usize) -> Option<&HashMap<Word, SVec>> {
        self.components.get(n.checked_sub(1)?)
    }

    /// `F_n` on a basis word.
    pub fn eval(&self, w: &[Letter]) -> SVec {
        self.components(w.len()).and_then(|t| t.get(w)).cloned().unwrap_or_default()
    }

    /// `F` on a chain whose words share their end objects.
    pub fn eval_chain(&self, chain: &Chain) -> SVec {
        let mut out = SVec::new();
        for (w, c) in chain {
            add_scaled(&mut out, c, &self.eval(w));
        }
        out
    }

    /// `F_n` on a word of arbitrary vectors, by multilinearity.
    pub fn eval_vectors(&self, letters: &[(usize, usize, SVec)]) -> SVec {
        let mut out = SVec::new();
        if letters.iter().any(|l| l.2.is_empty()) {
            return out;
        }
        let Some(table) = self.components(letters.len()) else { return out };
        if table.is_empty() {
            return out;
        }
        expand(letters, &mut Vec::new(), Q::one(), &mut |w, c| {
            if let Some(v) = table.get(w) {
                add_scaled(&mut out, &c, v);
            }
        });
        out
    }

    /// Unit conditions: `F_1(id_A) = id_{F(A)}` and `F_{n≥2}` vanishes on
    /// words with an identity in any slot.
    pub fn unit_check(&self) -> std::result::Result<(), String> {
        let (src, tgt) = (&self.source, &self.target);
        for a in 0..src.object_count() {
            let v = self.eval_vectors(&[(a, a, src.identity(a).clone())]);
            if v != *tgt.identity(self.object(a)) {
                return Err(format!("F_1(id_{}) ≠ id", src.object(a)));
            }
        }
        for n in 2..=self.n_max() {
            for w in src.basis_words(n - 1) {
                for pos in 0..n {
                    let obj = if pos == 0 { w[0].0 } else { w[pos - 1].1 };
                    let mut letters: Vec<(usize, usize, SVec)> = w.iter().map(|&(a, b, i)| (a, b, unit(i))).collect();
                    letters.insert(pos, (obj, obj, src.identity(obj).clone()));
                    if !self.eval_vectors(&letters).is_empty() {
                        return Err(format!("F_{n} does not vanish with an identity in slot {pos}"));
                    }
                }
            }
        }
        Ok(())
    }
}

fn expand(letters: &[(usize, usize, SVec)], cur: &mut Word, c: Q, f: &mut impl FnMut(&Word, Q)) {
    let Some(((a, b, v), rest)) = letters.split_first() else {
        f(cur, c);
        return;
    };
    for (i, x) in v {
        cur.push((*a, *b, *i));
        expand(rest, cur, &c * x, f);
        cur.pop();
    }
}

/// `b_1(↓v) = −↓(dv)` on a single suspended letter in `Hom(a, b)`.
fn b1_letter(cat: &FiniteDGCategory, a: usize, b: usize, v: &SVec) -> SVec {
    let e = sg::hochschild_b1_exponent(&[0], 0) + sg::suspended_differential_exponent();
    scaled(&cat.d(a, b, v), &sign(e))
}

/// `b_2(↓u ⊗ ↓v)` for homogeneous `u ∈ Hom(b, c)`, `v ∈ Hom(a, b)`.
fn b2_pair(cat: &FiniteDGCategory, a: usize, b: usize, c: usize, u: &SVec, v: &SVec) -> SVec {
    let hu = match cat.degree_of(b, c, u) {
        Some(Ok(k)) => k,
        _ => return SVec::new(),
    };
    let hv = match cat.degree_of(a, b, v) {
        Some(Ok(k)) => k,
        _ => return SVec::new(),
    };
    let e = sg::hochschild_b2_exponent(&[hv, hu], 0) + sg::suspended_composition_exponent(hu);
    scaled(&cat.compose(a, b, c, u, v), &sign(e))
}

/// Defect of the A∞-functor relation on a basis word:
/// `b_1 F_n + Σ b_2 (F_i ⊗ F_j) − F_n b_1 − F_{n−1} b_2`.
pub fn ainfty_functor_defect(f: &AInftyFunctor, w: &[Letter]) -> SVec {
    let (src, tgt) = (&f.source, &f.target);
    let n = w.len();
    let (a0, an) = (f.object(w[0].0), f.object(w[n - 1].1));
    let mut out = b1_letter(tgt, a0, an, &f.eval(w));
    for i in 1..n {
        // F_i on the top i letters, F_{n−i} on the bottom n − i
        let (low, high) = w.split_at(n - i);
        let mid = f.object(low[n - i - 1].1);
        let term = b2_pair(tgt, a0, mid, an, &f.eval(high), &f.eval(low));
        add_scaled(&mut out, &Q::one(), &term);
    }
    let bw = b_word(src, w);
    add_scaled(&mut out, &-Q::one(), &f.eval_chain(&bw));
    out
}

/// Verifies the A∞-functor relation on every basis word of length `≤ n_max`.
pub fn ainfty_functor_check(f: &AInftyFunctor, n_max: usize) -> CoherenceReport {
    ainfty_functor_check_with(f, n_max, Exec::default())
}

pub fn ainfty_functor_check_with(f: &AInftyFunctor, n_max: usize, exec: Exec) -> CoherenceReport {
    let mut checked = 0;
    for n in 1..=n_max {
        let words = f.source.basis_words(n);
        let ok = exec.map(&words, |w| ainfty_functor_defect(f, w).is_empty());
        checked += ok.len();
        if let Some(k) = ok.iter().position(|b| !b) {
            return CoherenceReport { failure: Some((n, words[k].clone())), checked };
        }
    }
    CoherenceReport { failure: None, checked }
}

/// An A∞-natural transformation `λ: F ⇒ G` between functors `𝒞 → 𝒟`.
#[derive(Clone, Debug)]
pub struct AInftyNat {
    pub source: Arc<AInftyFunctor>,
    pub target: Arc<AInftyFunctor>,
    lambda0: Vec<SVec>,
    components: Vec<HashMap<Word, SVec>>,
}

impl AInftyNat {
    /// `lambda0[A] ∈ Hom^0(F A, G A)` must be closed; `components[n − 1]` holds `λ_n`.
    pub fn new(
        source: Arc<AInftyFunctor>,
        target: Arc<AInftyFunctor>,
        lambda0: Vec<SVec>,
        components: Vec<HashMap<Word, SVec>>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(&source.source, &target.source) || !Arc::ptr_eq(&source.target, &target.target) {
            return input("F and G must share source and target categories");
        }
        let (c, d) = (&source.source, &source.target);
        if lambda0.len() != c.object_count() {
            return input("λ_0 needs one morphism per object");
        }
        for (a, l) in lambda0.iter().enumerate() {
            let (fa, ga) = (source.object(a), target.object(a));
            let space = &d.hom(fa, ga).space;
            if l.keys().any(|k| *k >= space.dim() || space.degree(*k) != 0) {
                return input(format!("λ_0({}) is not a degree-0 morphism F A → G A", c.object(a)));
            }
            if !d.d(fa, ga, l).is_empty() {
                return input(format!("λ_0({}) is not closed", c.object(a)));
            }
        }
        for (k, table) in components.iter().enumerate() {
            check_table(c, d, table, k + 1, |a, b| (source.object(a), target.object(b)), 0, "λ")?;
        }
        Ok(AInftyNat { source, target, lambda0, components })
    }

    /// `λ_0 = id`, `λ_{≥1} = 0`.
    pub fn identity(f: Arc<AInftyFunctor>) -> Self {
        let d = f.target.clone();
        let lambda0 = (0..f.source.object_count()).map(|a| d.identity(f.object(a)).clone()).collect();
        AInftyNat { source: f.clone(), target: f, lambda0, components: Vec::new() }
    }

    pub fn n_max(&self) -> usize {
        self.components.len()
    }

    pub fn lambda0(&self, a: usize) -> &SVec {
        &self.lambda0[a]
    }

    pub fn components(&self, n: usize) -> Option<&HashMap<Word, SVec>> {
        self.components.get(n.checked_sub(1)?)
    }

    /// `λ_n(w)`; the empty word at object `a` gives `λ_0(a)`.
    pub fn eval(&self, w: &[Letter], a: usize) -> SVec {
        if w.is_empty() {
            return self.lambda0[a].clone();
        }
        self.components(w.len()).and_then(|t| t.get(w)).cloned().unwrap_or_default()
    }

    pub fn is_isomorphism(&self) -> bool {
        let d = &self.source.target;
        (0..self.lambda0.len())
            .all(|a| d.inverse(self.source.object(a), self.target.object(a), &self.lambda0[a]).is_some())
    }
}

/// Defect of the naturality relation on a basis word:
/// `G(f_{n−1}) λ_{n−1}(…) − (−1)^ε λ_{n−1}(…) F(f_0) − λ(b w) + d λ_n(w)`.
pub fn ainfty_nat_defect(lam: &AInftyNat, w: &[Letter]) -> SVec {
    let (f, g) = (&lam.source, &lam.target);
    let (c, d) = (&f.source, &f.target);
    let n = w.len();
    let h = c.letter_degrees(w);
    let (a0, an) = (w[0].0, w[n - 1].1);
    let (top, bottom) = (w[n - 1], w[0]);
    let mut out = d.compose(f.object(a0), g.object(top.0), g.object(an), &g.eval(&[top]), &lam.eval(&w[..n - 1], a0));
    let rest =
        d.compose(f.object(a0), f.object(bottom.1), g.object(an), &lam.eval(&w[1..], bottom.1), &f.eval(&[bottom]));
    add_scaled(&mut out, &-sign(sg::nat_exponent(&h)), &rest);
    for (v, x) in b_word(c, w) {
        add_scaled(&mut out, &-x, &lam.eval(&v, a0));
    }
    add_scaled(&mut out, &Q::one(), &d.d(f.object(a0), g.object(an), &lam.eval(w, a0)));
    out
}

/// Verifies the naturality relation for `1 ≤ n ≤ n_max` on every basis word.
/// `F` and `G` must be DG functors.
pub fn ainfty_nat_check(lam: &AInftyNat, n_max: usize) -> Result<CoherenceReport> {
    ainfty_nat_check_with(lam, n_max, Exec::default())
}

pub fn ainfty_nat_check_with(lam: &AInftyNat, n_max: usize, exec: Exec) -> Result<CoherenceReport> {
    if !lam.source.is_dg() || !lam.target.is_dg() {
        return input("naturality is checked between DG functors");
    }
    let mut checked = 0;
    for n in 1..=n_max {
        let words = lam.source.source.basis_words(n);
        let ok = exec.map(&words, |w| ainfty_nat_defect(lam, w).is_empty());
        checked += ok.len();
        if let Some(k) = ok.iter().position(|b| !b) {
            return Ok(CoherenceReport { failure: Some((n, words[k].clone())), checked });
        }
    }
    Ok(CoherenceReport { failure: None, checked })
}

/// `(μ ∘ λ)_n = Σ_{i=0}^{n} μ_i ∘ λ_{n−i}`, with `μ_i` on the top `i` letters.
pub fn compose_nats(mu: &AInftyNat, lam: &AInftyNat) -> Result<AInftyNat> {
    if !Arc::ptr_eq(&mu.source, &lam.target) {
        return input("μ must start where λ ends");
    }
    let (f, g, h) = (&lam.source, &lam.target, &mu.target);
    let d = &f.target;
    let c = &f.source;
    let lambda0: Vec<SVec> = (0..c.object_count())
        .map(|a| d.compose(f.object(a), g.object(a), h.object(a), &mu.lambda0[a], &lam.lambda0[a]))
        .collect();
    let n_max = mu.n_max() + lam.n_max();
    let mut components: Vec<HashMap<Word, SVec>> = vec![HashMap::new(); n_max];
    let mut put = |w: Word, v: SVec| {
        if v.is_empty() {
            return;
        }
        let slot = components[w.len() - 1].entry(w).or_default();
        add_scaled(slot, &Q::one(), &v);
    };
    // i = 0: μ_0(A_n) ∘ λ_n(w)
    for table in &lam.components {
        for (w, v) in table {
            let (a0, an) = (w[0].0, w[w.len() - 1].1);
            put(w.clone(), d.compose(f.object(a0), g.object(an), h.object(an), &mu.lambda0[an], v));
        }
    }
    // i = n: μ_n(w) ∘ λ_0(A_0)
    for table in &mu.components {
        for (w, v) in table {
            let (a0, an) = (w[0].0, w[w.len() - 1].1);
            put(w.clone(), d.compose(f.object(a0), g.object(a0), h.object(an), v, &lam.lambda0[a0]));
        }
    }
    // 0 < i < n: concatenations
    for lt in &lam.components {
        for (low, v) in lt {
            for mt in &mu.components {
                for (high, u) in mt {
                    if high[0].0 != low[low.len() - 1].1 {
                        continue;
                    }
                    let (a0, mid, an) = (low[0].0, high[0].0, high[high.len() - 1].1);
                    let mut w = low.clone();
                    w.extend_from_slice(high);
                    put(w, d.compose(f.object(a0), g.object(mid), h.object(an), u, v));
                }
            }
        }
    }
    for t in components.iter_mut() {
        t.retain(|_, v| {
            v.retain(|_, x| !x.is_zero());
            !v.is_empty()
        });
    }
    while components.last().is_some_and(|t| t.is_empty()) {
        components.pop();
    }
    Ok(AInftyNat { source: f.clone(), target: h.clone(), lambda0, components })
}

/// Composite A∞-functor `(H ∘ F)_n = Σ H_k ∘ (F_{n_k} ⊗ ⋯ ⊗ F_{n_1})`, tabulated on
/// basis words of length `≤ n_max`.
pub fn compose_functors(h: &AInftyFunctor, f: &AInftyFunctor, n_max: usize) -> Result<AInftyFunctor> {
    if !Arc::ptr_eq(&h.source, &f.target) {
        return input("H must start where F ends");
    }
    let c = &f.source;
    let mut components = Vec::new();
    for n in 1..=n_max {
        let words = c.basis_words(n);
        let values = crate::par::map(&words, |w| {
            let mut out = SVec::new();
            for parts in compositions(n) {
                let mut letters = Vec::new();
                let mut start = 0;
                for len in &parts {
                    let piece = &w[start..start + len];
                    letters.push((f.object(piece[0].0), f.object(piece[len - 1].1), f.eval(piece)));
                    start += len;
                }
                add_scaled(&mut out, &Q::one(), &h.eval_vectors(&letters));
            }
            out
        });
        components.push(words.into_iter().zip(values).filter(|(_, v)| !v.is_empty()).collect());
    }
    let object_map = (0..c.object_count()).map(|a| h.object(f.object(a))).collect();
    AInftyFunctor::new(c.clone(), h.target.clone(), object_map, components)
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

/// Whiskering `H ∘ λ: H∘F ⇒ H∘G` by the formula
/// `(H∘λ)_n = Σ_{k=2}^{n+2} Σ_{i+j=k} H_{k−1} ∘ (G^{⊗(i−1)} ⊗ λ_{n+2−k} ⊗ F^{⊗(j−1)})`,
/// with `(H∘λ)_0 = H_1 ∘ λ_0`. General `H_k` are accepted.
pub fn whisker(h: &AInftyFunctor, lam: &AInftyNat) -> Result<AInftyNat> {
    let (f, g) = (&lam.source, &lam.target);
    if !Arc::ptr_eq(&h.source, &f.target) {
        return input("H must start at the target category of λ");
    }
    if !f.is_dg() || !g.is_dg() {
        return input("whiskering is defined for transformations between DG functors");
    }
    let c = f.source.clone();
    let hf = Arc::new(compose_functors(h, f, h.n_max().max(1))?);
    let hg = Arc::new(compose_functors(h, g, h.n_max().max(1))?);
    let lambda0: Vec<SVec> =
        (0..c.object_count()).map(|a| h.eval_vectors(&[(f.object(a), g.object(a), lam.lambda0[a].clone())])).collect();
    let n_out = lam.n_max() + h.n_max().saturating_sub(1);
    let mut components = Vec::new();
    for n in 1..=n_out {
        let words = c.basis_words(n);
        let values = crate::par::map(&words, |w| {
            let mut out = SVec::new();
            for k in 2..=n + 2 {
                let m = n + 2 - k;
                for i in 1..k {
                    let j = k - i;
                    // bottom j − 1 letters through F, then λ_m, then top i − 1 letters through G
                    let (low, rest) = w.split_at(j - 1);
                    let (mid, high) = rest.split_at(m);
                    let mid_start = if j == 1 { w[0].0 } else { low[j - 2].1 };
                    let mid_end = if m == 0 { mid_start } else { mid[m - 1].1 };
                    let mut letters: Vec<(usize, usize, SVec)> =
                        low.iter().map(|&(a, b, x)| (f.object(a), f.object(b), f.eval(&[(a, b, x)]))).collect();
                    letters.push((f.object(mid_start), g.object(mid_end), lam.eval(mid, mid_start)));
                    letters.extend(high.iter().map(|&(a, b, x)| (g.object(a), g.object(b), g.eval(&[(a, b, x)]))));
                    add_scaled(&mut out, &Q::one(), &h.eval_vectors(&letters));
                }
            }
            out
        });
        components.push(words.into_iter().zip(values).filter(|(_, v)| !v.is_empty()).collect());
    }
    AInftyNat::new(hf, hg, lambda0, components)
}

/// Outcome of the isomorphism part of the whiskering lemma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiskerIsoReport {
    pub lambda_is_iso: bool,
    pub whisker_is_iso: bool,
    /// `H_1(λ_0(A)^{-1})` inverts `(H∘λ)_0(A)` for every object.
    pub inverse_formula: bool,
}

impl WhiskerIsoReport {
    pub fn ok(&self) -> bool {
        !self.lambda_is_iso || (self.whisker_is_iso && self.inverse_formula)
    }
}

/// If `λ` is an A∞-natural isomorphism then so is `H ∘ λ`, with
/// `(H∘λ)_0(A)^{-1} = H_1(λ_0(A)^{-1})`.
pub fn whisker_iso_check(h: &AInftyFunctor, lam: &AInftyNat) -> Result<WhiskerIsoReport> {
    let hl = whisker(h, lam)?;
    let (f, g) = (&lam.source, &lam.target);
    let d = &f.target;
    let e = &h.target;
    let lambda_is_iso = lam.is_isomorphism();
    let whisker_is_iso = hl.is_isomorphism();
    let mut inverse_formula = lambda_is_iso;
    if lambda_is_iso {
        for a in 0..f.source.object_count() {
            let (fa, ga) = (f.object(a), g.object(a));
            let inv = d.inverse(fa, ga, lam.lambda0(a)).expect("λ_0 is invertible");
            let hinv = h.eval_vectors(&[(ga, fa, inv)]);
            let (hfa, hga) = (h.object(fa), h.object(ga));
            let l = e.compose(hga, hfa, hga, hl.lambda0(a), &hinv);
            let r = e.compose(hfa, hga, hfa, &hinv, hl.lambda0(a));
            if l != *e.identity(hga) || r != *e.identity(hfa) {
                inverse_formula = false;
            }
        }
    }
    Ok(WhiskerIsoReport { lambda_is_iso, whisker_is_iso, inverse_formula })
}
