//! Representations up to homotopy of finite simplicial sets.
//!
//! A [`FiniteSimplicialSet`] stores the simplices up to a dimension `p_max`
//! together with all face and degeneracy maps between them. Representations,
//! their morphisms and the Hom complexes of `Rep∞(K)` are finite tables of
//! graded maps indexed by simplices.
//!
//! Front and back faces follow vertex restriction: the front `p`-face of an
//! `n`-simplex spans its vertices `0..=p` (iterated last faces), the back
//! `q`-face its last `q + 1` vertices (iterated 0th faces).

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::One;

use crate::complex::CochainComplex;
use crate::error::{input, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::{add_term, SVec};
use crate::par::Exec;
use crate::scalar::{sign, Q};
use crate::sign as sg;
use crate::spectral::FilteredComplex;

#[derive(Clone, Debug)]
pub struct FiniteSimplicialSet {
    labels: Vec<Vec<String>>,
    /// `faces[p][x][i] = d_i x ∈ K_{p−1}`; empty for `p = 0`.
    faces: Vec<Vec<Vec<usize>>>,
    /// `degens[p][y][i] = s_i y ∈ K_{p+1}`; empty for `p = p_max`.
    degens: Vec<Vec<Vec<usize>>>,
    degenerate: Vec<Vec<bool>>,
    sequences: Option<Vec<Vec<Vec<usize>>>>,
}

impl FiniteSimplicialSet {
    /// Builds a simplicial set from explicit tables and verifies the
    /// simplicial identities on every element.
    pub fn new(labels: Vec<Vec<String>>, faces: Vec<Vec<Vec<usize>>>, degens: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let levels = labels.len();
        if levels == 0 {
            return input("a simplicial set needs at least its vertices");
        }
        if faces.len() != levels || degens.len() != levels {
            return input("face and degeneracy tables must cover every dimension");
        }
        let p_max = levels - 1;
        for p in 0..=p_max {
            let n = labels[p].len();
            if faces[p].len() != n || degens[p].len() != n {
                return input(format!("tables in dimension {p} do not match the simplex count"));
            }
            for (x, fs) in faces[p].iter().enumerate() {
                let want = if p == 0 { 0 } else { p + 1 };
                if fs.len() != want {
                    return input(format!("simplex {} needs {want} faces", labels[p][x]));
                }
                if p > 0 && fs.iter().any(|&y| y >= labels[p - 1].len()) {
                    return input(format!("face of {} out of range", labels[p][x]));
                }
            }
            for (y, ss) in degens[p].iter().enumerate() {
                let want = if p == p_max { 0 } else { p + 1 };
                if ss.len() != want {
                    return input(format!("simplex {} needs {want} degeneracies", labels[p][y]));
                }
                if p < p_max && ss.iter().any(|&z| z >= labels[p + 1].len()) {
                    return input(format!("degeneracy of {} out of range", labels[p][y]));
                }
            }
        }
        let mut degenerate: Vec<Vec<bool>> = labels.iter().map(|l| vec![false; l.len()]).collect();
        for p in 0..p_max {
            for ss in &degens[p] {
                for &z in ss {
                    degenerate[p + 1][z] = true;
                }
            }
        }
        let k = FiniteSimplicialSet { labels, faces, degens, degenerate, sequences: None };
        if let Err(e) = k.verify_identities() {
            return input(e);
        }
        Ok(k)
    }

    /// Simplicial set whose `p`-simplices are vertex sequences closed under
    /// deletion and repetition.
    fn from_sequences(seqs: Vec<Vec<Vec<usize>>>) -> Self {
        let index: Vec<HashMap<&Vec<usize>, usize>> =
            seqs.iter().map(|level| level.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let p_max = seqs.len() - 1;
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for p in 0..=p_max {
            faces.push(
                seqs[p]
                    .iter()
                    .map(|s| {
                        if p == 0 {
                            return Vec::new();
                        }
                        (0..=p)
                            .map(|i| {
                                let mut f = s.clone();
                                f.remove(i);
                                index[p - 1][&f]
                            })
                            .collect()
                    })
                    .collect(),
            );
            degens.push(
                seqs[p]
                    .iter()
                    .map(|s| {
                        if p == p_max {
                            return Vec::new();
                        }
                        (0..=p)
                            .map(|i| {
                                let mut f = s.clone();
                                f.insert(i, s[i]);
                                index[p + 1][&f]
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        let labels = seqs
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|s| {
                        let v: Vec<String> = s.iter().map(|i| i.to_string()).collect();
                        format!("[{}]", v.join(","))
                    })
                    .collect()
            })
            .collect();
        let mut k = FiniteSimplicialSet::new(labels, faces, degens).expect("sequence sets are simplicial");
        k.sequences = Some(seqs);
        k
    }

    /// `Δ[n]` up to dimension `p_max`: nondecreasing vertex sequences.
    pub fn standard_simplex(n: usize, p_max: usize) -> Self {
        Self::from_sequences(nondecreasing(n, p_max, |_| true))
    }

    /// `∂Δ[n]` up to dimension `p_max`: sequences missing at least one vertex.
    pub fn boundary_of_simplex(n: usize, p_max: usize) -> Result<Self> {
        if n == 0 {
            return input("∂Δ[0] is empty");
        }
        Ok(Self::from_sequences(nondecreasing(n, p_max, |s| (0..=n).any(|v| !s.contains(&v)))))
    }

    /// Nerve of the cyclic group `ℤ/m`: `p`-simplices are tuples `(g_1|…|g_p)`.
    pub fn cyclic_nerve(m: usize, p_max: usize) -> Result<Self> {
        if m == 0 {
            return input("ℤ/0 is not finite");
        }
        let tuples: Vec<Vec<Vec<usize>>> = (0..=p_max)
            .map(|p| {
                let count = m.pow(p as u32);
                (0..count)
                    .map(|mut c| {
                        let mut t = vec![0; p];
                        for slot in t.iter_mut().rev() {
                            *slot = c % m;
                            c /= m;
                        }
                        t
                    })
                    .collect()
            })
            .collect();
        let encode = |t: &[usize]| t.iter().fold(0usize, |acc, g| acc * m + g);
        let mut faces = Vec::new();
        let mut degens = Vec::new();
        for p in 0..=p_max {
            faces.push(
                tuples[p]
                    .iter()
                    .map(|t| {
                        if p == 0 {
                            return Vec::new();
                        }
                        (0..=p)
                            .map(|i| {
                                let f: Vec<usize> = if i == 0 {
                                    t[1..].to_vec()
                                } else if i == p {
                                    t[..p - 1].to_vec()
                                } else {
                                    let mut f = t[..i - 1].to_vec();
                                    f.push((t[i - 1] + t[i]) % m);
                                    f.extend_from_slice(&t[i + 1..]);
                                    f
                                };
                                encode(&f)
                            })
                            .collect()
                    })
                    .collect(),
            );
            degens.push(
                tuples[p]
                    .iter()
                    .map(|t| {
                        if p == p_max {
                            return Vec::new();
                        }
                        (0..=p)
                            .map(|i| {
                                let mut f = t.clone();
                                f.insert(i, 0);
                                encode(&f)
                            })
                            .collect()
                    })
                    .collect(),
            );
        }
        let labels = tuples
            .iter()
            .map(|level| {
                level
                    .iter()
                    .map(|t| {
                        let v: Vec<String> = t.iter().map(|g| g.to_string()).collect();
                        format!("({})", v.join("|"))
                    })
                    .collect()
            })
            .collect();
        FiniteSimplicialSet::new(labels, faces, degens)
    }

    pub fn p_max(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn count(&self, p: usize) -> usize {
        self.labels[p].len()
    }

    pub fn label(&self, p: usize, x: usize) -> &str {
        &self.labels[p][x]
    }

    pub fn index_of(&self, p: usize, label: &str) -> Option<usize> {
        self.labels.get(p)?.iter().position(|l| l == label)
    }

    /// `d_i x` for `x ∈ K_p`, `p ≥ 1`.
    pub fn face(&self, p: usize, x: usize, i: usize) -> usize {
        self.faces[p][x][i]
    }

    /// `s_i y ∈ K_{p+1}` for `y ∈ K_p`, when `p < p_max`.
    pub fn degeneracy(&self, p: usize, y: usize, i: usize) -> Option<usize> {
        self.degens[p].get(y)?.get(i).copied()
    }

    pub fn is_degenerate(&self, p: usize, x: usize) -> bool {
        self.degenerate[p][x]
    }

    /// Vertex sequence of a simplex, for sets built from sequences.
    pub fn vertices(&self, p: usize, x: usize) -> Option<&[usize]> {
        self.sequences.as_ref().map(|s| s[p][x].as_slice())
    }

    pub(crate) fn front(&self, dim: usize, mut x: usize, p: usize) -> usize {
        for n in (p + 1..=dim).rev() {
            x = self.faces[n][x][n];
        }
        x
    }

    pub(crate) fn back(&self, dim: usize, mut x: usize, q: usize) -> usize {
        for n in (q + 1..=dim).rev() {
            x = self.faces[n][x][0];
        }
        x
    }

    pub(crate) fn vertex_of(&self, dim: usize, x: usize, k: usize) -> usize {
        self.back(k, self.front(dim, x, k), 0)
    }

    fn check_simplex(&self, dim: usize, x: usize) -> Result<()> {
        if dim > self.p_max() || x >= self.count(dim) {
            return input(format!("no simplex {x} in dimension {dim}"));
        }
        Ok(())
    }

    /// Front `p`-face of the `dim`-simplex `x` (vertices `0..=p`).
    pub fn front_face(&self, dim: usize, x: usize, p: usize) -> Result<usize> {
        self.check_simplex(dim, x)?;
        if p > dim {
            return input(format!("front {p}-face of a {dim}-simplex"));
        }
        Ok(self.front(dim, x, p))
    }

    /// Back `q`-face of the `dim`-simplex `x` (the last `q + 1` vertices).
    pub fn back_face(&self, dim: usize, x: usize, q: usize) -> Result<usize> {
        self.check_simplex(dim, x)?;
        if q > dim {
            return input(format!("back {q}-face of a {dim}-simplex"));
        }
        Ok(self.back(dim, x, q))
    }

    /// `v_k(x)`.
    pub fn vertex(&self, dim: usize, x: usize, k: usize) -> Result<usize> {
        self.check_simplex(dim, x)?;
        if k > dim {
            return input(format!("vertex {k} of a {dim}-simplex"));
        }
        Ok(self.vertex_of(dim, x, k))
    }

    /// Checks every simplicial identity that stays below `p_max` and returns
    /// the number of instances checked.
    pub fn verify_identities(&self) -> std::result::Result<usize, String> {
        let p_max = self.p_max();
        let d = |p: usize, x: usize, i: usize| self.faces[p][x][i];
        let s = |p: usize, y: usize, i: usize| self.degens[p][y][i];
        let mut checked = 0usize;
        let fail = |what: &str, p: usize, x: usize| Err(format!("{what} fails on {}", self.labels[p][x]));
        for p in 2..=p_max {
            for x in 0..self.count(p) {
                for j in 0..=p {
                    for i in 0..j {
                        checked += 1;
                        if d(p - 1, d(p, x, j), i) != d(p - 1, d(p, x, i), j - 1) {
                            return fail(&format!("d_{i} d_{j} = d_{} d_{i}", j - 1), p, x);
                        }
                    }
                }
            }
        }
        for p in 0..p_max {
            for y in 0..self.count(p) {
                for j in 0..=p {
                    let sy = s(p, y, j);
                    for i in 0..=p + 1 {
                        checked += 1;
                        let lhs = d(p + 1, sy, i);
                        let ok = if i < j {
                            lhs == s(p - 1, d(p, y, i), j - 1)
                        } else if i == j || i == j + 1 {
                            lhs == y
                        } else {
                            lhs == s(p - 1, d(p, y, i - 1), j)
                        };
                        if !ok {
                            return fail(&format!("d_{i} s_{j}"), p, y);
                        }
                    }
                    if p + 2 <= p_max {
                        for i in 0..=j {
                            checked += 1;
                            if s(p + 1, sy, i) != s(p + 1, s(p, y, i), j + 1) {
                                return fail(&format!("s_{i} s_{j} = s_{} s_{i}", j + 1), p, y);
                            }
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
}

fn nondecreasing(n: usize, p_max: usize, keep: impl Fn(&[usize]) -> bool) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for p in 0..=p_max {
        let mut level = Vec::new();
        let mut cur = vec![0usize; p + 1];
        loop {
            if keep(&cur) {
                level.push(cur.clone());
            }
            // next nondecreasing sequence in lexicographic order
            let Some(pos) = (0..=p).rev().find(|&i| cur[i] < n) else { break };
            let v = cur[pos] + 1;
            for c in cur[pos..].iter_mut() {
                *c = v;
            }
        }
        out.push(level);
    }
    out
}

/// A morphism of simplicial sets, stored dimensionwise.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: Arc<FiniteSimplicialSet>,
    pub target: Arc<FiniteSimplicialSet>,
    maps: Vec<Vec<usize>>,
}

impl SimplicialMap {
    pub fn new(
        source: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        maps: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let p_max = source.p_max();
        if target.p_max() < p_max {
            return input("target is truncated below the source");
        }
        if maps.len() != p_max + 1 {
            return input("one table per dimension is required");
        }
        for p in 0..=p_max {
            if maps[p].len() != source.count(p) || maps[p].iter().any(|&y| y >= target.count(p)) {
                return input(format!("table in dimension {p} is malformed"));
            }
        }
        for p in 0..=p_max {
            for x in 0..source.count(p) {
                let fx = maps[p][x];
                if p > 0 {
                    for i in 0..=p {
                        if maps[p - 1][source.face(p, x, i)] != target.face(p, fx, i) {
                            return input(format!("not simplicial: d_{i} on {}", source.label(p, x)));
                        }
                    }
                }
                if p < p_max {
                    for i in 0..=p {
                        let sx = source.degeneracy(p, x, i).expect("below p_max");
                        if target.degeneracy(p, fx, i) != Some(maps[p + 1][sx]) {
                            return input(format!("not simplicial: s_{i} on {}", source.label(p, x)));
                        }
                    }
                }
            }
        }
        Ok(SimplicialMap { source, target, maps })
    }

    pub fn identity(k: Arc<FiniteSimplicialSet>) -> Self {
        let maps = (0..=k.p_max()).map(|p| (0..k.count(p)).collect()).collect();
        SimplicialMap { source: k.clone(), target: k, maps }
    }

    /// The map induced by a vertex map between sets built from vertex sequences.
    pub fn from_vertex_map(
        source: Arc<FiniteSimplicialSet>,
        target: Arc<FiniteSimplicialSet>,
        vertex_map: &[usize],
    ) -> Result<Self> {
        let (Some(src), Some(tgt)) = (&source.sequences, &target.sequences) else {
            return input("vertex maps need sets given by vertex sequences");
        };
        let mut maps = Vec::new();
        for p in 0..=source.p_max() {
            let index: HashMap<&Vec<usize>, usize> = tgt[p].iter().enumerate().map(|(i, s)| (s, i)).collect();
            let mut level = Vec::new();
            for s in &src[p] {
                let image: Vec<usize> = s
                    .iter()
                    .map(|&v| vertex_map.get(v).copied())
                    .collect::<Option<_>>()
                    .ok_or_else(|| crate::Error::Input("vertex map too short".into()))?;
                match index.get(&image) {
                    Some(&y) => level.push(y),
                    None => return input(format!("{image:?} is not a simplex of the target")),
                }
            }
            maps.push(level);
        }
        Self::new(source, target, maps)
    }

    pub fn apply(&self, p: usize, x: usize) -> usize {
        self.maps[p][x]
    }
}

/// A cochain of simplicial degree `dim`: one graded map per `dim`-simplex.
#[derive(Clone, Debug)]
pub struct Cochain {
    pub dim: usize,
    pub values: Vec<GradedMap>,
}

impl Cochain {
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }
}

/// `(F ∪ F')(x) = F(front_p x) ∘ F'(back_{p'} x)`.
pub fn cup(k: &FiniteSimplicialSet, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let dim = f.dim + g.dim;
    if dim > k.p_max() {
        return input(format!("cup product lands in dimension {dim} > {}", k.p_max()));
    }
    if f.values.len() != k.count(f.dim) || g.values.len() != k.count(g.dim) {
        return input("cochain does not match the simplicial set");
    }
    let mut values = Vec::with_capacity(k.count(dim));
    for x in 0..k.count(dim) {
        let a = &f.values[k.front(dim, x, f.dim)];
        let b = &g.values[k.back(dim, x, g.dim)];
        if *a.source != *b.target {
            return input(format!("cup product is not composable on {}", k.label(dim, x)));
        }
        values.push(a.compose(b));
    }
    Ok(Cochain { dim, values })
}

/// `(E, F_•)`: graded fibers over the vertices and cochains
/// `F_p(x) ∈ Hom(E_{v_p x}, E_{v_0 x})^{1−p}` for `p ≤ p_max`.
#[derive(Clone, Debug)]
pub struct RepUpToHomotopy {
    k: Arc<FiniteSimplicialSet>,
    fibers: Vec<Arc<GradedSpace>>,
    f: Vec<Cochain>,
    normalized: bool,
}

impl RepUpToHomotopy {
    /// Typechecks the data. The structure relation is checked by [`ruth_check`].
    pub fn new(k: Arc<FiniteSimplicialSet>, fibers: Vec<Arc<GradedSpace>>, f: Vec<Vec<GradedMap>>) -> Result<Self> {
        if fibers.len() != k.count(0) {
            return input("one fiber per vertex is required");
        }
        if f.len() != k.p_max() + 1 {
            return input(format!("cochains F_0..F_{} are required", k.p_max()));
        }
        let f: Vec<Cochain> = f.into_iter().enumerate().map(|(dim, values)| Cochain { dim, values }).collect();
        check_typing(&k, &fibers, &fibers, &f, 1, "F")?;
        let normalized = is_normalized(&k, &f);
        Ok(RepUpToHomotopy { k, fibers, f, normalized })
    }

    /// Constant representation: every fiber is `C`, `F_0 = d`, `F_1 = id`, `F_{≥2} = 0`.
    pub fn constant(k: Arc<FiniteSimplicialSet>, c: &CochainComplex) -> Self {
        let space = c.space.clone();
        let id = identity_map(&space);
        let f = (0..=k.p_max())
            .map(|p| {
                let value = match p {
                    0 => c.d.clone(),
                    1 => id.clone(),
                    _ => GradedMap::zero(space.clone(), space.clone(), 1 - p as i64),
                };
                vec![value; k.count(p)]
            })
            .collect();
        let fibers = vec![space; k.count(0)];
        Self::new(k, fibers, f).expect("constant data is well typed")
    }

    /// The constant representation on the line `ℝ` in degree 0.
    pub fn trivial(k: Arc<FiniteSimplicialSet>) -> Self {
        let line = Arc::new(GradedSpace::new(vec![("1".into(), 0)]).expect("one label"));
        Self::constant(k, &CochainComplex::trivial(line))
    }

    pub fn simplicial_set(&self) -> &Arc<FiniteSimplicialSet> {
        &self.k
    }

    pub fn fiber(&self, v: usize) -> &Arc<GradedSpace> {
        &self.fibers[v]
    }

    pub fn fibers(&self) -> &[Arc<GradedSpace>] {
        &self.fibers
    }

    pub fn component(&self, p: usize, x: usize) -> &GradedMap {
        &self.f[p].values[x]
    }

    pub fn cochain(&self, p: usize) -> &Cochain {
        &self.f[p]
    }

    /// `F_1` is the identity and `F_{≥2}` vanishes on degenerate simplices.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

fn identity_map(space: &Arc<GradedSpace>) -> GradedMap {
    let cols = (0..space.dim()).map(crate::linalg::unit).collect();
    GradedMap::from_cols(space.clone(), space.clone(), 0, cols).expect("identity has degree 0")
}

fn check_typing(
    k: &FiniteSimplicialSet,
    src: &[Arc<GradedSpace>],
    tgt: &[Arc<GradedSpace>],
    comps: &[Cochain],
    degree: i64,
    name: &str,
) -> Result<()> {
    for (p, c) in comps.iter().enumerate() {
        if c.values.len() != k.count(p) {
            return input(format!("{name}_{p} needs one value per {p}-simplex"));
        }
        for (x, m) in c.values.iter().enumerate() {
            let here = || format!("{name}_{p}({})", k.label(p, x));
            if *m.source != *src[k.vertex_of(p, x, p)] || *m.target != *tgt[k.vertex_of(p, x, 0)] {
                return input(format!("{} has the wrong source or target fiber", here()));
            }
            if m.degree != degree - p as i64 {
                return input(format!("{} has degree {}, expected {}", here(), m.degree, degree - p as i64));
            }
        }
    }
    Ok(())
}

fn is_normalized(k: &FiniteSimplicialSet, f: &[Cochain]) -> bool {
    f.iter().enumerate().skip(1).all(|(p, c)| {
        c.values.iter().enumerate().filter(|(x, _)| k.is_degenerate(p, *x)).all(|(_, m)| {
            if p == 1 {
                m.source == m.target && m.add(&identity_map(&m.source), &-Q::one()).is_zero()
            } else {
                m.is_zero()
            }
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuthReport {
    /// First `(p, x)` where the structure relation fails.
    pub failure: Option<(usize, usize)>,
    pub checked: usize,
}

impl RuthReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }
}

/// Left side of the structure relation at `x ∈ K_p`:
/// `Σ_{i=1}^{p−1} (−1)^i F_{p−1}(d_i x) + Σ_{i=0}^{p} (−1)^{i+1} (F_i ∪ F_{p−i})(x)`.
pub fn ruth_defect(r: &RepUpToHomotopy, p: usize, x: usize) -> GradedMap {
    let k = &r.k;
    let src = r.fibers[k.vertex_of(p, x, p)].clone();
    let tgt = r.fibers[k.vertex_of(p, x, 0)].clone();
    let mut out = GradedMap::zero(src, tgt, 2 - p as i64);
    for i in 1..p {
        out = out.add(&r.f[p - 1].values[k.face(p, x, i)], &sign(i as i64));
    }
    for i in 0..=p {
        let a = &r.f[i].values[k.front(p, x, i)];
        let b = &r.f[p - i].values[k.back(p, x, p - i)];
        out = out.add(&a.compose(b), &sign(i as i64 + 1));
    }
    out
}

/// Evaluates the structure relation on every simplex of dimension `≤ p_max`.
pub fn ruth_check(r: &RepUpToHomotopy) -> RuthReport {
    ruth_check_with(r, Exec::default())
}

pub fn ruth_check_with(r: &RepUpToHomotopy, exec: Exec) -> RuthReport {
    let mut checked = 0;
    for p in 0..=r.k.p_max() {
        let ok = exec.map_range(r.k.count(p), |x| ruth_defect(r, p, x).is_zero());
        checked += ok.len();
        if let Some(x) = ok.iter().position(|b| !b) {
            return RuthReport { failure: Some((p, x)), checked };
        }
    }
    RuthReport { failure: None, checked }
}

/// A degree-`n` morphism: `φ_p(x) ∈ Hom(E_{v_p x}, E'_{v_0 x})^{n−p}`.
#[derive(Clone, Debug)]
pub struct RepMorphism {
    pub source: Arc<RepUpToHomotopy>,
    pub target: Arc<RepUpToHomotopy>,
    pub degree: i64,
    comps: Vec<Cochain>,
}

impl RepMorphism {
    pub fn new(
        source: Arc<RepUpToHomotopy>,
        target: Arc<RepUpToHomotopy>,
        degree: i64,
        comps: Vec<Vec<GradedMap>>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(&source.k, &target.k) {
            return input("representations live on different simplicial sets");
        }
        if comps.len() != source.k.p_max() + 1 {
            return input(format!("components φ_0..φ_{} are required", source.k.p_max()));
        }
        let comps: Vec<Cochain> = comps.into_iter().enumerate().map(|(dim, values)| Cochain { dim, values }).collect();
        check_typing(&source.k, &source.fibers, &target.fibers, &comps, degree, "φ")?;
        Ok(RepMorphism { source, target, degree, comps })
    }

    pub fn zero(source: Arc<RepUpToHomotopy>, target: Arc<RepUpToHomotopy>, degree: i64) -> Self {
        let k = source.k.clone();
        let comps = (0..=k.p_max())
            .map(|p| Cochain {
                dim: p,
                values: (0..k.count(p))
                    .map(|x| {
                        GradedMap::zero(
                            source.fibers[k.vertex_of(p, x, p)].clone(),
                            target.fibers[k.vertex_of(p, x, 0)].clone(),
                            degree - p as i64,
                        )
                    })
                    .collect(),
            })
            .collect();
        RepMorphism { source, target, degree, comps }
    }

    /// `φ_0 = id`, `φ_{≥1} = 0`.
    pub fn identity(r: Arc<RepUpToHomotopy>) -> Self {
        let mut m = Self::zero(r.clone(), r.clone(), 0);
        m.comps[0].values = r.fibers.iter().map(identity_map).collect();
        m
    }

    pub fn component(&self, p: usize, x: usize) -> &GradedMap {
        &self.comps[p].values[x]
    }

    pub fn cochain(&self, p: usize) -> &Cochain {
        &self.comps[p]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Cochain::is_zero)
    }

    fn same_ends(&self, other: &RepMorphism) -> Result<()> {
        if !Arc::ptr_eq(&self.source, &other.source) || !Arc::ptr_eq(&self.target, &other.target) {
            return input("morphisms between different representations");
        }
        if self.degree != other.degree {
            return input("morphisms of different degrees");
        }
        Ok(())
    }

    /// `self + c · other`.
    pub fn add(&self, other: &RepMorphism, c: &Q) -> Result<RepMorphism> {
        self.same_ends(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| Cochain {
                dim: a.dim,
                values: a.values.iter().zip(&b.values).map(|(u, v)| u.add(v, c)).collect(),
            })
            .collect();
        Ok(RepMorphism { comps, ..self.clone() })
    }

    pub fn scale(&self, c: &Q) -> RepMorphism {
        let comps = self
            .comps
            .iter()
            .map(|a| Cochain { dim: a.dim, values: a.values.iter().map(|u| u.scale(c)).collect() })
            .collect();
        RepMorphism { comps, ..self.clone() }
    }

    /// Two-sided inverse of a degree-0 morphism whose vertex components are
    /// invertible. Built as the right inverse, recursively in `p`.
    pub fn inverse(&self) -> Result<RepMorphism> {
        if self.degree != 0 {
            return input("only degree-0 morphisms can be inverted");
        }
        let k = self.source.k.clone();
        let inv0: Vec<GradedMap> = self.comps[0]
            .values
            .iter()
            .map(|m| m.inverse())
            .collect::<Option<_>>()
            .ok_or_else(|| crate::Error::Input("φ_0 is not invertible at every vertex".into()))?;
        let mut out = RepMorphism::zero(self.target.clone(), self.source.clone(), 0);
        out.comps[0].values = inv0.clone();
        for p in 1..=k.p_max() {
            for x in 0..k.count(p) {
                let mut acc = out.comps[p].values[x].clone();
                for i in 0..p {
                    let a = &self.comps[p - i].values[k.front(p, x, p - i)];
                    let b = &out.comps[i].values[k.back(p, x, i)];
                    acc = acc.add(&a.compose(b), &Q::one());
                }
                out.comps[p].values[x] = inv0[k.vertex_of(p, x, 0)].compose(&acc).scale(&-Q::one());
            }
        }
        Ok(out)
    }
}

/// `Σ_{i=0}^{p} (−1)^{n(p−i)} a_{p−i} ∪ b_i` summed into `out`, where `n` is the
/// degree of `b`.
fn accumulate_product(
    k: &FiniteSimplicialSet,
    p: usize,
    x: usize,
    a: &[Cochain],
    b: &[Cochain],
    exponent: impl Fn(i64) -> i64,
    out: &mut GradedMap,
) {
    for i in 0..=p {
        let u = &a[p - i].values[k.front(p, x, p - i)];
        let v = &b[i].values[k.back(p, x, i)];
        *out = out.add(&u.compose(v), &sign(exponent(i as i64)));
    }
}

/// `∂_{F,F'} φ`, the three-sum formula.
pub fn hom_differential(phi: &RepMorphism) -> RepMorphism {
    hom_differential_with(phi, Exec::default())
}

pub fn hom_differential_with(phi: &RepMorphism, exec: Exec) -> RepMorphism {
    let k = phi.source.k.clone();
    let n = phi.degree;
    let mut out = RepMorphism::zero(phi.source.clone(), phi.target.clone(), n + 1);
    for p in 0..=k.p_max() {
        let pi = p as i64;
        let new: Vec<GradedMap> = exec.map_range(k.count(p), |x| {
            let mut acc = out.comps[p].values[x].clone();
            accumulate_product(&k, p, x, &phi.target.f, &phi.comps, |i| sg::rep_diff_left_exponent(n, pi, i), &mut acc);
            for i in 0..=p {
                let u = &phi.comps[p - i].values[k.front(p, x, p - i)];
                let v = &phi.source.f[i].values[k.back(p, x, i)];
                acc = acc.add(&u.compose(v), &sign(sg::rep_diff_right_exponent(n, pi, i as i64)));
            }
            for i in 1..p {
                acc =
                    acc.add(&phi.comps[p - 1].values[k.face(p, x, i)], &sign(sg::rep_diff_face_exponent(n, i as i64)));
            }
            acc
        });
        out.comps[p].values = new;
    }
    out
}

/// `(φ' ∘ φ)_p = Σ_{i=0}^{p} (−1)^{n(p−i)} φ'_{p−i} ∪ φ_i`, `n = |φ|`.
pub fn compose_morphisms(outer: &RepMorphism, inner: &RepMorphism) -> Result<RepMorphism> {
    if !Arc::ptr_eq(&outer.source, &inner.target) {
        return input("composition of morphisms with mismatched middle representation");
    }
    let k = inner.source.k.clone();
    let n = inner.degree;
    let mut out = RepMorphism::zero(inner.source.clone(), outer.target.clone(), outer.degree + n);
    for p in 0..=k.p_max() {
        let pi = p as i64;
        for x in 0..k.count(p) {
            let mut acc = out.comps[p].values[x].clone();
            accumulate_product(&k, p, x, &outer.comps, &inner.comps, |i| sg::rep_compose_exponent(n, pi, i), &mut acc);
            out.comps[p].values[x] = acc;
        }
    }
    Ok(out)
}

/// `f^*(E, F_•) = (f_0^* E, F_• ∘ f_•)`.
pub fn pullback(f: &SimplicialMap, r: &RepUpToHomotopy) -> Result<RepUpToHomotopy> {
    if !Arc::ptr_eq(&f.target, &r.k) {
        return input("the map does not land in the base of the representation");
    }
    let k = f.source.clone();
    let fibers = (0..k.count(0)).map(|v| r.fibers[f.apply(0, v)].clone()).collect();
    let comps =
        (0..=k.p_max()).map(|p| (0..k.count(p)).map(|x| r.f[p].values[f.apply(p, x)].clone()).collect()).collect();
    RepUpToHomotopy::new(k, fibers, comps)
}

/// Image of a morphism under the pullback functor; `source` and `target` are
/// the pullbacks of the ends of `phi`.
pub fn pullback_morphism(
    f: &SimplicialMap,
    phi: &RepMorphism,
    source: Arc<RepUpToHomotopy>,
    target: Arc<RepUpToHomotopy>,
) -> Result<RepMorphism> {
    if !Arc::ptr_eq(&f.target, &phi.source.k) || !Arc::ptr_eq(&f.source, &source.k) {
        return input("the map does not match the representations");
    }
    let comps = (0..=f.source.p_max())
        .map(|p| (0..f.source.count(p)).map(|x| phi.comps[p].values[f.apply(p, x)].clone()).collect())
        .collect();
    RepMorphism::new(source, target, phi.degree, comps)
}

/// `Hom_{Rep∞}(R, R')` as a finite cochain complex. A basis element is a
/// single matrix entry of some `φ_p(x)`; its degree is `p` plus the degree
/// of the entry. Keeping only `p ≤ p_max` is a quotient complex, since
/// `(∂φ)_p` only involves `φ_i` with `i ≤ p`.
#[derive(Clone, Debug)]
pub struct RepHomComplex {
    pub source: Arc<RepUpToHomotopy>,
    pub target: Arc<RepUpToHomotopy>,
    /// `(p, x, row, col)` per basis element.
    basis: Vec<(usize, usize, usize, usize)>,
    index: HashMap<(usize, usize, usize, usize), usize>,
    pub complex: CochainComplex,
}

pub fn rep_hom_complex(source: &Arc<RepUpToHomotopy>, target: &Arc<RepUpToHomotopy>) -> Result<RepHomComplex> {
    if !Arc::ptr_eq(&source.k, &target.k) {
        return input("representations live on different simplicial sets");
    }
    let k = source.k.clone();
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    for p in 0..=k.p_max() {
        for x in 0..k.count(p) {
            let s = &source.fibers[k.vertex_of(p, x, p)];
            let t = &target.fibers[k.vertex_of(p, x, 0)];
            for col in 0..s.dim() {
                for row in 0..t.dim() {
                    basis.push((p, x, row, col));
                    let deg = p as i64 + t.degree(row) - s.degree(col);
                    labels.push((format!("φ{p}{}({},{})", k.label(p, x), t.label(row), s.label(col)), deg));
                }
            }
        }
    }
    let space = Arc::new(GradedSpace::new(labels)?);
    let index: HashMap<_, _> = basis.iter().enumerate().map(|(i, b)| (*b, i)).collect();
    let mut hom = RepHomComplex {
        source: source.clone(),
        target: target.clone(),
        basis,
        index,
        complex: CochainComplex::trivial(space.clone()),
    };
    let cols: Vec<SVec> = crate::par::map_range(hom.basis.len(), |j| {
        let phi = hom.morphism(space.degree(j), &crate::linalg::unit(j)).expect("degree matches");
        hom.coords(&hom_differential_with(&phi, Exec::Serial))
    });
    let d = GradedMap::from_cols(space.clone(), space.clone(), 1, cols)?;
    hom.complex = CochainComplex::new(space, d)?;
    Ok(hom)
}

impl RepHomComplex {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The degree-`n` morphism with the given coordinates.
    pub fn morphism(&self, n: i64, coords: &SVec) -> Result<RepMorphism> {
        let space = &self.complex.space;
        if coords.keys().any(|j| space.degree(*j) != n) {
            return input(format!("coordinates are not of degree {n}"));
        }
        let mut m = RepMorphism::zero(self.source.clone(), self.target.clone(), n);
        let mut cols: HashMap<(usize, usize), Vec<SVec>> = HashMap::new();
        for (j, c) in coords {
            let (p, x, row, col) = self.basis[*j];
            let v = &m.comps[p].values[x];
            let entry = cols.entry((p, x)).or_insert_with(|| v.cols().to_vec());
            add_term(&mut entry[col], row, c);
        }
        for ((p, x), c) in cols {
            let v = &m.comps[p].values[x];
            m.comps[p].values[x] = GradedMap::from_cols(v.source.clone(), v.target.clone(), v.degree, c)?;
        }
        Ok(m)
    }

    pub fn coords(&self, phi: &RepMorphism) -> SVec {
        let mut out = SVec::new();
        for (p, c) in phi.comps.iter().enumerate() {
            for (x, m) in c.values.iter().enumerate() {
                for (row, col, v) in m.nonzero_entries() {
                    out.insert(self.index[&(p, x, row, col)], v);
                }
            }
        }
        out
    }

    /// Filtration by simplicial degree `p`.
    pub fn filtered(&self) -> FilteredComplex {
        let levels = self.basis.iter().map(|b| b.0 as i64).collect();
        FilteredComplex::new(self.complex.clone(), levels).expect("∂ does not lower the simplicial degree")
    }
}
