//! Sparse exact linear algebra: vectors, row echelon bases, kernels.
//!
//! Pivoting always picks the smallest available coordinate index, so callers
//! control determinism by how they order coordinates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::scalar::Q;

/// Sparse vector; zero entries are never stored.
pub type SVec = BTreeMap<usize, Q>;

pub fn add_term(v: &mut SVec, i: usize, c: &Q) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(&i) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                v.remove(&i);
            }
        }
        None => {
            v.insert(i, c.clone());
        }
    }
}

pub fn add_term_owned(v: &mut SVec, i: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(&i) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                v.remove(&i);
            }
        }
        None => {
            v.insert(i, c);
        }
    }
}

/// `v += c * w`
pub fn add_scaled(v: &mut SVec, c: &Q, w: &SVec) {
    if c.is_zero() {
        return;
    }
    for (i, x) in w {
        add_term_owned(v, *i, c * x);
    }
}

pub fn scaled(v: &SVec, c: &Q) -> SVec {
    if c.is_zero() {
        return SVec::new();
    }
    v.iter().map(|(i, x)| (*i, x * c)).collect()
}

pub fn sum(a: &SVec, b: &SVec) -> SVec {
    let mut r = a.clone();
    add_scaled(&mut r, &Q::one(), b);
    r
}

pub fn diff(a: &SVec, b: &SVec) -> SVec {
    let mut r = a.clone();
    add_scaled(&mut r, &-Q::one(), b);
    r
}

pub fn unit(i: usize) -> SVec {
    let mut v = SVec::new();
    v.insert(i, Q::one());
    v
}

/// Apply a linear map given by its columns (`cols[j]` is the image of basis vector `j`).
pub fn apply_cols(cols: &[SVec], x: &SVec) -> SVec {
    let mut r = SVec::new();
    for (j, c) in x {
        add_scaled(&mut r, c, &cols[*j]);
    }
    r
}

/// Incrementally built row echelon basis of a subspace.
///
/// Every stored row has leading coordinate equal to its key with coefficient 1.
/// Optionally tracks each row as a combination of the inserted vectors, which
/// turns `reduce` into a solver.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SVec>,
    combos: Option<BTreeMap<usize, SVec>>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tracked() -> Self {
        Echelon { rows: BTreeMap::new(), combos: Some(BTreeMap::new()), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    fn reduce_tracked(&self, v: &SVec, track: bool) -> (SVec, SVec) {
        let mut v = v.clone();
        let mut combo = SVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(k, _)| self.rows.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            add_scaled(&mut v, &-c.clone(), &self.rows[&k]);
            if track {
                if let Some(cs) = &self.combos {
                    add_scaled(&mut combo, &c, &cs[&k]);
                }
            }
            cursor = k + 1;
        }
        (v, combo)
    }

    /// Remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SVec) -> SVec {
        self.reduce_tracked(v, false).0
    }

    pub fn contains(&self, v: &SVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Insert a vector; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &SVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let track = self.combos.is_some();
        let (mut r, mut combo) = self.reduce_tracked(v, track);
        if r.is_empty() {
            return false;
        }
        // r = v - combo(rows); so combo for r is e_idx - combo
        if track {
            combo = combo.into_iter().map(|(k, c)| (k, -c)).collect();
            add_term(&mut combo, idx, &Q::one());
        }
        let (&p, lead) = r.iter().next().expect("nonzero");
        let inv = lead.recip();
        r = scaled(&r, &inv);
        if let Some(cs) = &mut self.combos {
            cs.insert(p, scaled(&combo, &inv));
        }
        self.rows.insert(p, r);
        true
    }

    /// Coordinates of `v` in terms of the inserted vectors, if `v` lies in the span.
    /// Only available on tracked echelons.
    pub fn solve(&self, v: &SVec) -> Option<SVec> {
        assert!(self.combos.is_some(), "solve needs a tracked echelon");
        let (r, combo) = self.reduce_tracked(v, true);
        if r.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    /// Fully reduced rows, ordered by pivot.
    pub fn rref_rows(&self) -> Vec<(usize, SVec)> {
        let mut rows: BTreeMap<usize, SVec> = self.rows.clone();
        let keys: Vec<usize> = rows.keys().rev().copied().collect();
        for &p in &keys {
            let prow = rows[&p].clone();
            for (&q, row) in rows.iter_mut() {
                if q == p {
                    continue;
                }
                if let Some(c) = row.get(&p).cloned() {
                    add_scaled(row, &-c, &prow);
                }
            }
        }
        rows.into_iter().collect()
    }
}

pub fn rank(vectors: &[SVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Kernel of the map with the given columns, as a list of basis vectors in
/// RREF-normal form: one vector per free column, increasing.
pub fn kernel(cols: &[SVec]) -> Vec<SVec> {
    let n = cols.len();
    // rows of the matrix, indexed by column index
    let mut rows: BTreeMap<usize, SVec> = BTreeMap::new();
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c {
            rows.entry(*i).or_default().insert(j, x.clone());
        }
    }
    let mut e = Echelon::new();
    for r in rows.values() {
        e.insert(r);
    }
    let rref = e.rref_rows();
    let pivots: std::collections::BTreeSet<usize> = rref.iter().map(|(p, _)| *p).collect();
    let mut out = Vec::new();
    for f in 0..n {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = unit(f);
        for (p, row) in &rref {
            if let Some(c) = row.get(&f) {
                add_term_owned(&mut v, *p, -c.clone());
            }
        }
        out.push(v);
    }
    out
}

/// Kernel of a stack of maps sharing a domain of dimension `n`.
pub fn common_kernel(n: usize, maps: &[&[SVec]]) -> Vec<SVec> {
    let mut offset = 0usize;
    let mut cols: Vec<SVec> = vec![SVec::new(); n];
    for m in maps {
        let mut height = 0usize;
        for (j, c) in m.iter().enumerate() {
            for (i, x) in c {
                cols[j].insert(offset + i, x.clone());
                height = height.max(i + 1);
            }
        }
        offset += height.max(1);
    }
    kernel(&cols)
}
