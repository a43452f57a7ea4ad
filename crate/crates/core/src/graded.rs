//! Graded vector spaces with labelled bases and homogeneous linear maps.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{input, Result};
use crate::linalg::{add_scaled, apply_cols, SVec};
use crate::scalar::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    labels: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, i64)>) -> Result<Self> {
        let mut index = HashMap::with_capacity(basis.len());
        let mut labels = Vec::with_capacity(basis.len());
        let mut degrees = Vec::with_capacity(basis.len());
        for (i, (l, d)) in basis.into_iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return input(format!("duplicate basis label {l:?}"));
            }
            labels.push(l);
            degrees.push(d);
        }
        Ok(GradedSpace { labels, degrees, index })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// Basis indices of degree `k`, in basis order.
    pub fn in_degree(&self, k: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == k).collect()
    }

    /// Basis indices of degree `k`, ordered lexicographically by label.
    pub fn in_degree_lex(&self, k: i64) -> Vec<usize> {
        let mut v = self.in_degree(k);
        v.sort_by(|a, b| self.labels[*a].cmp(&self.labels[*b]));
        v
    }

    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = self.degrees.iter().min()?;
        let hi = self.degrees.iter().max()?;
        Some((*lo, *hi))
    }

    /// Dimensions per degree.
    pub fn dims(&self) -> BTreeMap<i64, usize> {
        let mut m = BTreeMap::new();
        for d in &self.degrees {
            *m.entry(*d).or_insert(0) += 1;
        }
        m
    }

    /// Degree of a vector if it is homogeneous (zero vector gives `None`).
    pub fn homogeneous_degree(&self, v: &SVec) -> Option<std::result::Result<i64, ()>> {
        let mut it = v.keys();
        let first = *it.next()?;
        let d = self.degrees[first];
        if it.all(|i| self.degrees[*i] == d) {
            Some(Ok(d))
        } else {
            Some(Err(()))
        }
    }

    /// Suspension `sV` with `(sV)^k = V^{k-1}`: every degree goes up by one.
    pub fn suspend(&self) -> GradedSpace {
        self.shifted(1, "s")
    }

    /// Unsuspension `↓V` with `(↓V)^k = V^{k+1}`.
    pub fn unsuspend(&self) -> GradedSpace {
        self.shifted(-1, "↓")
    }

    fn shifted(&self, by: i64, prefix: &str) -> GradedSpace {
        let basis = self.labels.iter().zip(&self.degrees).map(|(l, d)| (format!("{prefix}{l}"), d + by)).collect();
        GradedSpace::new(basis).expect("prefixing keeps labels unique")
    }
}

/// Homogeneous linear map between graded spaces, stored by columns.
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub source: Arc<GradedSpace>,
    pub target: Arc<GradedSpace>,
    pub degree: i64,
    cols: Vec<SVec>,
}

impl GradedMap {
    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64) -> Self {
        let n = source.dim();
        GradedMap { source, target, degree, cols: vec![SVec::new(); n] }
    }

    /// Build from columns, checking the degree condition on every entry.
    pub fn from_cols(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i64,
        mut cols: Vec<SVec>,
    ) -> Result<Self> {
        for c in cols.iter_mut() {
            c.retain(|_, x| !x.is_zero());
        }
        if cols.len() != source.dim() {
            return input("column count does not match source dimension");
        }
        for (s, col) in cols.iter().enumerate() {
            for (t, c) in col {
                if *t >= target.dim() {
                    return input(format!("row index {t} out of range"));
                }
                if !c.is_zero() && target.degree(*t) != source.degree(s) + degree {
                    return input(format!(
                        "entry ({}, {}) violates degree {}",
                        target.label(*t),
                        source.label(s),
                        degree
                    ));
                }
            }
        }
        Ok(GradedMap { source, target, degree, cols })
    }

    /// Build from `(target label, source label, value)` triples.
    pub fn from_entries(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i64,
        entries: &[(String, String, Q)],
    ) -> Result<Self> {
        let mut cols = vec![SVec::new(); source.dim()];
        for (t, s, c) in entries {
            let Some(ti) = target.index_of(t) else { return input(format!("unknown label {t:?}")) };
            let Some(si) = source.index_of(s) else { return input(format!("unknown label {s:?}")) };
            crate::linalg::add_term(&mut cols[si], ti, c);
        }
        Self::from_cols(source, target, degree, cols)
    }

    pub fn col(&self, j: usize) -> &SVec {
        &self.cols[j]
    }

    pub fn cols(&self) -> &[SVec] {
        &self.cols
    }

    pub fn entry(&self, t: usize, s: usize) -> Q {
        self.cols[s].get(&t).cloned().unwrap_or_else(Q::zero)
    }

    pub fn apply(&self, x: &SVec) -> SVec {
        apply_cols(&self.cols, x)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &GradedMap) -> GradedMap {
        assert_eq!(*other.target, *self.source, "composition of incompatible maps");
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            cols,
        }
    }

    pub fn add(&self, other: &GradedMap, c: &Q) -> GradedMap {
        assert_eq!(self.degree, other.degree);
        let mut cols = self.cols.clone();
        for (a, b) in cols.iter_mut().zip(&other.cols) {
            add_scaled(a, c, b);
        }
        GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, cols }
    }

    pub fn scale(&self, c: &Q) -> GradedMap {
        let cols = self.cols.iter().map(|v| crate::linalg::scaled(v, c)).collect();
        GradedMap { source: self.source.clone(), target: self.target.clone(), degree: self.degree, cols }
    }

    /// Graded commutator `[P, Q] = PQ − (−1)^{|P||Q|} QP` of two endomorphisms.
    pub fn commutator(&self, other: &GradedMap) -> GradedMap {
        let s = crate::scalar::sign(self.degree * other.degree);
        self.compose(other).add(&other.compose(self), &-s)
    }

    /// Two-sided inverse, if the map is bijective.
    pub fn inverse(&self) -> Option<GradedMap> {
        let n = self.source.dim();
        if n != self.target.dim() {
            return None;
        }
        let mut e = crate::linalg::Echelon::tracked();
        for c in &self.cols {
            e.insert(c);
        }
        if e.rank() != n {
            return None;
        }
        let cols = (0..n).map(|t| e.solve(&crate::linalg::unit(t))).collect::<Option<Vec<_>>>()?;
        Some(GradedMap { source: self.target.clone(), target: self.source.clone(), degree: -self.degree, cols })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Nonzero entries as `(target, source, value)`, column-major.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::new();
        for (s, col) in self.cols.iter().enumerate() {
            for (t, c) in col {
                out.push((*t, s, c.clone()));
            }
        }
        out
    }

    /// Restriction to a block `source degree k → target degree k + deg`,
    /// with local column order given by `src` and row positions from `tgt`.
    pub fn block(&self, src: &[usize], tgt: &[usize]) -> Vec<SVec> {
        let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(i, t)| (*t, i)).collect();
        src.iter()
            .map(|s| self.cols[*s].iter().filter_map(|(t, c)| pos.get(t).map(|p| (*p, c.clone()))).collect())
            .collect()
    }
}
