//! Cochain complexes and their cohomology.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{input, structural, Result};
use crate::graded::{GradedMap, GradedSpace};
use crate::linalg::{kernel, Echelon, SVec};

#[derive(Clone, Debug)]
pub struct CochainComplex {
    pub space: Arc<GradedSpace>,
    pub d: GradedMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    /// `dim H^k` for every degree present in the complex.
    pub dims: BTreeMap<i64, usize>,
    /// Representative cocycles, in coordinates of the ambient space.
    pub reps: BTreeMap<i64, Vec<SVec>>,
}

impl Cohomology {
    pub fn dim(&self, k: i64) -> usize {
        self.dims.get(&k).copied().unwrap_or(0)
    }
}

impl CochainComplex {
    /// Checks that `d` has degree one and squares to zero.
    pub fn new(space: Arc<GradedSpace>, d: GradedMap) -> Result<Self> {
        if d.degree != 1 {
            return input(format!("differential has degree {}", d.degree));
        }
        if *d.source != *space || *d.target != *space {
            return input("differential is not an endomorphism of the space");
        }
        if !d.compose(&d).is_zero() {
            return structural("d ∘ d ≠ 0");
        }
        Ok(CochainComplex { space, d })
    }

    /// Complex with zero differential.
    pub fn trivial(space: Arc<GradedSpace>) -> Self {
        let d = GradedMap::zero(space.clone(), space.clone(), 1);
        CochainComplex { space, d }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn cohomology(&self) -> Cohomology {
        let Some((lo, hi)) = self.space.degree_range() else {
            return Cohomology { dims: BTreeMap::new(), reps: BTreeMap::new() };
        };
        let mut dims = BTreeMap::new();
        let mut reps = BTreeMap::new();
        for k in lo..=hi {
            let (dim, r) = self.cohomology_in_degree(k);
            dims.insert(k, dim);
            reps.insert(k, r);
        }
        Cohomology { dims, reps }
    }

    /// `dim H^k` and representatives. Coordinates are ordered
    /// lexicographically by label so pivots follow label order.
    pub fn cohomology_in_degree(&self, k: i64) -> (usize, Vec<SVec>) {
        let here = self.space.in_degree_lex(k);
        let next = self.space.in_degree_lex(k + 1);
        let prev = self.space.in_degree_lex(k - 1);
        let dk = self.d.block(&here, &next);
        let ker_local = kernel(&dk);
        // image of d^{k-1}, expressed in the local coordinates of degree k
        let dprev = self.d.block(&prev, &here);
        let mut e = Echelon::new();
        for c in &dprev {
            e.insert(c);
        }
        let mut reps = Vec::new();
        for z in ker_local {
            let r = e.reduce(&z);
            if !r.is_empty() {
                e.insert(&r);
                reps.push(r.into_iter().map(|(i, c)| (here[i], c)).collect());
            }
        }
        (reps.len(), reps)
    }

    /// Euler characteristic of the underlying graded space.
    pub fn euler_characteristic(&self) -> i64 {
        self.space.dims().iter().map(|(k, n)| crate::sign::pm(*k) * *n as i64).sum()
    }
}

/// Cohomology dimensions of a subcomplex given by spanning bases per degree.
///
/// `basis[k]` spans the degree-`k` part, `d` applies the ambient differential.
/// Only ranks are needed: `dim H^k = dim B^k − rank d(B^k) − rank d(B^{k−1})`.
pub fn subcomplex_cohomology_dims(
    basis: &BTreeMap<i64, Vec<SVec>>,
    d: &(dyn Fn(&SVec) -> SVec + Sync),
) -> BTreeMap<i64, usize> {
    let ranks: BTreeMap<i64, usize> = basis
        .iter()
        .map(|(k, b)| {
            let imgs: Vec<SVec> = crate::par::map(b, |x| d(x));
            (*k, crate::linalg::rank(&imgs))
        })
        .collect();
    basis
        .iter()
        .map(|(k, b)| {
            let r_here = ranks[k];
            let r_prev = ranks.get(&(k - 1)).copied().unwrap_or(0);
            (*k, b.len() - r_here - r_prev)
        })
        .collect()
}
