//! Filtered complexes and the pages of their spectral sequences.
//!
//! The filtration is decreasing and spanned by basis vectors: `F^p` is the
//! span of the basis elements with level `≥ p`. With
//! `Z_r^p = {x ∈ F^p : dx ∈ F^{p+r}}` the pages are
//! `E_r^p = Z_r^p / (Z_{r−1}^{p+1} + d Z_{r−1}^{p−r+1})`, with `Z_r^p = F^p` for `r ≤ 0`.

use std::collections::BTreeMap;

use crate::complex::CochainComplex;
use crate::error::{input, structural, Result};
use crate::linalg::{kernel, rank, unit, SVec};
use crate::par::Exec;

#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub complex: CochainComplex,
    levels: Vec<i64>,
}

impl FilteredComplex {
    pub fn new(complex: CochainComplex, levels: Vec<i64>) -> Result<Self> {
        if levels.len() != complex.dim() {
            return input("one filtration level per basis element is required");
        }
        for (s, t, _) in complex.d.nonzero_entries().into_iter().map(|(t, s, c)| (s, t, c)) {
            if levels[t] < levels[s] {
                return structural(format!(
                    "differential lowers filtration: {} (level {}) → {} (level {})",
                    complex.space.label(s),
                    levels[s],
                    complex.space.label(t),
                    levels[t]
                ));
            }
        }
        Ok(FilteredComplex { complex, levels })
    }

    /// Every basis element at level 0.
    pub fn trivial(complex: CochainComplex) -> Self {
        let levels = vec![0; complex.dim()];
        FilteredComplex { complex, levels }
    }

    pub fn level(&self, i: usize) -> i64 {
        self.levels[i]
    }

    pub fn levels(&self) -> &[i64] {
        &self.levels
    }

    fn level_range(&self) -> (i64, i64) {
        let lo = self.levels.iter().copied().min().unwrap_or(0);
        let hi = self.levels.iter().copied().max().unwrap_or(0);
        (lo, hi)
    }

    /// Basis of `F^p C^n`.
    fn filtered_basis(&self, p: i64, n: i64) -> Vec<usize> {
        self.complex.space.in_degree(n).into_iter().filter(|&i| self.levels[i] >= p).collect()
    }

    /// Basis of `Z_r^p` in total degree `n`, in ambient coordinates.
    fn z(&self, r: i64, p: i64, n: i64) -> Vec<SVec> {
        let src = self.filtered_basis(p, n);
        if r <= 0 {
            return src.iter().map(|&i| unit(i)).collect();
        }
        // components of dx below level p + r must vanish
        let low: Vec<usize> =
            self.complex.space.in_degree(n + 1).into_iter().filter(|&i| self.levels[i] < p + r).collect();
        let block = self.complex.d.block(&src, &low);
        kernel(&block).into_iter().map(|v| v.into_iter().map(|(k, c)| (src[k], c)).collect()).collect()
    }

    fn dim_e(&self, r: i64, p: i64, n: i64) -> usize {
        let z = self.z(r, p, n);
        if z.is_empty() {
            return 0;
        }
        let mut denom = self.z(r - 1, p + 1, n);
        denom.extend(self.z(r - 1, p - r + 1, n - 1).iter().map(|x| self.complex.d.apply(x)));
        z.len() - rank(&denom)
    }

    fn rank_d(&self, r: i64, p: i64, n: i64) -> usize {
        let zr = self.z(r, p, n).len();
        if zr == 0 {
            return 0;
        }
        let mut ker = self.z(r + 1, p, n);
        ker.extend(self.z(r - 1, p + 1, n));
        zr - rank(&ker)
    }
}

/// Page data `E_0..E_{r_max}` plus `E_∞`. Keys are `(p, q)` with total degree `p + q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPages {
    pub pages: Vec<BTreeMap<(i64, i64), usize>>,
    /// `rank d_r` leaving `E_r^{p,q}`.
    pub diff_ranks: Vec<BTreeMap<(i64, i64), usize>>,
    pub e_infinity: BTreeMap<(i64, i64), usize>,
}

impl SpectralPages {
    pub fn dim(&self, r: usize, p: i64, q: i64) -> usize {
        self.pages.get(r).and_then(|m| m.get(&(p, q))).copied().unwrap_or(0)
    }

    pub fn rank(&self, r: usize, p: i64, q: i64) -> usize {
        self.diff_ranks.get(r).and_then(|m| m.get(&(p, q))).copied().unwrap_or(0)
    }

    /// `Σ_{p+q=n} dim E_∞^{p,q}`
    pub fn total_infinity(&self, n: i64) -> usize {
        self.e_infinity.iter().filter(|((p, q), _)| p + q == n).map(|(_, d)| d).sum()
    }

    /// First page after which every differential vanishes.
    pub fn collapse_page(&self) -> Option<usize> {
        (0..self.diff_ranks.len()).find(|&r| self.diff_ranks[r..].iter().all(|m| m.values().all(|&x| x == 0)))
    }
}

pub fn spectral_pages(fc: &FilteredComplex, r_max: usize) -> SpectralPages {
    spectral_pages_with(fc, r_max, Exec::default())
}

pub fn spectral_pages_with(fc: &FilteredComplex, r_max: usize, exec: Exec) -> SpectralPages {
    let Some((nlo, nhi)) = fc.complex.space.degree_range() else {
        return SpectralPages {
            pages: vec![BTreeMap::new(); r_max + 1],
            diff_ranks: vec![BTreeMap::new(); r_max + 1],
            e_infinity: BTreeMap::new(),
        };
    };
    let (plo, phi) = fc.level_range();
    let cells: Vec<(i64, i64)> = (nlo..=nhi).flat_map(|n| (plo..=phi).map(move |p| (p, n))).collect();
    // beyond this page every differential leaves the filtration range
    let r_inf = (phi - plo + 2).max(1);
    let page = |r: i64| -> (BTreeMap<(i64, i64), usize>, BTreeMap<(i64, i64), usize>) {
        let vals = exec.map(&cells, |&(p, n)| (fc.dim_e(r, p, n), fc.rank_d(r, p, n)));
        let mut dims = BTreeMap::new();
        let mut ranks = BTreeMap::new();
        for ((p, n), (d, k)) in cells.iter().zip(vals) {
            dims.insert((*p, n - p), d);
            ranks.insert((*p, n - p), k);
        }
        (dims, ranks)
    };
    let mut pages = Vec::with_capacity(r_max + 1);
    let mut diff_ranks = Vec::with_capacity(r_max + 1);
    for r in 0..=r_max as i64 {
        let (d, k) = page(r);
        pages.push(d);
        diff_ranks.push(k);
    }
    let e_infinity = page(r_inf.max(r_max as i64 + 1)).0;
    SpectralPages { pages, diff_ranks, e_infinity }
}
