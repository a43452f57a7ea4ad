//! Shared generators for the integration tests.
#![allow(dead_code)]

pub mod dgcat;
pub mod infloc;
pub mod oracles;
pub mod repinf;

use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use weilkit::complex::CochainComplex;
use weilkit::dgla::Dgla;
use weilkit::graded::{GradedMap, GradedSpace};
use weilkit::linalg::{add_scaled, SVec};
use weilkit::scalar::{q, qf, Q};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small rational, zero with probability about one third.
pub fn rand_q(r: &mut impl Rng) -> Q {
    let n: i64 = r.gen_range(-3..=3);
    let d: i64 = r.gen_range(1..=2);
    qf(n, d)
}

pub fn rand_nonzero_q(r: &mut impl Rng) -> Q {
    loop {
        let x = rand_q(r);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random vector supported on the given indices.
pub fn rand_vec(r: &mut impl Rng, support: &[usize]) -> SVec {
    let mut v = SVec::new();
    for &i in support {
        weilkit::linalg::add_term(&mut v, i, &rand_q(r));
    }
    v
}

pub fn complex(basis: &[(&str, i64)], entries: &[(&str, &str, i64)]) -> CochainComplex {
    let s = Arc::new(GradedSpace::new(basis.iter().map(|(l, d)| (l.to_string(), *d)).collect()).unwrap());
    let e: Vec<_> = entries.iter().map(|(t, s, c)| (t.to_string(), s.to_string(), q(*c))).collect();
    let d = GradedMap::from_entries(s.clone(), s.clone(), 1, &e).unwrap();
    CochainComplex::new(s, d).unwrap()
}

/// `ℝ⟨v1, v2⟩ → ℝ⟨u⟩` with `δ v2 = u`.
pub fn three_dim_complex() -> CochainComplex {
    complex(&[("v1", 0), ("v2", 0), ("u", 1)], &[("u", "v2", 1)])
}

/// Gauge action of a nilpotent degree 0 element:
/// `e^{ad η} α − Σ_k (ad η)^k dη / (k+1)!`, summed until the terms vanish.
pub fn gauge(l: &dyn Dgla, eta: &SVec, alpha: &SVec) -> SVec {
    let mut out = SVec::new();
    let mut term = alpha.clone();
    let mut fact = Q::from_integer(1.into());
    let mut k = 0i64;
    while !term.is_empty() {
        add_scaled(&mut out, &fact.recip(), &term);
        k += 1;
        fact *= q(k);
        term = l.bracket(eta, &term);
        assert!(k < 64, "gauge series does not terminate");
    }
    let mut term = l.diff(eta);
    let mut fact = q(1);
    let mut k = 1i64;
    while !term.is_empty() {
        add_scaled(&mut out, &-fact.recip(), &term);
        k += 1;
        fact *= q(k);
        term = l.bracket(eta, &term);
        assert!(k < 64, "gauge series does not terminate");
    }
    out
}

/// Random complex with up to `max_per_degree` basis elements in each degree of
/// `lo..=hi`, built as a random change of basis of a sum of elementary pieces.
pub fn rand_cochain_complex(r: &mut impl Rng, lo: i64, hi: i64, max_per_degree: usize) -> CochainComplex {
    let mut basis = Vec::new();
    for k in lo..=hi {
        for j in 0..r.gen_range(0..=max_per_degree) {
            basis.push((format!("c{k}_{j}"), k));
        }
    }
    let s = Arc::new(GradedSpace::new(basis).unwrap());
    // elementary pairs x → y in consecutive degrees
    let mut used = vec![false; s.dim()];
    let mut d0 = vec![SVec::new(); s.dim()];
    for i in 0..s.dim() {
        if used[i] || r.gen_bool(0.4) {
            continue;
        }
        let next = (0..s.dim()).find(|&j| !used[j] && j != i && s.degree(j) == s.degree(i) + 1);
        if let Some(j) = next {
            used[i] = true;
            used[j] = true;
            d0[i].insert(j, q(1));
        }
    }
    let d0 = GradedMap::from_cols(s.clone(), s.clone(), 1, d0).unwrap();
    let g = loop {
        let cols: Vec<SVec> = (0..s.dim())
            .map(|i| {
                let same: Vec<usize> = s.in_degree(s.degree(i));
                rand_vec(r, &same)
            })
            .collect();
        let g = GradedMap::from_cols(s.clone(), s.clone(), 0, cols).unwrap();
        if let Some(inv) = g.inverse() {
            break (g, inv);
        }
    };
    let d = g.0.compose(&d0).compose(&g.1);
    CochainComplex::new(s, d).unwrap()
}

/// Random degree-0 chain map `a → b`, from the kernel of `f ↦ f d_a − d_b f`.
pub fn rand_chain_map(r: &mut impl Rng, a: &CochainComplex, b: &CochainComplex) -> GradedMap {
    let (na, nb) = (a.dim(), b.dim());
    let unknowns: Vec<(usize, usize)> = (0..nb)
        .flat_map(|t| (0..na).map(move |s| (t, s)))
        .filter(|&(t, s)| b.space.degree(t) == a.space.degree(s))
        .collect();
    // equation coordinates: entry (t, s) of the degree-1 map, indexed t * na + s
    let cols: Vec<SVec> = unknowns
        .iter()
        .map(|&(t, s)| {
            let mut col = SVec::new();
            for s2 in 0..na {
                let c = a.d.entry(s, s2);
                if !c.is_zero() {
                    weilkit::linalg::add_term(&mut col, t * na + s2, &c);
                }
            }
            for (t2, c) in b.d.col(t) {
                weilkit::linalg::add_term(&mut col, t2 * na + s, &-c.clone());
            }
            col
        })
        .collect();
    let mut f = vec![SVec::new(); na];
    for z in weilkit::linalg::kernel(&cols) {
        let x = rand_q(r);
        for (u, c) in z {
            let (t, s) = unknowns[u];
            weilkit::linalg::add_term(&mut f[s], t, &(&x * c));
        }
    }
    GradedMap::from_cols(a.space.clone(), b.space.clone(), 0, f).unwrap()
}

/// Mapping cone `a[1] ⊕ b` with `d(x, y) = (−d x, f x + d y)`, filtered with
/// `a[1]` at level 0 and `b` at level 1.
pub fn cone(a: &CochainComplex, b: &CochainComplex, f: &GradedMap) -> (CochainComplex, Vec<i64>) {
    let (na, nb) = (a.dim(), b.dim());
    let mut basis: Vec<(String, i64)> =
        (0..na).map(|i| (format!("a:{}", a.space.label(i)), a.space.degree(i) - 1)).collect();
    basis.extend((0..nb).map(|i| (format!("b:{}", b.space.label(i)), b.space.degree(i))));
    let s = Arc::new(GradedSpace::new(basis).unwrap());
    let mut cols = Vec::new();
    for i in 0..na {
        let mut col: SVec = a.d.col(i).iter().map(|(k, c)| (*k, -c.clone())).collect();
        for (k, c) in f.col(i) {
            col.insert(na + k, c.clone());
        }
        cols.push(col);
    }
    for i in 0..nb {
        cols.push(b.d.col(i).iter().map(|(k, c)| (na + k, c.clone())).collect());
    }
    let d = GradedMap::from_cols(s.clone(), s.clone(), 1, cols).unwrap();
    let levels = (0..na).map(|_| 0).chain((0..nb).map(|_| 1)).collect();
    (CochainComplex::new(s, d).unwrap(), levels)
}
