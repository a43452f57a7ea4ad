//! Independent oracles computed by brute-force linear algebra.

use std::collections::BTreeMap;

use weilkit::complex::CochainComplex;
use weilkit::graded::GradedMap;
use weilkit::lie::LieAlgebra;
use weilkit::linalg::{common_kernel, rank, SVec};

/// `rank H^k(f)`: span of `f` on cocycle representatives modulo boundaries.
pub fn induced_rank(a: &CochainComplex, b: &CochainComplex, f: &GradedMap, k: i64) -> usize {
    let (_, reps) = a.cohomology_in_degree(k);
    let boundaries: Vec<SVec> = b.space.in_degree(k - 1).into_iter().map(|i| b.d.col(i).clone()).collect();
    let mut all: Vec<SVec> = reps.iter().map(|z| f.apply(z)).collect();
    all.extend(boundaries.iter().cloned());
    rank(&all) - rank(&boundaries)
}

/// Coadjoint invariants in `S^k g*`, by brute force on exponent vectors.
pub fn invariant_dim(g: &LieAlgebra, k: usize) -> usize {
    let n = g.dim();
    let mut monomials: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..n {
        monomials = monomials.into_iter().flat_map(|m| (0..=k).map(move |e| [m.clone(), vec![e]].concat())).collect();
    }
    monomials.retain(|m| m.iter().sum::<usize>() == k);
    let index: BTreeMap<Vec<usize>, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    // e_b acts on ε^a by ε^a ↦ −Σ_c f^a_{bc} ε^c, extended as a derivation
    let ops: Vec<Vec<SVec>> = (0..n)
        .map(|b| {
            monomials
                .iter()
                .map(|m| {
                    let mut out = SVec::new();
                    for a in 0..n {
                        if m[a] == 0 {
                            continue;
                        }
                        for c in 0..n {
                            let f = g.f(b, c, a);
                            if f == num_traits::Zero::zero() {
                                continue;
                            }
                            let mut m2 = m.clone();
                            m2[a] -= 1;
                            m2[c] += 1;
                            let coeff = -f * weilkit::scalar::q(m[a] as i64);
                            weilkit::linalg::add_term(&mut out, index[&m2], &coeff);
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    let refs: Vec<&[SVec]> = ops.iter().map(|o| o.as_slice()).collect();
    common_kernel(monomials.len(), &refs).len()
}
