//! Finite-dimensional Lie algebras given by structure constants, and the
//! fixture suite used throughout the tests.

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{input, Result};
use crate::graded::GradedSpace;
use crate::linalg::{add_scaled, add_term, SVec};
use crate::scalar::{q, Q};

/// `[e_a, e_b] = Σ_c f^c_{ab} e_c`, stored as the full table `bracket[a][b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    pub name: String,
    labels: Vec<String>,
    bracket: Vec<Vec<SVec>>,
}

impl LieAlgebra {
    /// Entries `(a, b, c, v)` mean `[e_a, e_b] += v e_c`. A pair given in one
    /// order only is completed by antisymmetry; pairs given in both orders
    /// must agree. Jacobi is not checked here, see [`LieAlgebra::jacobi_violations`].
    pub fn new(name: &str, labels: Vec<String>, consts: &[(usize, usize, usize, Q)]) -> Result<Self> {
        let n = labels.len();
        let mut given = vec![vec![SVec::new(); n]; n];
        let mut seen = vec![vec![false; n]; n];
        for (a, b, c, v) in consts {
            if *a >= n || *b >= n || *c >= n {
                return input(format!("structure constant index out of range: ({a}, {b}, {c})"));
            }
            add_term(&mut given[*a][*b], *c, v);
            seen[*a][*b] = true;
        }
        let mut bracket = vec![vec![SVec::new(); n]; n];
        for a in 0..n {
            if !given[a][a].is_empty() {
                return input(format!("[{0}, {0}] must vanish", labels[a]));
            }
            for b in 0..n {
                if a == b {
                    continue;
                }
                let neg: SVec = given[b][a].iter().map(|(k, v)| (*k, -v.clone())).collect();
                if seen[a][b] && seen[b][a] && given[a][b] != neg {
                    return input(format!("antisymmetry fails for [{}, {}]", labels[a], labels[b]));
                }
                bracket[a][b] = if seen[a][b] { given[a][b].clone() } else { neg };
            }
        }
        let mut dedup = labels.clone();
        dedup.sort();
        dedup.dedup();
        if dedup.len() != n {
            return input("duplicate basis labels");
        }
        Ok(LieAlgebra { name: name.to_string(), labels, bracket })
    }

    pub fn abelian(name: &str, n: usize) -> Self {
        let labels = (1..=n).map(|i| format!("e{i}")).collect();
        LieAlgebra::new(name, labels, &[]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SVec {
        &self.bracket[a][b]
    }

    /// `f^c_{ab}`
    pub fn f(&self, a: usize, b: usize, c: usize) -> Q {
        self.bracket[a][b].get(&c).cloned().unwrap_or_else(Q::zero)
    }

    pub fn bracket(&self, x: &SVec, y: &SVec) -> SVec {
        let mut r = SVec::new();
        for (a, xa) in x {
            for (b, yb) in y {
                add_scaled(&mut r, &(xa * yb), &self.bracket[*a][*b]);
            }
        }
        r
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(|row| row.iter().all(|v| v.is_empty()))
    }

    /// Triples `a < b < c` where the Jacobi identity fails.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let e = |i: usize| crate::linalg::unit(i);
                    let mut s = self.bracket(&e(a), &self.bracket_basis(b, c).clone());
                    add_scaled(&mut s, &q(1), &self.bracket(&e(b), &self.bracket_basis(c, a).clone()));
                    add_scaled(&mut s, &q(1), &self.bracket(&e(c), &self.bracket_basis(a, b).clone()));
                    if !s.is_empty() {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        match self.jacobi_violations().first() {
            None => Ok(()),
            Some((a, b, c)) => input(format!(
                "Jacobi identity fails on ({}, {}, {})",
                self.labels[*a], self.labels[*b], self.labels[*c]
            )),
        }
    }

    /// The Lie algebra as a graded space concentrated in degree 0.
    pub fn space(&self) -> Arc<GradedSpace> {
        Arc::new(GradedSpace::new(self.labels.iter().map(|l| (l.clone(), 0)).collect()).unwrap())
    }

    /// Matrix of `ad_x` on `g` for the basis vector `x = e_a`, by columns.
    pub fn ad(&self, a: usize) -> Vec<SVec> {
        (0..self.dim()).map(|b| self.bracket[a][b].clone()).collect()
    }
}

fn lie(name: &str, labels: &[&str], consts: &[(usize, usize, usize, i64)]) -> LieAlgebra {
    let c: Vec<_> = consts.iter().map(|(a, b, c, v)| (*a, *b, *c, q(*v))).collect();
    LieAlgebra::new(name, labels.iter().map(|s| s.to_string()).collect(), &c).unwrap()
}

pub fn abelian3() -> LieAlgebra {
    LieAlgebra::abelian("abelian3", 3)
}

/// `[e1, e2] = e3`
pub fn heisenberg3() -> LieAlgebra {
    lie("heisenberg3", &["e1", "e2", "e3"], &[(0, 1, 2, 1)])
}

/// `[e_a, e_b] = ε_{abc} e_c`
pub fn su2() -> LieAlgebra {
    lie("su2", &["e1", "e2", "e3"], &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
}

/// `[h, e] = 2e`, `[h, f] = −2f`, `[e, f] = h`
pub fn sl2() -> LieAlgebra {
    lie("sl2", &["h", "e", "f"], &[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)])
}

/// `su(2) ⊕ ℝ`, with `e4` central.
pub fn u2() -> LieAlgebra {
    lie("u2", &["e1", "e2", "e3", "e4"], &[(0, 1, 2, 1), (1, 2, 0, 1), (2, 0, 1, 1)])
}

pub fn fixtures() -> Vec<LieAlgebra> {
    vec![abelian3(), heisenberg3(), su2(), sl2(), u2()]
}
