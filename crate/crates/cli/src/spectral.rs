//! `spectral`: pages of the spectral sequence of a decreasing filtration.

use std::path::Path;
use std::sync::Arc;

use weilkit::complex::CochainComplex;
use weilkit::graded::{GradedMap, GradedSpace};
use weilkit::infloc::{gauss_manin_over, hom_complex, trivial_object, BasicObject};
use weilkit::linalg::SVec;
use weilkit::repinf::rep_hom_complex;
use weilkit::spectral::{spectral_pages, FilteredComplex};
use weilkit::weil::{weil_algebra, WeilAlgebra};

use crate::io::{self, SpectralFile, WeilObject};
use crate::rep::{build_rep, build_sset};
use crate::report::{dims_table, Report};
use crate::CmdError;

/// `a[1] ⊕ b` with `D(a) = −d_a a + f(a)`; `a[1]` at level 0, `b` at level 1.
fn cone(a: &CochainComplex, b: &CochainComplex, f: &GradedMap) -> Result<FilteredComplex, CmdError> {
    let (na, nb) = (a.dim(), b.dim());
    let mut basis: Vec<(String, i64)> =
        (0..na).map(|i| (format!("a:{}", a.space.label(i)), a.space.degree(i) - 1)).collect();
    basis.extend((0..nb).map(|i| (format!("b:{}", b.space.label(i)), b.space.degree(i))));
    let s = Arc::new(GradedSpace::new(basis)?);
    let mut cols: Vec<SVec> = Vec::with_capacity(na + nb);
    for i in 0..na {
        let mut col: SVec = a.d.col(i).iter().map(|(k, c)| (*k, -c.clone())).collect();
        col.extend(f.col(i).iter().map(|(k, c)| (na + k, c.clone())));
        cols.push(col);
    }
    cols.extend((0..nb).map(|i| b.d.col(i).iter().map(|(k, c)| (na + k, c.clone())).collect()));
    let d = GradedMap::from_cols(s.clone(), s.clone(), 1, cols)?;
    let levels = std::iter::repeat(0).take(na).chain(std::iter::repeat(1).take(nb)).collect();
    Ok(FilteredComplex::new(CochainComplex::new(s, d)?, levels)?)
}

fn weil_object(w: &Arc<WeilAlgebra>, o: &WeilObject) -> Result<Arc<BasicObject>, CmdError> {
    Ok(Arc::new(match o {
        WeilObject::Trivial => trivial_object(w.clone()),
        WeilObject::GaussManin => gauss_manin_over(w.clone())?,
    }))
}

fn filtered(path: &Path) -> Result<FilteredComplex, CmdError> {
    Ok(match io::load::<SpectralFile>(path)? {
        SpectralFile::Filtered { complex } => FilteredComplex::new(complex.build()?, complex.levels()?)?,
        SpectralFile::Cone { a, b, map } => {
            let (a, b) = (a.build()?, b.build()?);
            let f = io::graded_map(&a.space, &b.space, 0, &map)?;
            if !f.compose(&a.d).add(&b.d.compose(&f), &-weilkit::scalar::q(1)).is_zero() {
                return Err(CmdError::Math("map is not a chain map".into()));
            }
            cone(&a, &b, &f)?
        }
        SpectralFile::WeilHom { algebra, trunc, source, target } => {
            let g = algebra.build(path)?;
            let w = Arc::new(weil_algebra(&g, trunc)?);
            hom_complex(&weil_object(&w, &source)?, &weil_object(&w, &target)?)?.filtered()
        }
        SpectralFile::RepHom { simplicial_set, pmax, source, target } => {
            let k = build_sset(&simplicial_set, pmax)?;
            rep_hom_complex(&build_rep(&source, &k)?, &build_rep(&target, &k)?)?.filtered()
        }
    })
}

/// `[[p, q, dim], ...]` for nonzero entries.
fn page_table(m: &std::collections::BTreeMap<(i64, i64), usize>) -> Vec<(i64, i64, usize)> {
    m.iter().filter(|(_, d)| **d > 0).map(|((p, q), d)| (*p, *q, *d)).collect()
}

pub fn spectral(r: &mut Report, path: &Path, pages: usize) -> Result<(), CmdError> {
    let fc = filtered(path)?;
    let sp = spectral_pages(&fc, pages);
    for (i, m) in sp.pages.iter().enumerate() {
        r.table(&format!("page.E{i}"), page_table(m));
    }
    r.table("page.E_infinity", page_table(&sp.e_infinity));
    let h = fc.complex.cohomology().dims;
    let mismatch = h.iter().find(|(n, d)| sp.total_infinity(**n) != **d);
    r.check(
        "spectral.convergence",
        mismatch.is_none(),
        mismatch
            .map(|(n, d)| format!("Σ E_∞ in total degree {n} is {}, H^{n} has dimension {d}", sp.total_infinity(*n))),
    );
    r.table("cohomology", dims_table(&h));
    r.table("collapse_page", sp.collapse_page());
    Ok(())
}
