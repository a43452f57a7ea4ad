//! `rep-verify`: representations up to homotopy on a finite simplicial set.

use std::collections::HashSet;
use std::path::Path;
use std::sync::Arc;

use weilkit::graded::GradedMap;
use weilkit::linalg::unit;
use weilkit::repinf::{
    compose_morphisms, hom_differential, rep_hom_complex, ruth_check, FiniteSimplicialSet, RepMorphism, RepUpToHomotopy,
};
use weilkit::scalar::sign;

use crate::io::{self, RepFile, SimplicialSetFile};
use crate::report::{dims_table, Report};
use crate::CmdError;

/// Basis morphisms of `End` used for the sampled composition checks.
const SAMPLE: usize = 6;

pub fn build_sset(f: &SimplicialSetFile, pmax: usize) -> Result<Arc<FiniteSimplicialSet>, CmdError> {
    Ok(Arc::new(match f {
        SimplicialSetFile::Standard { n } => FiniteSimplicialSet::standard_simplex(*n, pmax),
        SimplicialSetFile::Boundary { n } => FiniteSimplicialSet::boundary_of_simplex(*n, pmax)?,
        SimplicialSetFile::Nerve { m } => FiniteSimplicialSet::cyclic_nerve(*m, pmax)?,
        SimplicialSetFile::Explicit { labels, faces, degeneracies } => {
            FiniteSimplicialSet::new(labels.clone(), faces.clone(), degeneracies.clone())?
        }
    }))
}

pub fn build_rep(f: &RepFile, k: &Arc<FiniteSimplicialSet>) -> Result<Arc<RepUpToHomotopy>, CmdError> {
    Ok(Arc::new(match f {
        RepFile::Trivial => RepUpToHomotopy::trivial(k.clone()),
        RepFile::Constant { complex } => RepUpToHomotopy::constant(k.clone(), &complex.build()?),
        RepFile::Explicit { fibers, components } => {
            if fibers.len() != k.count(0) {
                return Err(CmdError::Input(format!("{} fibers given for {} vertices", fibers.len(), k.count(0))));
            }
            let fibers = fibers.iter().map(|b| io::space(b)).collect::<Result<Vec<_>, _>>()?;
            let mut f: Vec<Vec<GradedMap>> = Vec::with_capacity(k.p_max() + 1);
            for p in 0..=k.p_max() {
                let mut row = Vec::with_capacity(k.count(p));
                for x in 0..k.count(p) {
                    let src = fibers[k.vertex(p, x, p)?].clone();
                    let tgt = fibers[k.vertex(p, x, 0)?].clone();
                    row.push(GradedMap::zero(src, tgt, 1 - p as i64));
                }
                f.push(row);
            }
            let mut seen = HashSet::new();
            for c in components {
                if c.p > k.p_max() {
                    return Err(CmdError::Input(format!(
                        "component F_{} is above the top dimension {}",
                        c.p,
                        k.p_max()
                    )));
                }
                let x = k
                    .index_of(c.p, &c.simplex)
                    .ok_or_else(|| CmdError::Input(format!("unknown {}-simplex {:?}", c.p, c.simplex)))?;
                if !seen.insert((c.p, x)) {
                    return Err(CmdError::Input(format!("F_{} at {} is given twice", c.p, c.simplex)));
                }
                let z = &f[c.p][x];
                f[c.p][x] = io::graded_map(&z.source, &z.target, z.degree, &c.entries)?;
            }
            RepUpToHomotopy::new(k.clone(), fibers, f)?
        }
    }))
}

fn same(a: &RepMorphism, b: &RepMorphism) -> bool {
    a.add(b, &-weilkit::scalar::q(1)).map(|d| d.is_zero()).unwrap_or(false)
}

pub fn rep_verify(r: &mut Report, sset: &Path, rep: &Path, pmax: usize) -> Result<(), CmdError> {
    let k = build_sset(&io::load(sset)?, pmax)?;
    let e = build_rep(&io::load(rep)?, &k)?;

    let ids = k.verify_identities();
    let detail = match &ids {
        Ok(n) => Some(format!("{n} identities")),
        Err(m) => Some(m.clone()),
    };
    if !r.check("simplicial.identities", ids.is_ok(), detail) {
        return Ok(());
    }
    let rc = ruth_check(&e);
    let detail = match rc.failure {
        Some((p, x)) => format!("fails at p = {p}, simplex {}", k.label(p, x)),
        None => format!("{} simplices", rc.checked),
    };
    r.check("rep.structure_relation", rc.ok(), Some(detail));
    r.table("rep.normalized", e.is_normalized());
    if !rc.ok() {
        return Ok(());
    }

    let end = rep_hom_complex(&e, &e)?;
    r.check("end.d_squared", end.complex.d.compose(&end.complex.d).is_zero(), None);
    let id = RepMorphism::identity(e.clone());
    r.check("end.identity_closed", hom_differential(&id).is_zero(), None);

    let space = end.complex.space.clone();
    let sample: Vec<RepMorphism> =
        (0..space.dim().min(SAMPLE)).map(|j| end.morphism(space.degree(j), &unit(j))).collect::<Result<_, _>>()?;
    let mut neutral = true;
    let mut leibniz = true;
    let mut assoc = true;
    for phi in &sample {
        neutral &= same(&compose_morphisms(&id, phi)?, phi) && same(&compose_morphisms(phi, &id)?, phi);
        for psi in &sample {
            let lhs = hom_differential(&compose_morphisms(psi, phi)?);
            let rhs = compose_morphisms(&hom_differential(psi), phi)?
                .add(&compose_morphisms(psi, &hom_differential(phi))?, &sign(psi.degree))?;
            leibniz &= same(&lhs, &rhs);
            for chi in &sample {
                let left = compose_morphisms(chi, &compose_morphisms(psi, phi)?)?;
                let right = compose_morphisms(&compose_morphisms(chi, psi)?, phi)?;
                assoc &= same(&left, &right);
            }
        }
    }
    let on = Some(format!("on {} basis morphisms", sample.len()));
    r.check("end.identity_neutral", neutral, on.clone());
    r.check("end.leibniz", leibniz, on.clone());
    r.check("end.associativity", assoc, on);
    r.table("end.cohomology", dims_table(&end.complex.cohomology().dims));
    Ok(())
}
