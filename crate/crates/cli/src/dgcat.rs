//! `ainfty-check`: DG category axioms, `b² = 0` on the bar complex and the
//! A∞ relations for an optional endofunctor.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use weilkit::dgcat::{
    ainfty_functor_check, ainfty_nat_check, hochschild_b, whisker, whisker_iso_check, AInftyFunctor, AInftyNat, Chain,
    CoherenceReport, FiniteDGCategory, Letter, Word,
};
use weilkit::linalg::SVec;

use crate::io::{self, CategoryFile, CategorySpec, FunctorSpec, LetterSpec};
use crate::report::Report;
use crate::CmdError;

fn object(cat: &FiniteDGCategory, name: &str) -> Result<usize, CmdError> {
    (0..cat.object_count())
        .find(|a| cat.object(*a) == name)
        .ok_or_else(|| CmdError::Input(format!("unknown object {name:?}")))
}

fn hom_vector(cat: &FiniteDGCategory, a: usize, b: usize, v: &BTreeMap<String, String>) -> Result<SVec, CmdError> {
    io::vector(&cat.hom(a, b).space, v)
}

fn letter(cat: &FiniteDGCategory, l: &LetterSpec) -> Result<Letter, CmdError> {
    let (a, b) = (object(cat, &l.source)?, object(cat, &l.target)?);
    let i =
        cat.hom(a, b).space.index_of(&l.label).ok_or_else(|| {
            CmdError::Input(format!("unknown morphism {:?} in Hom({}, {})", l.label, l.source, l.target))
        })?;
    Ok((a, b, i))
}

fn explicit(
    objects: &[String],
    homs: &[io::HomSpec],
    composition: &[io::CompositionSpec],
    identities: &BTreeMap<String, BTreeMap<String, String>>,
) -> Result<weilkit::Result<FiniteDGCategory>, CmdError> {
    let n = objects.len();
    let idx = |name: &str| {
        objects.iter().position(|o| o == name).ok_or_else(|| CmdError::Input(format!("unknown object {name:?}")))
    };
    let mut complexes = vec![None; n * n];
    for h in homs {
        let slot = idx(&h.source)? * n + idx(&h.target)?;
        if complexes[slot].is_some() {
            return Err(CmdError::Input(format!("Hom({}, {}) is given twice", h.source, h.target)));
        }
        complexes[slot] = Some(h.complex.build()?);
    }
    let complexes: Vec<_> = complexes
        .into_iter()
        .enumerate()
        .map(|(ab, c)| {
            c.ok_or_else(|| CmdError::Input(format!("Hom({}, {}) is missing", objects[ab / n], objects[ab % n])))
        })
        .collect::<Result<_, _>>()?;
    let hom = |a: usize, b: usize| &complexes[a * n + b];
    let mut comp = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                comp.insert((a, b, c), vec![vec![SVec::new(); hom(a, b).dim()]; hom(b, c).dim()]);
            }
        }
    }
    for e in composition {
        let (a, b, c) = (idx(&e.source)?, idx(&e.middle)?, idx(&e.target)?);
        let find = |x: usize, y: usize, label: &str| {
            hom(x, y).space.index_of(label).ok_or_else(|| CmdError::Input(format!("unknown morphism {label:?}")))
        };
        let (g, f) = (find(b, c, &e.g)?, find(a, b, &e.f)?);
        let v = io::vector(&hom(a, c).space, &e.value)?;
        comp.get_mut(&(a, b, c)).unwrap()[g][f] = v;
    }
    let mut ids = Vec::with_capacity(n);
    for (a, name) in objects.iter().enumerate() {
        let v = identities.get(name).ok_or_else(|| CmdError::Input(format!("identity of {name:?} is missing")))?;
        ids.push(io::vector(&hom(a, a).space, v)?);
    }
    Ok(FiniteDGCategory::new(objects.to_vec(), complexes, comp, ids))
}

/// Structural failures of the axioms become a failed check rather than an error.
fn category(r: &mut Report, spec: &CategorySpec) -> Result<Option<Arc<FiniteDGCategory>>, CmdError> {
    let built = match spec {
        CategorySpec::Dgvect { objects } => FiniteDGCategory::from_complexes(
            objects.iter().map(|o| Ok((o.name.clone(), o.complex.build()?))).collect::<Result<_, CmdError>>()?,
        ),
        CategorySpec::Filtered { objects } => FiniteDGCategory::filtered(
            objects
                .iter()
                .map(|o| Ok((o.name.clone(), o.complex.build()?, o.complex.levels()?)))
                .collect::<Result<_, CmdError>>()?,
        ),
        CategorySpec::Explicit { objects, homs, composition, identities } => {
            explicit(objects, homs, composition, identities)?
        }
    };
    match built {
        Ok(c) => {
            r.check("category.axioms", true, None);
            Ok(Some(Arc::new(c)))
        }
        Err(weilkit::Error::Input(m)) => Err(CmdError::Input(m)),
        Err(e) => {
            r.check("category.axioms", false, Some(e.to_string()));
            Ok(None)
        }
    }
}

fn coherence(r: &mut Report, name: &str, cat: &FiniteDGCategory, rep: &CoherenceReport) -> bool {
    let detail = match &rep.failure {
        Some((n, w)) => format!("fails at n = {n} on {}", cat.word_label(w)),
        None => format!("{} words", rep.checked),
    };
    r.check(name, rep.ok(), Some(detail))
}

fn b_squared(r: &mut Report, cat: &FiniteDGCategory, n_max: usize) -> Result<(), CmdError> {
    let mut checked = 0;
    for n in 1..=n_max {
        for w in cat.basis_words(n) {
            checked += 1;
            let chain: Chain = [(w.clone(), weilkit::scalar::q(1))].into_iter().collect();
            let b = hochschild_b(cat, &chain)?;
            let b = b.into_iter().filter(|(w, _)| !w.is_empty()).collect::<Chain>();
            let bb = if b.is_empty() { Chain::new() } else { hochschild_b(cat, &b)? };
            if !bb.is_empty() {
                r.check("bar.b_squared", false, Some(format!("b² ≠ 0 on {}", cat.word_label(&w))));
                return Ok(());
            }
        }
    }
    r.check("bar.b_squared", true, Some(format!("{checked} words of length ≤ {n_max}")));
    Ok(())
}

/// The functor and, for conjugation, the closed invertible `u_A`.
fn functor(cat: &Arc<FiniteDGCategory>, spec: &FunctorSpec) -> Result<(AInftyFunctor, Option<Vec<SVec>>), CmdError> {
    let n = cat.object_count();
    let mut f1: HashMap<Word, SVec> = HashMap::new();
    let mut u_vals = None;
    match (&spec.conjugate_by, &spec.images) {
        (Some(_), Some(_)) => {
            return Err(CmdError::Input("give either conjugate_by or images, not both".into()));
        }
        (Some(u), None) => {
            let mut us = Vec::with_capacity(n);
            let mut inv = Vec::with_capacity(n);
            for a in 0..n {
                let v = match u.get(cat.object(a)) {
                    Some(v) => hom_vector(cat, a, a, v)?,
                    None => cat.identity(a).clone(),
                };
                if !matches!(cat.degree_of(a, a, &v), Some(Ok(0))) || !cat.d(a, a, &v).is_empty() {
                    return Err(CmdError::Input(format!("u_{} must be a closed degree-0 morphism", cat.object(a))));
                }
                let vi = cat
                    .inverse(a, a, &v)
                    .ok_or_else(|| CmdError::Input(format!("u_{} is not invertible", cat.object(a))))?;
                us.push(v);
                inv.push(vi);
            }
            for a in 0..n {
                for b in 0..n {
                    for i in 0..cat.hom(a, b).dim() {
                        let e = weilkit::linalg::unit(i);
                        let v = cat.compose(a, b, b, &us[b], &cat.compose(a, a, b, &e, &inv[a]));
                        if !v.is_empty() {
                            f1.insert(vec![(a, b, i)], v);
                        }
                    }
                }
            }
            u_vals = Some(us);
        }
        (None, images) => {
            for a in 0..n {
                for b in 0..n {
                    for i in 0..cat.hom(a, b).dim() {
                        f1.insert(vec![(a, b, i)], weilkit::linalg::unit(i));
                    }
                }
            }
            for im in images.iter().flatten() {
                let l = letter(
                    cat,
                    &LetterSpec { source: im.source.clone(), target: im.target.clone(), label: im.label.clone() },
                )?;
                f1.insert(vec![l], hom_vector(cat, l.0, l.1, &im.value)?);
            }
        }
    }
    f1.retain(|_, v| !v.is_empty());
    let mut components = vec![f1];
    for h in &spec.higher {
        if h.word.is_empty() {
            return Err(CmdError::Input("higher components need a nonempty word".into()));
        }
        let w: Word = h.word.iter().map(|l| letter(cat, l)).collect::<Result<_, _>>()?;
        let (s, t) = (w[0].0, w[w.len() - 1].1);
        let v = hom_vector(cat, s, t, &h.value)?;
        while components.len() < w.len() {
            components.push(HashMap::new());
        }
        if components[w.len() - 1].insert(w, v).is_some() && h.word.len() > 1 {
            return Err(CmdError::Input("a higher component is given twice".into()));
        }
    }
    let f = AInftyFunctor::new(cat.clone(), cat.clone(), (0..n).collect(), components)?;
    Ok((f, u_vals))
}

pub fn ainfty_check(r: &mut Report, path: &Path, n_max: usize) -> Result<(), CmdError> {
    if n_max == 0 {
        return Err(CmdError::Input("--nmax must be at least 1".into()));
    }
    let file: CategoryFile = io::load(path)?;
    let Some(cat) = category(r, &file.category)? else { return Ok(()) };
    b_squared(r, &cat, n_max)?;

    let id = Arc::new(AInftyFunctor::identity(cat.clone()));
    coherence(r, "identity.functor", &cat, &ainfty_functor_check(&id, n_max));
    let id_nat = AInftyNat::identity(id.clone());
    coherence(r, "identity.natural", &cat, &ainfty_nat_check(&id_nat, n_max)?);

    let Some(spec) = &file.functor else { return Ok(()) };
    let (f, u) = functor(&cat, spec)?;
    let f = Arc::new(f);
    let units = f.unit_check();
    r.check("functor.units", units.is_ok(), units.err());
    let fc = ainfty_functor_check(&f, n_max);
    if !coherence(r, "functor.ainfty_relation", &cat, &fc) {
        return Ok(());
    }
    // λ: id ⇒ F with λ_0 = u for conjugation, otherwise the identity of F
    let lam = match u {
        Some(u) if f.is_dg() => AInftyNat::new(id.clone(), f.clone(), u, Vec::new())?,
        _ => AInftyNat::identity(f.clone()),
    };
    if f.is_dg() {
        coherence(r, "functor.natural", &cat, &ainfty_nat_check(&lam, n_max)?);
        let hl = whisker(&f, &lam)?;
        coherence(r, "whisker.natural", &cat, &ainfty_nat_check(&hl, n_max)?);
    }
    let iso = whisker_iso_check(&f, &lam)?;
    r.check(
        "whisker.isomorphism",
        iso.ok(),
        Some(format!(
            "λ iso: {}, whisker iso: {}, inverse formula: {}",
            iso.lambda_is_iso, iso.whisker_is_iso, iso.inverse_formula
        )),
    );
    Ok(())
}
