//! Verbs on a single Lie algebra: `verify`, `invariants`, `chern-weil`,
//! `gauss-manin`, plus `mc-check` on an explicit DGLA.

use std::path::Path;
use std::sync::Arc;

use weilkit::dgla::algebra::CartanViolation;
use weilkit::dgla::{mc_check, tg, verify_dgla, Cdga, DGLieAlgebra, DglaViolation};
use weilkit::infloc::{gauss_manin, hom_complex, trivial_object, BasicObject, BasicViolation};
use weilkit::lie::LieAlgebra;
use weilkit::linalg::SVec;
use weilkit::scalar::fmt_q;
use weilkit::weil::{
    ce_algebra, characteristic_hom, chern_weil as cw, connection_check, first_invariant, invariant_polynomials,
    polynomial_in_weil, weil_algebra, AlgebraicConnection, WeilAlgebra,
};

use crate::io::{self, ConnectionFile, DglaFile, LieAlgebraFile};
use crate::report::{dims_table, vector_table, Report};
use crate::CmdError;

fn load_lie(path: &Path) -> Result<LieAlgebra, CmdError> {
    io::load::<LieAlgebraFile>(path)?.build()
}

/// Records the Jacobi check; later checks need a Lie algebra.
fn jacobi(r: &mut Report, g: &LieAlgebra) -> bool {
    let v = g.jacobi_violations();
    let detail = v.first().map(|(a, b, c)| {
        format!("fails on ({}, {}, {}); {} triple(s) in total", g.label(*a), g.label(*b), g.label(*c), v.len())
    });
    r.check("lie.jacobi", v.is_empty(), detail)
}

fn dgla_detail(v: &[DglaViolation]) -> Option<String> {
    let first = v.first()?;
    let s = match first {
        DglaViolation::Antisymmetry(a, b) => format!("antisymmetry fails on ({a}, {b})"),
        DglaViolation::Jacobi(a, b, c) => format!("Jacobi fails on ({a}, {b}, {c})"),
        DglaViolation::Leibniz(a, b) => format!("Leibniz rule fails on ({a}, {b})"),
        DglaViolation::DSquared(a) => format!("d² ≠ 0 on {a}"),
    };
    Some(format!("{s}; {} violation(s) in total", v.len()))
}

fn cartan_detail(v: &[CartanViolation]) -> Option<String> {
    let first = v.first()?;
    let at = match &first.b {
        Some(b) => format!("a = {}, b = {b}", first.a),
        None => format!("a = {}", first.a),
    };
    Some(format!("{} fails at {at}; {} violation(s) in total", first.identity, v.len()))
}

fn object_checks(r: &mut Report, prefix: &str, obj: &BasicObject) {
    let rep = &obj.report;
    r.residual(&format!("{prefix}.maurer_cartan"), obj.end.space(), &rep.mc_residual);
    let basic = rep.basic_violations.first().map(|v| match v {
        BasicViolation::Contraction { x } => format!("[α, i_{x}⊗1] ≠ 1⊗L_{x}"),
        BasicViolation::Invariance { x } => format!("[α, L_{x}⊗1 + 1⊗L_{x}] ≠ 0"),
    });
    r.check(&format!("{prefix}.basic"), rep.basic_violations.is_empty(), basic);
    r.check(&format!("{prefix}.d_squared"), rep.d_squared_zero, None);
    r.check(&format!("{prefix}.preserves_basic"), rep.preserves_basic, None);
}

pub fn verify(r: &mut Report, path: &Path, trunc: u32) -> Result<(), CmdError> {
    let g = load_lie(path)?;
    if trunc < 1 {
        return Err(CmdError::Input("--trunc must be at least 1".into()));
    }
    if !jacobi(r, &g) {
        return Ok(());
    }
    let dg = verify_dgla(&DGLieAlgebra::from_lie(&g)).violations;
    r.check("dgla.g", dg.is_empty(), dgla_detail(&dg));
    let t = verify_dgla(&tg(&g)?).violations;
    r.check("dgla.tg", t.is_empty(), dgla_detail(&t));

    let ce = ce_algebra(&g)?;
    let d = ce.d();
    r.check("ce.d_squared", d.compose(d).is_zero(), None);
    let entries: Vec<(String, String, String)> = d
        .nonzero_entries()
        .into_iter()
        .map(|(t, s, c)| (ce.alg.space().label(s).to_string(), ce.alg.space().label(t).to_string(), fmt_q(&c)))
        .collect();
    r.table("ce.differential_nonzero_entries", entries.len());
    let cv = ce.cartan_violations();
    r.check("ce.cartan", cv.is_empty(), cartan_detail(&cv));
    let ce_complex = weilkit::complex::CochainComplex::new(ce.alg.space().clone(), d.clone())
        .map_err(|e| CmdError::Math(e.to_string()))?;
    r.table("ce.cohomology", dims_table(&ce_complex.cohomology().dims));

    let w = weil_algebra(&g, trunc)?;
    let dw = w.gdg.d();
    r.check("weil.d_squared", dw.compose(dw).is_zero(), None);
    let wv = w.gdg.cartan_violations();
    r.check("weil.cartan", wv.is_empty(), cartan_detail(&wv));
    let h = w.cohomology_safe();
    let acyclic = h.iter().all(|(k, d)| *d == usize::from(*k == 0));
    r.check("weil.acyclic", acyclic, Some(format!("H^k for 0 ≤ k ≤ {} (truncation s = {trunc})", w.safe_max_degree())));
    r.table("weil.cohomology_safe_window", dims_table(&h));

    if trunc >= 2 {
        let gm = gauss_manin(&g, trunc)?;
        object_checks(r, "gauss_manin", &gm);
    }
    Ok(())
}

fn weil_for(g: &LieAlgebra, degree: u32, trunc: Option<u32>) -> Result<WeilAlgebra, CmdError> {
    let s = trunc.unwrap_or(degree.max(3));
    if degree > s {
        return Err(CmdError::Input(format!("degree {degree} exceeds the truncation s = {s}")));
    }
    Ok(weil_algebra(g, s)?)
}

pub fn invariants(r: &mut Report, path: &Path, degree: u32, trunc: Option<u32>) -> Result<(), CmdError> {
    let g = load_lie(path)?;
    let w = weil_for(&g, degree, trunc)?;
    if !jacobi(r, &g) {
        return Ok(());
    }
    let (sym, basis) = invariant_polynomials(&g, degree)?;
    let basic = w.gdg.basic_subspace(2 * degree as i64);
    r.check(
        "invariants.basic_weil_dimension",
        basis.len() == basic.len(),
        Some(format!("dim (S^{degree} g*)^g = {}, dim (Wg)_bas^{} = {}", basis.len(), 2 * degree, basic.len())),
    );
    r.table("invariants.dimension", basis.len());
    let polys: Vec<_> = basis.iter().map(|p| vector_table(sym.space(), p)).collect();
    r.table("invariants.basis", polys);
    Ok(())
}

/// Resolves `first`, `first^N` or `invariant:K:I` to an element of `Wg(s)`.
fn polynomial(g: &LieAlgebra, w: &WeilAlgebra, spec: &str) -> Result<SVec, CmdError> {
    let bad = || CmdError::Input(format!("unknown polynomial {spec:?}; expected first, first^N or invariant:K:I"));
    if let Some(rest) = spec.strip_prefix("invariant:") {
        let (k, i) = rest.split_once(':').ok_or_else(bad)?;
        let k: u32 = k.parse().map_err(|_| bad())?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let (sym, basis) = invariant_polynomials(g, k)?;
        let p =
            basis.get(i).ok_or_else(|| CmdError::Input(format!("only {} invariant(s) of degree {k}", basis.len())))?;
        return Ok(polynomial_in_weil(&sym, p, w)?);
    }
    let power = match spec {
        "first" => 1,
        _ => spec.strip_prefix("first^").and_then(|n| n.parse::<u32>().ok()).ok_or_else(bad)?,
    };
    let (_, p, sym) = first_invariant(g, w.s)
        .ok_or_else(|| CmdError::Input(format!("no nonzero invariant polynomial of degree ≤ {}", w.s)))?;
    let p = polynomial_in_weil(&sym, &p, w)?;
    let mut acc = weilkit::weil::one_vec(w.alg());
    for _ in 0..power {
        acc = w.alg().mul(&acc, &p);
    }
    if power > 0 && acc.is_empty() {
        return Err(CmdError::Input(format!("{spec} vanishes in the truncation s = {}", w.s)));
    }
    Ok(acc)
}

fn connection(path: &Path, w: &WeilAlgebra) -> Result<AlgebraicConnection, CmdError> {
    let g = w.g();
    Ok(match io::load::<ConnectionFile>(path)? {
        ConnectionFile::Universal => AlgebraicConnection::universal(w),
        ConnectionFile::CanonicalCe => AlgebraicConnection::canonical_ce(&ce_algebra(g)?),
        ConnectionFile::Explicit { target, theta } => {
            let a = match target.as_str() {
                "weil" => Arc::new(w.gdg.clone()),
                "ce" => Arc::new(ce_algebra(g)?),
                _ => return Err(CmdError::Input(format!("connection target must be weil or ce, not {target:?}"))),
            };
            let theta = theta.iter().map(|v| io::vector(a.alg.space(), v)).collect::<Result<Vec<_>, _>>()?;
            AlgebraicConnection::new(a, theta)?
        }
    })
}

pub fn chern_weil(r: &mut Report, alg: &Path, conn: &Path, poly: &str, trunc: u32) -> Result<(), CmdError> {
    let g = load_lie(alg)?;
    if !jacobi(r, &g) {
        return Ok(());
    }
    let w = weil_algebra(&g, trunc)?;
    let theta = connection(conn, &w)?;
    let p = polynomial(&g, &w, poly)?;
    let v = connection_check(&theta);
    if !r.check("connection.axioms", v.is_empty(), v.first().map(|x| format!("{x:?}"))) {
        return Ok(());
    }
    let ch = characteristic_hom(&theta, &w)?;
    let bad = ch.violations(&w);
    r.check(
        "connection.characteristic_hom",
        bad.is_empty(),
        bad.first().map(|b| format!("fails for {b}; {} in total", bad.len())),
    );
    let c = cw(&ch, &w, &p)?;
    let target = theta.target.alg.space();
    r.check("chern_weil.closed", c.closed, None);
    r.check("chern_weil.basic", c.basic, None);
    r.table("chern_weil.polynomial", vector_table(w.alg().space(), &p));
    r.table("chern_weil.element", vector_table(target, &c.element));
    r.table("chern_weil.degree", c.degree);
    r.table("chern_weil.class", c.class.iter().map(fmt_q).collect::<Vec<_>>());
    Ok(())
}

pub fn mc_check_cmd(r: &mut Report, path: &Path) -> Result<(), CmdError> {
    let f: DglaFile = io::load(path)?;
    let space = io::space(&f.basis)?;
    let labels = space.labels().to_vec();
    let mut brackets = Vec::new();
    for b in &f.brackets {
        let i = io::Index::Label(b.a.clone()).resolve(&labels, "basis label")?;
        let j = io::Index::Label(b.b.clone()).resolve(&labels, "basis label")?;
        brackets.push((i, j, io::vector(&space, &b.value)?));
    }
    let d = io::graded_map(&space, &space, 1, &f.differential)?;
    let l = DGLieAlgebra::new(space.clone(), &brackets, d)?;
    let v = verify_dgla(&l).violations;
    r.check("dgla.axioms", v.is_empty(), dgla_detail(&v));
    let x = io::vector(&space, &f.element)?;
    let m = mc_check(&l, &x)?;
    r.residual("dgla.maurer_cartan", &space, &m.residual);
    Ok(())
}

pub fn gauss_manin_cmd(r: &mut Report, path: &Path, trunc: u32) -> Result<(), CmdError> {
    let g = load_lie(path)?;
    if !jacobi(r, &g) {
        return Ok(());
    }
    let gm = Arc::new(gauss_manin(&g, trunc)?);
    object_checks(r, "gauss_manin", &gm);
    let one = Arc::new(trivial_object(gm.w.clone()));
    r.check("trivial.valid", one.report.is_valid(), None);
    let h = hom_complex(&one, &gm)?;
    r.table("hom_1_gm.window", h.window);
    r.table("hom_1_gm.cohomology", dims_table(&h.cohomology_window()));
    Ok(())
}
