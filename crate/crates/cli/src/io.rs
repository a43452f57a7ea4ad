//! JSON input formats. Rationals are strings: `"3"`, `"-1/2"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use weilkit::complex::CochainComplex;
use weilkit::graded::{GradedMap, GradedSpace};
use weilkit::lie::LieAlgebra;
use weilkit::linalg::SVec;
use weilkit::scalar::{parse_q, Q};

use crate::CmdError;

pub fn load<T: DeserializeOwned>(path: &Path) -> Result<T, CmdError> {
    let text = std::fs::read_to_string(path).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CmdError::Input(format!("{}: {e}", path.display())))
}

/// Resolves `rel` against the directory of the file that mentions it.
pub fn relative(base: &Path, rel: &str) -> PathBuf {
    base.parent().map(|d| d.join(rel)).unwrap_or_else(|| PathBuf::from(rel))
}

pub fn scalar(s: &str) -> Result<Q, CmdError> {
    Ok(parse_q(s)?)
}

/// A basis index given either by position or by label.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Index {
    Pos(usize),
    Label(String),
}

impl Index {
    pub fn resolve(&self, labels: &[String], what: &str) -> Result<usize, CmdError> {
        match self {
            Index::Pos(i) if *i < labels.len() => Ok(*i),
            Index::Pos(i) => Err(CmdError::Input(format!("{what} index {i} out of range"))),
            Index::Label(l) => {
                labels.iter().position(|x| x == l).ok_or_else(|| CmdError::Input(format!("unknown {what} {l:?}")))
            }
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureConstant {
    pub a: Index,
    pub b: Index,
    pub c: Index,
    pub value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraFile {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub structure_constants: Vec<StructureConstant>,
}

impl LieAlgebraFile {
    pub fn build(&self) -> Result<LieAlgebra, CmdError> {
        if self.basis.len() != self.dim {
            return Err(CmdError::Input(format!(
                "dim is {} but {} basis labels are given",
                self.dim,
                self.basis.len()
            )));
        }
        let mut consts = Vec::new();
        for s in &self.structure_constants {
            consts.push((
                s.a.resolve(&self.basis, "basis label")?,
                s.b.resolve(&self.basis, "basis label")?,
                s.c.resolve(&self.basis, "basis label")?,
                scalar(&s.value)?,
            ));
        }
        Ok(LieAlgebra::new(&self.name, self.basis.clone(), &consts)?)
    }
}

/// A Lie algebra file given inline or by a path relative to the referring file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum LieRef {
    Path(String),
    Inline(LieAlgebraFile),
}

impl LieRef {
    pub fn build(&self, base: &Path) -> Result<LieAlgebra, CmdError> {
        match self {
            LieRef::Path(p) => load::<LieAlgebraFile>(&relative(base, p))?.build(),
            LieRef::Inline(f) => f.build(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisElement {
    pub label: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub target: String,
    pub source: String,
    pub value: String,
}

pub fn space(basis: &[BasisElement]) -> Result<Arc<GradedSpace>, CmdError> {
    Ok(Arc::new(GradedSpace::new(basis.iter().map(|b| (b.label.clone(), b.degree)).collect())?))
}

pub fn graded_map(
    source: &Arc<GradedSpace>,
    target: &Arc<GradedSpace>,
    degree: i64,
    entries: &[Entry],
) -> Result<GradedMap, CmdError> {
    let e = entries
        .iter()
        .map(|x| Ok((x.target.clone(), x.source.clone(), scalar(&x.value)?)))
        .collect::<Result<Vec<_>, CmdError>>()?;
    Ok(GradedMap::from_entries(source.clone(), target.clone(), degree, &e)?)
}

/// Vector given as `{label: value}`.
pub fn vector(space: &GradedSpace, v: &BTreeMap<String, String>) -> Result<SVec, CmdError> {
    let mut out = SVec::new();
    for (l, x) in v {
        let i = space.index_of(l).ok_or_else(|| CmdError::Input(format!("unknown basis label {l:?}")))?;
        weilkit::linalg::add_term(&mut out, i, &scalar(x)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexSpec {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub differential: Vec<Entry>,
    /// Filtration levels by label; missing labels sit at level 0.
    #[serde(default)]
    pub levels: BTreeMap<String, i64>,
}

impl ComplexSpec {
    pub fn build(&self) -> Result<CochainComplex, CmdError> {
        let s = space(&self.basis)?;
        let d = graded_map(&s, &s, 1, &self.differential)?;
        Ok(CochainComplex::new(s, d)?)
    }

    pub fn levels(&self) -> Result<Vec<i64>, CmdError> {
        for l in self.levels.keys() {
            if !self.basis.iter().any(|b| &b.label == l) {
                return Err(CmdError::Input(format!("level given for unknown label {l:?}")));
            }
        }
        Ok(self.basis.iter().map(|b| self.levels.get(&b.label).copied().unwrap_or(0)).collect())
    }
}

// ---------------------------------------------------------------------------
// Simplicial sets and representations up to homotopy.
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SimplicialSetFile {
    /// `Δ[n]`
    Standard {
        n: usize,
    },
    /// `∂Δ[n]`
    Boundary {
        n: usize,
    },
    /// Nerve of `ℤ/m`.
    Nerve {
        m: usize,
    },
    Explicit {
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degeneracies: Vec<Vec<Vec<usize>>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    pub p: usize,
    pub simplex: String,
    pub entries: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum RepFile {
    /// The line in degree 0 with `F_1 = id`.
    Trivial,
    Constant {
        complex: ComplexSpec,
    },
    /// Fibers per vertex (in vertex order) and the nonzero components `F_p(x)`,
    /// including the fiber differentials `F_0`.
    Explicit {
        fibers: Vec<Vec<BasisElement>>,
        components: Vec<ComponentSpec>,
    },
}

// ---------------------------------------------------------------------------
// DG categories.
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpec {
    pub name: String,
    pub complex: ComplexSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LetterSpec {
    pub source: String,
    pub target: String,
    pub label: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomSpec {
    pub source: String,
    pub target: String,
    pub complex: ComplexSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompositionSpec {
    /// `g ∘ f` with `f: source → middle`, `g: middle → target`.
    pub source: String,
    pub middle: String,
    pub target: String,
    pub g: String,
    pub f: String,
    pub value: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CategorySpec {
    /// Full subcategory of cochain complexes on the given objects.
    Dgvect { objects: Vec<ObjectSpec> },
    /// Filtration-preserving maps; levels are read from each complex.
    Filtered { objects: Vec<ObjectSpec> },
    Explicit {
        objects: Vec<String>,
        homs: Vec<HomSpec>,
        composition: Vec<CompositionSpec>,
        identities: BTreeMap<String, BTreeMap<String, String>>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageSpec {
    pub source: String,
    pub target: String,
    pub label: String,
    pub value: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HigherSpec {
    /// Source first: `word[0]` is `f_0`.
    pub word: Vec<LetterSpec>,
    pub value: BTreeMap<String, String>,
}

/// An endofunctor: either conjugation `f ↦ u_B f u_A^{-1}` by closed
/// invertible `u_A`, or explicit images; optional higher components.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    #[serde(default)]
    pub conjugate_by: Option<BTreeMap<String, BTreeMap<String, String>>>,
    #[serde(default)]
    pub images: Option<Vec<ImageSpec>>,
    #[serde(default)]
    pub higher: Vec<HigherSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub category: CategorySpec,
    #[serde(default)]
    pub functor: Option<FunctorSpec>,
}

// ---------------------------------------------------------------------------
// Other inputs.
// ---------------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub a: String,
    pub b: String,
    pub value: BTreeMap<String, String>,
}

/// A finite-dimensional DGLA and a candidate Maurer–Cartan element.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DglaFile {
    pub basis: Vec<BasisElement>,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default)]
    pub differential: Vec<Entry>,
    pub element: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConnectionFile {
    /// `t(ξ) ↦ t(ξ)` on the Weil algebra itself.
    Universal,
    /// `ξ ↦ ξ` into `CE(g)`.
    CanonicalCe,
    /// Explicit `θ(ξ^a)` by monomial labels, into `weil` or `ce`.
    Explicit { target: String, theta: Vec<BTreeMap<String, String>> },
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeilObject {
    Trivial,
    GaussManin,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SpectralFile {
    Filtered {
        complex: ComplexSpec,
    },
    /// Cone of `map: a → b`, with `a[1]` at level 0 and `b` at level 1.
    Cone {
        a: ComplexSpec,
        b: ComplexSpec,
        map: Vec<Entry>,
    },
    /// `Hom(source, target)` in the category of basic g-L∞ spaces, filtered by Weil degree.
    WeilHom {
        algebra: LieRef,
        trunc: u32,
        source: WeilObject,
        target: WeilObject,
    },
    /// `Hom(source, target)` of representations up to homotopy, filtered by simplicial degree.
    RepHom {
        simplicial_set: SimplicialSetFile,
        pmax: usize,
        source: RepFile,
        target: RepFile,
    },
}
