//! Graded chain complexes over the two-element field with a chain involution.
//!
//! A complex here is finitely generated, graded by an integer (Maslov)
//! grading and partitioned into sectors (spin^c labels for 3-manifold
//! inputs, decimal Alexander gradings for knot inputs). The differential
//! `d` drops the Maslov grading by one and preserves sectors; the involution
//! `S` preserves both. `S` may be supplied directly or as a composition
//! `S = ι ∘ τ` of two factor maps, in which case only the composition is
//! validated — the factors themselves are free to move gradings, as the
//! conjugation maps of knot Floer homology do.
//!
//! Generators are canonically ordered by (sector, maslov, name), so every
//! matrix derived from a complex is reproducible across runs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

use crate::gf2::{Gf2Matrix, Gf2Vector, Subspace};

/// Sort key placing integer sector labels first, in descending numeric
/// order (Alexander gradings read top down, as in the usual tables), then
/// everything else lexicographically.
pub fn sector_sort_key(label: &str) -> (u8, i64, String) {
    match label.parse::<i64>() {
        Ok(v) => (0, -v, String::new()),
        Err(_) => (1, 0, label.to_string()),
    }
}

/// A single generator of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub maslov: i64,
    pub alexander: Option<i64>,
    pub sector: String,
}

impl Generator {
    /// Builds a generator, deriving the sector from the Alexander grading
    /// when one is present. An explicitly supplied sector must then agree
    /// with the decimal rendering.
    pub fn new(
        name: impl Into<String>,
        maslov: i64,
        alexander: Option<i64>,
        sector: Option<String>,
    ) -> Result<Self, BuildError> {
        let name = name.into();
        if name.is_empty() {
            return Err(BuildError::EmptyName);
        }
        let sector = match (alexander, sector) {
            (Some(a), Some(s)) => {
                if s != a.to_string() {
                    return Err(BuildError::SectorMismatch {
                        name,
                        alexander: a,
                        sector: s,
                    });
                }
                s
            }
            (Some(a), None) => a.to_string(),
            (None, Some(s)) => s,
            (None, None) => "default".to_string(),
        };
        Ok(Self {
            name,
            maslov,
            alexander,
            sector,
        })
    }

    /// Shorthand for a knot-flavored generator (sector = Alexander grading).
    pub fn knot(name: impl Into<String>, maslov: i64, alexander: i64) -> Self {
        Self::new(name, maslov, Some(alexander), None).expect("knot generator is well-formed")
    }
}

/// A linear map described by name: each source generator is sent to the
/// GF(2) sum of the named targets. Missing entries are zero columns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearMap {
    columns: BTreeMap<String, BTreeSet<String>>,
}

impl LinearMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_columns(columns: BTreeMap<String, BTreeSet<String>>) -> Self {
        Self { columns }
    }

    /// Sets the column of `source`; an empty target list clears it.
    pub fn set_column<I, S>(&mut self, source: impl Into<String>, targets: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let targets: BTreeSet<String> = targets.into_iter().map(Into::into).collect();
        if targets.is_empty() {
            self.columns.remove(&source.into());
        } else {
            self.columns.insert(source.into(), targets);
        }
    }

    /// Adds `target` into the column of `source` (GF(2): toggles it).
    pub fn toggle(&mut self, source: &str, target: &str) {
        let entry = self.columns.entry(source.to_string()).or_default();
        if !entry.remove(target) {
            entry.insert(target.to_string());
        }
        if entry.is_empty() {
            self.columns.remove(source);
        }
    }

    pub fn column(&self, source: &str) -> Option<&BTreeSet<String>> {
        self.columns.get(source)
    }

    pub fn columns(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.columns
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    /// The GF(2) sum of two maps.
    pub fn add(&self, other: &LinearMap) -> LinearMap {
        let mut out = self.clone();
        for (src, targets) in &other.columns {
            for t in targets {
                out.toggle(src, t);
            }
        }
        out
    }

    /// Every name mentioned by the map, sources and targets alike.
    pub fn mentioned_names(&self) -> BTreeSet<&str> {
        let mut names = BTreeSet::new();
        for (src, targets) in &self.columns {
            names.insert(src.as_str());
            names.extend(targets.iter().map(String::as_str));
        }
        names
    }
}

/// How the involution of a complex is supplied.
#[derive(Clone, Debug)]
pub enum InvolutionSpec {
    /// The chain involution itself.
    Direct(LinearMap),
    /// Factor maps whose composition `ι ∘ τ` is the involution. Only the
    /// composition enters the computation.
    Composed { iota: LinearMap, tau: LinearMap },
}

/// Errors raised while assembling a complex, before validation runs.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error("generator names must be nonempty")]
    EmptyName,
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("generator {name:?} has alexander {alexander} but sector {sector:?}")]
    SectorMismatch {
        name: String,
        alexander: i64,
        sector: String,
    },
    #[error("{map} references unknown generator {referenced:?}")]
    UnknownGenerator { map: String, referenced: String },
}

/// The factor maps behind a composed involution, kept for serialization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub iota: Gf2Matrix,
    pub tau: Gf2Matrix,
}

/// A finitely generated graded complex with differential and involution.
///
/// Construction resolves all generator names and fixes the canonical
/// ordering; [`EquivariantComplex::validate`] checks the chain-level axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantComplex {
    generators: Vec<Generator>,
    index: BTreeMap<String, usize>,
    d: Gf2Matrix,
    s: Gf2Matrix,
    provenance: Option<Provenance>,
}

impl EquivariantComplex {
    pub fn new(
        mut generators: Vec<Generator>,
        d: &LinearMap,
        involution: InvolutionSpec,
    ) -> Result<Self, BuildError> {
        generators.sort_by(|a, b| {
            (sector_sort_key(&a.sector), a.maslov, &a.name).cmp(&(
                sector_sort_key(&b.sector),
                b.maslov,
                &b.name,
            ))
        });
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.name.is_empty() {
                return Err(BuildError::EmptyName);
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(BuildError::DuplicateName(g.name.clone()));
            }
        }
        let n = generators.len();
        let resolve = |map: &LinearMap, what: &str| -> Result<Gf2Matrix, BuildError> {
            let mut m = Gf2Matrix::zero(n, n);
            for (src, targets) in map.columns() {
                let j = *index.get(src).ok_or_else(|| BuildError::UnknownGenerator {
                    map: what.to_string(),
                    referenced: src.clone(),
                })?;
                for t in targets {
                    let i = *index.get(t).ok_or_else(|| BuildError::UnknownGenerator {
                        map: what.to_string(),
                        referenced: t.clone(),
                    })?;
                    m.set(i, j);
                }
            }
            Ok(m)
        };
        let d = resolve(d, "differential")?;
        let (s, provenance) = match involution {
            InvolutionSpec::Direct(map) => (resolve(&map, "involution")?, None),
            InvolutionSpec::Composed { iota, tau } => {
                let iota = resolve(&iota, "iota")?;
                let tau = resolve(&tau, "tau")?;
                (iota.multiply(&tau), Some(Provenance { iota, tau }))
            }
        };
        Ok(Self {
            generators,
            index,
            d,
            s,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The differential as an n×n matrix in the canonical generator order.
    pub fn d_matrix(&self) -> &Gf2Matrix {
        &self.d
    }

    /// The involution as an n×n matrix in the canonical generator order.
    pub fn s_matrix(&self) -> &Gf2Matrix {
        &self.s
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Distinct sector labels in canonical order.
    pub fn sectors(&self) -> Vec<String> {
        let mut labels: Vec<String> = self
            .generators
            .iter()
            .map(|g| g.sector.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        labels.sort_by_key(|s| sector_sort_key(s));
        labels
    }

    /// Global indices of the generators in a sector, in canonical order.
    pub fn sector_indices(&self, sector: &str) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.generators[i].sector == sector)
            .collect()
    }

    /// Converts a matrix over the canonical basis back to a name-level map.
    pub fn matrix_as_map(&self, m: &Gf2Matrix) -> LinearMap {
        let mut map = LinearMap::new();
        for j in 0..self.len() {
            let targets: Vec<&str> = m
                .column(j)
                .support()
                .into_iter()
                .map(|i| self.generators[i].name.as_str())
                .collect();
            if !targets.is_empty() {
                map.set_column(self.generators[j].name.clone(), targets);
            }
        }
        map
    }

    /// Renders a vector over the given generator indices as a sum of names.
    pub fn label_combination(&self, indices: &[usize], v: &Gf2Vector) -> String {
        assert_eq!(indices.len(), v.len(), "label_combination: length mismatch");
        let names: Vec<&str> = v
            .support()
            .into_iter()
            .map(|k| self.generators[indices[k]].name.as_str())
            .collect();
        if names.is_empty() {
            "0".to_string()
        } else {
            names.join("+")
        }
    }

    /// Runs every validation check and reports each as pass/fail with a
    /// witness generator for the failures.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let identity = Gf2Matrix::identity(n);
        let mut checks = Vec::new();

        let first_bad_column = |m: &Gf2Matrix| -> Option<String> {
            (0..n)
                .find(|&j| !m.column(j).is_zero())
                .map(|j| self.generators[j].name.clone())
        };

        let dd = self.d.multiply(&self.d);
        checks.push(CheckResult::new(
            CheckKind::DSquaredZero,
            first_bad_column(&dd).map(|g| format!("d(d({g})) is nonzero")),
        ));

        let ss_plus_id = self.s.multiply(&self.s).add(&identity);
        checks.push(CheckResult::new(
            CheckKind::SInvolution,
            first_bad_column(&ss_plus_id).map(|g| format!("S(S({g})) differs from {g}")),
        ));

        let commutator = self.s.multiply(&self.d).add(&self.d.multiply(&self.s));
        checks.push(CheckResult::new(
            CheckKind::SCommutesWithD,
            first_bad_column(&commutator).map(|g| format!("S(d({g})) differs from d(S({g}))")),
        ));

        checks.push(CheckResult::new(
            CheckKind::DDropsMaslov,
            self.grading_witness(&self.d, |src, dst| dst.maslov == src.maslov - 1, "d", "maslov"),
        ));
        checks.push(CheckResult::new(
            CheckKind::SPreservesMaslov,
            self.grading_witness(&self.s, |src, dst| dst.maslov == src.maslov, "S", "maslov"),
        ));
        checks.push(CheckResult::new(
            CheckKind::DPreservesSector,
            self.grading_witness(
                &self.d,
                |src, dst| dst.sector == src.sector && dst.alexander == src.alexander,
                "d",
                "sector",
            ),
        ));
        checks.push(CheckResult::new(
            CheckKind::SPreservesSector,
            self.grading_witness(
                &self.s,
                |src, dst| dst.sector == src.sector && dst.alexander == src.alexander,
                "S",
                "sector",
            ),
        ));

        let one_plus_s = self.s.add(&identity);
        let square = one_plus_s.multiply(&one_plus_s);
        checks.push(CheckResult::new(
            CheckKind::OnePlusSSquaredZero,
            first_bad_column(&square).map(|g| format!("(1+S)²({g}) is nonzero")),
        ));

        ValidationReport { checks }
    }

    fn grading_witness(
        &self,
        m: &Gf2Matrix,
        ok: impl Fn(&Generator, &Generator) -> bool,
        map_name: &str,
        what: &str,
    ) -> Option<String> {
        for j in 0..self.len() {
            let src = &self.generators[j];
            for i in m.column(j).support() {
                let dst = &self.generators[i];
                if !ok(src, dst) {
                    return Some(format!(
                        "{map_name}({}) hits {} ({what} {} vs {})",
                        src.name,
                        dst.name,
                        render_grading(dst, what),
                        render_grading(src, what),
                    ));
                }
            }
        }
        None
    }

    /// Validates and wraps the complex; the failing report is returned
    /// otherwise.
    pub fn into_validated(self) -> Result<ValidatedComplex, ValidationReport> {
        let report = self.validate();
        if report.passed() {
            Ok(ValidatedComplex { inner: self })
        } else {
            Err(report)
        }
    }
}

fn render_grading(g: &Generator, what: &str) -> String {
    if what == "maslov" {
        g.maslov.to_string()
    } else {
        format!("{:?}", g.sector)
    }
}

/// Identifiers for the validation checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    DSquaredZero,
    SInvolution,
    SCommutesWithD,
    DDropsMaslov,
    SPreservesMaslov,
    DPreservesSector,
    SPreservesSector,
    OnePlusSSquaredZero,
}

impl CheckKind {
    pub fn label(self) -> &'static str {
        match self {
            CheckKind::DSquaredZero => "d∘d = 0",
            CheckKind::SInvolution => "S∘S = id",
            CheckKind::SCommutesWithD => "S∘d = d∘S",
            CheckKind::DDropsMaslov => "d drops maslov by 1",
            CheckKind::SPreservesMaslov => "S preserves maslov",
            CheckKind::DPreservesSector => "d preserves sector",
            CheckKind::SPreservesSector => "S preserves sector",
            CheckKind::OnePlusSSquaredZero => "(1+S)² = 0",
        }
    }
}

/// Outcome of one validation check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub check: CheckKind,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckResult {
    fn new(check: CheckKind, witness: Option<String>) -> Self {
        Self {
            check,
            passed: witness.is_none(),
            witness,
        }
    }
}

/// Every validation check with its outcome; a complex is accepted by the
/// downstream operations only if all checks pass.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.witness {
                None => writeln!(f, "pass  {}", c.check.label())?,
                Some(w) => writeln!(f, "FAIL  {} — {}", c.check.label(), w)?,
            }
        }
        Ok(())
    }
}

/// A complex whose validation checks have all passed. The spectral sequence
/// engine only accepts this type, so an unvalidated complex can never reach
/// the page computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedComplex {
    inner: EquivariantComplex,
}

impl Deref for ValidatedComplex {
    type Target = EquivariantComplex;

    fn deref(&self) -> &EquivariantComplex {
        &self.inner
    }
}

impl ValidatedComplex {
    pub fn as_complex(&self) -> &EquivariantComplex {
        &self.inner
    }

    pub fn into_inner(self) -> EquivariantComplex {
        self.inner
    }
}

// ---------------------------------------------------------------------------
// Homology
// ---------------------------------------------------------------------------

/// Homology of one (sector, maslov) bigrading.
#[derive(Clone, Debug)]
pub struct HomologySummand {
    pub maslov: i64,
    pub dim: usize,
    /// Echelon-canonical representatives, in the coordinates of the
    /// bigrading's generator block.
    pub representatives: Vec<Gf2Vector>,
    /// The same representatives rendered as sums of generator names.
    pub labels: Vec<String>,
    /// The map induced by the involution on this summand, in the
    /// representative basis.
    pub s_star: Gf2Matrix,
}

/// Homology of one sector, graded by maslov.
#[derive(Clone, Debug)]
pub struct SectorHomology {
    pub sector: String,
    pub summands: Vec<HomologySummand>,
}

impl SectorHomology {
    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(|s| s.dim).sum()
    }

    pub fn dim_at(&self, maslov: i64) -> usize {
        self.summands
            .iter()
            .find(|s| s.maslov == maslov)
            .map_or(0, |s| s.dim)
    }

    /// Maslov gradings carrying nonzero homology.
    pub fn occupied_maslovs(&self) -> Vec<i64> {
        self.summands
            .iter()
            .filter(|s| s.dim > 0)
            .map(|s| s.maslov)
            .collect()
    }
}

/// The homology of a validated complex, per sector.
#[derive(Clone, Debug)]
pub struct Homology {
    pub sectors: Vec<SectorHomology>,
}

impl Homology {
    pub fn sector(&self, label: &str) -> Option<&SectorHomology> {
        self.sectors.iter().find(|s| s.sector == label)
    }
}

/// Generator indices of one sector grouped by maslov level.
pub(crate) struct SectorLayout {
    pub sector: String,
    pub min_maslov: i64,
    pub max_maslov: i64,
    /// Global generator indices per maslov level (dense range, possibly
    /// empty at interior levels).
    pub by_level: BTreeMap<i64, Vec<usize>>,
}

impl SectorLayout {
    pub fn new(c: &EquivariantComplex, sector: &str) -> Self {
        let indices = c.sector_indices(sector);
        assert!(!indices.is_empty(), "sector {sector:?} has no generators");
        let min = indices.iter().map(|&i| c.generator(i).maslov).min().unwrap();
        let max = indices.iter().map(|&i| c.generator(i).maslov).max().unwrap();
        let mut by_level: BTreeMap<i64, Vec<usize>> = (min..=max).map(|m| (m, Vec::new())).collect();
        for i in indices {
            by_level.get_mut(&c.generator(i).maslov).unwrap().push(i);
        }
        Self {
            sector: sector.to_string(),
            min_maslov: min,
            max_maslov: max,
            by_level,
        }
    }

    pub fn dim(&self, m: i64) -> usize {
        self.by_level.get(&m).map_or(0, Vec::len)
    }

    pub fn indices(&self, m: i64) -> &[usize] {
        self.by_level.get(&m).map_or(&[], Vec::as_slice)
    }

    /// The block of `full` mapping the level-`src` piece into the
    /// level-`dst` piece.
    pub fn block(&self, full: &Gf2Matrix, dst: i64, src: i64) -> Gf2Matrix {
        let rows = self.indices(dst);
        let cols = self.indices(src);
        let mut m = Gf2Matrix::zero(rows.len(), cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for (ii, &i) in rows.iter().enumerate() {
                if full.get(i, j) {
                    m.set(ii, jj);
                }
            }
        }
        m
    }
}

/// Graded homology with echelon-canonical representatives and the induced
/// involution, per (sector, maslov).
pub fn homology(c: &ValidatedComplex) -> Homology {
    let mut sectors = Vec::new();
    for label in c.sectors() {
        let layout = SectorLayout::new(c, &label);
        let mut summands = Vec::new();
        for m in layout.min_maslov..=layout.max_maslov {
            let dim_m = layout.dim(m);
            let d_from_m = layout.block(c.d_matrix(), m - 1, m);
            let d_into_m = layout.block(c.d_matrix(), m, m + 1);
            let cycles = Subspace::span(dim_m, d_from_m.kernel_basis());
            let boundaries = Subspace::span(dim_m, d_into_m.image_basis());
            let representatives = cycles.coset_representatives(&boundaries);
            let s_block = layout.block(c.s_matrix(), m, m);
            let s_star = Gf2Matrix::induced_subquotient_map(
                &s_block, &cycles, &boundaries, &cycles, &boundaries,
            )
            .expect("validated involution restricts to cycles and boundaries");
            let labels = representatives
                .iter()
                .map(|v| c.label_combination(layout.indices(m), v))
                .collect();
            summands.push(HomologySummand {
                maslov: m,
                dim: representatives.len(),
                representatives,
                labels,
                s_star,
            });
        }
        sectors.push(SectorHomology {
            sector: label,
            summands,
        });
    }
    Homology { sectors }
}

/// Splits a validated complex into one complex per sector. The union of the
/// pieces is the original complex up to generator reordering, and each piece
/// is validated (the restriction of `d` and `S` is guaranteed by validation).
pub fn split_by_sector(c: &ValidatedComplex) -> Vec<ValidatedComplex> {
    c.sectors()
        .into_iter()
        .map(|label| {
            let keep: BTreeSet<&str> = c
                .sector_indices(&label)
                .into_iter()
                .map(|i| c.generator(i).name.as_str())
                .collect();
            let gens: Vec<Generator> = c
                .generators()
                .iter()
                .filter(|g| keep.contains(g.name.as_str()))
                .cloned()
                .collect();
            let restrict = |m: &Gf2Matrix| -> LinearMap {
                let full = c.matrix_as_map(m);
                LinearMap::from_columns(
                    full.columns()
                        .iter()
                        .filter(|(src, _)| keep.contains(src.as_str()))
                        .map(|(src, tgts)| (src.clone(), tgts.clone()))
                        .collect(),
                )
            };
            let d = restrict(c.d_matrix());
            let s = restrict(c.s_matrix());
            EquivariantComplex::new(gens, &d, InvolutionSpec::Direct(s))
                .expect("sector restriction resolves")
                .into_validated()
                .expect("sector restriction of a validated complex is valid")
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Tensor products
// ---------------------------------------------------------------------------

/// How the involution of a tensor product is assembled.
#[derive(Clone, Debug)]
pub enum TensorRule {
    /// The swap form `g⊗h ↦ S₂(h)⊗S₁(g)` through the generator-set
    /// identification of the two factors (self-connected-sum case).
    Swap,
    /// An explicitly supplied involution on the pair generators.
    Explicit(LinearMap),
}

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("swap rule requires identical factor generator lists: {0}")]
    SwapIdentification(String),
    #[error("{0}")]
    Build(#[from] BuildError),
    #[error("tensor involution failed validation:\n{0}")]
    InvalidInvolution(ValidationReport),
}

/// The canonical name of a tensor pair generator.
pub fn tensor_name(g: &str, h: &str) -> String {
    format!("{g}*{h}")
}

/// Pair generators and the Künneth differential `d⊗1 + 1⊗d` of a tensor
/// product, by name.
pub(crate) fn tensor_parts(
    c1: &EquivariantComplex,
    c2: &EquivariantComplex,
) -> (Vec<Generator>, LinearMap) {
    let mut gens = Vec::new();
    let mut d = LinearMap::new();
    let d1 = c1.matrix_as_map(c1.d_matrix());
    let d2 = c2.matrix_as_map(c2.d_matrix());
    for g in c1.generators() {
        for h in c2.generators() {
            let name = tensor_name(&g.name, &h.name);
            let alexander = match (g.alexander, h.alexander) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            };
            let sector = match alexander {
                Some(_) => None,
                None => Some(format!("{}*{}", g.sector, h.sector)),
            };
            gens.push(
                Generator::new(name.clone(), g.maslov + h.maslov, alexander, sector)
                    .expect("tensor generator is well-formed"),
            );
            let mut targets: Vec<String> = Vec::new();
            if let Some(ts) = d1.column(&g.name) {
                targets.extend(ts.iter().map(|t| tensor_name(t, &h.name)));
            }
            if let Some(ts) = d2.column(&h.name) {
                targets.extend(ts.iter().map(|t| tensor_name(&g.name, t)));
            }
            if !targets.is_empty() {
                d.set_column(name, targets);
            }
        }
    }
    (gens, d)
}

/// The swap-form involution `g⊗h ↦ S₂(h)⊗S₁(g)` as a name-level map.
pub(crate) fn swap_involution(
    c1: &EquivariantComplex,
    c2: &EquivariantComplex,
) -> LinearMap {
    let s1 = c1.matrix_as_map(c1.s_matrix());
    let s2 = c2.matrix_as_map(c2.s_matrix());
    let mut map = LinearMap::new();
    for g in c1.generators() {
        let g_image: Vec<&str> = match s1.column(&g.name) {
            Some(ts) => ts.iter().map(String::as_str).collect(),
            None => Vec::new(),
        };
        for h in c2.generators() {
            let h_image: Vec<&str> = match s2.column(&h.name) {
                Some(ts) => ts.iter().map(String::as_str).collect(),
                None => Vec::new(),
            };
            let mut targets = Vec::new();
            for b in &h_image {
                for a in &g_image {
                    targets.push(tensor_name(b, a));
                }
            }
            if !targets.is_empty() {
                map.set_column(tensor_name(&g.name, &h.name), targets);
            }
        }
    }
    map
}

fn check_identified(c1: &EquivariantComplex, c2: &EquivariantComplex) -> Result<(), TensorError> {
    if c1.generators() != c2.generators() {
        return Err(TensorError::SwapIdentification(
            "generator lists differ".to_string(),
        ));
    }
    Ok(())
}

/// Tensor product of two validated complexes. Generators are ordered pairs
/// with maslov (and alexander, when both factors carry one) added, and
/// `d = d⊗1 + 1⊗d`. The involution comes from the rule; the result is
/// re-validated before being returned.
pub fn tensor(
    c1: &ValidatedComplex,
    c2: &ValidatedComplex,
    rule: &TensorRule,
) -> Result<ValidatedComplex, TensorError> {
    let (gens, d) = tensor_parts(c1, c2);
    let s = match rule {
        TensorRule::Swap => {
            check_identified(c1, c2)?;
            swap_involution(c1, c2)
        }
        TensorRule::Explicit(map) => map.clone(),
    };
    let complex = EquivariantComplex::new(gens, &d, InvolutionSpec::Direct(s))?;
    complex.into_validated().map_err(TensorError::InvalidInvolution)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The figure-eight complex with the τ inversion, built by hand from the
    /// printed maps: ι(b)=c, ι(c)=b, ι(a)=a+x, ι(x)=x+e, ι(e)=e and
    /// τ(b)=c, τ(c)=b, τ(a)=a+x, τ(x)=x, τ(e)=e.
    fn fig8_tau() -> EquivariantComplex {
        let gens = vec![
            Generator::knot("b", 1, 1),
            Generator::knot("a", 0, 0),
            Generator::knot("x", 0, 0),
            Generator::knot("e", 0, 0),
            Generator::knot("c", -1, -1),
        ];
        let mut iota = LinearMap::new();
        iota.set_column("b", ["c"]);
        iota.set_column("c", ["b"]);
        iota.set_column("a", ["a", "x"]);
        iota.set_column("x", ["x", "e"]);
        iota.set_column("e", ["e"]);
        let mut tau = LinearMap::new();
        tau.set_column("b", ["c"]);
        tau.set_column("c", ["b"]);
        tau.set_column("a", ["a", "x"]);
        tau.set_column("x", ["x"]);
        tau.set_column("e", ["e"]);
        EquivariantComplex::new(gens, &LinearMap::new(), InvolutionSpec::Composed { iota, tau })
            .unwrap()
    }

    #[test]
    fn fig8_composed_involution_validates() {
        // Composing the printed ι and τ by hand gives S(a) = a+e,
        // S(x) = x+e, S fixing b, c, e; every check must pass.
        let c = fig8_tau();
        let report = c.validate();
        assert!(report.passed(), "{report}");
        let i = |n: &str| c.index_of(n).unwrap();
        let s = c.s_matrix();
        assert!(s.get(i("a"), i("a")) && s.get(i("e"), i("a")) && !s.get(i("x"), i("a")));
        assert!(s.get(i("x"), i("x")) && s.get(i("e"), i("x")));
        assert!(s.get(i("e"), i("e")) && !s.get(i("a"), i("e")) && !s.get(i("x"), i("e")));
    }

    #[test]
    fn sector_swap_rejected() {
        // S exchanging generators in different sectors must fail with a
        // witness naming the generator.
        let gens = vec![Generator::knot("u", 0, 0), Generator::knot("v", 0, 1)];
        let mut s = LinearMap::new();
        s.set_column("u", ["v"]);
        s.set_column("v", ["u"]);
        let c = EquivariantComplex::new(gens, &LinearMap::new(), InvolutionSpec::Direct(s)).unwrap();
        let report = c.validate();
        assert!(!report.passed());
        let failure = report
            .failures()
            .find(|f| f.check == CheckKind::SPreservesSector)
            .expect("sector preservation must fail");
        assert!(failure.witness.as_ref().unwrap().contains('u'));
    }

    #[test]
    fn d_square_nonzero_rejected() {
        // d(x) = y, d(y) = z with z ≠ 0 violates d² = 0.
        let gens = vec![
            Generator::knot("x", 2, 0),
            Generator::knot("y", 1, 0),
            Generator::knot("z", 0, 0),
        ];
        let mut d = LinearMap::new();
        d.set_column("x", ["y"]);
        d.set_column("y", ["z"]);
        let id: LinearMap = {
            let mut m = LinearMap::new();
            for n in ["x", "y", "z"] {
                m.set_column(n, [n]);
            }
            m
        };
        let c = EquivariantComplex::new(gens, &d, InvolutionSpec::Direct(id)).unwrap();
        let report = c.validate();
        assert!(report
            .failures()
            .any(|f| f.check == CheckKind::DSquaredZero));
    }

    #[test]
    fn unknown_target_is_build_error() {
        let gens = vec![Generator::knot("x", 0, 0)];
        let mut s = LinearMap::new();
        s.set_column("x", ["ghost"]);
        let err = EquivariantComplex::new(gens, &LinearMap::new(), InvolutionSpec::Direct(s))
            .unwrap_err();
        assert!(matches!(err, BuildError::UnknownGenerator { .. }));
    }

    #[test]
    fn empty_complex_is_valid() {
        let c = EquivariantComplex::new(
            Vec::new(),
            &LinearMap::new(),
            InvolutionSpec::Direct(LinearMap::new()),
        )
        .unwrap();
        assert!(c.validate().passed());
        let v = c.into_validated().unwrap();
        assert!(homology(&v).sectors.is_empty());
        assert!(split_by_sector(&v).is_empty());
    }

    #[test]
    fn fig8_sector_split_counts() {
        let v = fig8_tau().into_validated().unwrap();
        let parts = split_by_sector(&v);
        let counts: Vec<(String, usize)> = parts
            .iter()
            .map(|p| (p.sectors()[0].clone(), p.len()))
            .collect();
        assert_eq!(
            counts,
            vec![
                ("1".to_string(), 1),
                ("0".to_string(), 3),
                ("-1".to_string(), 1)
            ]
        );
        let total: usize = parts.iter().map(|p| p.len()).sum();
        assert_eq!(total, v.len());
    }

    #[test]
    fn single_sector_split_is_identity() {
        let gens = vec![Generator::knot("p", 0, 0), Generator::knot("q", 1, 0)];
        let mut d = LinearMap::new();
        d.set_column("q", ["p"]);
        let mut s = LinearMap::new();
        s.set_column("p", ["p"]);
        s.set_column("q", ["q"]);
        let v = EquivariantComplex::new(gens, &d, InvolutionSpec::Direct(s))
            .unwrap()
            .into_validated()
            .unwrap();
        let parts = split_by_sector(&v);
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].as_complex(), v.as_complex());
    }

    #[test]
    fn homology_d_zero_is_everything() {
        let v = fig8_tau().into_validated().unwrap();
        let h = homology(&v);
        let dims: Vec<usize> = h.sectors.iter().map(SectorHomology::total_dim).collect();
        assert_eq!(dims, vec![1, 3, 1]);
        // With d = 0 the induced involution equals S on the nose: on sector 0
        // it has rank 3 and (1+S_*) has rank 1.
        let s0 = h.sector("0").unwrap();
        let summand = s0.summands.iter().find(|s| s.dim > 0).unwrap();
        let one_plus = summand.s_star.add(&Gf2Matrix::identity(3));
        assert_eq!(one_plus.rank(), 1);
    }

    #[test]
    fn homology_of_acyclic_pair_vanishes() {
        let gens = vec![Generator::knot("p", 0, 0), Generator::knot("q", 1, 0)];
        let mut d = LinearMap::new();
        d.set_column("q", ["p"]);
        let mut s = LinearMap::new();
        s.set_column("p", ["p"]);
        s.set_column("q", ["q"]);
        let v = EquivariantComplex::new(gens, &d, InvolutionSpec::Direct(s))
            .unwrap()
            .into_validated()
            .unwrap();
        let h = homology(&v);
        assert_eq!(h.sectors[0].total_dim(), 0);
    }

    #[test]
    fn tensor_of_points_is_point() {
        let point = || {
            let gens = vec![Generator::knot("x0", 0, 0)];
            let mut s = LinearMap::new();
            s.set_column("x0", ["x0"]);
            EquivariantComplex::new(gens, &LinearMap::new(), InvolutionSpec::Direct(s))
                .unwrap()
                .into_validated()
                .unwrap()
        };
        let t = tensor(&point(), &point(), &TensorRule::Swap).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.generator(0).name, "x0*x0");
        assert_eq!(t.generator(0).maslov, 0);
        assert_eq!(t.generator(0).alexander, Some(0));
        assert_eq!(*t.s_matrix(), Gf2Matrix::identity(1));
    }

    #[test]
    fn tensor_kunneth_differential() {
        // (q → p) ⊗ (q → p): d(q*q) = p*q + q*p, d² = 0 by validation.
        let arrow = || {
            let gens = vec![Generator::knot("p", 0, 0), Generator::knot("q", 1, 0)];
            let mut d = LinearMap::new();
            d.set_column("q", ["p"]);
            let mut s = LinearMap::new();
            s.set_column("p", ["p"]);
            s.set_column("q", ["q"]);
            EquivariantComplex::new(gens, &d, InvolutionSpec::Direct(s))
                .unwrap()
                .into_validated()
                .unwrap()
        };
        let t = tensor(&arrow(), &arrow(), &TensorRule::Swap).unwrap();
        assert_eq!(t.len(), 4);
        let d = t.matrix_as_map(t.d_matrix());
        let col = d.column("q*q").unwrap();
        let expected: BTreeSet<String> = ["p*q", "q*p"].iter().map(|s| s.to_string()).collect();
        assert_eq!(col, &expected);
    }

    #[test]
    fn swap_rule_requires_identification() {
        let one = |name: &str| {
            let gens = vec![Generator::knot(name, 0, 0)];
            let mut s = LinearMap::new();
            s.set_column(name, [name]);
            EquivariantComplex::new(gens, &LinearMap::new(), InvolutionSpec::Direct(s))
                .unwrap()
                .into_validated()
                .unwrap()
        };
        let err = tensor(&one("x"), &one("y"), &TensorRule::Swap).unwrap_err();
        assert!(matches!(err, TensorError::SwapIdentification(_)));
    }

    #[test]
    fn canonical_order_is_reproducible() {
        let gens = |shuffled: bool| {
            let mut v = vec![
                Generator::knot("b", 1, 1),
                Generator::knot("a", 0, 0),
                Generator::knot("c", -1, -1),
            ];
            if shuffled {
                v.reverse();
            }
            v
        };
        let mk = |g| {
            EquivariantComplex::new(g, &LinearMap::new(), InvolutionSpec::Direct(LinearMap::new()))
                .unwrap()
        };
        assert_eq!(mk(gens(false)), mk(gens(true)));
        // Descending Alexander order: sector "1" first.
        assert_eq!(mk(gens(false)).generator(0).name, "b");
    }
}
