//! The localization spectral sequence of `(C ⊗ F[θ,θ⁻¹], d + (1+S)θ)`.
//!
//! The computation splits along sectors and, within a sector, along the
//! maslov grading. Pages are materialized as explicit subspace towers
//! `B_1 ⊆ B_2 ⊆ … ⊆ Z_2 ⊆ Z_1` inside the chain groups, with
//! `E_r = Z_r / B_r`:
//!
//! - `Z_r(m)`: cycles `x` admitting a zig-zag `d·y_1 = (1+S)x`,
//!   `d·y_{i+1} = (1+S)y_i` of length `r-1`;
//! - `B_r(m)`: boundaries `im d + (1+S)·{ends of (r-2)-step zig-zags
//!   starting at a cycle}`.
//!
//! The differential `d_r` sends the class of `x` to the class of
//! `(1+S)y_{r-1}`; it raises maslov by `r-1` and the θ-exponent by `r`, so
//! no differential survives past page `maslov span + 2` — the hard bound at
//! which iteration stops and collapse is certified.
//!
//! Because θ is invertible, the totalization of the double complex is
//! 2-periodic and the total dimension of `E_∞` in each sector equals the
//! Tate homology `dim H(C_sector, d + 1 + S)`. [`tate_oracle`] computes
//! that dimension from scratch with plain rank computations, sharing no
//! subquotient machinery with the page engine, and every untruncated run is
//! checked against it.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::complex::{homology, SectorLayout, ValidatedComplex};
use crate::gf2::{quotient_coordinates, Gf2Matrix, Gf2Vector, Subspace};

/// Failures of the engine's internal invariants. These cannot occur for
/// validated inputs; they exist to turn engine bugs into loud errors
/// instead of wrong tables.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Precondition failures of the collapse checks.
#[derive(Debug, Error)]
pub enum CheckError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// One (sector, maslov) summand of a page.
#[derive(Clone, Debug)]
pub struct PageSummand {
    pub maslov: i64,
    pub dim: usize,
    /// Echelon-canonical coset representatives, in the coordinates of the
    /// bigrading's generator block.
    pub representatives: Vec<Gf2Vector>,
    /// The representatives rendered as sums of generator names.
    pub labels: Vec<String>,
}

/// The matrix of `d_r` out of one bigrading, in representative coordinates.
/// The bidegree is (maslov `+(r-1)`, θ-exponent `+r`).
#[derive(Clone, Debug)]
pub struct PageDifferential {
    pub from_maslov: i64,
    pub to_maslov: i64,
    pub theta_exponent: u32,
    pub matrix: Gf2Matrix,
}

/// One sector of one page.
#[derive(Clone, Debug)]
pub struct SectorPage {
    pub sector: String,
    pub summands: Vec<PageSummand>,
    pub differentials: Vec<PageDifferential>,
}

impl SectorPage {
    pub fn total_dim(&self) -> usize {
        self.summands.iter().map(|s| s.dim).sum()
    }

    pub fn dim_at(&self, maslov: i64) -> usize {
        self.summands
            .iter()
            .find(|s| s.maslov == maslov)
            .map_or(0, |s| s.dim)
    }

    /// Total rank of `d_r` out of this sector on this page.
    pub fn differential_rank(&self) -> usize {
        self.differentials.iter().map(|d| d.matrix.rank()).sum()
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.differentials.iter().any(|d| !d.matrix.is_zero())
    }
}

/// One page `E_r` across all sectors.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: u32,
    pub sectors: Vec<SectorPage>,
}

impl Page {
    pub fn sector(&self, label: &str) -> Option<&SectorPage> {
        self.sectors.iter().find(|s| s.sector == label)
    }
}

/// Per-sector dimension table of a fixed page.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorDims {
    pub sector: String,
    pub by_maslov: BTreeMap<i64, usize>,
}

impl SectorDims {
    pub fn total(&self) -> usize {
        self.by_maslov.values().sum()
    }
}

/// The independent Tate-homology oracle: per sector, the dimension of
/// `H(C_sector, d + 1 + S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub dims: Vec<(String, usize)>,
}

impl OracleReport {
    pub fn dim(&self, sector: &str) -> Option<usize> {
        self.dims.iter().find(|(s, _)| s == sector).map(|&(_, d)| d)
    }
}

/// Smith-inequality comparison for one sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithEntry {
    pub sector: String,
    pub homology_dim: usize,
    pub e_infinity_dim: usize,
}

impl SmithEntry {
    pub fn margin(&self) -> i64 {
        self.homology_dim as i64 - self.e_infinity_dim as i64
    }
}

/// The Smith inequality `dim H(C_s, d) ≥ dim E_∞(s)`, per sector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithVerdict {
    pub entries: Vec<SmithEntry>,
}

impl SmithVerdict {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.margin() >= 0)
    }
}

/// A full spectral sequence run: every page, the collapse page, the `E_∞`
/// table, the Smith verdict, and the oracle cross-check.
#[derive(Clone, Debug)]
pub struct SsReport {
    pub pages: Vec<Page>,
    /// Least r₀ with `d_r = 0` for all `r ≥ r₀` (within the computed range
    /// when truncated).
    pub collapse_page: u32,
    pub e_infinity: Vec<SectorDims>,
    pub smith: SmithVerdict,
    pub oracle: OracleReport,
    /// Whether `Σ_m dim E_∞(s, m)` equals the oracle dimension in every
    /// sector. Always true for untruncated runs.
    pub oracle_consistent: bool,
    /// True when a user-supplied page cap stopped iteration before the hard
    /// bound in some sector, so the last page need not be `E_∞`.
    pub truncated: bool,
}

impl SsReport {
    pub fn e_infinity_dim(&self, sector: &str) -> usize {
        self.e_infinity
            .iter()
            .find(|s| s.sector == sector)
            .map_or(0, SectorDims::total)
    }

    pub fn e1_dims(&self) -> Vec<SectorDims> {
        page_dims(&self.pages[0])
    }

    /// Least r₀ such that `d_r = 0` for all `r ≥ r₀` within one sector.
    pub fn sector_collapse_page(&self, sector: &str) -> u32 {
        self.pages
            .iter()
            .filter(|page| {
                page.sector(sector)
                    .is_some_and(SectorPage::has_nonzero_differential)
            })
            .map(|page| page.r)
            .max()
            .map_or(1, |r| r + 1)
    }
}

fn page_dims(page: &Page) -> Vec<SectorDims> {
    page.sectors
        .iter()
        .map(|s| SectorDims {
            sector: s.sector.clone(),
            by_maslov: s.summands.iter().map(|sm| (sm.maslov, sm.dim)).collect(),
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Per-sector engine
// ---------------------------------------------------------------------------

/// The `(Z_r, B_r)` pair at one bigrading with its canonical coset
/// representatives.
struct TowerEntry {
    z: Subspace,
    b: Subspace,
    reps: Vec<Gf2Vector>,
}

struct SectorEngine<'a> {
    c: &'a ValidatedComplex,
    layout: SectorLayout,
    /// `d_m : C_m → C_{m-1}`, keyed by the source level `m`.
    d_blocks: BTreeMap<i64, Gf2Matrix>,
    /// `(1+S)_m : C_m → C_m`.
    t_blocks: BTreeMap<i64, Gf2Matrix>,
}

/// Pages and collapse data of a single sector.
struct SectorRun {
    pages: Vec<SectorPage>,
    last_nonzero_differential: Option<u32>,
    hard_bound: u32,
}

impl<'a> SectorEngine<'a> {
    fn new(c: &'a ValidatedComplex, sector: &str) -> Self {
        let layout = SectorLayout::new(c, sector);
        let one_plus_s = c.s_matrix().add(&Gf2Matrix::identity(c.len()));
        let mut d_blocks = BTreeMap::new();
        let mut t_blocks = BTreeMap::new();
        for m in layout.min_maslov..=layout.max_maslov + 1 {
            d_blocks.insert(m, layout.block(c.d_matrix(), m - 1, m));
        }
        for m in layout.min_maslov..=layout.max_maslov {
            t_blocks.insert(m, layout.block(&one_plus_s, m, m));
        }
        Self {
            c,
            layout,
            d_blocks,
            t_blocks,
        }
    }

    fn dim(&self, m: i64) -> usize {
        self.layout.dim(m)
    }

    fn d(&self, m: i64) -> &Gf2Matrix {
        &self.d_blocks[&m]
    }

    fn t(&self, m: i64) -> &Gf2Matrix {
        &self.t_blocks[&m]
    }

    fn in_range(&self, m: i64) -> bool {
        m >= self.layout.min_maslov && m <= self.layout.max_maslov
    }

    fn levels(&self) -> std::ops::RangeInclusive<i64> {
        self.layout.min_maslov..=self.layout.max_maslov
    }

    fn run(&self, r_cap: Option<u32>) -> Result<SectorRun, EngineError> {
        let span = (self.layout.max_maslov - self.layout.min_maslov) as u32;
        let hard_bound = span + 2;
        let last_page = r_cap.map_or(hard_bound, |c| c.clamp(1, hard_bound));

        // Lift towers. u[k-1][m] is U_k(m), the set of values d·y_1 reachable
        // by a k-step zig-zag y_1, …, y_k above level m; w[k][m] is W_k(m),
        // the ends of k-step zig-zags starting at a cycle.
        let kernels: BTreeMap<i64, Subspace> = self
            .levels()
            .map(|m| (m, Subspace::span(self.dim(m), self.d(m).kernel_basis())))
            .collect();
        let images: BTreeMap<i64, Subspace> = self
            .levels()
            .map(|m| (m, Subspace::span(self.dim(m), self.d(m + 1).image_basis())))
            .collect();
        let steps = last_page as usize;
        let mut u: Vec<BTreeMap<i64, Subspace>> = vec![images.clone()];
        let mut w: Vec<BTreeMap<i64, Subspace>> = vec![kernels.clone()];
        for k in 1..steps {
            let mut next_u = BTreeMap::new();
            let mut next_w = BTreeMap::new();
            for m in self.levels() {
                let up = if self.in_range(m + 1) && self.dim(m + 1) > 0 {
                    u[k - 1][&(m + 1)]
                        .preimage_under(self.t(m + 1))
                        .image_under(self.d(m + 1))
                } else {
                    Subspace::zero(self.dim(m))
                };
                next_u.insert(m, up);
                let down = if self.in_range(m - 1) && self.dim(m - 1) > 0 {
                    w[k - 1][&(m - 1)]
                        .image_under(self.t(m - 1))
                        .preimage_under(self.d(m))
                } else {
                    Subspace::full(self.dim(m))
                };
                next_w.insert(m, down);
            }
            u.push(next_u);
            w.push(next_w);
        }

        // Z_r = ker d ∩ (1+S)⁻¹(U_{r-1}) and B_r = im d + (1+S)(W_{r-2}).
        let mut towers: BTreeMap<(u32, i64), TowerEntry> = BTreeMap::new();
        for r in 1..=last_page {
            for m in self.levels() {
                let z = if r == 1 {
                    kernels[&m].clone()
                } else {
                    kernels[&m].intersection(&u[(r - 2) as usize][&m].preimage_under(self.t(m)))
                };
                let b = if r == 1 {
                    images[&m].clone()
                } else {
                    images[&m].sum(&w[(r - 2) as usize][&m].image_under(self.t(m)))
                };
                if !z.contains_subspace(&b) {
                    return Err(EngineError::Internal(format!(
                        "B_{r} ⊄ Z_{r} at sector {:?} maslov {m}",
                        self.layout.sector
                    )));
                }
                let reps = z.coset_representatives(&b);
                towers.insert((r, m), TowerEntry { z, b, reps });
            }
        }

        let mut pages = Vec::new();
        let mut last_nonzero = None;
        for r in 1..=last_page {
            let summands: Vec<PageSummand> = self
                .levels()
                .map(|m| {
                    let reps = &towers[&(r, m)].reps;
                    PageSummand {
                        maslov: m,
                        dim: reps.len(),
                        representatives: reps.clone(),
                        labels: reps
                            .iter()
                            .map(|v| self.c.label_combination(self.layout.indices(m), v))
                            .collect(),
                    }
                })
                .collect();
            let mut differentials = Vec::new();
            for m in self.levels() {
                let mt = m + i64::from(r) - 1;
                let src_reps = &towers[&(r, m)].reps;
                if src_reps.is_empty() {
                    continue;
                }
                let matrix = if self.in_range(mt) {
                    self.differential_matrix(r, m, src_reps, &towers[&(r, mt)], &u)?
                } else {
                    Gf2Matrix::zero(0, src_reps.len())
                };
                if !matrix.is_zero() {
                    last_nonzero = Some(last_nonzero.map_or(r, |p: u32| p.max(r)));
                }
                differentials.push(PageDifferential {
                    from_maslov: m,
                    to_maslov: mt,
                    theta_exponent: r,
                    matrix,
                });
            }
            self.check_page_consistency(r, last_page, &towers, &differentials)?;
            pages.push(SectorPage {
                sector: self.layout.sector.clone(),
                summands,
                differentials,
            });
        }

        Ok(SectorRun {
            pages,
            last_nonzero_differential: last_nonzero,
            hard_bound,
        })
    }

    /// Matrix of `d_r` out of level `m`, by running the zig-zag on each
    /// source representative. Each lift is chosen so the remaining steps
    /// stay solvable: step `i` solves `d·y = (1+S)·prev` subject to
    /// `(1+S)·y ∈ U_{r-1-i}`, a stacked linear system. The guarded lift is
    /// necessary: an unconstrained solve may return a lift that admits no
    /// further extension even though the class does.
    fn differential_matrix(
        &self,
        r: u32,
        m: i64,
        src_reps: &[Gf2Vector],
        target: &TowerEntry,
        u: &[BTreeMap<i64, Subspace>],
    ) -> Result<Gf2Matrix, EngineError> {
        let mt = m + i64::from(r) - 1;
        let mut cols = Vec::with_capacity(src_reps.len());
        for (col_idx, x) in src_reps.iter().enumerate() {
            let witness = || {
                format!(
                    "sector {:?}, page {r}, maslov {m}, representative #{col_idx}",
                    self.layout.sector
                )
            };
            let mut y = x.clone();
            for i in 1..r {
                let level = m + i64::from(i);
                let rhs = self.t(level - 1).mul_vector(&y);
                let remaining = (r - 1 - i) as usize;
                let solved = if remaining == 0 {
                    self.d(level).solve(&rhs)
                } else {
                    let guard = u[remaining - 1][&level]
                        .annihilator_matrix()
                        .multiply(self.t(level));
                    let system = self.d(level).vstack(&guard);
                    let b = rhs.concat(&Gf2Vector::zeros(guard.rows()));
                    system.solve(&b)
                }
                .map_err(|e| EngineError::Internal(format!("{e} at {}", witness())))?;
                y = solved.ok_or_else(|| {
                    EngineError::Internal(format!(
                        "zig-zag lift failed at step {i} for {}",
                        witness()
                    ))
                })?;
            }
            let value = self.t(mt).mul_vector(&y);
            if !target.z.contains(&value) {
                return Err(EngineError::Internal(format!(
                    "d_r value escapes Z_{r} for {}",
                    witness()
                )));
            }
            let coords = quotient_coordinates(&target.reps, &target.b, &value).ok_or_else(|| {
                EngineError::Internal(format!("d_r value has no coordinates for {}", witness()))
            })?;
            cols.push(coords);
        }
        Ok(Gf2Matrix::from_columns(target.reps.len(), &cols))
    }

    /// Cross-checks the tower dimensions against the differential ranks —
    /// `dim E_{r+1}(m) = dim E_r(m) − rank(d_r out of m) − rank(d_r into m)`
    /// — and `d_r ∘ d_r = 0`.
    fn check_page_consistency(
        &self,
        r: u32,
        last_page: u32,
        towers: &BTreeMap<(u32, i64), TowerEntry>,
        differentials: &[PageDifferential],
    ) -> Result<(), EngineError> {
        let rank_from = |m: i64| -> usize {
            differentials
                .iter()
                .find(|d| d.from_maslov == m)
                .map_or(0, |d| d.matrix.rank())
        };
        for d1 in differentials {
            if let Some(d2) = differentials.iter().find(|d| d.from_maslov == d1.to_maslov) {
                if !d2.matrix.multiply(&d1.matrix).is_zero() {
                    return Err(EngineError::Internal(format!(
                        "d_{r} ∘ d_{r} ≠ 0 out of maslov {} in sector {:?}",
                        d1.from_maslov, self.layout.sector
                    )));
                }
            }
        }
        if r < last_page {
            let shift = i64::from(r) - 1;
            for m in self.levels() {
                let here = towers[&(r, m)].reps.len();
                let next = towers[&(r + 1, m)].reps.len();
                let outgoing = rank_from(m);
                let incoming = rank_from(m - shift);
                if here < outgoing + incoming || next != here - outgoing - incoming {
                    return Err(EngineError::Internal(format!(
                        "page dimension mismatch at sector {:?} maslov {m}: \
                         E_{} = {next} but E_{r} = {here} with ranks out {outgoing}, in {incoming}",
                        self.layout.sector,
                        r + 1,
                    )));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// Computes every page of the localization spectral sequence of `c`.
///
/// Iteration runs to `min(r_max, maslov span + 2)` in each sector; the
/// second term is the hard bound past which the bidegree of `d_r` forbids
/// further differentials, so untruncated runs certify their collapse page
/// and their final page is `E_∞`.
pub fn compute_pages(c: &ValidatedComplex, r_max: Option<u32>) -> Result<SsReport, EngineError> {
    let sectors = c.sectors();
    let mut runs: Vec<SectorRun> = Vec::new();
    for label in &sectors {
        runs.push(SectorEngine::new(c, label).run(r_max)?);
    }

    let r_global = runs.iter().map(|r| r.pages.len() as u32).max().unwrap_or(1);
    let mut pages = Vec::new();
    for r in 1..=r_global {
        let sector_pages: Vec<SectorPage> = runs
            .iter()
            .map(|run| {
                let idx = (r as usize - 1).min(run.pages.len() - 1);
                let mut page = run.pages[idx].clone();
                if (r as usize) > run.pages.len() {
                    // The sector is already at its hard bound; later pages
                    // repeat it with vanishing differentials.
                    page.differentials = Vec::new();
                }
                page
            })
            .collect();
        pages.push(Page {
            r,
            sectors: sector_pages,
        });
    }

    let truncated = r_max.is_some_and(|cap| runs.iter().any(|run| cap < run.hard_bound));
    let collapse_page = runs
        .iter()
        .filter_map(|run| run.last_nonzero_differential)
        .max()
        .map_or(1, |r| r + 1);

    let e_infinity = page_dims(pages.last().expect("at least one page"));

    let oracle = tate_oracle(c)?;
    let oracle_consistent = e_infinity
        .iter()
        .all(|sd| oracle.dim(&sd.sector).is_some_and(|dim| dim == sd.total()));
    if !truncated && !oracle_consistent {
        return Err(EngineError::Internal(
            "E_∞ dimensions disagree with the Tate oracle".to_string(),
        ));
    }

    let h = homology(c);
    let smith = SmithVerdict {
        entries: h
            .sectors
            .iter()
            .map(|sh| SmithEntry {
                sector: sh.sector.clone(),
                homology_dim: sh.total_dim(),
                e_infinity_dim: e_infinity
                    .iter()
                    .find(|sd| sd.sector == sh.sector)
                    .map_or(0, SectorDims::total),
            })
            .collect(),
    };

    Ok(SsReport {
        pages,
        collapse_page,
        e_infinity,
        smith,
        oracle,
        oracle_consistent,
        truncated,
    })
}

/// The Tate-homology oracle: per sector, `dim ker(d+1+S) − dim im(d+1+S)`,
/// computed with plain rank computations only. This path shares no
/// subquotient code with the page engine.
pub fn tate_oracle(c: &ValidatedComplex) -> Result<OracleReport, EngineError> {
    let full = c
        .d_matrix()
        .add(&Gf2Matrix::identity(c.len()))
        .add(c.s_matrix());
    let mut dims = Vec::new();
    for label in c.sectors() {
        let idx = c.sector_indices(&label);
        let mut block = Gf2Matrix::zero(idx.len(), idx.len());
        for (jj, &j) in idx.iter().enumerate() {
            for (ii, &i) in idx.iter().enumerate() {
                if full.get(i, j) {
                    block.set(ii, jj);
                }
            }
        }
        if !block.multiply(&block).is_zero() {
            return Err(EngineError::Internal(format!(
                "(d+1+S)² ≠ 0 on sector {label:?}"
            )));
        }
        let rank = block.rank();
        dims.push((label, idx.len() - 2 * rank));
    }
    Ok(OracleReport { dims })
}

/// Checks the Smith inequality `Σ dim H(C_s, d) ≥ Σ_m dim E_∞(s, m)` for
/// every sector and returns the per-sector margins.
pub fn smith_check(c: &ValidatedComplex) -> Result<SmithVerdict, EngineError> {
    Ok(compute_pages(c, None)?.smith)
}

/// Verdict of [`lspace_collapse_check`].
#[derive(Clone, Debug)]
pub struct LspaceVerdict {
    pub collapse_page: u32,
    /// Per sector: the (equal) `E_1` and `E_∞` dimensions.
    pub sector_dims: Vec<(String, usize)>,
}

/// For complexes whose homology is at most one-dimensional in every sector
/// (the L-space / L-space-knot shape), confirms that every differential
/// vanishes, so `E_∞ ≅ E_1` sector-wise.
pub fn lspace_collapse_check(c: &ValidatedComplex) -> Result<LspaceVerdict, CheckError> {
    let h = homology(c);
    for sh in &h.sectors {
        if sh.total_dim() > 1 {
            return Err(CheckError::Precondition(format!(
                "sector {:?} has homology dimension {} > 1",
                sh.sector,
                sh.total_dim()
            )));
        }
    }
    let report = compute_pages(c, None)?;
    if report.collapse_page != 1 {
        return Err(CheckError::Engine(EngineError::Internal(format!(
            "one-dimensional sectors admit no differentials, got collapse page {}",
            report.collapse_page
        ))));
    }
    let sector_dims = report
        .e_infinity
        .iter()
        .map(|sd| (sd.sector.clone(), sd.total()))
        .collect();
    Ok(LspaceVerdict {
        collapse_page: 1,
        sector_dims,
    })
}

/// Verdict of [`thin_collapse_check`].
#[derive(Clone, Debug)]
pub struct ThinVerdict {
    pub collapse_page: u32,
    /// Per sector: the `E_∞ = E_2` total dimension.
    pub sector_dims: Vec<(String, usize)>,
}

/// For complexes whose homology lies in a single maslov grading per sector
/// (thin shape), confirms that `d_r = 0` for every `r ≥ 2` — forced by the
/// maslov `+(r-1)` bidegree — so the sequence collapses at `E_2`.
pub fn thin_collapse_check(c: &ValidatedComplex) -> Result<ThinVerdict, CheckError> {
    let h = homology(c);
    for sh in &h.sectors {
        let occupied = sh.occupied_maslovs();
        if occupied.len() > 1 {
            return Err(CheckError::Precondition(format!(
                "sector {:?} has homology in maslov gradings {occupied:?}",
                sh.sector
            )));
        }
    }
    let report = compute_pages(c, None)?;
    if report.collapse_page > 2 {
        return Err(CheckError::Engine(EngineError::Internal(format!(
            "thin input forces collapse by E_2, got collapse page {}",
            report.collapse_page
        ))));
    }
    let sector_dims = report
        .e_infinity
        .iter()
        .map(|sd| (sd.sector.clone(), sd.total()))
        .collect();
    Ok(ThinVerdict {
        collapse_page: report.collapse_page,
        sector_dims,
    })
}
