//! Seeded generators of random valid complexes and invalid mutants.
//!
//! Valid complexes are assembled from elementary equivariant pieces — fixed
//! or freely-swapped cycles and arrows — and then conjugated by random
//! graded basis changes (transvections within a (sector, maslov) block).
//! Conjugation preserves every validation invariant, so the output is valid
//! by construction while the matrices look nothing like a direct sum.
//!
//! Mutants apply a single structural violation to a valid complex, for
//! testing that validation rejects each axiom independently.

use rand::Rng;

use crate::complex::{EquivariantComplex, Generator, InvolutionSpec, LinearMap};
use crate::gf2::Gf2Matrix;

/// Knobs for [`random_complex`].
#[derive(Clone, Debug)]
pub struct RandomComplexOptions {
    /// Upper bound on the number of generators.
    pub max_generators: usize,
    /// Upper bound on the number of sectors.
    pub max_sectors: usize,
    /// Use integer Alexander gradings as sectors.
    pub knot_flavored: bool,
    /// Place every generator of a sector in one maslov grading (forces d = 0
    /// within the sector).
    pub single_maslov_per_sector: bool,
    /// Build only freely-swapped cycle pairs with d = 0.
    pub free_pairs_only: bool,
    /// Number of random basis transvections to apply.
    pub shuffle_steps: usize,
}

impl Default for RandomComplexOptions {
    fn default() -> Self {
        Self {
            max_generators: 40,
            max_sectors: 4,
            knot_flavored: false,
            single_maslov_per_sector: false,
            free_pairs_only: false,
            shuffle_steps: 24,
        }
    }
}

/// Internal scratch state: generators in construction order with raw
/// matrices, conjugated before conversion to name maps.
struct Scratch {
    gens: Vec<Generator>,
    d_entries: Vec<(usize, usize)>,
    s_entries: Vec<(usize, usize)>,
}

impl Scratch {
    fn push(&mut self, sector: &SectorPlan, maslov: i64, tag: usize) -> usize {
        let idx = self.gens.len();
        let name = format!("g{tag}_{idx}");
        let g = if let Some(a) = sector.alexander {
            Generator::knot(name, maslov, a)
        } else {
            Generator::new(name, maslov, None, Some(sector.label.clone())).unwrap()
        };
        self.gens.push(g);
        idx
    }
}

struct SectorPlan {
    label: String,
    alexander: Option<i64>,
    maslov_levels: Vec<i64>,
}

/// A random complex satisfying every validation invariant by construction.
pub fn random_complex(rng: &mut impl Rng, opts: &RandomComplexOptions) -> EquivariantComplex {
    let sector_count = rng.gen_range(1..=opts.max_sectors.max(1));
    let sectors: Vec<SectorPlan> = (0..sector_count)
        .map(|k| {
            let base = rng.gen_range(-3..=3);
            let levels = if opts.single_maslov_per_sector {
                vec![base]
            } else {
                (base..base + rng.gen_range(1..=3)).collect()
            };
            if opts.knot_flavored {
                let a = k as i64 - sector_count as i64 / 2;
                SectorPlan {
                    label: a.to_string(),
                    alexander: Some(a),
                    maslov_levels: levels,
                }
            } else {
                SectorPlan {
                    label: format!("s{k}"),
                    alexander: None,
                    maslov_levels: levels,
                }
            }
        })
        .collect();

    let mut scratch = Scratch {
        gens: Vec::new(),
        d_entries: Vec::new(),
        s_entries: Vec::new(),
    };
    let mut target = rng.gen_range(1..=opts.max_generators.max(1));
    if opts.free_pairs_only {
        target = target.max(2);
    }
    let mut sector_used = vec![false; sectors.len()];
    while scratch.gens.len() < target {
        let si = rng.gen_range(0..sectors.len());
        let sector = &sectors[si];
        sector_used[si] = true;
        let level_idx = rng.gen_range(0..sector.maslov_levels.len());
        let m = sector.maslov_levels[level_idx];
        let headroom = target - scratch.gens.len();
        if opts.free_pairs_only && headroom < 2 {
            break;
        }
        let piece = if opts.free_pairs_only {
            1
        } else {
            rng.gen_range(0..5)
        };
        match piece {
            // fixed cycle
            0 if headroom >= 1 => {
                let x = scratch.push(sector, m, si);
                scratch.s_entries.push((x, x));
            }
            // free cycle pair
            1 if headroom >= 2 => {
                let x = scratch.push(sector, m, si);
                let y = scratch.push(sector, m, si);
                scratch.s_entries.push((y, x));
                scratch.s_entries.push((x, y));
            }
            // fixed arrow x → y
            2 if headroom >= 2 && !opts.single_maslov_per_sector => {
                let x = scratch.push(sector, m, si);
                let y = scratch.push(sector, m - 1, si);
                scratch.d_entries.push((y, x));
                scratch.s_entries.push((x, x));
                scratch.s_entries.push((y, y));
            }
            // free arrow pair: x1 → y1, x2 → y2 with S swapping both levels
            3 if headroom >= 4 && !opts.single_maslov_per_sector => {
                let x1 = scratch.push(sector, m, si);
                let x2 = scratch.push(sector, m, si);
                let y1 = scratch.push(sector, m - 1, si);
                let y2 = scratch.push(sector, m - 1, si);
                scratch.d_entries.push((y1, x1));
                scratch.d_entries.push((y2, x2));
                scratch.s_entries.push((x2, x1));
                scratch.s_entries.push((x1, x2));
                scratch.s_entries.push((y2, y1));
                scratch.s_entries.push((y1, y2));
            }
            // twist pair: x1, x2 → y with S swapping x1, x2 and fixing y
            4 if headroom >= 3 && !opts.single_maslov_per_sector => {
                let x1 = scratch.push(sector, m, si);
                let x2 = scratch.push(sector, m, si);
                let y = scratch.push(sector, m - 1, si);
                scratch.d_entries.push((y, x1));
                scratch.d_entries.push((y, x2));
                scratch.s_entries.push((x2, x1));
                scratch.s_entries.push((x1, x2));
                scratch.s_entries.push((y, y));
            }
            _ => {
                // fall back to a fixed cycle, which always fits
                let x = scratch.push(sector, m, si);
                scratch.s_entries.push((x, x));
            }
        }
    }

    let n = scratch.gens.len();
    let mut d = Gf2Matrix::from_entries(n, n, &scratch.d_entries);
    let mut s = Gf2Matrix::from_entries(n, n, &scratch.s_entries);

    // Random graded basis changes: a transvection e_i ← e_i + e_j within a
    // (sector, maslov) block is an involution E, so both operators become
    // E·A·E (rows: i += j; columns: j += i).
    for _ in 0..opts.shuffle_steps {
        let i = rng.gen_range(0..n);
        let js: Vec<usize> = (0..n)
            .filter(|&j| {
                j != i
                    && scratch.gens[j].sector == scratch.gens[i].sector
                    && scratch.gens[j].maslov == scratch.gens[i].maslov
            })
            .collect();
        if js.is_empty() {
            continue;
        }
        let j = js[rng.gen_range(0..js.len())];
        for m in [&mut d, &mut s] {
            let row_j = m.row(j).clone();
            let mut row_i = m.row(i).clone();
            row_i.xor_assign(&row_j);
            *m = conjugate_rows_cols(m, i, j, &row_i);
        }
    }

    let d_map = map_from_matrix(&scratch.gens, &d);
    let s_map = map_from_matrix(&scratch.gens, &s);
    EquivariantComplex::new(scratch.gens, &d_map, InvolutionSpec::Direct(s_map))
        .expect("random complex resolves")
}

/// Applies E·A·E for the transvection E = 1 + e_{ij}: row i gains row j,
/// then column j gains column i.
fn conjugate_rows_cols(a: &Gf2Matrix, i: usize, j: usize, new_row_i: &crate::gf2::Gf2Vector) -> Gf2Matrix {
    let n = a.rows();
    let mut rows: Vec<crate::gf2::Gf2Vector> = (0..n).map(|k| a.row(k).clone()).collect();
    rows[i] = new_row_i.clone();
    // column j += column i
    for row in rows.iter_mut() {
        if row.get(i) {
            row.flip(j);
        }
    }
    Gf2Matrix::from_rows(n, rows)
}

fn map_from_matrix(gens: &[Generator], m: &Gf2Matrix) -> LinearMap {
    let mut map = LinearMap::new();
    for j in 0..gens.len() {
        let targets: Vec<String> = m
            .column(j)
            .support()
            .into_iter()
            .map(|i| gens[i].name.clone())
            .collect();
        if !targets.is_empty() {
            map.set_column(gens[j].name.clone(), targets);
        }
    }
    map
}

/// Single-axiom violations applied to a valid complex. Each variant breaks
/// exactly one validation check; [`mutate`] returns `None` when the complex
/// is too small to express the violation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Send some generator across maslov gradings under S.
    SBreaksMaslov,
    /// Send some generator across sectors under S.
    SBreaksSector,
    /// Collapse S onto a single generator, so S² ≠ id.
    SNotInvolution,
    /// Add a d entry that does not drop maslov by one.
    DBreaksMaslov,
    /// Rebuild d as a three-step chain, so d² ≠ 0.
    DSquareNonzero,
}

pub const ALL_MUTATIONS: [Mutation; 5] = [
    Mutation::SBreaksMaslov,
    Mutation::SBreaksSector,
    Mutation::SNotInvolution,
    Mutation::DBreaksMaslov,
    Mutation::DSquareNonzero,
];

/// Applies the requested violation, returning the mutant complex.
pub fn mutate(
    c: &EquivariantComplex,
    mutation: Mutation,
) -> Option<EquivariantComplex> {
    let gens: Vec<Generator> = c.generators().to_vec();
    let d_map = c.matrix_as_map(c.d_matrix());
    let s_map = c.matrix_as_map(c.s_matrix());
    let rebuilt = |d: LinearMap, s: LinearMap| {
        EquivariantComplex::new(gens.clone(), &d, InvolutionSpec::Direct(s))
            .expect("mutant names resolve")
    };
    match mutation {
        Mutation::SBreaksMaslov => {
            let (i, j) = pick_pair(&gens, |a, b| a.sector == b.sector && a.maslov != b.maslov)?;
            let mut s = s_map;
            s.toggle(&gens[j].name, &gens[i].name);
            Some(rebuilt(d_map, s))
        }
        Mutation::SBreaksSector => {
            let (i, j) = pick_pair(&gens, |a, b| a.sector != b.sector)?;
            let mut s = s_map;
            s.toggle(&gens[j].name, &gens[i].name);
            Some(rebuilt(d_map, s))
        }
        Mutation::SNotInvolution => {
            let (i, j) =
                pick_pair(&gens, |a, b| a.sector == b.sector && a.maslov == b.maslov)?;
            let mut s = s_map;
            s.set_column(gens[i].name.clone(), [gens[j].name.clone()]);
            s.set_column(gens[j].name.clone(), [gens[j].name.clone()]);
            Some(rebuilt(d_map, s))
        }
        Mutation::DBreaksMaslov => {
            let (i, j) = pick_pair(&gens, |a, b| {
                a.sector == b.sector && a.maslov != b.maslov - 1 && a.maslov != b.maslov + 1
            })
            .or_else(|| pick_pair(&gens, |a, b| a.sector == b.sector && a.maslov == b.maslov))?;
            let mut d = d_map;
            d.toggle(&gens[j].name, &gens[i].name);
            Some(rebuilt(d, s_map))
        }
        Mutation::DSquareNonzero => {
            // x → y → z down a maslov chain inside one sector, with S = id
            // so only the d² check can fail.
            let (x, y, z) = pick_chain(&gens)?;
            let mut d = LinearMap::new();
            d.set_column(gens[x].name.clone(), [gens[y].name.clone()]);
            d.set_column(gens[y].name.clone(), [gens[z].name.clone()]);
            let mut s = LinearMap::new();
            for g in &gens {
                s.set_column(g.name.clone(), [g.name.clone()]);
            }
            Some(rebuilt(d, s))
        }
    }
}

fn pick_pair(
    gens: &[Generator],
    ok: impl Fn(&Generator, &Generator) -> bool,
) -> Option<(usize, usize)> {
    for i in 0..gens.len() {
        for j in 0..gens.len() {
            if i != j && ok(&gens[i], &gens[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

fn pick_chain(gens: &[Generator]) -> Option<(usize, usize, usize)> {
    for x in 0..gens.len() {
        for y in 0..gens.len() {
            for z in 0..gens.len() {
                if gens[x].sector == gens[y].sector
                    && gens[y].sector == gens[z].sector
                    && gens[y].maslov == gens[x].maslov - 1
                    && gens[z].maslov == gens[y].maslov - 1
                {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let c = random_complex(&mut rng, &RandomComplexOptions::default());
            let report = c.validate();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn knot_flavored_complexes_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let opts = RandomComplexOptions {
            knot_flavored: true,
            ..RandomComplexOptions::default()
        };
        for _ in 0..100 {
            let c = random_complex(&mut rng, &opts);
            assert!(c.validate().passed());
            assert!(c.generators().iter().all(|g| g.alexander.is_some()));
        }
    }

    #[test]
    fn single_maslov_option_flattens_sectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let opts = RandomComplexOptions {
            single_maslov_per_sector: true,
            ..RandomComplexOptions::default()
        };
        for _ in 0..50 {
            let c = random_complex(&mut rng, &opts);
            assert!(c.validate().passed());
            for sector in c.sectors() {
                let maslovs: std::collections::BTreeSet<i64> = c
                    .sector_indices(&sector)
                    .into_iter()
                    .map(|i| c.generator(i).maslov)
                    .collect();
                assert_eq!(maslovs.len(), 1);
            }
            assert!(c.d_matrix().is_zero());
        }
    }

    #[test]
    fn free_pairs_option_is_fixed_point_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let opts = RandomComplexOptions {
            free_pairs_only: true,
            shuffle_steps: 0,
            ..RandomComplexOptions::default()
        };
        for _ in 0..50 {
            let c = random_complex(&mut rng, &opts);
            assert!(c.validate().passed());
            assert!(c.d_matrix().is_zero());
            for j in 0..c.len() {
                assert!(!c.s_matrix().get(j, j), "S fixes basis vector {j}");
            }
        }
    }

    #[test]
    fn mutants_fail_validation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut applied = [0usize; 5];
        for _ in 0..150 {
            let c = random_complex(&mut rng, &RandomComplexOptions::default());
            for (k, mutation) in ALL_MUTATIONS.iter().enumerate() {
                if let Some(mutant) = mutate(&c, *mutation) {
                    applied[k] += 1;
                    let report = mutant.validate();
                    assert!(!report.passed(), "{mutation:?} slipped through:\n{report}");
                }
            }
        }
        assert!(applied.iter().all(|&n| n > 0), "coverage: {applied:?}");
    }
}
