//! Localization spectral sequences for involutive chain complexes over GF(2).
//!
//! Given a finite chain complex `(C, d)` over the two-element field together
//! with a chain involution `S` (so `S² = 1` and `Sd = dS`), the double complex
//! `(C ⊗ F[θ, θ⁻¹], d + (1+S)θ)` carries a spectral sequence starting at the
//! homology of `(C, d)` and converging to the Tate homology `H(C, d + 1 + S)`.
//! This crate computes every page of that spectral sequence, detects the
//! collapse page, and cross-checks the limit against an independently computed
//! Tate-homology oracle.
//!
//! The crate is organized as follows:
//!
//! - [`gf2`]: bit-packed exact linear algebra over the two-element field —
//!   ranks, kernels, images, solves, and subquotient maps.
//! - [`complex`]: the data model for graded complexes with an involution,
//!   validation of the chain-level axioms, sector splitting, homology, and
//!   tensor products.
//! - [`specseq`]: the page-by-page spectral sequence engine, the Tate oracle,
//!   and the Smith-inequality / collapse checks.
//! - [`hfk`]: a knot Floer example library — thin knots, L-space-knot
//!   staircases, and equivariant self connected sums.
//! - [`format`]: the canonical on-disk complex and report formats.
//! - [`cli`]: the command implementations behind the `tatess` binary.
//! - [`random`]: seeded generators of random valid complexes, used by the
//!   property and acceptance suites.
//!
//! All computations are exact and deterministic: identical inputs produce
//! bit-identical outputs across runs.

pub mod cli;
pub mod complex;
pub mod format;
pub mod gf2;
pub mod hfk;
pub mod random;
pub mod specseq;

pub use complex::{EquivariantComplex, Generator, LinearMap, ValidatedComplex, ValidationReport};
pub use gf2::{Gf2Matrix, Gf2Vector, Subspace};
pub use hfk::KnotComplex;
pub use specseq::{compute_pages, tate_oracle, SsReport};
