//! Knot Floer example library.
//!
//! Builtin complexes with their involutive/equivariant maps, constructors
//! for L-space-knot staircases and thin knots, and equivariant connected
//! sums. Every complex here is knot-flavored: sectors are decimal Alexander
//! gradings and the involution is supplied as a composition `S = ι ∘ τ` of
//! the conjugation map with the strong-inversion map.
//!
//! The factor maps are stored as provenance and may move gradings (the
//! conjugation map reverses the Alexander grading); only their composition
//! is validated and enters the computation.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::complex::{
    swap_involution, tensor_name, tensor_parts, BuildError, EquivariantComplex, Generator,
    InvolutionSpec, LinearMap, ValidatedComplex, ValidationReport,
};
use crate::gf2::Gf2Matrix;

#[derive(Debug, Error)]
pub enum HfkError {
    #[error("unknown builtin {name:?}; available: {available}")]
    UnknownBuiltin { name: String, available: String },
    #[error("not an L-space-knot staircase: {0}")]
    InvalidStaircase(String),
    #[error("invalid iota correction: {0}")]
    Correction(String),
    #[error("every generator of a knot complex needs an alexander grading; {0:?} has none")]
    NotKnotFlavored(String),
    #[error("{0}")]
    Build(#[from] BuildError),
    #[error("assembled involution failed validation:\n{0}")]
    InvalidInvolution(ValidationReport),
}

/// A validated complex together with knot metadata. Sectors are decimal
/// Alexander gradings; the direction note records the half-axis and
/// orientation convention behind the stored maps, as bookkeeping only.
#[derive(Clone, Debug)]
pub struct KnotComplex {
    pub complex: ValidatedComplex,
    pub knot_name: String,
    pub inversion_name: String,
    pub direction_note: String,
}

impl KnotComplex {
    pub fn new(
        complex: ValidatedComplex,
        knot_name: impl Into<String>,
        inversion_name: impl Into<String>,
        direction_note: impl Into<String>,
    ) -> Result<Self, HfkError> {
        if let Some(g) = complex.generators().iter().find(|g| g.alexander.is_none()) {
            return Err(HfkError::NotKnotFlavored(g.name.clone()));
        }
        Ok(Self {
            complex,
            knot_name: knot_name.into(),
            inversion_name: inversion_name.into(),
            direction_note: direction_note.into(),
        })
    }
}

/// Which strong inversion of the figure-eight knot to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inversion {
    Tau,
    Sigma,
}

impl fmt::Display for Inversion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inversion::Tau => write!(f, "tau"),
            Inversion::Sigma => write!(f, "sigma"),
        }
    }
}

/// The figure-eight knot with one of its two strong inversions.
///
/// Five generators `b, a, x, e, c` at Alexander gradings `1, 0, 0, 0, -1`,
/// maslov equal to alexander (thin, signature zero), trivial differential.
/// The conjugation map is `ι(b)=c, ι(c)=b, ι(a)=a+x, ι(x)=x+e, ι(e)=e`;
/// the inversions are `τ(a)=a+x` and `σ(x)=x+e` (both swapping `b` and `c`
/// and fixing the rest). The involution is the composition `ι ∘ τ` or
/// `ι ∘ σ`.
pub fn figure_eight(inversion: Inversion) -> KnotComplex {
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
    let mut inv = LinearMap::new();
    inv.set_column("b", ["c"]);
    inv.set_column("c", ["b"]);
    inv.set_column("e", ["e"]);
    match inversion {
        Inversion::Tau => {
            inv.set_column("a", ["a", "x"]);
            inv.set_column("x", ["x"]);
        }
        Inversion::Sigma => {
            inv.set_column("a", ["a"]);
            inv.set_column("x", ["x", "e"]);
        }
    }
    let complex = EquivariantComplex::new(
        gens,
        &LinearMap::new(),
        InvolutionSpec::Composed { iota, tau: inv },
    )
    .expect("figure-eight names resolve")
    .into_validated()
    .expect("figure-eight involution is valid");
    KnotComplex {
        complex,
        knot_name: "4_1".to_string(),
        inversion_name: inversion.to_string(),
        direction_note: "either direction gives equivalent involutive data for this knot; \
                         recorded for bookkeeping only"
            .to_string(),
    }
}

/// Specification of an L-space-knot staircase complex.
#[derive(Clone, Debug)]
pub enum StaircaseSpec {
    /// The torus knot `T(p, q)` for coprime `p, q ≥ 2`.
    Torus(u32, u32),
    /// An explicit symmetric Alexander polynomial, coefficients listed by
    /// descending exponent (odd length, entries in `{-1, 0, 1}` alternating
    /// in sign).
    Alexander(Vec<i64>),
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Multiplies two polynomials in ascending-coefficient form.
fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact polynomial long division in ascending-coefficient form.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i64> = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![0; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// The symmetrized Alexander polynomial of `T(p, q)`, coefficients by
/// descending exponent from `t^g` down to `t^{-g}` with `g = (p-1)(q-1)/2`:
/// the expansion of `(t^{pq}-1)(t-1) / ((t^p-1)(t^q-1))`.
pub fn torus_alexander_coefficients(p: u32, q: u32) -> Result<Vec<i64>, HfkError> {
    if p < 2 || q < 2 || gcd(p, q) != 1 {
        return Err(HfkError::InvalidStaircase(format!(
            "torus parameters must be coprime and at least 2, got ({p}, {q})"
        )));
    }
    let monomial_minus_one = |n: u32| -> Vec<i64> {
        let mut v = vec![0; n as usize + 1];
        v[0] = -1;
        v[n as usize] = 1;
        v
    };
    let num = poly_mul(&monomial_minus_one(p * q), &[-1, 1]);
    let step = poly_div_exact(&num, &monomial_minus_one(p));
    let quot = poly_div_exact(&step, &monomial_minus_one(q));
    // quot has degree (p-1)(q-1) = 2g in ascending order; flip to descending.
    let coeffs: Vec<i64> = quot.into_iter().rev().collect();
    debug_assert_eq!(coeffs.len() as u32, (p - 1) * (q - 1) + 1);
    Ok(coeffs)
}

/// Alexander exponents of the nonzero coefficients, descending, after
/// checking the L-space-knot shape: entries in {-1, 0, 1}, signs
/// alternating and starting and ending at +1, palindromic coefficients.
fn staircase_exponents(coeffs: &[i64]) -> Result<Vec<i64>, HfkError> {
    if coeffs.len() % 2 == 0 || coeffs.is_empty() {
        return Err(HfkError::InvalidStaircase(format!(
            "coefficient list must have odd length, got {}",
            coeffs.len()
        )));
    }
    let reversed: Vec<i64> = coeffs.iter().rev().copied().collect();
    if reversed != coeffs {
        return Err(HfkError::InvalidStaircase(
            "coefficients must be symmetric under t ↦ 1/t".to_string(),
        ));
    }
    let genus = (coeffs.len() as i64 - 1) / 2;
    let mut exponents = Vec::new();
    let mut expected_sign = 1;
    for (i, &c) in coeffs.iter().enumerate() {
        match c {
            0 => continue,
            1 | -1 => {
                if c != expected_sign {
                    return Err(HfkError::InvalidStaircase(format!(
                        "nonzero coefficients must alternate in sign starting at +1, \
                         got {c} at exponent {}",
                        genus - i as i64
                    )));
                }
                exponents.push(genus - i as i64);
                expected_sign = -expected_sign;
            }
            other => {
                return Err(HfkError::InvalidStaircase(format!(
                    "coefficients must lie in {{-1, 0, 1}}, got {other}"
                )));
            }
        }
    }
    if exponents.len() % 2 == 0 || *exponents.first().unwrap() != genus {
        return Err(HfkError::InvalidStaircase(
            "signs must start and end at +1 with the leading coefficient at the genus"
                .to_string(),
        ));
    }
    Ok(exponents)
}

/// Maslov gradings of the staircase generators: the top generator sits at
/// zero and the staircase recursion descends by `2(a_i - a_{i+1}) - 1` on
/// even steps and by `1` on odd steps. The result satisfies the symmetry
/// `M(-a) = M(a) - 2a` and reproduces the Alexander polynomial as
/// `Σ (-1)^{M_i} t^{a_i}`.
fn staircase_maslovs(exponents: &[i64]) -> Vec<i64> {
    let mut maslovs = vec![0];
    for i in 0..exponents.len() - 1 {
        let prev = maslovs[i];
        let next = if i % 2 == 0 {
            prev - 2 * (exponents[i] - exponents[i + 1]) + 1
        } else {
            prev - 1
        };
        maslovs.push(next);
    }
    maslovs
}

fn staircase_generator_name(a: i64) -> String {
    match a.cmp(&0) {
        std::cmp::Ordering::Greater => format!("x{a}1"),
        std::cmp::Ordering::Equal => "x0".to_string(),
        std::cmp::Ordering::Less => format!("x{}2", -a),
    }
}

/// The staircase complex of an L-space knot: one generator per nonzero
/// Alexander polynomial coefficient, trivial differential, and
/// `ι = τ` the unique grading-compatible involution fixing the middle
/// generator and swapping `x_{j1} ↔ x_{j2}`, so `S = ι ∘ τ` is the
/// identity.
pub fn staircase(spec: &StaircaseSpec) -> Result<KnotComplex, HfkError> {
    let (coeffs, knot_name) = match spec {
        StaircaseSpec::Torus(p, q) => (
            torus_alexander_coefficients(*p, *q)?,
            format!("T({p},{q})"),
        ),
        StaircaseSpec::Alexander(c) => (c.clone(), "staircase".to_string()),
    };
    let exponents = staircase_exponents(&coeffs)?;
    let maslovs = staircase_maslovs(&exponents);
    let gens: Vec<Generator> = exponents
        .iter()
        .zip(&maslovs)
        .map(|(&a, &m)| Generator::knot(staircase_generator_name(a), m, a))
        .collect();
    let mut flip = LinearMap::new();
    for &a in &exponents {
        flip.set_column(staircase_generator_name(a), [staircase_generator_name(-a)]);
    }
    let complex = EquivariantComplex::new(
        gens,
        &LinearMap::new(),
        InvolutionSpec::Composed {
            iota: flip.clone(),
            tau: flip,
        },
    )?
    .into_validated()
    .map_err(HfkError::InvalidInvolution)?;
    KnotComplex::new(
        complex,
        knot_name,
        "staircase flip",
        "unique strong inversion; gradings fixed by the staircase convention",
    )
}

/// The ι correction of the `T(3,4) # T(3,4)` connected sum: the product
/// conjugation map differs from the factor swap by
/// `x22⊗x21 ↦ x31⊗x32` in Alexander grading zero.
pub fn t34_sum_iota_correction() -> LinearMap {
    let mut map = LinearMap::new();
    map.set_column(tensor_name("x22", "x21"), [tensor_name("x31", "x32")]);
    map
}

/// Equivariant self connected sum: the tensor of `k` with itself with
/// `τ_sum` the swap form and `ι_sum` the swap form plus an optional
/// correction. The correction must be supported in a single sector and
/// square to zero, and the assembled `S = ι_sum ∘ τ_sum` must pass
/// validation.
pub fn equivariant_self_sum(
    k: &KnotComplex,
    iota_correction: Option<&LinearMap>,
) -> Result<KnotComplex, HfkError> {
    let c = &k.complex;
    let (gens, d) = tensor_parts(c, c);
    let tau = swap_involution(c, c);
    let iota = match iota_correction {
        Some(correction) => {
            check_correction(&gens, correction)?;
            tau.add(correction)
        }
        None => tau.clone(),
    };
    let complex = EquivariantComplex::new(gens, &d, InvolutionSpec::Composed { iota, tau })?
        .into_validated()
        .map_err(HfkError::InvalidInvolution)?;
    KnotComplex::new(
        complex,
        format!("{} # {}", k.knot_name, k.knot_name),
        match iota_correction {
            Some(_) => "swap-form + iota correction".to_string(),
            None => "swap-form".to_string(),
        },
        "equivariant sum; direction metadata only",
    )
}

fn check_correction(gens: &[Generator], correction: &LinearMap) -> Result<(), HfkError> {
    let by_name: BTreeMap<&str, &Generator> =
        gens.iter().map(|g| (g.name.as_str(), g)).collect();
    let mut sector: Option<&str> = None;
    for name in correction.mentioned_names() {
        let g = by_name.get(name).ok_or_else(|| {
            HfkError::Correction(format!("{name:?} is not a generator of the sum"))
        })?;
        match sector {
            None => sector = Some(&g.sector),
            Some(s) if s != g.sector => {
                return Err(HfkError::Correction(format!(
                    "support spans sectors {s:?} and {:?} ({name:?})",
                    g.sector
                )));
            }
            Some(_) => {}
        }
    }
    // Square-zero check on the full generator set.
    let index: BTreeMap<&str, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.name.as_str(), i))
        .collect();
    let mut m = Gf2Matrix::zero(gens.len(), gens.len());
    for (src, targets) in correction.columns() {
        for t in targets {
            m.set(index[t.as_str()], index[src.as_str()]);
        }
    }
    if !m.multiply(&m).is_zero() {
        return Err(HfkError::Correction("correction does not square to zero".to_string()));
    }
    Ok(())
}

/// A general thin-knot complex: dimensions from the absolute values of the
/// Alexander polynomial coefficients, maslov = alexander + signature/2,
/// trivial differential. The factor maps cannot be derived from this data
/// and must be supplied by the caller; generator `k` at Alexander grading
/// `a` is named `v{a}_{k}`.
#[derive(Clone, Debug)]
pub struct ThinKnotSpec {
    pub name: String,
    /// Coefficients by descending exponent, symmetric.
    pub coefficients: Vec<i64>,
    /// Knot signature (even).
    pub signature: i64,
}

pub fn thin_knot(
    spec: &ThinKnotSpec,
    iota: LinearMap,
    tau: LinearMap,
) -> Result<KnotComplex, HfkError> {
    if spec.signature % 2 != 0 {
        return Err(HfkError::InvalidStaircase(format!(
            "signature must be even, got {}",
            spec.signature
        )));
    }
    let genus = (spec.coefficients.len() as i64 - 1) / 2;
    let mut gens = Vec::new();
    for (i, &c) in spec.coefficients.iter().enumerate() {
        let a = genus - i as i64;
        for k in 0..c.unsigned_abs() {
            gens.push(Generator::knot(
                format!("v{a}_{k}"),
                a + spec.signature / 2,
                a,
            ));
        }
    }
    let complex = EquivariantComplex::new(
        gens,
        &LinearMap::new(),
        InvolutionSpec::Composed { iota, tau },
    )?
    .into_validated()
    .map_err(HfkError::InvalidInvolution)?;
    KnotComplex::new(
        complex,
        spec.name.clone(),
        "user-supplied",
        "direction encoded in the supplied maps",
    )
}

/// Names accepted by [`builtin`], sorted.
pub fn builtin_names() -> &'static [&'static str] {
    &["fig8-sigma", "fig8-tau", "t34", "t34-sum-t34"]
}

/// Registry dispatch for the builtin complexes. Outputs are bit-identical
/// across runs.
pub fn builtin(name: &str) -> Result<KnotComplex, HfkError> {
    match name {
        "fig8-tau" => Ok(figure_eight(Inversion::Tau)),
        "fig8-sigma" => Ok(figure_eight(Inversion::Sigma)),
        "t34" => staircase(&StaircaseSpec::Torus(3, 4)),
        "t34-sum-t34" => {
            let t34 = staircase(&StaircaseSpec::Torus(3, 4))?;
            equivariant_self_sum(&t34, Some(&t34_sum_iota_correction()))
        }
        other => Err(HfkError::UnknownBuiltin {
            name: other.to_string(),
            available: builtin_names().join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specseq::{compute_pages, lspace_collapse_check, thin_collapse_check};

    #[test]
    fn torus_coefficients_frozen() {
        // (t^6-1)(t-1)/((t^2-1)(t^3-1)) = t - 1 + 1/t, symmetrized by hand.
        assert_eq!(torus_alexander_coefficients(2, 3).unwrap(), vec![1, -1, 1]);
        // T(3,4): hand expansion gives t^3 - t^2 + 1 - t^-2 + t^-3.
        assert_eq!(
            torus_alexander_coefficients(3, 4).unwrap(),
            vec![1, -1, 0, 1, 0, -1, 1]
        );
    }

    #[test]
    fn torus_parameters_checked() {
        assert!(torus_alexander_coefficients(2, 4).is_err());
        assert!(torus_alexander_coefficients(1, 5).is_err());
    }

    #[test]
    fn t34_staircase_table() {
        let k = staircase(&StaircaseSpec::Torus(3, 4)).unwrap();
        let table: Vec<(String, i64, i64)> = k
            .complex
            .generators()
            .iter()
            .map(|g| (g.name.clone(), g.alexander.unwrap(), g.maslov))
            .collect();
        assert_eq!(
            table,
            vec![
                ("x31".to_string(), 3, 0),
                ("x21".to_string(), 2, -1),
                ("x0".to_string(), 0, -2),
                ("x22".to_string(), -2, -5),
                ("x32".to_string(), -3, -6),
            ]
        );
        assert_eq!(*k.complex.s_matrix(), Gf2Matrix::identity(5));
    }

    #[test]
    fn trefoil_staircase_table() {
        let k = staircase(&StaircaseSpec::Torus(2, 3)).unwrap();
        let table: Vec<(i64, i64)> = k
            .complex
            .generators()
            .iter()
            .map(|g| (g.alexander.unwrap(), g.maslov))
            .collect();
        assert_eq!(table, vec![(1, 0), (0, -1), (-1, -2)]);
    }

    #[test]
    fn staircase_grading_identities() {
        // Two checks across a range of torus knots: the Euler-characteristic
        // identity Σ (-1)^M t^A = Δ(t) and the symmetry M(-a) = M(a) - 2a.
        for (p, q) in [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (4, 5), (3, 7)] {
            let coeffs = torus_alexander_coefficients(p, q).unwrap();
            let exponents = staircase_exponents(&coeffs).unwrap();
            let maslovs = staircase_maslovs(&exponents);
            let genus = (coeffs.len() as i64 - 1) / 2;
            for (&a, &m) in exponents.iter().zip(&maslovs) {
                let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(
                    coeffs[(genus - a) as usize],
                    sign,
                    "Euler mismatch at T({p},{q}), a={a}"
                );
                let j = exponents.iter().position(|&b| b == -a).unwrap();
                assert_eq!(maslovs[j], m - 2 * a, "symmetry mismatch at T({p},{q}), a={a}");
            }
            assert_eq!(exponents[0], genus);
        }
    }

    #[test]
    fn explicit_polynomial_staircase() {
        let k = staircase(&StaircaseSpec::Alexander(vec![1, -1, 1])).unwrap();
        assert_eq!(k.complex.len(), 3);
    }

    #[test]
    fn non_lspace_polynomials_rejected() {
        for bad in [
            vec![1, -2, 1],       // coefficient outside {-1,0,1}
            vec![1, 1, 1],        // signs do not alternate
            vec![-1, 1, -1],      // leading sign wrong
            vec![1, -1],          // even length
            vec![1, -1, 0, 1],    // even length, asymmetric
            vec![0, 1, 0],        // leading coefficient not at the genus
        ] {
            assert!(
                staircase(&StaircaseSpec::Alexander(bad.clone())).is_err(),
                "accepted {bad:?}"
            );
        }
    }

    #[test]
    fn staircase_collapses_at_e1() {
        let k = staircase(&StaircaseSpec::Torus(3, 4)).unwrap();
        let verdict = lspace_collapse_check(&k.complex).unwrap();
        assert_eq!(verdict.collapse_page, 1);
        let dims: Vec<(String, usize)> = verdict.sector_dims;
        assert_eq!(
            dims,
            ["3", "2", "0", "-2", "-3"]
                .iter()
                .map(|s| (s.to_string(), 1))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn fig8_involutions_match_printed_maps() {
        // ι∘τ fixes b, c, a+x and interchanges x ↔ x+e; composing the
        // printed maps gives S(a) = a+e, S(x) = x+e on the basis.
        let k = figure_eight(Inversion::Tau);
        let c = &k.complex;
        let s = c.matrix_as_map(c.s_matrix());
        assert_eq!(s.column("b").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["b"]);
        assert_eq!(s.column("c").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["c"]);
        assert_eq!(s.column("e").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["e"]);
        assert_eq!(s.column("a").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["a", "e"]);
        assert_eq!(s.column("x").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["e", "x"]);

        // ι∘σ fixes b, c, x and interchanges a ↔ a+x.
        let k = figure_eight(Inversion::Sigma);
        let c = &k.complex;
        let s = c.matrix_as_map(c.s_matrix());
        assert_eq!(s.column("x").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["x"]);
        assert_eq!(s.column("a").unwrap().iter().map(String::as_str).collect::<Vec<_>>(), ["a", "x"]);
    }

    #[test]
    fn fig8_maslov_gradings() {
        let k = figure_eight(Inversion::Tau);
        let got: Vec<(String, i64)> = k
            .complex
            .generators()
            .iter()
            .map(|g| (g.name.clone(), g.maslov))
            .collect();
        assert_eq!(
            got,
            vec![
                ("b".to_string(), 1),
                ("a".to_string(), 0),
                ("e".to_string(), 0),
                ("x".to_string(), 0),
                ("c".to_string(), -1),
            ]
        );
    }

    #[test]
    fn fig8_is_thin() {
        for inv in [Inversion::Tau, Inversion::Sigma] {
            let k = figure_eight(inv);
            let verdict = thin_collapse_check(&k.complex).unwrap();
            assert!(verdict.collapse_page <= 2);
            assert!(verdict.sector_dims.iter().all(|&(_, d)| d == 1));
        }
    }

    #[test]
    fn t34_sum_with_correction_matches_composed_map() {
        let sum = builtin("t34-sum-t34").unwrap();
        let c = &sum.complex;
        let s = c.matrix_as_map(c.s_matrix());
        // S fixes x0⊗x0, x22⊗x21, x32⊗x31 and sends
        // x21⊗x22 ↦ x21⊗x22 + x31⊗x32.
        for fixed in ["x0*x0", "x22*x21", "x32*x31", "x31*x32"] {
            assert_eq!(
                s.column(fixed).unwrap().iter().map(String::as_str).collect::<Vec<_>>(),
                [fixed],
                "{fixed} should be fixed"
            );
        }
        assert_eq!(
            s.column("x21*x22").unwrap().iter().map(String::as_str).collect::<Vec<_>>(),
            ["x21*x22", "x31*x32"]
        );
    }

    #[test]
    fn t34_sum_sector_zero_count() {
        let sum = builtin("t34-sum-t34").unwrap();
        assert_eq!(sum.complex.len(), 25);
        assert_eq!(sum.complex.sector_indices("0").len(), 5);
        let sectors = sum.complex.sectors();
        assert_eq!(sectors.len(), 13);
        assert_eq!(sectors.first().map(String::as_str), Some("6"));
        assert_eq!(sectors.last().map(String::as_str), Some("-6"));
    }

    #[test]
    fn zero_correction_sum_has_identity_involution() {
        // ι = τ = swap form composes to S(g⊗h) = S²g ⊗ S²h = g⊗h.
        let t34 = staircase(&StaircaseSpec::Torus(3, 4)).unwrap();
        let sum = equivariant_self_sum(&t34, None).unwrap();
        assert_eq!(*sum.complex.s_matrix(), Gf2Matrix::identity(25));
    }

    #[test]
    fn correction_must_be_single_sector() {
        let t34 = staircase(&StaircaseSpec::Torus(3, 4)).unwrap();
        let mut bad = LinearMap::new();
        bad.set_column(tensor_name("x31", "x31"), [tensor_name("x31", "x32")]);
        let err = equivariant_self_sum(&t34, Some(&bad)).unwrap_err();
        assert!(matches!(err, HfkError::Correction(_)));
    }

    #[test]
    fn correction_must_square_to_zero() {
        let t34 = staircase(&StaircaseSpec::Torus(3, 4)).unwrap();
        let mut bad = LinearMap::new();
        // x0⊗x0 ↦ x22⊗x21 ↦ x0⊗x0 squares to the identity, not zero.
        bad.set_column(tensor_name("x0", "x0"), [tensor_name("x22", "x21")]);
        bad.set_column(tensor_name("x22", "x21"), [tensor_name("x0", "x0")]);
        let err = equivariant_self_sum(&t34, Some(&bad)).unwrap_err();
        assert!(matches!(err, HfkError::Correction(_)));
    }

    #[test]
    fn builtin_registry() {
        for name in builtin_names() {
            let k = builtin(name).unwrap();
            assert!(k.complex.validate().passed(), "{name} must validate");
        }
        let err = builtin("granny").unwrap_err();
        match err {
            HfkError::UnknownBuiltin { available, .. } => {
                assert!(available.contains("fig8-tau"));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn builtin_e1_dims_alexander_symmetric() {
        for name in builtin_names() {
            let k = builtin(name).unwrap();
            let report = compute_pages(&k.complex, None).unwrap();
            let e1 = report.e1_dims();
            for sd in &e1 {
                let a: i64 = sd.sector.parse().unwrap();
                let mirror = e1
                    .iter()
                    .find(|other| other.sector == (-a).to_string())
                    .unwrap_or_else(|| panic!("{name}: no sector -{a}"));
                assert_eq!(sd.total(), mirror.total(), "{name}: asymmetry at {a}");
            }
        }
    }

    #[test]
    fn thin_knot_constructor_requires_valid_maps() {
        // Trefoil-shaped thin knot with identity maps.
        let spec = ThinKnotSpec {
            name: "3_1".to_string(),
            coefficients: vec![1, -1, 1],
            signature: -2,
        };
        let mut id = LinearMap::new();
        for a in [1i64, 0, -1] {
            id.set_column(format!("v{a}_0"), [format!("v{a}_0")]);
        }
        let k = thin_knot(&spec, id.clone(), id).unwrap();
        let table: Vec<(i64, i64)> = k
            .complex
            .generators()
            .iter()
            .map(|g| (g.alexander.unwrap(), g.maslov))
            .collect();
        assert_eq!(table, vec![(1, 0), (0, -1), (-1, -2)]);
    }
}
