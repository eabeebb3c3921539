//! Command implementations behind the `tatess` binary.
//!
//! Each command takes explicit output writers and returns its exit code, so
//! the integration tests drive the same code paths as the binary. Exit
//! codes are a stable contract: 0 success, 1 domain or validation failure,
//! 2 input or parse failure.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::complex::ValidatedComplex;
use crate::format::{ComplexFile, CorrectionFile, ReportFile};
use crate::hfk::{self, KnotComplex};
use crate::specseq::{compute_pages, tate_oracle, SsReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Options of the `ss` command.
#[derive(Clone, Debug, Default)]
pub struct SsOptions {
    pub max_page: Option<u32>,
    pub json: bool,
    pub sector: Option<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn load_file(path: &Path) -> Result<ComplexFile, Failure> {
    let text = read_file(path)?;
    ComplexFile::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_validated(
    path: &Path,
) -> Result<(ValidatedComplex, BTreeMap<String, String>), Failure> {
    let file = load_file(path)?;
    let (complex, metadata) = file
        .to_complex()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let validated = complex.into_validated().map_err(|report| {
        Failure::domain(format!(
            "{} failed validation:\n{report}",
            path.display()
        ))
    })?;
    Ok((validated, metadata))
}

fn load_knot(path: &Path) -> Result<KnotComplex, Failure> {
    let (validated, metadata) = load_validated(path)?;
    let get = |key: &str| metadata.get(key).cloned().unwrap_or_else(|| "unknown".to_string());
    KnotComplex::new(validated, get("knot"), get("inversion"), get("direction"))
        .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn emit(rendered: &str, target: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match target {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            out.write_all(rendered.as_bytes()).expect("stdout writable");
            Ok(())
        }
    }
}

fn fail(f: Failure, err: &mut dyn Write) -> i32 {
    writeln!(err, "error: {}", f.message).expect("stderr writable");
    f.code
}

/// `validate <path>`: prints every check with its outcome; exit 0 iff all
/// pass.
pub fn cmd_validate(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let file = match load_file(path) {
        Ok(f) => f,
        Err(f) => return fail(f, err),
    };
    let complex = match file.to_complex() {
        Ok((c, _)) => c,
        Err(e) => return fail(Failure::input(format!("{}: {e}", path.display())), err),
    };
    let report = complex.validate();
    write!(out, "{report}").expect("stdout writable");
    if report.passed() {
        writeln!(out, "ok: {} generators validate", complex.len()).expect("stdout writable");
        EXIT_OK
    } else {
        EXIT_DOMAIN
    }
}

/// `ss <path>`: runs the spectral sequence and prints the sector table, or
/// the full machine-readable report with `--json`.
pub fn cmd_ss(path: &Path, opts: &SsOptions, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (validated, _) = match load_validated(path) {
        Ok(v) => v,
        Err(f) => return fail(f, err),
    };
    let complex = match &opts.sector {
        None => validated,
        Some(label) => {
            let parts = crate::complex::split_by_sector(&validated);
            match parts
                .into_iter()
                .find(|p| p.sectors().first().map(String::as_str) == Some(label.as_str()))
            {
                Some(p) => p,
                None => {
                    let available = validated.sectors().join(", ");
                    return fail(
                        Failure::domain(format!(
                            "unknown sector {label:?}; available: {available}"
                        )),
                        err,
                    );
                }
            }
        }
    };
    let report = match compute_pages(&complex, opts.max_page) {
        Ok(r) => r,
        Err(e) => return fail(Failure::domain(e.to_string()), err),
    };
    if opts.json {
        out.write_all(ReportFile::from_report(&report).render().as_bytes())
            .expect("stdout writable");
    } else {
        render_table(&report, out);
    }
    EXIT_OK
}

fn render_table(report: &SsReport, out: &mut dyn Write) {
    let e1 = report.e1_dims();
    let header = ["sector", "E1", "collapse", "E_inf", "oracle", "margin"];
    let mut rows: Vec<[String; 6]> = Vec::new();
    for sd in &report.e_infinity {
        let e1_total = e1
            .iter()
            .find(|d| d.sector == sd.sector)
            .map_or(0, |d| d.total());
        let smith = report
            .smith
            .entries
            .iter()
            .find(|e| e.sector == sd.sector);
        rows.push([
            sd.sector.clone(),
            e1_total.to_string(),
            report.sector_collapse_page(&sd.sector).to_string(),
            sd.total().to_string(),
            report
                .oracle
                .dim(&sd.sector)
                .map_or_else(|| "-".to_string(), |d| d.to_string()),
            smith.map_or_else(|| "-".to_string(), |e| e.margin().to_string()),
        ]);
    }
    let mut widths = [0usize; 6];
    for (k, h) in header.iter().enumerate() {
        widths[k] = h.len();
    }
    for row in &rows {
        for (k, cell) in row.iter().enumerate() {
            widths[k] = widths[k].max(cell.len());
        }
    }
    let total_width: usize = widths.iter().sum::<usize>() + 2 * (header.len() - 1);
    if total_width <= 100 {
        let line = |cells: &[String; 6], out: &mut dyn Write| {
            let rendered: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(k, c)| format!("{c:>width$}", width = widths[k]))
                .collect();
            writeln!(out, "{}", rendered.join("  ")).expect("stdout writable");
        };
        let header_cells: [String; 6] = header.map(str::to_string);
        line(&header_cells, out);
        for row in &rows {
            line(row, out);
        }
    } else {
        // Overflowing tables switch to one stanza per sector.
        for row in &rows {
            writeln!(out, "sector {}", row[0]).expect("stdout writable");
            for (k, label) in header.iter().enumerate().skip(1) {
                writeln!(out, "  {label}: {}", row[k]).expect("stdout writable");
            }
        }
    }
    writeln!(out, "collapse page: {}", report.collapse_page).expect("stdout writable");
    writeln!(
        out,
        "oracle consistent: {}",
        if report.oracle_consistent { "yes" } else { "no" }
    )
    .expect("stdout writable");
    writeln!(
        out,
        "smith inequality: {}",
        if report.smith.holds() { "holds" } else { "FAILS" }
    )
    .expect("stdout writable");
    if report.truncated {
        writeln!(out, "note: truncated at the page cap; the last page need not be E_inf")
            .expect("stdout writable");
    }
}

/// `oracle <path>`: per-sector Tate homology dimensions.
pub fn cmd_oracle(path: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let (validated, _) = match load_validated(path) {
        Ok(v) => v,
        Err(f) => return fail(f, err),
    };
    let oracle = match tate_oracle(&validated) {
        Ok(o) => o,
        Err(e) => return fail(Failure::domain(e.to_string()), err),
    };
    for (sector, dim) in &oracle.dims {
        writeln!(out, "sector {sector}: {dim}").expect("stdout writable");
    }
    EXIT_OK
}

/// `builtin [name] [--emit path]`: without a name, lists the registry;
/// with a name, writes (or prints) the canonical complex file.
pub fn cmd_builtin(
    name: Option<&str>,
    emit_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(name) = name else {
        for n in hfk::builtin_names() {
            writeln!(out, "{n}").expect("stdout writable");
        }
        return EXIT_OK;
    };
    let knot = match hfk::builtin(name) {
        Ok(k) => k,
        Err(e) => return fail(Failure::domain(e.to_string()), err),
    };
    let file = ComplexFile::from_complex(&knot.complex, knot_metadata(&knot));
    match emit(&file.render(), emit_path, out) {
        Ok(()) => EXIT_OK,
        Err(f) => fail(f, err),
    }
}

fn knot_metadata(k: &KnotComplex) -> BTreeMap<String, String> {
    let mut metadata = BTreeMap::new();
    metadata.insert("knot".to_string(), k.knot_name.clone());
    metadata.insert("inversion".to_string(), k.inversion_name.clone());
    metadata.insert("direction".to_string(), k.direction_note.clone());
    metadata
}

/// `sum <path1> <path2> [--correction path] [--emit out]`: equivariant
/// self connected sum of two identical knot-flavored inputs.
pub fn cmd_sum(
    path1: &Path,
    path2: &Path,
    correction_path: Option<&Path>,
    emit_path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let k1 = match load_knot(path1) {
        Ok(k) => k,
        Err(f) => return fail(f, err),
    };
    let k2 = match load_knot(path2) {
        Ok(k) => k,
        Err(f) => return fail(f, err),
    };
    if k1.complex.generators() != k2.complex.generators()
        || k1.complex.s_matrix() != k2.complex.s_matrix()
        || k1.complex.d_matrix() != k2.complex.d_matrix()
    {
        return fail(
            Failure::domain(
                "the equivariant sum needs two copies of the same complex \
                 (identical generators, differential, and involution)"
                    .to_string(),
            ),
            err,
        );
    }
    let correction = match correction_path {
        None => None,
        Some(p) => {
            let text = match read_file(p) {
                Ok(t) => t,
                Err(f) => return fail(f, err),
            };
            match CorrectionFile::parse(&text) {
                Ok(c) => Some(c.to_map()),
                Err(e) => return fail(Failure::input(format!("{}: {e}", p.display())), err),
            }
        }
    };
    let sum = match hfk::equivariant_self_sum(&k1, correction.as_ref()) {
        Ok(s) => s,
        Err(e) => return fail(Failure::domain(e.to_string()), err),
    };
    let file = ComplexFile::from_complex(&sum.complex, knot_metadata(&sum));
    match emit(&file.render(), emit_path, out) {
        Ok(()) => EXIT_OK,
        Err(f) => fail(f, err),
    }
}
