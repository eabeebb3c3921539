//! Canonical on-disk formats: complex files, spectral sequence reports, and
//! involution-correction fragments.
//!
//! Everything is UTF-8 JSON with sorted keys and canonical generator order,
//! so emission is byte-stable: the same data always renders to the same
//! bytes. Unknown format versions are rejected outright.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{
    BuildError, EquivariantComplex, Generator, InvolutionSpec, LinearMap,
};
use crate::specseq::SsReport;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format_version {found} (this build reads version {FORMAT_VERSION})")]
    Version { found: u32 },
    #[error("exactly one of \"involution\" or \"iota\"+\"tau\" must be present")]
    InvolutionChoice,
    #[error("{0}")]
    Reference(#[from] BuildError),
}

/// One generator entry of a complex file. The sector defaults to the
/// decimal alexander grading when one is present, else to "default".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub maslov: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alexander: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sector: Option<String>,
}

/// The canonical complex file. Map values are GF(2) sums of generator
/// names; omitted entries are zero columns.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub format_version: u32,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub differential: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub involution: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iota: Option<BTreeMap<String, Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<BTreeMap<String, Vec<String>>>,
}

fn map_from_columns(columns: &BTreeMap<String, Vec<String>>) -> LinearMap {
    let mut map = LinearMap::new();
    for (src, targets) in columns {
        // Repeated names cancel in GF(2).
        for t in targets {
            map.toggle(src, t);
        }
    }
    map
}

fn columns_from_map(map: &LinearMap) -> BTreeMap<String, Vec<String>> {
    map.columns()
        .iter()
        .map(|(src, targets)| (src.clone(), targets.iter().cloned().collect()))
        .collect()
}

impl ComplexFile {
    /// Parses and gates the format version and involution choice.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: ComplexFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(FormatError::Version {
                found: file.format_version,
            });
        }
        match (&file.involution, &file.iota, &file.tau) {
            (Some(_), None, None) | (None, Some(_), Some(_)) => {}
            _ => return Err(FormatError::InvolutionChoice),
        }
        Ok(file)
    }

    /// Resolves the file into a complex plus its metadata block.
    pub fn to_complex(
        &self,
    ) -> Result<(EquivariantComplex, BTreeMap<String, String>), FormatError> {
        let mut gens = Vec::with_capacity(self.generators.len());
        for e in &self.generators {
            gens.push(Generator::new(
                e.name.clone(),
                e.maslov,
                e.alexander,
                e.sector.clone(),
            )?);
        }
        let d = map_from_columns(&self.differential);
        let spec = match (&self.involution, &self.iota, &self.tau) {
            (Some(s), None, None) => InvolutionSpec::Direct(map_from_columns(s)),
            (None, Some(i), Some(t)) => InvolutionSpec::Composed {
                iota: map_from_columns(i),
                tau: map_from_columns(t),
            },
            _ => return Err(FormatError::InvolutionChoice),
        };
        let complex = EquivariantComplex::new(gens, &d, spec)?;
        Ok((complex, self.metadata.clone()))
    }

    /// The canonical file for a complex: generators in canonical order,
    /// provenance maps preserved when the complex has them.
    pub fn from_complex(
        complex: &EquivariantComplex,
        metadata: BTreeMap<String, String>,
    ) -> Self {
        let generators = complex
            .generators()
            .iter()
            .map(|g| GeneratorEntry {
                name: g.name.clone(),
                maslov: g.maslov,
                alexander: g.alexander,
                sector: match (g.alexander, g.sector.as_str()) {
                    (Some(_), _) | (None, "default") => None,
                    (None, s) => Some(s.to_string()),
                },
            })
            .collect();
        let differential = columns_from_map(&complex.matrix_as_map(complex.d_matrix()));
        let (involution, iota, tau) = match complex.provenance() {
            Some(p) => (
                None,
                Some(columns_from_map(&complex.matrix_as_map(&p.iota))),
                Some(columns_from_map(&complex.matrix_as_map(&p.tau))),
            ),
            None => (
                Some(columns_from_map(&complex.matrix_as_map(complex.s_matrix()))),
                None,
                None,
            ),
        };
        Self {
            format_version: FORMAT_VERSION,
            metadata,
            generators,
            differential,
            involution,
            iota,
            tau,
        }
    }

    /// Byte-stable rendering: pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("complex files serialize");
        s.push('\n');
        s
    }
}

/// An involution-correction fragment: a single linear map by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectionFile {
    pub format_version: u32,
    pub correction: BTreeMap<String, Vec<String>>,
}

impl CorrectionFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: CorrectionFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(FormatError::Version {
                found: file.format_version,
            });
        }
        Ok(file)
    }

    pub fn to_map(&self) -> LinearMap {
        map_from_columns(&self.correction)
    }

    pub fn from_map(map: &LinearMap) -> Self {
        Self {
            format_version: FORMAT_VERSION,
            correction: columns_from_map(map),
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("correction files serialize");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------------------
// Report files
// ---------------------------------------------------------------------------

/// The matrix of one `d_r` as a column map between representative labels.
/// Only nonzero columns are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialReport {
    pub from_maslov: i64,
    pub to_maslov: i64,
    pub theta_exponent: u32,
    pub columns: BTreeMap<String, Vec<String>>,
}

/// One page of one sector: dimensions and representatives by maslov
/// grading (zero summands omitted), plus the nonzero differentials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub r: u32,
    pub dims: BTreeMap<i64, usize>,
    pub representatives: BTreeMap<i64, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differentials: Vec<DifferentialReport>,
}

/// All pages of one sector plus its limit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorReport {
    pub sector: String,
    pub oracle_dim: usize,
    pub e_infinity: BTreeMap<i64, usize>,
    pub pages: Vec<PageReport>,
}

/// Smith comparison for one sector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithReportEntry {
    pub sector: String,
    pub homology_dim: usize,
    pub e_infinity_dim: usize,
    pub margin: i64,
}

/// Machine-readable rendering of a full spectral sequence run.
/// `parse(render(x)) == x`, and keys are emitted in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format_version: u32,
    pub collapse_page: u32,
    pub truncated: bool,
    pub oracle_consistent: bool,
    pub smith_holds: bool,
    pub sectors: Vec<SectorReport>,
    pub smith: Vec<SmithReportEntry>,
}

impl ReportFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let file: ReportFile = serde_json::from_str(text)?;
        if file.format_version != FORMAT_VERSION {
            return Err(FormatError::Version {
                found: file.format_version,
            });
        }
        Ok(file)
    }

    pub fn from_report(report: &SsReport) -> Self {
        let sectors = report
            .e_infinity
            .iter()
            .map(|sd| {
                let pages = report
                    .pages
                    .iter()
                    .map(|page| {
                        let sp = page
                            .sector(&sd.sector)
                            .expect("every page carries every sector");
                        let dims: BTreeMap<i64, usize> = sp
                            .summands
                            .iter()
                            .filter(|s| s.dim > 0)
                            .map(|s| (s.maslov, s.dim))
                            .collect();
                        let representatives: BTreeMap<i64, Vec<String>> = sp
                            .summands
                            .iter()
                            .filter(|s| s.dim > 0)
                            .map(|s| (s.maslov, s.labels.clone()))
                            .collect();
                        let differentials = sp
                            .differentials
                            .iter()
                            .filter(|d| !d.matrix.is_zero())
                            .map(|d| {
                                let src = sp
                                    .summands
                                    .iter()
                                    .find(|s| s.maslov == d.from_maslov)
                                    .expect("differential source exists");
                                let dst = sp
                                    .summands
                                    .iter()
                                    .find(|s| s.maslov == d.to_maslov)
                                    .expect("differential target exists");
                                let mut columns = BTreeMap::new();
                                for (j, src_label) in src.labels.iter().enumerate() {
                                    let targets: Vec<String> = d
                                        .matrix
                                        .column(j)
                                        .support()
                                        .into_iter()
                                        .map(|i| dst.labels[i].clone())
                                        .collect();
                                    if !targets.is_empty() {
                                        columns.insert(src_label.clone(), targets);
                                    }
                                }
                                DifferentialReport {
                                    from_maslov: d.from_maslov,
                                    to_maslov: d.to_maslov,
                                    theta_exponent: d.theta_exponent,
                                    columns,
                                }
                            })
                            .collect();
                        PageReport {
                            r: page.r,
                            dims,
                            representatives,
                            differentials,
                        }
                    })
                    .collect();
                SectorReport {
                    sector: sd.sector.clone(),
                    oracle_dim: report.oracle.dim(&sd.sector).unwrap_or(0),
                    e_infinity: sd
                        .by_maslov
                        .iter()
                        .filter(|&(_, &dim)| dim > 0)
                        .map(|(&m, &dim)| (m, dim))
                        .collect(),
                    pages,
                }
            })
            .collect();
        let smith = report
            .smith
            .entries
            .iter()
            .map(|e| SmithReportEntry {
                sector: e.sector.clone(),
                homology_dim: e.homology_dim,
                e_infinity_dim: e.e_infinity_dim,
                margin: e.margin(),
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            collapse_page: report.collapse_page,
            truncated: report.truncated,
            oracle_consistent: report.oracle_consistent,
            smith_holds: report.smith.holds(),
            sectors,
            smith,
        }
    }

    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report files serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hfk;
    use crate::specseq::compute_pages;

    #[test]
    fn builtin_files_roundtrip() {
        for name in hfk::builtin_names() {
            let k = hfk::builtin(name).unwrap();
            let mut metadata = BTreeMap::new();
            metadata.insert("knot".to_string(), k.knot_name.clone());
            let file = ComplexFile::from_complex(&k.complex, metadata);
            let text = file.render();
            let parsed = ComplexFile::parse(&text).unwrap();
            assert_eq!(parsed, file, "{name}: file roundtrip");
            let (complex, _) = parsed.to_complex().unwrap();
            assert_eq!(&complex, k.complex.as_complex(), "{name}: complex roundtrip");
        }
    }

    #[test]
    fn version_gate() {
        let text = r#"{"format_version": 2, "generators": [], "involution": {}}"#;
        assert!(matches!(
            ComplexFile::parse(text),
            Err(FormatError::Version { found: 2 })
        ));
    }

    #[test]
    fn involution_choice_enforced() {
        let both = r#"{"format_version": 1, "generators": [],
                       "involution": {}, "iota": {}, "tau": {}}"#;
        assert!(matches!(
            ComplexFile::parse(both),
            Err(FormatError::InvolutionChoice)
        ));
        let neither = r#"{"format_version": 1, "generators": []}"#;
        assert!(matches!(
            ComplexFile::parse(neither),
            Err(FormatError::InvolutionChoice)
        ));
    }

    #[test]
    fn missing_generator_reference() {
        let text = r#"{
            "format_version": 1,
            "generators": [{"name": "x", "maslov": 0}],
            "involution": {"x": ["ghost"]}
        }"#;
        let file = ComplexFile::parse(text).unwrap();
        assert!(matches!(
            file.to_complex(),
            Err(FormatError::Reference(_))
        ));
    }

    #[test]
    fn duplicate_targets_cancel() {
        let text = r#"{
            "format_version": 1,
            "generators": [{"name": "x", "maslov": 0}],
            "involution": {"x": ["x", "x", "x"]}
        }"#;
        let (c, _) = ComplexFile::parse(text).unwrap().to_complex().unwrap();
        assert!(c.s_matrix().get(0, 0));
    }

    #[test]
    fn report_roundtrip() {
        let k = hfk::builtin("fig8-tau").unwrap();
        let report = compute_pages(&k.complex, None).unwrap();
        let file = ReportFile::from_report(&report);
        let text = file.render();
        let parsed = ReportFile::parse(&text).unwrap();
        assert_eq!(parsed, file);
        // Byte-stable: rendering the parse reproduces the text.
        assert_eq!(parsed.render(), text);
    }
}
