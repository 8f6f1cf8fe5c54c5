//! JSON documents for relations, subspaces and reports.
//!
//! Complex entries are `[re, im]` pairs. Matrices are row-major lists of rows,
//! so an `n x r` generator block is `n` rows of `r` pairs each.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decompose::DecompositionResult;
use crate::invariance::{Certificate, ReductionReport};
use crate::linalg::{c, CMatrix};
use crate::relation::{ClassificationReport, Relation};
use crate::subspace::{Subspace, ToleranceConfig};
use crate::ztransform::ZPropertyReport;

pub type Entry = [f64; 2];
pub type Rows = Vec<Vec<Entry>>;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Shape(String),
    #[error("non-finite entry at {at}")]
    NonFinite { at: String },
    #[error(transparent)]
    Invalid(#[from] crate::error::Error),
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Generators {
    #[serde(rename = "F")]
    pub f: Rows,
    #[serde(rename = "G")]
    pub g: Rows,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RelationDocument {
    pub dim: usize,
    pub generators: Generators,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SubspaceDocument {
    pub dim: usize,
    /// `dim x k` spanning vectors, as columns.
    pub basis: Rows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn rows_to_matrix(rows: &Rows, n: usize, label: &str) -> Result<CMatrix, DocumentError> {
    if rows.len() != n {
        return Err(DocumentError::Shape(format!(
            "{label} has {} rows, expected dim = {n}",
            rows.len()
        )));
    }
    let r = rows.first().map_or(0, Vec::len);
    let mut m = CMatrix::zeros(n, r);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != r {
            return Err(DocumentError::Shape(format!(
                "{label}[{i}] has {} entries, expected {r}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(DocumentError::NonFinite {
                    at: format!("{label}[{i}][{j}]"),
                });
            }
            m[(i, j)] = c(re, im);
        }
    }
    Ok(m)
}

pub fn matrix_to_rows(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

impl RelationDocument {
    pub fn from_relation(t: &Relation, name: Option<String>) -> Self {
        Self {
            dim: t.space_dim(),
            generators: Generators {
                f: matrix_to_rows(&t.f()),
                g: matrix_to_rows(&t.g()),
            },
            name,
            tolerances: None,
        }
    }

    pub fn tolerances_or(&self, fallback: ToleranceConfig) -> ToleranceConfig {
        self.tolerances.unwrap_or(fallback)
    }

    pub fn to_relation(&self, cfg: &ToleranceConfig) -> Result<Relation, DocumentError> {
        let f = rows_to_matrix(&self.generators.f, self.dim, "generators.F")?;
        let g = rows_to_matrix(&self.generators.g, self.dim, "generators.G")?;
        if f.ncols() != g.ncols() {
            return Err(DocumentError::Shape(format!(
                "generators.F has {} columns but generators.G has {}",
                f.ncols(),
                g.ncols()
            )));
        }
        Ok(Relation::from_generators(&f, &g, cfg)?)
    }
}

impl SubspaceDocument {
    pub fn from_subspace(s: &Subspace, name: Option<String>) -> Self {
        Self {
            dim: s.ambient_dim(),
            basis: matrix_to_rows(s.frame()),
            name,
        }
    }

    pub fn to_subspace(&self, cfg: &ToleranceConfig) -> Result<Subspace, DocumentError> {
        let m = rows_to_matrix(&self.basis, self.dim, "basis")?;
        Ok(Subspace::from_columns(&m, cfg)?)
    }
}

pub fn parse_relation_document(text: &str) -> Result<RelationDocument, DocumentError> {
    let doc: RelationDocument = serde_json::from_str(text)?;
    if let Some(t) = &doc.tolerances {
        t.validate()?;
    }
    Ok(doc)
}

/// Parses a relation document, using its tolerance overrides if present.
pub fn parse_relation(text: &str) -> Result<Relation, DocumentError> {
    let doc = parse_relation_document(text)?;
    doc.to_relation(&doc.tolerances_or(ToleranceConfig::default()))
}

pub fn emit_relation(t: &Relation) -> String {
    emit_document(&RelationDocument::from_relation(t, None))
}

pub fn emit_document<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn parse_subspace(text: &str, cfg: &ToleranceConfig) -> Result<Subspace, DocumentError> {
    let doc: SubspaceDocument = serde_json::from_str(text)?;
    doc.to_subspace(cfg)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CertificateEntry {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
}

impl From<&Certificate> for CertificateEntry {
    fn from(c: &Certificate) -> Self {
        Self {
            name: c.name.clone(),
            passed: c.passed,
            residual: c.residual,
            tolerance: c.tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassificationSummary {
    pub operator: bool,
    pub bounded: bool,
    pub contraction: bool,
    pub isometry: bool,
    pub unitary: bool,
    pub dissipative: bool,
    pub symmetric: bool,
    pub selfadjoint: bool,
    pub maximal_dissipative: bool,
    pub dissipative_min_eig: f64,
    pub symmetric_max_abs: f64,
    pub contraction_min_eig: f64,
    pub isometry_max_abs: f64,
    pub adjoint_gap: f64,
    pub parts: PartSummary,
}

impl ClassificationSummary {
    pub fn new(report: &ClassificationReport, t: &Relation, cfg: &ToleranceConfig) -> Self {
        let r = &report.residuals;
        Self {
            operator: report.is_operator,
            bounded: report.is_bounded,
            contraction: report.is_contraction,
            isometry: report.is_isometry,
            unitary: report.is_unitary,
            dissipative: report.is_dissipative,
            symmetric: report.is_symmetric,
            selfadjoint: report.is_selfadjoint,
            maximal_dissipative: report.is_maximal_dissipative,
            dissipative_min_eig: r.dissipative_min_eig,
            symmetric_max_abs: r.symmetric_max_abs,
            contraction_min_eig: r.contraction_min_eig,
            isometry_max_abs: r.isometry_max_abs,
            adjoint_gap: r.adjoint_gap,
            parts: PartSummary::new(t, cfg),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PartSummary {
    pub graph: usize,
    pub dom: usize,
    pub ran: usize,
    pub ker: usize,
    pub mul: usize,
}

impl PartSummary {
    pub fn new(t: &Relation, cfg: &ToleranceConfig) -> Self {
        let p = t.parts(cfg);
        Self {
            graph: t.dim(),
            dom: p.dom.dim(),
            ran: p.ran.dim(),
            ker: p.ker.dim(),
            mul: p.mul.dim(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DecompositionSummary {
    pub mode: String,
    pub k_dim: usize,
    /// Orthonormal frame of `K`, `n x dim K`.
    pub k_frame: Rows,
    pub part_k: PartSummary,
    pub part_kperp: PartSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wandering_dim: Option<usize>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ZCheckEntry {
    pub id: String,
    pub statement: String,
    /// `null` when the hypotheses were not met.
    pub passed: Option<bool>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Machine-readable result of one command.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ReportDocument {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub tolerances: ToleranceConfig,
    /// Seed of any randomized check; `null` when nothing was sampled.
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub z_checks: Vec<ZCheckEntry>,
    pub certificates: Vec<CertificateEntry>,
    pub passed: bool,
}

impl ReportDocument {
    pub fn new(command: &str, name: Option<String>, cfg: &ToleranceConfig) -> Self {
        Self {
            command: command.to_string(),
            name,
            tolerances: *cfg,
            seed: None,
            classification: None,
            decomposition: None,
            z_checks: Vec::new(),
            certificates: Vec::new(),
            passed: true,
        }
    }

    pub fn with_certificates<'a>(
        mut self,
        certs: impl IntoIterator<Item = &'a Certificate>,
    ) -> Self {
        self.certificates
            .extend(certs.into_iter().map(CertificateEntry::from));
        self.passed = self.certificates.iter().all(|c| c.passed)
            && self.z_checks.iter().all(|z| z.passed != Some(false));
        self
    }

    pub fn classification(t: &Relation, name: Option<String>, cfg: &ToleranceConfig) -> Self {
        let mut doc = Self::new("classify", name, cfg);
        doc.classification = Some(ClassificationSummary::new(&t.classify(cfg), t, cfg));
        doc
    }

    pub fn decomposition(
        t: &Relation,
        result: &DecompositionResult,
        name: Option<String>,
        cfg: &ToleranceConfig,
    ) -> Self {
        let mut doc = Self::new("decompose", name, cfg);
        doc.classification = Some(ClassificationSummary::new(&t.classify(cfg), t, cfg));
        doc.decomposition = Some(DecompositionSummary {
            mode: result.mode.to_string(),
            k_dim: result.k.dim(),
            k_frame: matrix_to_rows(result.k.frame()),
            part_k: PartSummary::new(&result.part_k, cfg),
            part_kperp: PartSummary::new(&result.part_kperp, cfg),
            wandering_dim: result.wandering.as_ref().map(Subspace::dim),
            iterations: result.iterations,
        });
        doc.with_certificates(&result.certificates)
    }

    pub fn reduction(
        report: &ReductionReport,
        name: Option<String>,
        cfg: &ToleranceConfig,
    ) -> Self {
        Self::new("certify", name, cfg).with_certificates(&report.certificates)
    }

    pub fn z_properties(
        report: &ZPropertyReport,
        name: Option<String>,
        cfg: &ToleranceConfig,
    ) -> Self {
        let mut doc = Self::new("ztransform", name, cfg);
        doc.z_checks = report
            .checks
            .iter()
            .map(|c| ZCheckEntry {
                id: c.id.to_string(),
                statement: c.statement.to_string(),
                passed: c.passed,
                residual: c.residual,
                note: c.note.clone(),
            })
            .collect();
        doc.with_certificates(std::iter::empty())
    }
}
