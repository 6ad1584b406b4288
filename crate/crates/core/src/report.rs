//! Deterministic machine-readable reports.
//!
//! Reports are emitted by hand rather than through a generic serializer so
//! the byte layout is pinned: fixed key order, one row object per line, LF
//! endings, and every float in fixed 17-significant-digit scientific
//! notation (which round-trips f64 exactly). Parsing goes through serde, so
//! emit -> parse -> emit is the identity on bytes.

use serde::Deserialize;

use crate::cdf::CdfEnclosure;
use crate::corpus::NormVariant;
use crate::error::{Error, Result};
use crate::quad::QuadratureCertificate;

/// Fixed-width scientific rendering; 17 significant digits are enough to
/// reconstruct the exact f64.
pub fn fmt_float(v: f64) -> String {
    debug_assert!(v.is_finite(), "non-finite value in a required report field");
    format!("{v:.16e}")
}

fn fmt_opt(v: &Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => fmt_float(*x),
        _ => "null".to_string(),
    }
}

/// Maps non-finite values to None so optional report fields serialize as
/// JSON null and survive a parse round trip.
pub fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                out.push_str(&format!("\\u{:04x}", c as u32));
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ReportMeta {
    pub version: String,
    pub grid_hash: String,
    pub corpus_ids: Vec<String>,
}

impl ReportMeta {
    fn json(&self) -> String {
        let ids: Vec<String> = self.corpus_ids.iter().map(|s| escape(s)).collect();
        format!(
            "{{\"version\": {}, \"grid_hash\": {}, \"corpus_ids\": [{}]}}",
            escape(&self.version),
            escape(&self.grid_hash),
            ids.join(", ")
        )
    }
}

/// One boundary-form vs kernel-form comparison of the deviation functional.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct IdentityRow {
    pub model: String,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
    pub tau_boundary: f64,
    pub tau_kernel: f64,
    pub residual: f64,
}

impl IdentityRow {
    fn json(&self) -> String {
        format!(
            "{{\"model\": {}, \"a\": {}, \"b\": {}, \"h\": {}, \"alpha\": {}, \"beta\": {}, \"x\": {}, \"tau_boundary\": {}, \"tau_kernel\": {}, \"residual\": {}}}",
            escape(&self.model),
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.h),
            fmt_float(self.alpha),
            fmt_float(self.beta),
            fmt_float(self.x),
            fmt_float(self.tau_boundary),
            fmt_float(self.tau_kernel),
            fmt_float(self.residual),
        )
    }
}

/// One certified-bound check at a single norm variant.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct BoundRow {
    pub model: String,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
    pub variant: String,
    pub tau: f64,
    pub oracle_bound: f64,
    pub slack: f64,
    pub sharpness: f64,
}

impl BoundRow {
    fn json(&self) -> String {
        format!(
            "{{\"model\": {}, \"a\": {}, \"b\": {}, \"h\": {}, \"alpha\": {}, \"beta\": {}, \"x\": {}, \"variant\": {}, \"tau\": {}, \"oracle_bound\": {}, \"slack\": {}, \"sharpness\": {}}}",
            escape(&self.model),
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.h),
            fmt_float(self.alpha),
            fmt_float(self.beta),
            fmt_float(self.x),
            escape(&self.variant),
            fmt_float(self.tau),
            fmt_float(self.oracle_bound),
            fmt_float(self.slack),
            fmt_float(self.sharpness),
        )
    }
}

/// One two-stage refined-bound chain check.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct PerturbedRow {
    pub model: String,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
    pub lhs: f64,
    pub n_of_x: f64,
    pub bound_first: f64,
    pub bound_gruss: f64,
}

impl PerturbedRow {
    fn json(&self) -> String {
        format!(
            "{{\"model\": {}, \"a\": {}, \"b\": {}, \"h\": {}, \"alpha\": {}, \"beta\": {}, \"x\": {}, \"lhs\": {}, \"n_of_x\": {}, \"bound_first\": {}, \"bound_gruss\": {}}}",
            escape(&self.model),
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.h),
            fmt_float(self.alpha),
            fmt_float(self.beta),
            fmt_float(self.x),
            fmt_float(self.lhs),
            fmt_float(self.n_of_x),
            fmt_float(self.bound_first),
            fmt_float(self.bound_gruss),
        )
    }
}

/// One printed-formula vs oracle comparison. `printed` and `rel_gap` are
/// None when the displayed expression produced a non-finite value (the CSV
/// writes those as `nan` / `inf`).
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct AuditJsonRow {
    pub eq_id: String,
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub alpha: f64,
    pub beta: f64,
    pub x: f64,
    pub variant: String,
    pub oracle: f64,
    pub printed: Option<f64>,
    pub rel_gap: Option<f64>,
    pub verdict: String,
}

impl AuditJsonRow {
    fn json(&self) -> String {
        format!(
            "{{\"eq_id\": {}, \"a\": {}, \"b\": {}, \"h\": {}, \"alpha\": {}, \"beta\": {}, \"x\": {}, \"variant\": {}, \"oracle\": {}, \"printed\": {}, \"rel_gap\": {}, \"verdict\": {}}}",
            escape(&self.eq_id),
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.h),
            fmt_float(self.alpha),
            fmt_float(self.beta),
            fmt_float(self.x),
            escape(&self.variant),
            fmt_float(self.oracle),
            fmt_opt(&self.printed),
            fmt_opt(&self.rel_gap),
            escape(&self.verdict),
        )
    }

    fn csv(&self) -> String {
        let printed = match &self.printed {
            Some(v) => fmt_float(*v),
            None => "nan".to_string(),
        };
        let rel_gap = match &self.rel_gap {
            Some(v) => fmt_float(*v),
            None => "inf".to_string(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.eq_id,
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.h),
            fmt_float(self.alpha),
            fmt_float(self.beta),
            fmt_float(self.x),
            self.variant,
            fmt_float(self.oracle),
            printed,
            rel_gap,
            self.verdict,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct ReportSummary {
    pub configs: usize,
    pub violations: usize,
    pub max_sharpness: f64,
    pub max_identity_residual: f64,
}

impl ReportSummary {
    fn json(&self) -> String {
        format!(
            "{{\"configs\": {}, \"violations\": {}, \"max_sharpness\": {}, \"max_identity_residual\": {}}}",
            self.configs,
            self.violations,
            fmt_float(self.max_sharpness),
            fmt_float(self.max_identity_residual),
        )
    }
}

/// The full sweep report: metadata, four row sections, and a summary.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct VerificationReport {
    pub meta: ReportMeta,
    pub identity: Vec<IdentityRow>,
    pub bounds: Vec<BoundRow>,
    pub perturbed: Vec<PerturbedRow>,
    pub audit: Vec<AuditJsonRow>,
    pub summary: ReportSummary,
}

fn push_section<T>(out: &mut String, key: &str, rows: &[T], to_json: impl Fn(&T) -> String) {
    out.push('"');
    out.push_str(key);
    out.push_str("\": [");
    if rows.is_empty() {
        out.push_str("],\n");
        return;
    }
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&to_json(row));
        out.push_str(if i + 1 == rows.len() { "\n" } else { ",\n" });
    }
    out.push_str("],\n");
}

impl VerificationReport {
    pub fn to_json_string(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str("\"meta\": ");
        out.push_str(&self.meta.json());
        out.push_str(",\n");
        push_section(&mut out, "identity", &self.identity, IdentityRow::json);
        push_section(&mut out, "bounds", &self.bounds, BoundRow::json);
        push_section(&mut out, "perturbed", &self.perturbed, PerturbedRow::json);
        push_section(&mut out, "audit", &self.audit, AuditJsonRow::json);
        out.push_str("\"summary\": ");
        out.push_str(&self.summary.json());
        out.push_str("\n}\n");
        out
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s)
            .map_err(|e| Error::InvalidArgument(format!("report parse failed: {e}")))
    }
}

/// Audit rows as CSV with the fixed header.
pub fn audit_csv(rows: &[AuditJsonRow]) -> String {
    let mut out = String::from("eq_id,a,b,h,alpha,beta,x,variant,oracle,paper,rel_gap,verdict\n");
    for row in rows {
        out.push_str(&row.csv());
        out.push('\n');
    }
    out
}

/// A quadrature certificate as a single deterministic JSON object.
pub fn certificate_json(cert: &QuadratureCertificate) -> String {
    format!(
        "{{\"estimate\": {}, \"error_bound\": {}, \"norm_variant\": {}, \"norm_value\": {}, \"n_panels\": {}, \"h\": {}}}\n",
        fmt_float(cert.estimate),
        fmt_float(cert.error_bound),
        escape(&cert.norm_used.label()),
        fmt_float(cert.norm_value),
        cert.n_panels,
        fmt_float(cert.h),
    )
}

/// One CDF (or reliability) enclosure at one evaluation point.
#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct EnclosureRow {
    pub x: f64,
    pub center: f64,
    pub radius: f64,
    pub variant: String,
}

impl EnclosureRow {
    pub fn new(e: &CdfEnclosure, variant: &NormVariant) -> Self {
        EnclosureRow {
            x: e.x,
            center: e.center,
            radius: e.radius,
            variant: variant.label(),
        }
    }

    fn json(&self) -> String {
        format!(
            "{{\"x\": {}, \"center\": {}, \"radius\": {}, \"variant\": {}}}",
            fmt_float(self.x),
            fmt_float(self.center),
            fmt_float(self.radius),
            escape(&self.variant),
        )
    }
}

/// Enclosure rows as a deterministic JSON array, one row per line.
pub fn enclosures_json(rows: &[EnclosureRow]) -> String {
    if rows.is_empty() {
        return "[]\n".to_string();
    }
    let mut out = String::from("[\n");
    for (i, row) in rows.iter().enumerate() {
        out.push_str(&row.json());
        out.push_str(if i + 1 == rows.len() { "\n" } else { ",\n" });
    }
    out.push_str("]\n");
    out
}
