//! Evaluation reports and their JSON, CSV and text-table renderings.
//!
//! JSON layout (schema in [`REPORT_SCHEMA`]):
//!
//! ```text
//! { "rows": [ { "method", "factor", "dataset", "psnr_mean", "ssim_mean",
//!               "per_slice": [ { "z", "psnr", "ssim" } ] } ],
//!   "config": { ... }, "version": "x.y.z", "timestamp": "RFC 3339" }
//! ```
//!
//! The timestamp honours `SOURCE_DATE_EPOCH` so reports can be reproduced
//! byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = include_str!("../../schema/eval_report.schema.json");

pub fn report_schema() -> serde_json::Value {
    serde_json::from_str(REPORT_SCHEMA).expect("bundled schema is valid JSON")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceScore {
    pub z: usize,
    pub psnr: f64,
    pub ssim: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub method: String,
    pub factor: usize,
    pub dataset: String,
    pub psnr_mean: f64,
    pub ssim_mean: f64,
    pub per_slice: Vec<SliceScore>,
}

impl MetricRow {
    pub fn from_scores(
        method: &str,
        factor: usize,
        dataset: &str,
        per_slice: Vec<SliceScore>,
    ) -> Result<Self> {
        if per_slice.is_empty() {
            return Err(Error::Report(
                "a metric row needs at least one slice".into(),
            ));
        }
        if per_slice.windows(2).any(|w| w[0].z >= w[1].z) {
            return Err(Error::Report(
                "per-slice indices must be strictly increasing".into(),
            ));
        }
        let n = per_slice.len() as f64;
        let psnr_mean = per_slice.iter().map(|s| s.psnr).sum::<f64>() / n;
        let ssim_mean = per_slice.iter().map(|s| s.ssim).sum::<f64>() / n;
        Ok(Self {
            method: method.to_owned(),
            factor,
            dataset: dataset.to_owned(),
            psnr_mean,
            ssim_mean,
            per_slice,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<MetricRow>,
    pub config: serde_json::Value,
    pub version: String,
    pub timestamp: String,
}

fn report_timestamp() -> String {
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::<Utc>::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    now.to_rfc3339_opts(SecondsFormat::Secs, true)
}

impl EvalReport {
    /// Rows are sorted by method name, then factor.
    pub fn new(mut rows: Vec<MetricRow>, config: serde_json::Value) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Report(
                "reports must contain at least one row".into(),
            ));
        }
        rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.factor.cmp(&b.factor)));
        Ok(Self {
            rows,
            config,
            version: crate::VERSION.to_owned(),
            timestamp: report_timestamp(),
        })
    }

    pub fn row(&self, method: &str) -> Option<&MetricRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "table" | "text" | "text-table" => Ok(ReportFormat::Table),
            other => Err(Error::InvalidArgument(format!(
                "unknown report format '{other}'"
            ))),
        }
    }
}

pub fn render_csv(report: &EvalReport) -> String {
    let mut out = String::from("method,factor,dataset,psnr_mean,ssim_mean\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.method, r.factor, r.dataset, r.psnr_mean, r.ssim_mean
        );
    }
    out
}

/// Methods grouped by upsampling factor, one block per factor.
pub fn render_table(report: &EvalReport) -> String {
    let mut rows: Vec<&MetricRow> = report.rows.iter().collect();
    rows.sort_by(|a, b| a.factor.cmp(&b.factor).then(a.method.cmp(&b.method)));
    let mw = rows
        .iter()
        .map(|r| r.method.len())
        .max()
        .unwrap_or(0)
        .max(6);
    let dw = rows
        .iter()
        .map(|r| r.dataset.len())
        .max()
        .unwrap_or(0)
        .max(7);
    let header = format!(
        "{:<8}  {:<mw$}  {:<dw$}  {:>9}  {:>8}",
        "Factor", "Method", "Dataset", "PSNR (dB)", "SSIM"
    );
    let rule = "-".repeat(header.chars().count());
    let mut out = format!("{header}\n{rule}\n");
    let mut last_factor = None;
    for r in rows {
        if last_factor.is_some() && last_factor != Some(r.factor) {
            let _ = writeln!(out, "{rule}");
        }
        let label = if last_factor == Some(r.factor) {
            String::new()
        } else {
            format!("x{}", r.factor)
        };
        last_factor = Some(r.factor);
        let _ = writeln!(
            out,
            "{label:<8}  {:<mw$}  {:<dw$}  {:>9.2}  {:>8.3}",
            r.method, r.dataset, r.psnr_mean, r.ssim_mean
        );
    }
    out.push_str(&rule);
    out.push('\n');
    out
}

pub fn render(report: &EvalReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::Report(
            "reports must contain at least one row".into(),
        ));
    }
    Ok(match format {
        ReportFormat::Json => serde_json::to_string_pretty(report)? + "\n",
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Table => render_table(report),
    })
}

pub fn emit_report(
    report: &EvalReport,
    path: impl AsRef<Path>,
    format: ReportFormat,
) -> Result<()> {
    let path = path.as_ref();
    let text = render(report, format)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
