//! Experiment reports and their JSON/CSV serialization.
//!
//! Reports are byte-stable for identical inputs: row values live in
//! ordered maps, floats print in shortest round-trip form, and in
//! deterministic mode the wall time is pinned to zero so that two runs of
//! the same seed and config produce identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub n: usize,
    pub level: usize,
    pub radial: usize,
    pub angular: usize,
    pub tol: f64,
    pub pairs: usize,
    pub seed: u64,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub name: String,
    pub values: BTreeMap<String, f64>,
}

impl ReportRow {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub config: ReportConfig,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl ExperimentReport {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    /// Header row plus one record per row; columns are the sorted union of
    /// the row keys, empty where a row lacks a key.
    pub fn to_csv(&self) -> String {
        let mut columns: Vec<&str> = Vec::new();
        for row in &self.rows {
            for key in row.values.keys() {
                if !columns.contains(&key.as_str()) {
                    columns.push(key);
                }
            }
        }
        columns.sort_unstable();

        let mut out = String::from("row");
        for col in &columns {
            out.push(',');
            out.push_str(col);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.name);
            for col in &columns {
                out.push(',');
                if let Some(v) = row.values.get(*col) {
                    out.push_str(&format!("{v}"));
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }
}

/// Write the rendered report to a file or stdout.
pub fn emit_report(
    report: &ExperimentReport,
    format: ReportFormat,
    out: Option<&Path>,
) -> io::Result<()> {
    let rendered = report.render(format);
    match out {
        Some(path) => fs::write(path, rendered),
        None => io::stdout().write_all(rendered.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentReport {
        ExperimentReport {
            experiment: "resolution".into(),
            config: ReportConfig {
                n: 1,
                level: 2,
                radial: 8,
                angular: 12,
                tol: 1e-9,
                pairs: 10,
                seed: 7,
                deterministic: true,
            },
            rows: vec![
                ReportRow::new("defect").with("value", 1.25e-14),
                ReportRow::new("constant").with("value", 0.9549296585513721),
            ],
            pass: true,
            wall_time_ms: 0,
        }
    }

    #[test]
    fn json_round_trips() {
        let report = sample();
        let parsed: ExperimentReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let csv = sample().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "row,value");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("defect,"));
    }

    #[test]
    fn empty_rows_still_render() {
        let mut report = sample();
        report.rows.clear();
        assert_eq!(report.to_csv(), "row\n");
        let parsed: ExperimentReport = serde_json::from_str(&report.to_json()).unwrap();
        assert!(parsed.rows.is_empty());
    }

    #[test]
    fn rendering_is_stable() {
        let a = sample().render(ReportFormat::Json);
        let b = sample().render(ReportFormat::Json);
        assert_eq!(a, b);
    }
}
