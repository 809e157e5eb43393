use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ComparisonReport;
use crate::checkers::Verdict;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
    Plotdata,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "plotdata" => Ok(Format::Plotdata),
            other => Err(Error::Config(format!("unknown format `{other}` (csv, json, plotdata)"))),
        }
    }
}

pub const CSV_HEADER: [&str; 10] = [
    "property",
    "theorem",
    "verdict_F",
    "basis_F",
    "verdict_f",
    "basis_f",
    "applicable",
    "consistent",
    "note",
    "narrative",
];

fn label<T: Serialize>(v: &T) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_string)).unwrap_or_default()
}

fn narrative(f: &Verdict, l: &Verdict) -> String {
    format!("F: {} | f: {}", f.narrative, l.narrative)
}

/// One row per property.
pub fn to_csv(report: &ComparisonReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Config(format!("csv: {e}"));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in &report.rows {
        w.write_record([
            r.property.name().to_string(),
            r.theorem.clone(),
            label(&r.verdict_family.outcome),
            label(&r.verdict_family.basis),
            label(&r.verdict_limit.outcome),
            label(&r.verdict_limit.basis),
            r.applicable.to_string(),
            r.consistent.to_string(),
            r.note.clone(),
            narrative(&r.verdict_family, &r.verdict_limit),
        ])
        .map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_json(report: &ComparisonReport) -> Result<String> {
    let mut s = serde_json::to_string_pretty(report)?;
    s.push('\n');
    Ok(s)
}

/// `(file name, contents)` of every plot series, two whitespace-separated columns.
pub fn plot_files(report: &ComparisonReport) -> Vec<(String, String)> {
    report
        .plots
        .iter()
        .map(|s| {
            let mut body = format!("# {} {}\n", s.columns[0], s.columns[1]);
            for [a, b] in &s.points {
                let _ = writeln!(body, "{a} {b}");
            }
            (format!("{}.dat", s.name), body)
        })
        .collect()
}

/// Write the report into `dir`; returns the files written.
pub fn emit(report: &ComparisonReport, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let files = match format {
        Format::Csv => vec![("report.csv".to_string(), to_csv(report)?)],
        Format::Json => vec![("report.json".to_string(), to_json(report)?)],
        Format::Plotdata => plot_files(report),
    };
    let mut out = Vec::with_capacity(files.len());
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body)?;
        out.push(path);
    }
    Ok(out)
}
