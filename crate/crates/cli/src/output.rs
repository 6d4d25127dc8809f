//! CSV and JSON files of a run.

use std::fs;
use std::path::{Path, PathBuf};

use bergman::asymptotics::ConvergenceReport;
use serde::Serialize;

use crate::error::CliError;
use crate::run::RunOutcome;

#[derive(Serialize)]
struct CsvRow {
    family: String,
    n: usize,
    observed: f64,
    predicted: f64,
    scaled_error: f64,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

/// `family,n,observed,predicted,scaled_error` with the family column as `<family>.<series>`.
pub fn report_csv(report: &ConvergenceReport) -> Result<Vec<u8>, CliError> {
    let path = || PathBuf::from(format!("{}.csv", report.family));
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["family", "n", "observed", "predicted", "scaled_error"])
        .map_err(|e| CliError::Io { path: path(), source: e.into() })?;
    for row in &report.rows {
        w.serialize(CsvRow {
            family: format!("{}.{}", report.family, row.series),
            n: row.n,
            observed: row.observed,
            predicted: row.predicted,
            scaled_error: row.scaled_error,
        })
        .map_err(|e| CliError::Io { path: path(), source: e.into() })?;
    }
    w.into_inner().map_err(|e| CliError::Io { path: path(), source: e.into_error() })
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e.into() })?;
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// Writes `<family>.csv`, `<family>.json` for every family and `summary.json` into `dir`.
pub fn write_outputs(dir: &Path, outcome: &RunOutcome) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    for f in &outcome.families {
        let csv_path = dir.join(format!("{}.csv", f.family));
        fs::write(&csv_path, report_csv(&f.report)?).map_err(io_err(&csv_path))?;
        write_json(&dir.join(format!("{}.json", f.family)), &f.report)?;
    }
    write_json(&dir.join("summary.json"), &outcome.summary())
}
