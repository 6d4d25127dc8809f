//! Re-runs a config over values of one parameter and flags verdict flips.

use std::path::Path;

use serde::Serialize;

use crate::config::{RunConfig, SweepParam};
use crate::error::CliError;
use crate::output::{write_json, write_outputs};
use crate::run::{run, FamilyVerdict};

/// One sweep value and the verdicts it produced.
#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub value: String,
    pub out_dir: String,
    pub exit_code: u8,
    pub families: Vec<FamilyVerdict>,
}

/// A family whose verdict changed across the sweep.
#[derive(Clone, Debug, Serialize)]
pub struct Flip {
    pub family: String,
    pub verdicts: Vec<String>,
}

/// Contents of `sweep_summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct SweepOutcome {
    pub param: String,
    pub points: Vec<SweepPoint>,
    /// Families that flip between pass and fail; their verdicts are not robust.
    pub non_robust: Vec<Flip>,
}

impl SweepOutcome {
    /// Worst exit code of the points.
    pub fn exit_code(&self) -> u8 {
        self.points.iter().map(|p| p.exit_code).max().unwrap_or(0)
    }
}

/// Runs `cfg` once per value; run `i` writes into `<out_dir>/<param>=<value>`.
pub fn sweep(cfg: &RunConfig, param: SweepParam, values: &[String]) -> Result<SweepOutcome, CliError> {
    if values.is_empty() {
        return Err(CliError::Config("sweep needs at least one value".into()));
    }
    // every config is checked before anything runs
    let configs = values
        .iter()
        .map(|v| {
            let mut c = param.apply(cfg, v)?;
            c.out_dir = cfg.out_dir.join(format!("{param}={}", v.trim()));
            c.resolve()?;
            Ok(c)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut points = Vec::new();
    for (value, c) in values.iter().zip(&configs) {
        let outcome = run(c)?;
        write_outputs(&c.out_dir, &outcome)?;
        points.push(SweepPoint {
            value: value.trim().to_string(),
            out_dir: c.out_dir.display().to_string(),
            exit_code: outcome.exit_code(),
            families: outcome.summary().families,
        });
    }
    let mut non_robust = Vec::new();
    for (i, f) in points[0].families.iter().enumerate() {
        let verdicts: Vec<&FamilyVerdict> = points.iter().map(|p| &p.families[i]).collect();
        if verdicts.iter().any(|v| v.verdict.is_pass()) && verdicts.iter().any(|v| v.verdict.is_fail()) {
            non_robust.push(Flip { family: f.family.clone(), verdicts: verdicts.iter().map(|v| v.verdict.to_string()).collect() });
        }
    }
    let outcome = SweepOutcome { param: param.to_string(), points, non_robust };
    write_json(&cfg.out_dir.join("sweep_summary.json"), &outcome)?;
    Ok(outcome)
}

/// Loads a sweep summary written earlier; used by tests and tooling.
pub fn read_summary(dir: &Path) -> Result<serde_json::Value, CliError> {
    let path = dir.join("sweep_summary.json");
    let text = std::fs::read_to_string(&path).map_err(|source| CliError::Io { path: path.clone(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(e.to_string()))
}
