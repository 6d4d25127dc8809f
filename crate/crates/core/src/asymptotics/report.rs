//! Convergence reports and their verdicts.

use std::fmt;

use serde::{Serialize, Serializer};

/// Default slack of the boundedness rule.
pub const DEFAULT_SLACK: f64 = 1.2;

/// Scaled errors at or below this level count as exact in the boundedness rule.
pub const ROUNDOFF_FLOOR: f64 = 1e-9;

/// One measured point of a series.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub series: String,
    pub n: usize,
    pub observed: f64,
    pub predicted: f64,
    pub scaled_error: f64,
}

/// How the scaled errors of one series are judged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    /// Over the larger half of the degrees, the later values stay within `slack`
    /// times the larger of the median and the earlier maximum. Values at or below
    /// [`ROUNDOFF_FLOOR`] always pass.
    Bounded { slack: f64 },
    /// Every scaled error is below the threshold.
    Below { threshold: f64 },
    /// Scaled errors decrease strictly and the last one is at most `last`.
    Decreasing { last: f64 },
    /// Least-squares slope of `ln(scaled)` against `ln n` lies in `[lo, hi]`.
    LogSlope { lo: f64, hi: f64 },
}

impl Criterion {
    pub fn bounded() -> Self {
        Criterion::Bounded { slack: DEFAULT_SLACK }
    }

    /// `None` on success, otherwise the reason for failure.
    pub fn judge(&self, rows: &[&ReportRow]) -> Option<String> {
        let values: Vec<f64> = rows.iter().map(|r| r.scaled_error).collect();
        if values.is_empty() {
            return Some("no rows".into());
        }
        if let Some(bad) = rows.iter().find(|r| !r.scaled_error.is_finite()) {
            return Some(format!("non-finite scaled error at n = {}", bad.n));
        }
        match *self {
            Criterion::Bounded { slack } => {
                let tail = &values[values.len() / 2..];
                let start = tail.len() / 2;
                let reference = tail[..start].iter().copied().fold(median(tail), f64::max);
                let worst = tail[start..].iter().copied().fold(0.0, f64::max);
                (worst > ROUNDOFF_FLOOR && worst > slack * reference)
                    .then(|| format!("scaled error {worst:.4e} exceeds {slack} x reference {reference:.4e}"))
            }
            Criterion::Below { threshold } => {
                let worst = values.iter().copied().fold(0.0, f64::max);
                (worst >= threshold).then(|| format!("scaled error {worst:.4e} not below {threshold:e}"))
            }
            Criterion::Decreasing { last } => {
                if let Some(w) = values.windows(2).position(|w| !(w[1] < w[0])) {
                    return Some(format!("not decreasing at n = {}", rows[w + 1].n));
                }
                let end = *values.last().unwrap_or(&f64::NAN);
                (end > last).then(|| format!("final scaled error {end:.4e} above {last}"))
            }
            Criterion::LogSlope { lo, hi } => {
                let slope = log_slope(rows);
                (!(slope >= lo && slope <= hi)).then(|| format!("log-log slope {slope:.3} outside [{lo}, {hi}]"))
            }
        }
    }
}

fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(crate::scalar::cmp_f64);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Least-squares slope of `ln(scaled_error)` against `ln n`.
pub fn log_slope(rows: &[&ReportRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| ((r.n as f64).ln(), r.scaled_error.ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x / k, b + y / k));
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Outcome of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Verdict::Fail(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail(_) => write!(f, "fail"),
            Verdict::Skipped(reason) => write!(f, "skipped({reason})"),
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A series label with its criterion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesSpec {
    pub label: String,
    pub criterion: Criterion,
}

/// Rows of one validator family with the verdict derived from the series criteria.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub family: String,
    pub verdict: Verdict,
    /// Reason behind a failing verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub slack: f64,
    pub series: Vec<SeriesSpec>,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
}

impl ConvergenceReport {
    pub fn new(family: impl Into<String>) -> Self {
        ConvergenceReport {
            family: family.into(),
            verdict: Verdict::Skipped("no series".into()),
            reason: None,
            slack: DEFAULT_SLACK,
            series: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Report that was not run.
    pub fn skipped(family: impl Into<String>, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        let mut r = ConvergenceReport::new(family);
        r.verdict = Verdict::Skipped(reason);
        r
    }

    /// Declares a series; rows are added with [`Self::push`].
    pub fn series(&mut self, label: impl Into<String>, criterion: Criterion) {
        self.series.push(SeriesSpec { label: label.into(), criterion });
    }

    pub fn push(&mut self, series: &str, n: usize, observed: f64, predicted: f64, scaled_error: f64) {
        self.rows.push(ReportRow { series: series.to_string(), n, observed, predicted, scaled_error });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Sorts rows and derives the verdict from every declared series.
    pub fn finish(mut self) -> Self {
        let order: Vec<&str> = self.series.iter().map(|s| s.label.as_str()).collect();
        let key = |r: &ReportRow| (order.iter().position(|l| *l == r.series).unwrap_or(usize::MAX), r.n);
        let mut rows = std::mem::take(&mut self.rows);
        rows.sort_by_key(key);
        self.rows = rows;
        let mut failures = Vec::new();
        for s in &self.series {
            let rows: Vec<&ReportRow> = self.rows.iter().filter(|r| r.series == s.label).collect();
            if let Some(reason) = s.criterion.judge(&rows) {
                failures.push(format!("{}: {reason}", s.label));
            }
        }
        if self.series.is_empty() {
            self.verdict = Verdict::Skipped("no series".into());
        } else if failures.is_empty() {
            self.verdict = Verdict::Pass;
            self.reason = None;
        } else {
            let reason = failures.join("; ");
            self.verdict = Verdict::Fail(reason.clone());
            self.reason = Some(reason);
        }
        self
    }

    /// Rows of one series.
    pub fn series_rows(&self, label: &str) -> Vec<&ReportRow> {
        self.rows.iter().filter(|r| r.series == label).collect()
    }
}
