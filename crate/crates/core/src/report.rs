//! Check reports: named residuals with tolerances and verdicts.

use crate::chart::Point;
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One verified identity: the worst residual seen over the sample, the
/// tolerance it was held to, and where the worst case occurred.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    /// Stable check id, e.g. "kenmotsu.eq1.phi1" (public contract).
    pub id: String,
    /// Human-readable statement of the identity being checked.
    pub anchor: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub worst_point: Option<Vec<f64>>,
    pub worst_vector: Option<Vec<f64>>,
    pub points_sampled: usize,
    pub vectors_sampled: usize,
    pub seed: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Accumulates residuals for one check and freezes the verdict.
pub struct ReportBuilder {
    id: String,
    anchor: String,
    tolerance: f64,
    seed: u64,
    max_residual: f64,
    worst_point: Option<Vec<f64>>,
    worst_vector: Option<Vec<f64>>,
    points_sampled: usize,
    vectors_sampled: usize,
}

impl ReportBuilder {
    pub fn new(
        id: impl Into<String>,
        anchor: impl Into<String>,
        tolerance: f64,
        seed: u64,
    ) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            tolerance,
            seed,
            max_residual: 0.0,
            worst_point: None,
            worst_vector: None,
            points_sampled: 0,
            vectors_sampled: 0,
        }
    }

    pub fn record(&mut self, residual: f64, point: Option<&Point>, vector: Option<&[f64]>) {
        if residual > self.max_residual || self.worst_point.is_none() {
            self.max_residual = residual.max(self.max_residual);
            self.worst_point = point.map(|p| p.coords.clone());
            self.worst_vector = vector.map(|v| v.to_vec());
        }
    }

    pub fn set_samples(&mut self, points: usize, vectors: usize) {
        self.points_sampled = points;
        self.vectors_sampled = vectors;
    }

    pub fn finish(self) -> CheckReport {
        let verdict = if self.max_residual < self.tolerance {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        CheckReport {
            id: self.id,
            anchor: self.anchor,
            max_residual: self.max_residual,
            tolerance: self.tolerance,
            verdict,
            worst_point: self.worst_point,
            worst_vector: self.worst_vector,
            points_sampled: self.points_sampled,
            vectors_sampled: self.vectors_sampled,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Table,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "table" => Ok(ReportFormat::Table),
            other => Err(format!("unknown format `{other}` (expected json|table)")),
        }
    }
}

pub fn reports_to_json(reports: &[CheckReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

pub fn reports_to_table(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<26} {:>14} {:>10} {:>8}\n",
        "id", "residual", "tol", "verdict"
    ));
    for r in reports {
        out.push_str(&format!(
            "{:<26} {:>14.6e} {:>10.1e} {:>8}\n",
            r.id,
            r.max_residual,
            r.tolerance,
            match r.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
            }
        ));
    }
    out
}

pub fn emit_report(reports: &[CheckReport], format: ReportFormat, mut w: impl Write) -> Result<()> {
    let s = match format {
        ReportFormat::Json => reports_to_json(reports),
        ReportFormat::Table => reports_to_table(reports),
    };
    w.write_all(s.as_bytes())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report(pass: bool) -> CheckReport {
        let mut b = ReportBuilder::new(
            "kenmotsu.eq1.phi1",
            "covariant derivative identity",
            1e-10,
            0,
        );
        b.record(
            if pass { 1e-12 } else { 0.5 },
            Some(&Point::new(vec![1.0, 0.0])),
            Some(&[1.0, 0.0]),
        );
        b.set_samples(10, 8);
        b.finish()
    }

    #[test]
    fn verdict_follows_tolerance() {
        assert!(sample_report(true).passed());
        assert!(!sample_report(false).passed());
    }

    #[test]
    fn json_roundtrip() {
        let reports = vec![sample_report(true), sample_report(false)];
        let s = reports_to_json(&reports);
        let parsed: Vec<CheckReport> = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed, reports);
    }

    #[test]
    fn empty_reports() {
        assert_eq!(reports_to_json(&[]), "[]\n");
        let t = reports_to_table(&[]);
        assert!(t.starts_with("id"));
        assert_eq!(t.lines().count(), 1);
    }

    #[test]
    fn table_row_marks_pass() {
        let t = reports_to_table(&[sample_report(true)]);
        let row = t.lines().nth(1).unwrap();
        assert!(row.trim_end().ends_with("PASS"));
    }

    #[test]
    fn json_deterministic() {
        let reports = vec![sample_report(true)];
        assert_eq!(reports_to_json(&reports), reports_to_json(&reports));
    }
}
