use std::fmt::Write as _;

use super::grid::GridSpec;
use crate::scalar::format_float;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub params: Vec<f64>,
    pub margin: f64,
}

/// Outcome of a grid or property check.
///
/// `passed ⇔ violations.is_empty() ⇔ min_margin ≥ -tolerance` (strict `>`
/// for claims of strict inequality).
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub claim_id: String,
    pub grid: GridSpec,
    pub param_names: Vec<String>,
    pub tolerance: f64,
    pub strict: bool,
    pub min_margin: f64,
    /// Parameters at the smallest margin.
    pub argmin: Option<Vec<f64>>,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub evaluations: usize,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// One row per violation: `claim_id,<param names>,margin`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("claim_id");
        for n in &self.param_names {
            out.push(',');
            out.push_str(n);
        }
        out.push_str(",margin\n");
        for v in &self.violations {
            out.push_str(&self.claim_id);
            for p in &v.params {
                let _ = write!(out, ",{}", format_float(*p));
            }
            let _ = writeln!(out, ",{}", format_float(v.margin));
        }
        out
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} min_margin={} violations={} evaluations={} tolerance={:e}",
            self.claim_id,
            if self.passed { "PASS" } else { "FAIL" },
            format_float(self.min_margin),
            self.violations.len(),
            self.evaluations,
            self.tolerance,
        )
    }
}

/// Accumulates margins in evaluation order; the merge is deterministic.
pub(crate) struct ReportBuilder {
    report: VerificationReport,
}

impl ReportBuilder {
    pub fn new(claim_id: &str, grid: GridSpec, param_names: &[&str], tolerance: f64) -> Self {
        ReportBuilder {
            report: VerificationReport {
                claim_id: claim_id.to_string(),
                grid,
                param_names: param_names.iter().map(|s| s.to_string()).collect(),
                tolerance,
                strict: false,
                min_margin: f64::INFINITY,
                argmin: None,
                violations: Vec::new(),
                passed: true,
                evaluations: 0,
                notes: Vec::new(),
            },
        }
    }

    /// Violation iff `margin ≤ -tolerance` instead of `< -tolerance`.
    pub fn strict(mut self) -> Self {
        self.report.strict = true;
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.report.notes.push(note.into());
    }

    pub fn record(&mut self, params: &[f64], margin: f64) {
        let r = &mut self.report;
        r.evaluations += 1;
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        if margin < r.min_margin {
            r.min_margin = margin;
            r.argmin = Some(params.to_vec());
        }
        let violated = if r.strict { margin <= -r.tolerance } else { margin < -r.tolerance };
        if violated {
            r.violations.push(Violation { params: params.to_vec(), margin });
        }
    }

    pub fn add_evaluations(&mut self, n: usize) {
        self.report.evaluations += n;
    }

    pub fn finish(mut self) -> VerificationReport {
        self.report.passed = self.report.violations.is_empty();
        self.report
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_hold() {
        let mut b = ReportBuilder::new("demo", GridSpec::default(), &["y"], 1e-9);
        b.record(&[1.0], 0.5);
        b.record(&[2.0], -5e-10);
        let r = b.finish();
        assert!(r.passed && r.violations.is_empty() && r.min_margin >= -r.tolerance);
        assert_eq!(r.argmin, Some(vec![2.0]));

        let mut b = ReportBuilder::new("demo", GridSpec::default(), &["y"], 1e-9);
        b.record(&[1.0], -1e-3);
        b.record(&[2.0], f64::NAN);
        let r = b.finish();
        assert!(!r.passed);
        assert_eq!(r.violations.len(), 2);
        assert_eq!(r.min_margin, f64::NEG_INFINITY);
    }

    #[test]
    fn strict_boundary() {
        let mut b = ReportBuilder::new("lt", GridSpec::default(), &["eps"], 0.0).strict();
        b.record(&[1.0], 0.0);
        assert!(!b.finish().passed);
    }

    #[test]
    fn csv_layout_is_stable() {
        let mut b = ReportBuilder::new("thm1", GridSpec::default(), &["gamma", "y1", "y2"], 1e-9);
        b.record(&[1.0, 0.5, 2.0], -0.25);
        let csv = b.finish().to_csv();
        assert_eq!(
            csv,
            "claim_id,gamma,y1,y2,margin\nthm1,1.0000000000000000e0,5.0000000000000000e-1,2.0000000000000000e0,-2.5000000000000000e-1\n"
        );
    }
}
