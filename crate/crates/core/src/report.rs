//! Structured verdicts emitted by checkers and experiment drivers.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// The scan could not settle the (asymptotic) condition.
    Inconclusive,
}

/// Outcome of a single condition check.
///
/// A failing report always carries a witness `(t, lhs, rhs)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    pub witness: Option<(f64, f64, f64)>,
    pub fitted_constant: Option<f64>,
    pub notes: String,
}

impl ConditionReport {
    pub fn pass(fitted_constant: Option<f64>, notes: impl Into<String>) -> Self {
        ConditionReport {
            verdict: Verdict::Pass,
            witness: None,
            fitted_constant,
            notes: notes.into(),
        }
    }

    pub fn fail(witness: (f64, f64, f64), notes: impl Into<String>) -> Self {
        ConditionReport {
            verdict: Verdict::Fail,
            witness: Some(witness),
            fitted_constant: None,
            notes: notes.into(),
        }
    }

    pub fn inconclusive(notes: impl Into<String>) -> Self {
        ConditionReport {
            verdict: Verdict::Inconclusive,
            witness: None,
            fitted_constant: None,
            notes: notes.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// One measured point of an error curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// Partial-sum degree (or Dirichlet frequency, for F_N experiments).
    pub n: u64,
    /// Truncation window in force at this row.
    pub t_n: f64,
    /// Norm or modular error(s), keyed by label (e.g. "Lp(2)", "modular(power:2)").
    pub errors: Vec<(String, f64)>,
}

/// Error curves plus the trend verdicts for one experiment run.
///
/// The JSON serialization of this struct is deterministic: identical config
/// and seed produce byte-identical reports.  Wall-clock timings are kept in
/// the accompanying flat table, never here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub config_hash: String,
    pub tool_version: String,
    /// Tolerances in force (name, value) when the run was made.
    pub tolerances: Vec<(String, f64)>,
    /// One entry per corpus function, each with rows sorted by n.
    pub curves: Vec<CurveSet>,
    /// Trend or bound verdicts derived from the curves.
    pub checks: Vec<NamedCheck>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveSet {
    pub function: String,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub report: ConditionReport,
}

impl ConvergenceReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.report.verdict != Verdict::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
