use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
    NotApplicable,
    /// The check could not be evaluated at this point.
    Error,
}

/// Result of one check at one point: a scalar defect compared against an
/// effective threshold, plus check-specific scalars.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckVerdict {
    pub defect: f64,
    /// Effective threshold (base tolerance times the check's scale factor).
    pub tol: f64,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub details: BTreeMap<String, f64>,
}

impl CheckVerdict {
    /// Pass iff `defect <= tol`; a NaN defect fails.
    pub fn from_defect(defect: f64, tol: f64) -> Self {
        let outcome = if defect <= tol { Outcome::Pass } else { Outcome::Fail };
        Self {
            defect,
            tol,
            outcome,
            reason: None,
            details: BTreeMap::new(),
        }
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Self::inert(Outcome::Skipped, reason)
    }

    pub fn not_applicable(reason: impl Into<String>) -> Self {
        Self::inert(Outcome::NotApplicable, reason)
    }

    pub fn error(reason: impl Into<String>) -> Self {
        Self::inert(Outcome::Error, reason)
    }

    fn inert(outcome: Outcome, reason: impl Into<String>) -> Self {
        Self {
            defect: 0.0,
            tol: 0.0,
            outcome,
            reason: Some(reason.into()),
            details: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn with_reason(mut self, reason: impl Into<String>) -> Self {
        self.reason = Some(reason.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn failed(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    pub fn detail(&self, key: &str) -> Option<f64> {
        self.details.get(key).copied()
    }

    /// Combines sub-verdicts: fails if any fails, defect is the largest
    /// defect-to-threshold ratio scaled back to this verdict's threshold.
    pub fn all_of(tol: f64, parts: &[(&str, &CheckVerdict)]) -> Self {
        let mut out = Self::from_defect(0.0, tol);
        let mut any_fail = false;
        for (name, v) in parts {
            out.details.insert(format!("{name}.defect"), v.defect);
            out.details.insert(format!("{name}.tol"), v.tol);
            if v.failed() {
                any_fail = true;
            }
            if v.tol > 0.0 {
                out.defect = out.defect.max(v.defect / v.tol * tol);
            }
        }
        out.outcome = if any_fail { Outcome::Fail } else { Outcome::Pass };
        out
    }
}
