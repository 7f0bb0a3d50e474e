use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::scenario::{Scenario, SCHEMA_VERSION};
use super::{run_point, CheckName};
use crate::error::{GeoError, Result};
use crate::verdict::Outcome;
use crate::Tolerances;

/// One (point, check) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub point_index: usize,
    pub point: Vec<f64>,
    pub check: CheckName,
    pub outcome: Outcome,
    pub pass: bool,
    pub defect: Option<f64>,
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub details: BTreeMap<String, f64>,
    pub statement: &'static str,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub not_applicable: usize,
    pub error: usize,
}

impl Summary {
    pub fn add(&mut self, o: Outcome) {
        self.total += 1;
        match o {
            Outcome::Pass => self.pass += 1,
            Outcome::Fail => self.fail += 1,
            Outcome::Skipped => self.skipped += 1,
            Outcome::NotApplicable => self.not_applicable += 1,
            Outcome::Error => self.error += 1,
        }
    }
}

/// Report of a scenario run. Wall time is not part of it so that reports
/// are byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub tolerances: Tolerances,
    pub ambient: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub immersion: Option<String>,
    pub rows: Vec<CheckRow>,
    pub summary: Summary,
}

impl CheckReport {
    /// 0 if every cell passed or was inapplicable, 1 on any failure, 2 on
    /// any evaluation error.
    pub fn exit_code(&self) -> i32 {
        if self.summary.error > 0 {
            2
        } else if self.summary.fail > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub(crate) fn thread_pool(parallel: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallel.max(1))
        .build()
        .map_err(|e| GeoError::Io(format!("cannot start worker threads: {e}")))
}

impl Scenario {
    /// Runs every (point × check) cell on `parallel` worker threads. Row
    /// order follows the input order.
    pub fn run(&self, parallel: usize) -> Result<CheckReport> {
        let pool = thread_pool(parallel)?;
        let per_point: Vec<_> = pool.install(|| {
            self.points
                .par_iter()
                .enumerate()
                .map(|(i, p)| run_point(&self.subject, &self.checks, p, i, &self.config))
                .collect()
        });
        let mut rows = Vec::new();
        let mut summary = Summary::default();
        for (i, verdicts) in per_point.into_iter().enumerate() {
            for (&check, v) in self.checks.iter().zip(verdicts) {
                summary.add(v.outcome);
                let evaluated = matches!(v.outcome, Outcome::Pass | Outcome::Fail);
                rows.push(CheckRow {
                    point_index: i,
                    point: self.points[i].clone(),
                    check,
                    outcome: v.outcome,
                    pass: v.passed(),
                    defect: evaluated.then_some(v.defect),
                    tol: evaluated.then_some(v.tol),
                    reason: v.reason,
                    details: v.details,
                    statement: check.statement(),
                });
            }
        }
        Ok(CheckReport {
            schema: SCHEMA_VERSION,
            tool: "curvcheck",
            version: env!("CARGO_PKG_VERSION"),
            seed: self.config.seed,
            samples: self.config.samples,
            tolerances: self.config.tolerances,
            ambient: self.subject.ambient.name().to_string(),
            immersion: self.subject.immersion.as_ref().map(|im| im.name.clone()),
            rows,
            summary,
        })
    }
}

pub(crate) fn paint(s: &str, outcome: Outcome, color: bool) -> String {
    if !color {
        return s.to_string();
    }
    let code = match outcome {
        Outcome::Pass => "32",
        Outcome::Fail | Outcome::Error => "31",
        Outcome::Skipped | Outcome::NotApplicable => "33",
    };
    format!("\x1b[{code}m{s}\x1b[0m")
}

pub(crate) fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "PASS",
        Outcome::Fail => "FAIL",
        Outcome::Skipped => "SKIP",
        Outcome::NotApplicable => "N/A",
        Outcome::Error => "ERROR",
    }
}

fn fmt_point(p: &[f64]) -> String {
    let parts: Vec<String> = p.iter().map(|x| format!("{x:.4}")).collect();
    format!("({})", parts.join(", "))
}

pub fn render_report_text(r: &CheckReport, color: bool) -> String {
    let mut out = String::new();
    let target = match &r.immersion {
        Some(im) => format!("{im} in {}", r.ambient),
        None => r.ambient.clone(),
    };
    let _ = writeln!(
        out,
        "{target}: seed {}, tolerances exact {:e} / fd {:e}, {} samples",
        r.seed, r.tolerances.exact, r.tolerances.fd, r.samples
    );
    for row in &r.rows {
        let label = paint(&format!("{:<5}", outcome_label(row.outcome)), row.outcome, color);
        let numbers = match (row.defect, row.tol) {
            (Some(d), Some(t)) => format!("defect {d:.3e}  tol {t:.3e}"),
            _ => row.reason.clone().unwrap_or_default(),
        };
        let _ = writeln!(
            out,
            "  {label} {:<22} #{:<3} {:<28} {numbers}",
            row.check.name(),
            row.point_index,
            fmt_point(&row.point)
        );
    }
    let s = r.summary;
    let _ = writeln!(
        out,
        "{} cells: {} pass, {} fail, {} n/a, {} skipped, {} error",
        s.total, s.pass, s.fail, s.not_applicable, s.skipped, s.error
    );
    out
}
