//! The bundled verification suite: every catalog expectation, evaluated on
//! its fixture at seeded probe points.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::report::{outcome_label, paint, thread_pool, Summary};
use super::scenario::SCHEMA_VERSION;
use super::{run_point, CheckName, RunConfig, Subject};
use crate::catalog::{instantiate, list_catalog, Expect, Instance, Params, Provenance};
use crate::error::{GeoError, Result};
use crate::sampling::{stream, uniform_in_box, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::verdict::{CheckVerdict, Outcome};
use crate::Tolerances;

pub const GROUPS: [&str; 3] = ["riemannian", "submanifold", "kahler"];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub only: Option<String>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub parallel: usize,
    pub points_per_fixture: usize,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            only: None,
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            parallel: 1,
            points_per_fixture: 4,
            samples: DEFAULT_SAMPLES,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteRow {
    pub group: &'static str,
    pub statement: &'static str,
    pub provenance: Provenance,
    pub fixture: &'static str,
    pub params: &'static str,
    pub check: CheckName,
    pub expected: Expect,
    pub observed: Summary,
    /// Largest defect over the probe points, with the threshold it was
    /// compared against.
    pub max_defect: Option<f64>,
    pub tol: Option<f64>,
    pub met: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub rows: usize,
    pub met: usize,
    pub unmet: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub points_per_fixture: usize,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub only: Option<String>,
    pub rows: Vec<SuiteRow>,
    pub summary: SuiteSummary,
}

impl SuiteReport {
    /// 0 if every expectation is met, 1 otherwise, 2 if a cell errored.
    pub fn exit_code(&self) -> i32 {
        if self.summary.errors > 0 {
            2
        } else if self.summary.unmet > 0 {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Planned {
    group: &'static str,
    statement: &'static str,
    provenance: Provenance,
    fixture: &'static str,
    params: &'static str,
    check: CheckName,
    expected: Expect,
    subject: Subject,
    points: Vec<Vec<f64>>,
}

fn plan(opts: &SuiteOptions) -> Result<Vec<Planned>> {
    if let Some(g) = &opts.only {
        if !GROUPS.contains(&g.as_str()) {
            return Err(GeoError::UnknownName {
                kind: "group",
                name: g.clone(),
                valid: GROUPS.iter().map(|s| s.to_string()).collect(),
            });
        }
    }
    let mut out = Vec::new();
    for entry in list_catalog() {
        for x in &entry.expected {
            if opts.only.as_deref().is_some_and(|g| g != x.group) {
                continue;
            }
            let params: Params = if x.params.is_empty() {
                Params::new()
            } else {
                serde_json::from_str(x.params).expect("catalog overrides are valid JSON")
            };
            let inst = instantiate(entry.name, &params)?;
            let hint = inst.domain_hint().map(<[_]>::to_vec);
            let dim = inst.point_dim();
            let subject = match inst {
                Instance::Immersion(im) => Subject {
                    ambient: im.ambient.clone(),
                    immersion: Some(im),
                },
                other => Subject {
                    ambient: other.into_ambient().expect("ambient"),
                    immersion: None,
                },
            };
            let check = CheckName::from_name(x.check)?;
            subject.validate(&[check])?;
            let bx = hint.unwrap_or_else(|| vec![(-0.5, 0.5); dim]);
            let mut rng = stream(opts.seed, 0, &format!("suite:{}:{}", entry.name, x.params));
            let points = (0..opts.points_per_fixture.max(1))
                .map(|_| uniform_in_box(&mut rng, &bx))
                .collect();
            out.push(Planned {
                group: x.group,
                statement: x.statement,
                provenance: x.provenance,
                fixture: entry.name,
                params: x.params,
                check,
                expected: x.expect,
                subject,
                points,
            });
        }
    }
    Ok(out)
}

/// Runs every catalog expectation (optionally one group) and compares the
/// observed verdicts with the expected ones.
pub fn verify_suite(opts: &SuiteOptions) -> Result<SuiteReport> {
    let planned = plan(opts)?;
    let cfg = RunConfig {
        tolerances: opts.tolerances,
        samples: opts.samples,
        seed: opts.seed,
    };
    let cells: Vec<(usize, usize)> = planned
        .iter()
        .enumerate()
        .flat_map(|(r, p)| (0..p.points.len()).map(move |i| (r, i)))
        .collect();
    let pool = thread_pool(opts.parallel)?;
    let verdicts: Vec<CheckVerdict> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(r, i)| {
                let p = &planned[r];
                run_point(&p.subject, &[p.check], &p.points[i], i, &cfg)
                    .pop()
                    .expect("one verdict per check")
            })
            .collect()
    });

    let mut rows = Vec::with_capacity(planned.len());
    let mut summary = SuiteSummary::default();
    let mut it = verdicts.into_iter();
    for p in &planned {
        let mut observed = Summary::default();
        let mut worst: Option<(f64, f64)> = None;
        let mut note = None;
        for v in it.by_ref().take(p.points.len()) {
            observed.add(v.outcome);
            if matches!(v.outcome, Outcome::Pass | Outcome::Fail) {
                let ratio = v.defect / v.tol;
                if worst.is_none_or(|(d, t)| ratio > d / t || ratio.is_nan()) {
                    worst = Some((v.defect, v.tol));
                }
            } else if note.is_none() {
                note = v.reason.clone();
            }
        }
        let n = observed.total;
        let met = match p.expected {
            Expect::Pass => observed.pass == n,
            Expect::Fail => observed.fail == n,
            Expect::NotApplicable => observed.not_applicable == n,
        };
        summary.rows += 1;
        if met {
            summary.met += 1;
        } else {
            summary.unmet += 1;
        }
        if observed.error > 0 {
            summary.errors += 1;
        }
        rows.push(SuiteRow {
            group: p.group,
            statement: p.statement,
            provenance: p.provenance,
            fixture: p.fixture,
            params: p.params,
            check: p.check,
            expected: p.expected,
            observed,
            max_defect: worst.map(|w| w.0),
            tol: worst.map(|w| w.1),
            met,
            note,
        });
    }
    Ok(SuiteReport {
        schema: SCHEMA_VERSION,
        tool: "curvcheck",
        version: env!("CARGO_PKG_VERSION"),
        seed: opts.seed,
        tolerances: opts.tolerances,
        points_per_fixture: opts.points_per_fixture,
        samples: opts.samples,
        only: opts.only.clone(),
        rows,
        summary,
    })
}

pub fn render_suite_text(r: &SuiteReport, color: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "verification suite: seed {}, tolerances exact {:e} / fd {:e}, {} points per fixture",
        r.seed, r.tolerances.exact, r.tolerances.fd, r.points_per_fixture
    );
    let mut group = "";
    for row in &r.rows {
        if row.group != group {
            group = row.group;
            let _ = writeln!(out, "\n[{group}]");
        }
        let status = if row.met { Outcome::Pass } else { Outcome::Fail };
        let label = paint(if row.met { "ok  " } else { "MISS" }, status, color);
        let fixture = if row.params.is_empty() {
            row.fixture.to_string()
        } else {
            format!("{} {}", row.fixture, row.params)
        };
        let expected = match row.expected {
            Expect::Pass => Outcome::Pass,
            Expect::Fail => Outcome::Fail,
            Expect::NotApplicable => Outcome::NotApplicable,
        };
        let numbers = match (row.max_defect, row.tol) {
            (Some(d), Some(t)) => format!("max defect {d:.2e} / tol {t:.2e}"),
            _ => row.note.clone().unwrap_or_default(),
        };
        let _ = writeln!(
            out,
            "  {label} {:<40} {:<20} expect {:<4} got {}/{} pass  {numbers}",
            fixture,
            row.check.name(),
            outcome_label(expected),
            row.observed.pass,
            row.observed.total
        );
        let _ = writeln!(out, "       {}", row.statement);
    }
    let s = r.summary;
    let _ = writeln!(out, "\n{} expectations: {} met, {} unmet", s.rows, s.met, s.unmet);
    out
}
