//! Scenario files (JSON, `"schema": 1`).
//!
//! ```json
//! {
//!   "schema": 1,
//!   "ambient": "sphere" | {"catalog": "sphere", "params": {"m": 4}}
//!            | {"metric": [["1+x2^2", "0"], ["0", "1"]], "complex_structure": [[...]]}
//!            | {"n": 2, "potential": "ln(1 + x1^2 + y1^2 + x2^2 + y2^2)"},
//!   "immersion": "round-sphere" | {"catalog": ..., "params": ...}
//!              | {"domain_dim": 2, "components": ["u1", "u2", "u1*u2"]},
//!   "points": [[0.1, 0.2]] | {"explicit": [[...]], "random": 8, "seed": 1, "box": [[-1, 1], [-1, 1]]},
//!   "checks": ["special", "codazzi"],
//!   "tolerances": {"exact": 1e-8, "fd": 1e-4},
//!   "samples": 64,
//!   "seed": 42,
//!   "output": {"format": "json"}
//! }
//! ```

use std::path::Path;

use serde::Deserialize;
use serde_json::{Map, Value};

use super::{CheckName, RunConfig, Subject};
use crate::catalog::{self, EntryKind, Instance, Params};
use crate::error::{GeoError, Result};
use crate::immersion::{Ambient, ImmersionChart};
use crate::kahler::{metric_from_kahler_potential, parse_potential, ComplexStructureField, KahlerChart};
use crate::riemann::MetricChart;
use crate::sampling::{stream, uniform_in_box, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::Tolerances;

pub const SCHEMA_VERSION: u32 = 1;
const DEFAULT_RANDOM_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(GeoError::UnknownName {
                kind: "format",
                name: other.into(),
                valid: vec!["text".into(), "json".into()],
            }),
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub tol_exact: Option<f64>,
    pub tol_fd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub subject: Subject,
    pub points: Vec<Vec<f64>>,
    pub checks: Vec<CheckName>,
    pub config: RunConfig,
    pub format: Option<Format>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: Option<u32>,
    ambient: Option<Value>,
    immersion: Option<Value>,
    points: Option<Value>,
    checks: Vec<String>,
    tolerances: Option<RawTolerances>,
    samples: Option<usize>,
    seed: Option<u64>,
    output: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTolerances {
    exact: Option<f64>,
    fd: Option<f64>,
}

pub fn load_scenario(path: &Path, overrides: &Overrides) -> Result<Scenario> {
    let text = std::fs::read_to_string(path).map_err(|e| GeoError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text, overrides)
}

fn err(msg: impl Into<String>) -> GeoError {
    GeoError::Scenario(msg.into())
}

pub fn parse_scenario(text: &str, overrides: &Overrides) -> Result<Scenario> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| err(format!("invalid scenario JSON: {e}")))?;
    if let Some(v) = raw.schema {
        if v != SCHEMA_VERSION {
            return Err(err(format!(
                "unsupported schema version {v} (expected {SCHEMA_VERSION})"
            )));
        }
    }
    let checks = raw
        .checks
        .iter()
        .map(|c| CheckName::from_name(c))
        .collect::<Result<Vec<_>>>()?;
    if checks.is_empty() {
        return Err(err("no checks requested"));
    }

    let subject = build_subject(raw.ambient.as_ref(), raw.immersion.as_ref())?;
    subject.validate(&checks)?;

    let mut tolerances = Tolerances::default();
    if let Some(t) = raw.tolerances {
        tolerances.exact = t.exact.unwrap_or(tolerances.exact);
        tolerances.fd = t.fd.unwrap_or(tolerances.fd);
    }
    tolerances.exact = overrides.tol_exact.unwrap_or(tolerances.exact);
    tolerances.fd = overrides.tol_fd.unwrap_or(tolerances.fd);
    if !(tolerances.exact > 0.0 && tolerances.fd > 0.0) {
        return Err(err("tolerances must be positive"));
    }
    let seed = overrides.seed.or(raw.seed).unwrap_or(DEFAULT_SEED);

    let points = build_points(raw.points.as_ref(), &subject, seed)?;

    let format = match &raw.output {
        None => None,
        Some(Value::String(s)) => Some(Format::parse(s)?),
        Some(Value::Object(o)) => match o.get("format") {
            Some(Value::String(s)) => Some(Format::parse(s)?),
            None => None,
            Some(other) => return Err(err(format!("output.format must be a string, got {other}"))),
        },
        Some(other) => return Err(err(format!("invalid output field {other}"))),
    };

    Ok(Scenario {
        subject,
        points,
        checks,
        config: RunConfig {
            tolerances,
            samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
            seed,
        },
        format,
    })
}

fn catalog_ref(v: &Value) -> Result<Option<(String, Params)>> {
    match v {
        Value::String(s) => Ok(Some((s.clone(), Params::new()))),
        Value::Object(o) if o.contains_key("catalog") => {
            let name = o
                .get("catalog")
                .and_then(Value::as_str)
                .ok_or_else(|| err("'catalog' must be a string"))?;
            for k in o.keys() {
                if k != "catalog" && k != "params" {
                    return Err(err(format!("unexpected field '{k}' next to 'catalog'")));
                }
            }
            let params = match o.get("params") {
                None => Params::new(),
                Some(Value::Object(p)) => p.clone(),
                Some(other) => return Err(err(format!("'params' must be an object, got {other}"))),
            };
            Ok(Some((name.to_string(), params)))
        }
        _ => Ok(None),
    }
}

fn build_subject(ambient: Option<&Value>, immersion: Option<&Value>) -> Result<Subject> {
    let catalog_immersion = immersion.map(catalog_ref).transpose()?.flatten();
    if let Some((name, mut params)) = catalog_immersion {
        if catalog::entry(&name)?.kind != EntryKind::Immersion {
            return Err(err(format!("'{name}' is not an immersion")));
        }
        let declares_ambient = catalog::entry(&name)?.params.iter().any(|p| p.name == "ambient");
        if let Some(a) = ambient {
            match (catalog_ref(a)?, declares_ambient) {
                (Some((amb, amb_params)), true) if amb_params.is_empty() => {
                    params.entry("ambient").or_insert(Value::String(amb));
                }
                _ => {
                    return Err(err(format!(
                        "immersion '{name}' builds its own ambient; give it as the immersion's \"ambient\" parameter or omit the ambient field"
                    )))
                }
            }
        }
        let Instance::Immersion(im) = catalog::instantiate(&name, &params)? else {
            unreachable!("immersion entry");
        };
        return Ok(Subject {
            ambient: im.ambient.clone(),
            immersion: Some(im),
        });
    }

    let ambient = build_ambient(ambient.ok_or_else(|| err("missing 'ambient'"))?)?;
    let immersion = match immersion {
        None => None,
        Some(Value::Object(o)) => Some(inline_immersion(o, ambient.clone())?),
        Some(other) => return Err(err(format!("invalid immersion {other}"))),
    };
    Ok(Subject { ambient, immersion })
}

fn string_matrix(v: &Value, what: &str) -> Result<Vec<Vec<String>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| err(format!("'{what}' must be a list of rows")))?;
    rows.iter()
        .map(|row| {
            row.as_array()
                .ok_or_else(|| err(format!("'{what}' rows must be lists")))?
                .iter()
                .map(|e| match e {
                    Value::String(s) => Ok(s.clone()),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(err(format!("'{what}' entries must be strings or numbers, got {other}"))),
                })
                .collect()
        })
        .collect()
}

fn build_ambient(v: &Value) -> Result<Ambient> {
    if let Some((name, params)) = catalog_ref(v)? {
        let inst = catalog::instantiate(&name, &params)?;
        return inst
            .into_ambient()
            .ok_or_else(|| err(format!("'{name}' is an immersion, not an ambient chart")));
    }
    let o = v.as_object().ok_or_else(|| err(format!("invalid ambient {v}")))?;
    let known = ["name", "dim", "metric", "complex_structure", "n", "potential"];
    for k in o.keys() {
        if !known.contains(&k.as_str()) {
            return Err(err(format!("unexpected ambient field '{k}'")));
        }
    }
    let name = o.get("name").and_then(Value::as_str).unwrap_or("inline").to_string();

    if let Some(src) = o.get("potential") {
        let src = src.as_str().ok_or_else(|| err("'potential' must be a string"))?;
        let n = o
            .get("n")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1)
            .ok_or_else(|| err("a potential needs a complex dimension 'n' >= 1"))? as usize;
        match o.get("complex_structure") {
            None => {}
            Some(Value::String(s)) if s == "standard" => {}
            Some(_) => return Err(err("a potential ambient uses the standard complex structure")),
        }
        let phi = parse_potential(src, n)?;
        return Ok(Ambient::Kahler(metric_from_kahler_potential(name, phi, n, None)?));
    }

    let rows = string_matrix(
        o.get("metric")
            .ok_or_else(|| err("ambient needs 'metric' or 'potential'"))?,
        "metric",
    )?;
    if let Some(d) = o.get("dim") {
        if d.as_u64() != Some(rows.len() as u64) {
            return Err(err(format!("'dim' is {d} but the metric has {} rows", rows.len())));
        }
    }
    let metric = MetricChart::from_strings(name, &rows)?;
    match o.get("complex_structure") {
        None => Ok(Ambient::Riemannian(metric)),
        Some(Value::String(s)) if s == "standard" => {
            let j = ComplexStructureField::standard(metric.dim);
            Ok(Ambient::Kahler(KahlerChart::from_metric(metric, j)?))
        }
        Some(js) => {
            let rows = string_matrix(js, "complex_structure")?;
            let j = ComplexStructureField::from_strings(&rows, metric.var_names())?;
            Ok(Ambient::Kahler(KahlerChart::from_metric(metric, j)?))
        }
    }
}

fn inline_immersion(o: &Map<String, Value>, ambient: Ambient) -> Result<ImmersionChart> {
    for k in o.keys() {
        if !["name", "domain_dim", "components", "box"].contains(&k.as_str()) {
            return Err(err(format!("unexpected immersion field '{k}'")));
        }
    }
    let r = o
        .get("domain_dim")
        .and_then(Value::as_u64)
        .ok_or_else(|| err("inline immersion needs 'domain_dim'"))? as usize;
    let comps: Vec<String> = o
        .get("components")
        .and_then(Value::as_array)
        .ok_or_else(|| err("inline immersion needs 'components'"))?
        .iter()
        .map(|c| {
            c.as_str()
                .map(str::to_string)
                .ok_or_else(|| err("components must be strings"))
        })
        .collect::<Result<_>>()?;
    let name = o.get("name").and_then(Value::as_str).unwrap_or("inline");
    ImmersionChart::from_strings(name, r, &comps, ambient)
}

fn parse_box(v: &Value, dim: usize) -> Result<Vec<(f64, f64)>> {
    let rows = v
        .as_array()
        .ok_or_else(|| err("'box' must be a list of [lo, hi] pairs"))?;
    if rows.len() != dim {
        return Err(err(format!(
            "'box' has {} intervals, points have dimension {dim}",
            rows.len()
        )));
    }
    rows.iter()
        .map(
            |r| match r.as_array().map(|a| a.iter().map(Value::as_f64).collect::<Vec<_>>()) {
                Some(a) if a.len() == 2 && a[0].is_some() && a[1].is_some() => {
                    let (lo, hi) = (a[0].unwrap(), a[1].unwrap());
                    if lo <= hi {
                        Ok((lo, hi))
                    } else {
                        Err(err(format!("empty interval [{lo}, {hi}]")))
                    }
                }
                _ => Err(err(format!("invalid interval {r}"))),
            },
        )
        .collect()
}

fn explicit_points(v: &Value, dim: usize) -> Result<Vec<Vec<f64>>> {
    let list = v
        .as_array()
        .ok_or_else(|| err("points must be a list of coordinate lists"))?;
    list.iter()
        .map(|p| {
            let coords: Option<Vec<f64>> = p.as_array().and_then(|a| a.iter().map(Value::as_f64).collect());
            match coords {
                Some(c) if c.len() == dim => Ok(c),
                Some(c) => Err(err(format!("point {p} has dimension {}, expected {dim}", c.len()))),
                None => Err(err(format!("invalid point {p}"))),
            }
        })
        .collect()
}

fn default_box(subject: &Subject) -> Vec<(f64, f64)> {
    let hint = match &subject.immersion {
        Some(im) => im.domain_hint.clone(),
        None => subject.ambient.metric().domain_hint.clone(),
    };
    hint.unwrap_or_else(|| vec![(-0.5, 0.5); subject.point_dim()])
}

/// Points from the scenario; random points are drawn from their own stream.
fn build_points(v: Option<&Value>, subject: &Subject, seed: u64) -> Result<Vec<Vec<f64>>> {
    let dim = subject.point_dim();
    let random = |n: usize, s: u64, bx: Vec<(f64, f64)>| {
        let mut rng = stream(s, 0, "points");
        (0..n).map(|_| uniform_in_box(&mut rng, &bx)).collect::<Vec<_>>()
    };
    let points = match v {
        None => random(DEFAULT_RANDOM_POINTS, seed, default_box(subject)),
        Some(Value::Array(_)) => explicit_points(v.unwrap(), dim)?,
        Some(Value::Object(o)) => {
            for k in o.keys() {
                if !["explicit", "random", "seed", "box"].contains(&k.as_str()) {
                    return Err(err(format!("unexpected points field '{k}'")));
                }
            }
            let mut pts = match o.get("explicit") {
                Some(e) => explicit_points(e, dim)?,
                None => Vec::new(),
            };
            if let Some(n) = o.get("random") {
                let n = n
                    .as_u64()
                    .ok_or_else(|| err("'random' must be a non-negative integer"))? as usize;
                let s = match o.get("seed") {
                    Some(s) => s
                        .as_u64()
                        .ok_or_else(|| err("points 'seed' must be a non-negative integer"))?,
                    None => seed,
                };
                let bx = match o.get("box") {
                    Some(b) => parse_box(b, dim)?,
                    None => default_box(subject),
                };
                pts.extend(random(n, s, bx));
            }
            pts
        }
        Some(other) => return Err(err(format!("invalid points {other}"))),
    };
    if points.is_empty() {
        return Err(err("no points to evaluate"));
    }
    Ok(points)
}
