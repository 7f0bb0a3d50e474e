//! Named, parameterized fixtures: ambient charts, Kähler charts and
//! immersions, each with a domain box and the verdicts it is expected to
//! produce.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::dsl::indexed_names;
use crate::error::{GeoError, Result};
use crate::immersion::{Ambient, ImmersionChart};
use crate::kahler::{metric_from_kahler_potential, parse_potential, KahlerChart};
use crate::riemann::MetricChart;
use crate::sampling::stream;

pub type Params = Map<String, Value>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Ambient,
    KahlerAmbient,
    Immersion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamKind {
    Int,
    Float,
    Name,
    FloatList,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub kind: ParamKind,
    /// Default value as JSON text.
    pub default: &'static str,
    pub doc: &'static str,
}

/// How an expected verdict is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// A stated theorem applies to the fixture.
    Theorem,
    /// Immediate from the construction (flat ambient, affine map, ...).
    Elementary,
    /// Established by an independent computation when the fixture was built.
    Computed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expect {
    /// Every probe point passes.
    Pass,
    /// Every probe point fails.
    Fail,
    /// Every probe point reports "not applicable".
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Expectation {
    pub check: &'static str,
    /// JSON object of parameter overrides; empty for the defaults.
    pub params: &'static str,
    pub expect: Expect,
    pub provenance: Provenance,
    pub statement: &'static str,
    /// Suite group (`--only`).
    pub group: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub kind: EntryKind,
    pub doc: &'static str,
    pub params: Vec<ParamSpec>,
    pub expected: Vec<Expectation>,
}

/// An instantiated fixture.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Metric(MetricChart),
    Kahler(KahlerChart),
    Immersion(ImmersionChart),
}

impl Instance {
    pub fn name(&self) -> &str {
        match self {
            Instance::Metric(c) => &c.name,
            Instance::Kahler(k) => k.name(),
            Instance::Immersion(im) => &im.name,
        }
    }

    /// Dimension of the points the fixture is evaluated at.
    pub fn point_dim(&self) -> usize {
        match self {
            Instance::Metric(c) => c.dim,
            Instance::Kahler(k) => k.dim(),
            Instance::Immersion(im) => im.domain_dim,
        }
    }

    pub fn domain_hint(&self) -> Option<&[(f64, f64)]> {
        match self {
            Instance::Metric(c) => c.domain_hint.as_deref(),
            Instance::Kahler(k) => k.metric.domain_hint.as_deref(),
            Instance::Immersion(im) => im.domain_hint.as_deref(),
        }
    }

    pub fn into_ambient(self) -> Option<Ambient> {
        match self {
            Instance::Metric(c) => Some(Ambient::Riemannian(c)),
            Instance::Kahler(k) => Some(Ambient::Kahler(k)),
            Instance::Immersion(_) => None,
        }
    }
}

fn p(name: &'static str, kind: ParamKind, default: &'static str, doc: &'static str) -> ParamSpec {
    ParamSpec {
        name,
        kind,
        default,
        doc,
    }
}

fn ex(
    group: &'static str,
    check: &'static str,
    params: &'static str,
    expect: Expect,
    provenance: Provenance,
    statement: &'static str,
) -> Expectation {
    Expectation {
        check,
        params,
        expect,
        provenance,
        statement,
        group,
    }
}

const SPACE_FORM_VERY_SPECIAL: &str =
    "every isometric immersion into a manifold of constant sectional curvature is very special";
const EINSTEIN_SPECIAL: &str = "every hypersurface of an Einstein manifold is special";
const UMBILICAL_EQUIV: &str =
    "for umbilical submanifolds of dimension >= 2: special <=> very special <=> extrinsic sphere";
const CURVES_VERY_SPECIAL: &str = "every immersed curve is very special";
const PRODUCT_CURVES: &str = "a product of curves in a product of surfaces is very special";
const COMPLEX_VERY_SPECIAL: &str =
    "complex and totally real immersions into a Kähler manifold of constant holomorphic curvature are very special";
const CODAZZI: &str = "Codazzi equation (R(X,Y)Z)^⊥ = (∇⊥_X α)(Y,Z) − (∇⊥_Y α)(X,Z)";
const INDEPENDENCE: &str = "Σ_i R(v_i,w)v_i does not depend on the orthonormal tangent basis";
const KAHLER_IDENTITIES: &str =
    "Kähler curvature identities: XY-form equivalences, polarization, J-invariance, Bianchi consequence";
const CONST_HOL: &str = "constant holomorphic curvature <=> ⟨R(X,JX)Y,JX⟩ = 0 for all orthonormal X, JX, Y, JY";
const CHAIN: &str = "on XY-manifolds ⟨R(X,JX)Y,JX⟩ = 2⟨R(Z,JZ)X,JY⟩ = 4⟨R(Z,X)Z,Y⟩ = 4⟨R(JZ,X)JZ,Y⟩, independent of Z";
const HOL_PROBES: &str = "constant holomorphic curvature forces the six mixed curvature scalars to vanish";

/// All entries in a fixed order.
pub fn list_catalog() -> Vec<CatalogEntry> {
    use EntryKind::*;
    use Expect::*;
    use ParamKind::*;
    use Provenance::*;
    vec![
        CatalogEntry {
            name: "euclidean",
            kind: Ambient,
            doc: "Flat R^m, g = δ.",
            params: vec![p("m", Int, "3", "dimension")],
            expected: vec![
                ex("riemannian", "constant-curvature", "", Pass, Elementary, "flat space has constant curvature 0"),
                ex("riemannian", "einstein", "", Pass, Elementary, "flat space is Einstein"),
            ],
        },
        CatalogEntry {
            name: "sphere",
            kind: Ambient,
            doc: "Round sphere of curvature κ in stereographic coordinates, g = (4/κ)/(1+|x|²)² δ.",
            params: vec![
                p("m", Int, "3", "dimension"),
                p("curvature", Float, "1", "sectional curvature κ > 0"),
            ],
            expected: vec![
                ex("riemannian", "constant-curvature", "", Pass, Computed, "the round sphere has constant curvature κ"),
                ex("riemannian", "einstein", "", Pass, Computed, "space forms are Einstein"),
            ],
        },
        CatalogEntry {
            name: "hyperbolic",
            kind: Ambient,
            doc: "Hyperbolic space of curvature κ < 0 in the Poincaré ball, g = (4/|κ|)/(1−|x|²)² δ.",
            params: vec![
                p("m", Int, "3", "dimension"),
                p("curvature", Float, "-1", "sectional curvature κ < 0"),
            ],
            expected: vec![ex(
                "riemannian",
                "constant-curvature",
                "",
                Pass,
                Computed,
                "hyperbolic space has constant curvature κ",
            )],
        },
        CatalogEntry {
            name: "s2xs2",
            kind: Ambient,
            doc: "Product of two unit spheres, each in stereographic coordinates (x1,x2) and (x3,x4). Einstein with ρ = 1, not of constant curvature.",
            params: vec![],
            expected: vec![
                ex("riemannian", "einstein", "", Pass, Computed, "a product of two unit spheres is Einstein"),
                ex("riemannian", "constant-curvature", "", Fail, Computed, "mixed planes of S²×S² are flat while factor planes have curvature 1"),
            ],
        },
        CatalogEntry {
            name: "bumpy2",
            kind: Ambient,
            doc: "diag(1+x2², 1+x1²) on the (x1,x2) plane times a flat factor R^{m−2}. Not Einstein for m ≥ 3.",
            params: vec![p("m", Int, "3", "total dimension (>= 2; m = 2 is pointwise Einstein)")],
            expected: vec![
                ex("riemannian", "einstein", "", Fail, Computed, "a curved surface times a line is not Einstein"),
                ex("riemannian", "constant-curvature", "", Fail, Computed, "bumpy2 is not a space form"),
            ],
        },
        CatalogEntry {
            name: "conformal-bump",
            kind: Ambient,
            doc: "Conformally flat exp(a·x1) δ on R^m. Not Einstein for a ≠ 0, m ≥ 3.",
            params: vec![
                p("m", Int, "3", "dimension"),
                p("amplitude", Float, "0.5", "a"),
            ],
            expected: vec![ex("riemannian", "einstein", "", Fail, Computed, "exp(a·x1) δ is not Einstein")],
        },
        CatalogEntry {
            name: "flat-cn",
            kind: KahlerAmbient,
            doc: "Flat C^n, potential |z|².",
            params: vec![p("n", Int, "2", "complex dimension")],
            expected: vec![
                ex("kahler", "kahler-verify", "", Pass, Elementary, "C^n with the standard structure is Kähler"),
                ex("kahler", "constant-hol-curvature", "", Pass, Elementary, CONST_HOL),
                ex("kahler", "kahler-identities", "", Pass, Elementary, KAHLER_IDENTITIES),
            ],
        },
        CatalogEntry {
            name: "fubini-study",
            kind: KahlerAmbient,
            doc: "Fubini–Study metric on an affine chart of CP^n, potential ln(1+|z|²).",
            params: vec![p("n", Int, "3", "complex dimension")],
            expected: vec![
                ex("kahler", "kahler-verify", "", Pass, Computed, "the Fubini–Study metric is Kähler"),
                ex("kahler", "constant-hol-curvature", "", Pass, Theorem, CONST_HOL),
                ex("kahler", "kahler-identities", "", Pass, Theorem, KAHLER_IDENTITIES),
                ex("kahler", "kahler-identities", "{\"n\":2}", Pass, Theorem, KAHLER_IDENTITIES),
                ex("kahler", "xy", "", Pass, Theorem, "constant holomorphic curvature implies the XY condition"),
                ex("kahler", "xy-chain", "", Pass, Theorem, CHAIN),
                ex("kahler", "hol-probes", "", Pass, Theorem, HOL_PROBES),
            ],
        },
        CatalogEntry {
            name: "cp1xcp1",
            kind: KahlerAmbient,
            doc: "CP¹×CP¹ with the product Fubini–Study metric, potential ln(1+|z1|²) + ln(1+|z2|²).",
            params: vec![],
            expected: vec![
                ex("kahler", "kahler-verify", "", Pass, Computed, "a product of Kähler manifolds is Kähler"),
                ex("kahler", "constant-hol-curvature", "", Fail, Computed, "CP¹×CP¹ does not have constant holomorphic curvature"),
                ex("kahler", "kahler-identities", "", Pass, Theorem, KAHLER_IDENTITIES),
            ],
        },
        CatalogEntry {
            name: "kahler-perturbed",
            kind: KahlerAmbient,
            doc: "Flat potential plus a quartic perturbation: |z|² + a(x1⁴ + y1²x2² + x1y1y2 + y2⁴) on C².",
            params: vec![p("amplitude", Float, "0.1", "perturbation amplitude a")],
            expected: vec![
                ex("kahler", "kahler-verify", "", Pass, Theorem, "a metric from a Kähler potential is Kähler"),
                ex("kahler", "kahler-identities", "", Pass, Theorem, KAHLER_IDENTITIES),
                ex("kahler", "constant-hol-curvature", "", Fail, Computed, "the perturbed metric has non-constant holomorphic curvature"),
            ],
        },
        CatalogEntry {
            name: "fs-perturbed",
            kind: KahlerAmbient,
            doc: "Fubini–Study potential on C³ plus a(x1²y2² + x1³y1 + x3²y3²).",
            params: vec![p("amplitude", Float, "0.1", "perturbation amplitude a")],
            expected: vec![
                ex("kahler", "kahler-verify", "", Pass, Theorem, "a metric from a Kähler potential is Kähler"),
                ex("kahler", "kahler-identities", "", Pass, Theorem, KAHLER_IDENTITIES),
                ex("kahler", "constant-hol-curvature", "", Fail, Computed, "the perturbed metric has non-constant holomorphic curvature"),
            ],
        },
        CatalogEntry {
            name: "linear-subspace",
            kind: Immersion,
            doc: "u ↦ (u1, …, ur, 0, …, 0) in flat R^m.",
            params: vec![p("r", Int, "2", "dimension of the subspace"), p("m", Int, "3", "ambient dimension")],
            expected: vec![
                ex("submanifold", "very-special", "", Pass, Elementary, "totally geodesic subspaces of flat space are very special"),
                ex("submanifold", "extrinsic-sphere", "", Pass, Elementary, "totally geodesic submanifolds are extrinsic spheres"),
                ex("submanifold", "codazzi", "", Pass, Elementary, CODAZZI),
            ],
        },
        CatalogEntry {
            name: "curve",
            kind: Immersion,
            doc: "A helix-like curve u ↦ (0.5 sin u + 0.2u, 0.3 cos u, 0.1u², …) in an ambient chart.",
            params: vec![p("ambient", Name, "\"sphere\"", "ambient catalog name")],
            expected: vec![
                ex("submanifold", "very-special", "", Pass, Theorem, CURVES_VERY_SPECIAL),
                ex("submanifold", "very-special", "{\"ambient\":\"s2xs2\"}", Pass, Theorem, CURVES_VERY_SPECIAL),
                ex("submanifold", "very-special", "{\"ambient\":\"conformal-bump\"}", Pass, Theorem, CURVES_VERY_SPECIAL),
            ],
        },
        CatalogEntry {
            name: "product-of-curves",
            kind: Immersion,
            doc: "A curve in each factor of S²×S², (u1, u2) ↦ (c1(u1), c2(u2)).",
            params: vec![p("ambient", Name, "\"s2xs2\"", "ambient catalog name (a 4-dimensional product chart)")],
            expected: vec![
                ex("submanifold", "very-special", "", Pass, Theorem, PRODUCT_CURVES),
                ex("submanifold", "codazzi", "", Pass, Theorem, CODAZZI),
            ],
        },
        CatalogEntry {
            name: "graph-hypersurface",
            kind: Immersion,
            doc: "Graph of a random polynomial (degree <= 4, coefficients |c| <= 0.2) over the first m−1 coordinates.",
            params: vec![
                p("ambient", Name, "\"s2xs2\"", "ambient catalog name"),
                p("seed", Int, "7", "polynomial seed"),
            ],
            expected: vec![
                ex("submanifold", "special", "", Pass, Theorem, EINSTEIN_SPECIAL),
                ex("submanifold", "very-special", "", Fail, Computed, "a generic hypersurface of S²×S² is not very special"),
                ex("submanifold", "basis-independence", "", Pass, Theorem, INDEPENDENCE),
                ex("submanifold", "codazzi", "", Pass, Theorem, CODAZZI),
                ex("submanifold", "very-special", "{\"ambient\":\"hyperbolic\"}", Pass, Theorem, SPACE_FORM_VERY_SPECIAL),
            ],
        },
        CatalogEntry {
            name: "random-surface",
            kind: Immersion,
            doc: "u ↦ (u1 + p1, u2 + p2, p3, …) with random quadratic/cubic polynomials p_i (|c| <= 0.2).",
            params: vec![
                p("ambient", Name, "\"sphere\"", "ambient catalog name"),
                p("seed", Int, "1", "polynomial seed"),
            ],
            expected: vec![
                ex("submanifold", "very-special", "", Pass, Theorem, SPACE_FORM_VERY_SPECIAL),
                ex("submanifold", "special", "{\"ambient\":\"s2xs2\"}", Fail, Computed, "a generic codimension-2 surface of S²×S² is not special"),
                ex("submanifold", "basis-independence", "", Pass, Theorem, INDEPENDENCE),
                ex("submanifold", "basis-independence", "{\"ambient\":\"s2xs2\"}", Pass, Theorem, INDEPENDENCE),
                ex("submanifold", "codazzi", "", Pass, Theorem, CODAZZI),
                ex("submanifold", "codazzi", "{\"ambient\":\"s2xs2\"}", Pass, Theorem, CODAZZI),
            ],
        },
        CatalogEntry {
            name: "round-sphere",
            kind: Immersion,
            doc: "Round 2-sphere of radius a about the origin in a 3-dimensional chart, spherical parametrization.",
            params: vec![
                p("radius", Float, "1", "radius a > 0 (coordinate radius)"),
                p("ambient", Name, "\"euclidean\"", "ambient catalog name"),
            ],
            expected: vec![
                ex("submanifold", "umbilical", "", Pass, Computed, "round spheres are umbilical"),
                ex("submanifold", "extrinsic-sphere", "", Pass, Computed, "round spheres have parallel mean curvature"),
                ex("submanifold", "special", "", Pass, Theorem, UMBILICAL_EQUIV),
                ex("submanifold", "very-special", "", Pass, Theorem, UMBILICAL_EQUIV),
                ex("submanifold", "codazzi", "", Pass, Theorem, CODAZZI),
                ex("submanifold", "umbilical", "{\"ambient\":\"conformal-bump\"}", Pass, Computed, "umbilicity is conformally invariant"),
                ex("submanifold", "extrinsic-sphere", "{\"ambient\":\"conformal-bump\"}", Fail, Computed, "the coordinate sphere in exp(a·x1) δ has non-parallel mean curvature"),
                ex("submanifold", "special", "{\"ambient\":\"conformal-bump\"}", Fail, Theorem, UMBILICAL_EQUIV),
                ex("submanifold", "very-special", "{\"ambient\":\"conformal-bump\"}", Fail, Theorem, UMBILICAL_EQUIV),
            ],
        },
        CatalogEntry {
            name: "latitude-sphere",
            kind: Immersion,
            doc: "Coordinate sphere |x| = c in the stereographic chart of the unit 3-sphere (a geodesic sphere about the pole).",
            params: vec![p("radius", Float, "0.5", "coordinate radius c > 0")],
            expected: vec![
                ex("submanifold", "umbilical", "", Pass, Computed, "small spheres of S^3 are umbilical"),
                ex("submanifold", "extrinsic-sphere", "", Pass, Computed, "small spheres of S^3 are extrinsic spheres"),
                ex("submanifold", "special", "", Pass, Theorem, UMBILICAL_EQUIV),
                ex("submanifold", "very-special", "", Pass, Theorem, UMBILICAL_EQUIV),
            ],
        },
        CatalogEntry {
            name: "equator",
            kind: Immersion,
            doc: "Equatorial S^{m−1} ⊂ S^m: the slice x_m = 0 of the stereographic chart.",
            params: vec![p("m", Int, "3", "ambient dimension")],
            expected: vec![
                ex("submanifold", "umbilical", "", Pass, Computed, "the equator is totally geodesic"),
                ex("submanifold", "extrinsic-sphere", "", Pass, Computed, "totally geodesic submanifolds are extrinsic spheres"),
                ex("submanifold", "very-special", "", Pass, Theorem, SPACE_FORM_VERY_SPECIAL),
            ],
        },
        CatalogEntry {
            name: "ellipsoid",
            kind: Immersion,
            doc: "Ellipsoid with semi-axes (a, b, c) in a 3-dimensional chart.",
            params: vec![
                p("axes", FloatList, "[1.0, 0.8, 0.6]", "semi-axes"),
                p("ambient", Name, "\"conformal-bump\"", "ambient catalog name"),
            ],
            expected: vec![
                ex("submanifold", "umbilical", "", Fail, Computed, "a non-round ellipsoid is not umbilical"),
                ex("submanifold", "extrinsic-sphere", "", Fail, Computed, "a non-round ellipsoid is not an extrinsic sphere"),
                ex("submanifold", "special", "", Fail, Computed, "the ellipsoid in exp(a·x1) δ is not special"),
                ex("submanifold", "basis-independence", "", Pass, Theorem, INDEPENDENCE),
                ex("submanifold", "codazzi", "", Pass, Theorem, CODAZZI),
                ex("submanifold", "special", "{\"ambient\":\"euclidean\"}", Pass, Elementary, "every immersion into flat space is special"),
            ],
        },
        CatalogEntry {
            name: "paraboloid",
            kind: Immersion,
            doc: "Graph z = u1² + 2u2² in flat R³.",
            params: vec![],
            expected: vec![
                ex("submanifold", "umbilical", "", Fail, Computed, "the paraboloid has two distinct principal curvatures"),
                ex("submanifold", "extrinsic-sphere", "", Fail, Computed, "the paraboloid is not an extrinsic sphere"),
                ex("submanifold", "codazzi", "", Pass, Theorem, CODAZZI),
            ],
        },
        CatalogEntry {
            name: "complex-slice",
            kind: Immersion,
            doc: "CP^k ⊂ CP^n: z_{k+1} = … = z_n = 0 in the Fubini–Study chart.",
            params: vec![p("n", Int, "3", "ambient complex dimension"), p("k", Int, "1", "slice complex dimension")],
            expected: vec![
                ex("submanifold", "very-special", "", Pass, Theorem, COMPLEX_VERY_SPECIAL),
                ex("submanifold", "very-special", "{\"k\":2}", Pass, Theorem, COMPLEX_VERY_SPECIAL),
            ],
        },
        CatalogEntry {
            name: "complex-curve",
            kind: Immersion,
            doc: "The complex curve z2 = z1² in the Fubini–Study chart of CP².",
            params: vec![],
            expected: vec![ex("submanifold", "very-special", "", Pass, Theorem, COMPLEX_VERY_SPECIAL)],
        },
        CatalogEntry {
            name: "real-slice",
            kind: Immersion,
            doc: "Totally real RP^k ⊂ CP^n: y = 0, x_{k+1} = … = x_n = 0 in the Fubini–Study chart.",
            params: vec![p("n", Int, "2", "ambient complex dimension"), p("k", Int, "2", "slice dimension")],
            expected: vec![
                ex("submanifold", "very-special", "", Pass, Theorem, COMPLEX_VERY_SPECIAL),
                ex("submanifold", "very-special", "{\"n\":3,\"k\":3}", Pass, Theorem, COMPLEX_VERY_SPECIAL),
            ],
        },
        CatalogEntry {
            name: "real-surface",
            kind: Immersion,
            doc: "Totally real surface (u1, u2 + 0.2u1², 0; 0, 0, 0) inside the real slice y = 0 of Fubini–Study CP³.",
            params: vec![],
            expected: vec![ex("submanifold", "very-special", "", Pass, Theorem, COMPLEX_VERY_SPECIAL)],
        },
    ]
}

pub fn entry(name: &str) -> Result<CatalogEntry> {
    list_catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| unknown(name))
}

fn unknown(name: &str) -> GeoError {
    GeoError::UnknownName {
        kind: "catalog entry",
        name: name.into(),
        valid: list_catalog().iter().map(|e| e.name.to_string()).collect(),
    }
}

/// Parameter lookup with defaults taken from the entry's schema.
struct Args<'a> {
    entry: &'a CatalogEntry,
    given: &'a Params,
}

impl Args<'_> {
    fn raw(&self, name: &str) -> Value {
        if let Some(v) = self.given.get(name) {
            return v.clone();
        }
        let spec = self
            .entry
            .params
            .iter()
            .find(|s| s.name == name)
            .expect("parameter declared in schema");
        serde_json::from_str(spec.default).expect("valid default")
    }

    fn bad(&self, name: &str, reason: impl Into<String>) -> GeoError {
        GeoError::InvalidParam {
            name: format!("{}.{name}", self.entry.name),
            reason: reason.into(),
        }
    }

    fn float(&self, name: &str) -> Result<f64> {
        let v = self.raw(name);
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| self.bad(name, format!("expected a number, got {v}")))
    }

    fn int(&self, name: &str, min: u64) -> Result<usize> {
        let v = self.raw(name);
        match v.as_u64() {
            Some(x) if x >= min && x <= 64 => Ok(x as usize),
            _ => Err(self.bad(name, format!("expected an integer in [{min}, 64], got {v}"))),
        }
    }

    fn seed(&self, name: &str) -> Result<u64> {
        let v = self.raw(name);
        v.as_u64()
            .ok_or_else(|| self.bad(name, format!("expected a non-negative integer, got {v}")))
    }

    fn name(&self, name: &str) -> Result<String> {
        let v = self.raw(name);
        v.as_str()
            .map(str::to_string)
            .ok_or_else(|| self.bad(name, format!("expected a catalog name, got {v}")))
    }

    fn floats(&self, name: &str) -> Result<Vec<f64>> {
        let v = self.raw(name);
        v.as_array()
            .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
            .ok_or_else(|| self.bad(name, format!("expected a list of numbers, got {v}")))
    }
}

fn sum_squares(vars: &[String]) -> String {
    vars.iter().map(|v| format!("{v}^2")).collect::<Vec<_>>().join(" + ")
}

fn cube(m: usize, half: f64) -> Vec<(f64, f64)> {
    vec![(-half, half); m]
}

fn diagonal_chart(name: &str, diag: &[String]) -> Result<MetricChart> {
    let m = diag.len();
    let rows: Vec<Vec<String>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { diag[i].clone() } else { "0".into() })
                .collect()
        })
        .collect();
    MetricChart::from_strings(name, &rows)
}

/// Builds a catalog fixture. Unknown parameter names are rejected.
pub fn instantiate(name: &str, params: &Params) -> Result<Instance> {
    let entry = entry(name)?;
    for key in params.keys() {
        if !entry.params.iter().any(|s| s.name == key) {
            return Err(GeoError::InvalidParam {
                name: format!("{name}.{key}"),
                reason: format!(
                    "unknown parameter; valid: [{}]",
                    entry.params.iter().map(|s| s.name).collect::<Vec<_>>().join(", ")
                ),
            });
        }
    }
    let a = Args {
        entry: &entry,
        given: params,
    };
    match name {
        "euclidean" => {
            let m = a.int("m", 2)?;
            Ok(Instance::Metric(
                MetricChart::conformally_flat("euclidean", m, "1")?.with_domain_hint(cube(m, 2.0)),
            ))
        }
        "sphere" | "hyperbolic" => {
            let m = a.int("m", 2)?;
            let k = a.float("curvature")?;
            let vars = indexed_names("x", m);
            let factor = if name == "sphere" {
                if k <= 0.0 {
                    return Err(a.bad("curvature", "must be > 0"));
                }
                format!("{:?}/(1 + {})^2", 4.0 / k, sum_squares(&vars))
            } else {
                if k >= 0.0 {
                    return Err(a.bad("curvature", "must be < 0"));
                }
                format!("{:?}/(1 - ({}))^2", 4.0 / -k, sum_squares(&vars))
            };
            let half = if name == "sphere" { 1.0 } else { 0.8 / (m as f64).sqrt() };
            Ok(Instance::Metric(
                MetricChart::conformally_flat(name, m, &factor)?.with_domain_hint(cube(m, half)),
            ))
        }
        "s2xs2" => {
            let f1 = "4/(1 + x1^2 + x2^2)^2".to_string();
            let f2 = "4/(1 + x3^2 + x4^2)^2".to_string();
            Ok(Instance::Metric(
                diagonal_chart("s2xs2", &[f1.clone(), f1, f2.clone(), f2])?.with_domain_hint(cube(4, 1.0)),
            ))
        }
        "bumpy2" => {
            let m = a.int("m", 2)?;
            let mut diag = vec!["1 + x2^2".to_string(), "1 + x1^2".to_string()];
            diag.extend((2..m).map(|_| "1".to_string()));
            Ok(Instance::Metric(
                diagonal_chart("bumpy2", &diag)?.with_domain_hint(cube(m, 1.0)),
            ))
        }
        "conformal-bump" => {
            let m = a.int("m", 2)?;
            let amp = a.float("amplitude")?;
            Ok(Instance::Metric(
                MetricChart::conformally_flat("conformal-bump", m, &format!("exp({amp:?}*x1)"))?
                    .with_domain_hint(cube(m, 1.5)),
            ))
        }
        "flat-cn" | "fubini-study" => {
            let n = a.int("n", 1)?;
            let mut vars = indexed_names("x", n);
            vars.extend(indexed_names("y", n));
            let src = if name == "flat-cn" {
                sum_squares(&vars)
            } else {
                format!("ln(1 + {})", sum_squares(&vars))
            };
            kahler(name, &src, n, 1.0)
        }
        "cp1xcp1" => kahler("cp1xcp1", "ln(1 + x1^2 + y1^2) + ln(1 + x2^2 + y2^2)", 2, 1.0),
        "kahler-perturbed" => {
            let amp = a.float("amplitude")?;
            let src = format!("x1^2 + y1^2 + x2^2 + y2^2 + {amp:?}*(x1^4 + y1^2*x2^2 + x1*y1*y2 + y2^4)");
            kahler(name, &src, 2, 0.6)
        }
        "fs-perturbed" => {
            let amp = a.float("amplitude")?;
            let src =
                format!("ln(1 + x1^2 + x2^2 + x3^2 + y1^2 + y2^2 + y3^2) + {amp:?}*(x1^2*y2^2 + x1^3*y1 + x3^2*y3^2)");
            kahler(name, &src, 3, 0.6)
        }
        _ => immersion(name, &a),
    }
}

fn kahler(name: &str, src: &str, n: usize, half: f64) -> Result<Instance> {
    let phi = parse_potential(src, n)?;
    let mut kc = metric_from_kahler_potential(name, phi, n, None)?;
    kc.metric = kc.metric.with_domain_hint(cube(2 * n, half));
    Ok(Instance::Kahler(kc))
}

fn ambient_named(name: &str, params: &[(&str, Value)]) -> Result<Ambient> {
    let mut map = Params::new();
    for (k, v) in params {
        map.insert((*k).to_string(), v.clone());
    }
    let e = entry(name)?;
    if e.kind == EntryKind::Immersion {
        return Err(GeoError::InvalidParam {
            name: "ambient".into(),
            reason: format!("{name} is an immersion, not an ambient chart"),
        });
    }
    // Only pass parameters the ambient actually declares.
    map.retain(|k, _| e.params.iter().any(|s| s.name == k));
    Ok(instantiate(name, &map)?.into_ambient().expect("ambient entry"))
}

fn require_dim(amb: &Ambient, dim: usize, entry: &str) -> Result<()> {
    if amb.dim() != dim {
        return Err(GeoError::InvalidParam {
            name: format!("{entry}.ambient"),
            reason: format!(
                "needs a {dim}-dimensional ambient, {} has dimension {}",
                amb.name(),
                amb.dim()
            ),
        });
    }
    Ok(())
}

fn fmt_num(c: f64) -> String {
    format!("{c:?}")
}

/// Random polynomial in `u1..ur` with monomials of total degree in
/// `[min_deg, max_deg]`, coefficients uniform in `[-amp, amp]` rounded to
/// three decimals.
pub fn random_polynomial(seed: u64, tag: &str, r: usize, min_deg: u32, max_deg: u32, amp: f64) -> String {
    use rand::Rng;
    let mut rng = stream(seed, 0, tag);
    let mut terms = Vec::new();
    for exps in monomials(r, min_deg, max_deg) {
        let c: f64 = rng.random_range(-amp..=amp);
        let c = (c * 1000.0).round() / 1000.0;
        if c == 0.0 {
            continue;
        }
        let factors: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("u{}", i + 1)
                } else {
                    format!("u{}^{e}", i + 1)
                }
            })
            .collect();
        terms.push(format!("({})*{}", fmt_num(c), factors.join("*")));
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn monomials(r: usize, min_deg: u32, max_deg: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(r, left - e, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    rec(r, max_deg, &mut Vec::new(), &mut all);
    let mut out: Vec<Vec<u32>> = all
        .into_iter()
        .filter(|m| {
            let d: u32 = m.iter().sum();
            d >= min_deg && d <= max_deg
        })
        .collect();
    out.sort_by_key(|m| (m.iter().sum::<u32>(), std::cmp::Reverse(m.clone())));
    out
}

fn build(name: &str, r: usize, comps: &[String], amb: Ambient, hint: Vec<(f64, f64)>) -> Result<Instance> {
    Ok(Instance::Immersion(
        ImmersionChart::from_strings(name, r, comps, amb)?.with_domain_hint(hint),
    ))
}

fn immersion(name: &str, a: &Args) -> Result<Instance> {
    match name {
        "linear-subspace" => {
            let r = a.int("r", 1)?;
            let m = a.int("m", 2)?;
            if r >= m {
                return Err(a.bad("r", format!("must be < m = {m}")));
            }
            let amb = ambient_named("euclidean", &[("m", m.into())])?;
            let comps: Vec<String> = (0..m)
                .map(|i| if i < r { format!("u{}", i + 1) } else { "0".into() })
                .collect();
            build(name, r, &comps, amb, cube(r, 1.0))
        }
        "curve" => {
            let amb = ambient_named(&a.name("ambient")?, &[])?;
            let m = amb.dim();
            let base = ["0.5*sin(u1) + 0.2*u1", "0.3*cos(u1)", "0.1*u1^2"];
            let comps: Vec<String> = (0..m)
                .map(|i| base.get(i).map_or_else(|| format!("0.05*u1^{}", i), |s| s.to_string()))
                .collect();
            build(name, 1, &comps, amb, vec![(-1.0, 1.0)])
        }
        "product-of-curves" => {
            let amb = ambient_named(&a.name("ambient")?, &[])?;
            require_dim(&amb, 4, name)?;
            let comps = [
                "0.5*cos(u1)".to_string(),
                "0.4*sin(u1) + 0.1*u1".to_string(),
                "u2".to_string(),
                "0.3*u2^2 - 0.2".to_string(),
            ];
            build(name, 2, &comps, amb, vec![(-1.0, 1.0), (-0.6, 0.6)])
        }
        "graph-hypersurface" => {
            let amb = ambient_named(&a.name("ambient")?, &[])?;
            let seed = a.seed("seed")?;
            let m = amb.dim();
            let r = m - 1;
            let mut comps: Vec<String> = (1..=r).map(|i| format!("u{i}")).collect();
            comps.push(random_polynomial(seed, "graph", r, 2, 4, 0.2));
            build(name, r, &comps, amb, cube(r, 0.6))
        }
        "random-surface" => {
            let amb = ambient_named(&a.name("ambient")?, &[])?;
            let seed = a.seed("seed")?;
            let m = amb.dim();
            if m < 3 {
                return Err(a.bad("ambient", "needs ambient dimension >= 3"));
            }
            let comps: Vec<String> = (0..m)
                .map(|i| {
                    let poly = random_polynomial(seed, &format!("surface-{i}"), 2, 2, 3, 0.2);
                    match i {
                        0 => format!("u1 + {poly}"),
                        1 => format!("u2 + {poly}"),
                        _ => poly,
                    }
                })
                .collect();
            build(name, 2, &comps, amb, cube(2, 0.5))
        }
        "round-sphere" => {
            let radius = a.float("radius")?;
            if radius <= 0.0 {
                return Err(a.bad("radius", "must be > 0"));
            }
            let amb = ambient_named(&a.name("ambient")?, &[])?;
            require_dim(&amb, 3, name)?;
            build(name, 2, &spherical(radius), amb, spherical_hint())
        }
        "latitude-sphere" => {
            let radius = a.float("radius")?;
            if radius <= 0.0 {
                return Err(a.bad("radius", "must be > 0"));
            }
            let amb = ambient_named("sphere", &[("m", 3.into())])?;
            build(name, 2, &spherical(radius), amb, spherical_hint())
        }
        "equator" => {
            let m = a.int("m", 3)?;
            let amb = ambient_named("sphere", &[("m", m.into())])?;
            let comps: Vec<String> = (0..m)
                .map(|i| if i + 1 < m { format!("u{}", i + 1) } else { "0".into() })
                .collect();
            build(name, m - 1, &comps, amb, cube(m - 1, 1.0))
        }
        "ellipsoid" => {
            let axes = a.floats("axes")?;
            if axes.len() != 3 || axes.iter().any(|&x| !(x > 0.0)) {
                return Err(a.bad("axes", "expected three positive semi-axes"));
            }
            let amb = ambient_named(&a.name("ambient")?, &[])?;
            require_dim(&amb, 3, name)?;
            let comps = [
                format!("{:?}*sin(u1)*cos(u2)", axes[0]),
                format!("{:?}*sin(u1)*sin(u2)", axes[1]),
                format!("{:?}*cos(u1)", axes[2]),
            ];
            build(name, 2, &comps, amb, spherical_hint())
        }
        "paraboloid" => {
            let amb = ambient_named("euclidean", &[("m", 3.into())])?;
            let comps = ["u1".to_string(), "u2".to_string(), "u1^2 + 2*u2^2".to_string()];
            build(name, 2, &comps, amb, cube(2, 1.0))
        }
        "complex-slice" => {
            let n = a.int("n", 2)?;
            let k = a.int("k", 1)?;
            if k >= n {
                return Err(a.bad("k", format!("must be < n = {n}")));
            }
            let amb = ambient_named("fubini-study", &[("n", n.into())])?;
            // x_j = u_j, y_j = u_{k+j} for j <= k
            let mut comps = vec!["0".to_string(); 2 * n];
            for j in 0..k {
                comps[j] = format!("u{}", j + 1);
                comps[n + j] = format!("u{}", k + j + 1);
            }
            build(name, 2 * k, &comps, amb, cube(2 * k, 0.6))
        }
        "complex-curve" => {
            let amb = ambient_named("fubini-study", &[("n", 2.into())])?;
            let comps = [
                "u1".to_string(),
                "u1^2 - u2^2".to_string(),
                "u2".to_string(),
                "2*u1*u2".to_string(),
            ];
            build(name, 2, &comps, amb, cube(2, 0.6))
        }
        "real-slice" => {
            let n = a.int("n", 1)?;
            let k = a.int("k", 1)?;
            if k > n {
                return Err(a.bad("k", format!("must be <= n = {n}")));
            }
            let amb = ambient_named("fubini-study", &[("n", n.into())])?;
            let comps: Vec<String> = (0..2 * n)
                .map(|i| if i < k { format!("u{}", i + 1) } else { "0".into() })
                .collect();
            build(name, k, &comps, amb, cube(k, 0.6))
        }
        "real-surface" => {
            let amb = ambient_named("fubini-study", &[("n", 3.into())])?;
            let comps = [
                "u1".to_string(),
                "u2 + 0.2*u1^2".to_string(),
                "0".to_string(),
                "0".to_string(),
                "0".to_string(),
                "0".to_string(),
            ];
            build(name, 2, &comps, amb, cube(2, 0.6))
        }
        _ => Err(unknown(name)),
    }
}

fn spherical(radius: f64) -> [String; 3] {
    [
        format!("{radius:?}*sin(u1)*cos(u2)"),
        format!("{radius:?}*sin(u1)*sin(u2)"),
        format!("{radius:?}*cos(u1)"),
    ]
}

/// Keeps away from the poles of the spherical parametrization.
fn spherical_hint() -> Vec<(f64, f64)> {
    vec![(0.4, 2.7), (-3.0, 3.0)]
}
