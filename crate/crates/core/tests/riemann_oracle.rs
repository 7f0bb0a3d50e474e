mod common;

use curvcheck::catalog::{instantiate, list_catalog, EntryKind, Instance, Params};
use curvcheck::riemann::{
    constant_curvature_check_at, curvature_at, einstein_check_at, ricci, riemann_inner, sectional, CurvatureData,
    MetricChart,
};
use curvcheck::sampling::{gaussian_vector, stream};
use curvcheck::GeoError;
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Curvature from metric values alone: Christoffel symbols by central
/// differences of g, then R by central differences of those.
struct FdOracle<'a> {
    chart: &'a MetricChart,
}

impl FdOracle<'_> {
    fn g(&self, x: &[f64]) -> DMatrix<f64> {
        self.chart.metric_at(x).unwrap()
    }

    fn christoffel(&self, x: &[f64]) -> Vec<f64> {
        let m = x.len();
        let h = 1e-5;
        let mut dg = vec![0.0; m * m * m];
        for k in 0..m {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[k] += h;
            xm[k] -= h;
            let d = (self.g(&xp) - self.g(&xm)) / (2.0 * h);
            for i in 0..m {
                for j in 0..m {
                    dg[(k * m + i) * m + j] = d[(i, j)];
                }
            }
        }
        let gi = self.g(x).try_inverse().unwrap();
        let mut gamma = vec![0.0; m * m * m];
        for k in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let mut s = 0.0;
                    for l in 0..m {
                        s += gi[(k, l)] * (dg[(i * m + j) * m + l] + dg[(j * m + i) * m + l] - dg[(l * m + i) * m + j]);
                    }
                    gamma[(k * m + i) * m + j] = 0.5 * s;
                }
            }
        }
        gamma
    }

    /// `R_abcd = ⟨R(∂a,∂b)∂c, ∂d⟩` with `R(X,Y) = ∇X∇Y − ∇Y∇X − ∇[X,Y]`.
    fn riemann(&self, x: &[f64]) -> Vec<f64> {
        let m = x.len();
        let h = 1e-3;
        let gam = self.christoffel(x);
        let mut dgam = vec![vec![0.0; m * m * m]; m];
        for (a, slot) in dgam.iter_mut().enumerate() {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[a] += h;
            xm[a] -= h;
            let (gp, gm) = (self.christoffel(&xp), self.christoffel(&xm));
            for (s, (p, q)) in slot.iter_mut().zip(gp.iter().zip(&gm)) {
                *s = (p - q) / (2.0 * h);
            }
        }
        let g = self.g(x);
        let ga = |f: usize, i: usize, j: usize| gam[(f * m + i) * m + j];
        let mut r = vec![0.0; m * m * m * m];
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let up: Vec<f64> = (0..m)
                        .map(|f| {
                            let mut v = dgam[a][(f * m + b) * m + c] - dgam[b][(f * m + a) * m + c];
                            for e in 0..m {
                                v += ga(e, b, c) * ga(f, a, e) - ga(e, a, c) * ga(f, b, e);
                            }
                            v
                        })
                        .collect();
                    for d in 0..m {
                        r[((a * m + b) * m + c) * m + d] = (0..m).map(|f| up[f] * g[(f, d)]).sum();
                    }
                }
            }
        }
        r
    }
}

fn ambient_charts() -> Vec<(String, MetricChart)> {
    list_catalog()
        .into_iter()
        .filter(|e| e.kind != EntryKind::Immersion)
        .map(|e| {
            let chart = match instantiate(e.name, &Params::new()).unwrap() {
                Instance::Metric(m) => m,
                Instance::Kahler(k) => k.metric,
                Instance::Immersion(_) => unreachable!(),
            };
            (e.name.to_string(), chart)
        })
        .collect()
}

fn probe_points(chart: &MetricChart, tag: &str, n: usize) -> Vec<Vec<f64>> {
    let bounds = chart
        .domain_hint
        .clone()
        .unwrap_or_else(|| common::cube(chart.dim, 0.5));
    common::points(11, tag, &bounds, n)
}

#[test]
fn jet_curvature_matches_difference_oracle_on_every_catalog_metric() {
    for (name, chart) in ambient_charts() {
        let oracle = FdOracle { chart: &chart };
        for x in probe_points(&chart, &name, 3) {
            let cd = curvature_at(&chart, &x).unwrap();
            let r = oracle.riemann(&x);
            let scale = 1.0 + cd.max_abs_riemann();
            let worst = r
                .iter()
                .zip(&cd.riemann)
                .fold(0.0_f64, |w, (a, b)| w.max((a - b).abs()));
            assert!(worst <= 1e-5 * scale, "{name} at {x:?}: difference {worst:.3e}");

            let gam = oracle.christoffel(&x);
            let worst = gam
                .iter()
                .zip(&cd.christoffel)
                .fold(0.0_f64, |w, (a, b)| w.max((a - b).abs()));
            assert!(
                worst <= 1e-7 * (1.0 + curvcheck::linalg::max_abs(&cd.christoffel)),
                "{name}: Γ {worst:.3e}"
            );
        }
    }
}

fn space_form_model(cd: &CurvatureData, rho: f64) -> f64 {
    let m = cd.dim;
    let g = &cd.g;
    let mut worst = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let model = rho * (g[(a, d)] * g[(b, c)] - g[(a, c)] * g[(b, d)]);
                    worst = worst.max((cd.r(a, b, c, d) - model).abs());
                }
            }
        }
    }
    worst
}

#[test]
fn space_forms_have_the_requested_curvature() {
    for (name, k, m) in [
        ("sphere", 1.0, 3),
        ("sphere", 4.0, 2),
        ("hyperbolic", -1.0, 3),
        ("hyperbolic", -0.25, 4),
    ] {
        let chart = common::metric(name, &format!(r#"{{"m": {m}, "curvature": {k}}}"#));
        for x in probe_points(&chart, name, 10) {
            let cd = curvature_at(&chart, &x).unwrap();
            let scale = 1.0 + cd.max_abs_riemann();
            assert!(space_form_model(&cd, k) <= 1e-10 * scale, "{name} K={k} at {x:?}");
            let v = constant_curvature_check_at(&cd, 1e-8).unwrap();
            assert!(v.passed());
            assert!((v.detail("rho").unwrap() - k).abs() <= 1e-8 * scale);
            // Ric = (m − 1) K g
            let mut rng = stream(3, 0, "ricci");
            let (u, w) = (gaussian_vector(&mut rng, m), gaussian_vector(&mut rng, m));
            let want = (m as f64 - 1.0) * k * cd.inner(&u, &w);
            assert!((ricci(&cd, &u, &w).unwrap() - want).abs() <= 1e-9 * scale * (1.0 + want.abs()));
        }
    }
}

#[test]
fn flat_metric_has_zero_curvature_and_no_sign_flip() {
    let chart = common::metric("euclidean", r#"{"m": 4}"#);
    let cd = curvature_at(&chart, &[0.1, 0.2, 0.3, 0.4]).unwrap();
    assert_eq!(cd.max_abs_riemann(), 0.0);

    // A sign error in the convention would report −1 on the round sphere.
    let chart = common::metric("sphere", r#"{"m": 2}"#);
    let cd = curvature_at(&chart, &[0.3, -0.2]).unwrap();
    let k = sectional(&cd, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
    assert!((k - 1.0).abs() < 1e-12, "{k}");
}

#[test]
fn gaussian_curvature_of_a_diagonal_surface() {
    // E = 1 + y², G = 1 + x²: K = −(1/2√EG)(∂x(G_x/√EG) + ∂y(E_y/√EG))
    let chart = common::metric("bumpy2", r#"{"m": 2}"#);
    let w = |x: f64, y: f64| ((1.0 + y * y) * (1.0 + x * x)).sqrt();
    let px = |x: f64, y: f64| 2.0 * x / w(x, y);
    let py = |x: f64, y: f64| 2.0 * y / w(x, y);
    let h = 1e-5;
    for p in probe_points(&chart, "bumpy", 10) {
        let (x, y) = (p[0], p[1]);
        let dx = (px(x + h, y) - px(x - h, y)) / (2.0 * h);
        let dy = (py(x, y + h) - py(x, y - h)) / (2.0 * h);
        let want = -(dx + dy) / (2.0 * w(x, y));
        let cd = curvature_at(&chart, &p).unwrap();
        let k = sectional(&cd, &[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert!((k - want).abs() < 1e-8, "at {p:?}: {k} vs {want}");
    }
}

#[test]
fn product_of_spheres_splits() {
    let chart = common::metric("s2xs2", "");
    for x in probe_points(&chart, "s2xs2", 10) {
        let cd = curvature_at(&chart, &x).unwrap();
        let e = |i: usize| curvcheck::linalg::basis_vector(4, i);
        let k12 = sectional(&cd, &e(0), &e(1)).unwrap();
        let k34 = sectional(&cd, &e(2), &e(3)).unwrap();
        assert!((k12 - 1.0).abs() < 1e-10 && (k34 - 1.0).abs() < 1e-10);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert!(sectional(&cd, &e(i), &e(j)).unwrap().abs() < 1e-12);
        }
        // every component mixing the factors vanishes
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let factors = [a, b, c, d].map(|i| i / 2);
                        if factors.iter().any(|&f| f != factors[0]) {
                            assert!(cd.r(a, b, c, d).abs() < 1e-12);
                        }
                    }
                }
            }
        }
        assert!(einstein_check_at(&cd, 1e-8).unwrap().passed());
        assert!(constant_curvature_check_at(&cd, 1e-8).unwrap().failed());
    }
}

#[test]
fn non_einstein_fixtures_fail() {
    for (name, params) in [("bumpy2", r#"{"m": 3}"#), ("conformal-bump", "")] {
        let chart = common::metric(name, params);
        for x in probe_points(&chart, name, 4) {
            let cd = curvature_at(&chart, &x).unwrap();
            assert!(einstein_check_at(&cd, 1e-8).unwrap().failed(), "{name} at {x:?}");
        }
    }
}

#[test]
fn degenerate_inputs_are_errors() {
    let chart = common::metric("sphere", "");
    let cd = curvature_at(&chart, &[0.1, 0.2, 0.3]).unwrap();
    let u = [1.0, 2.0, 0.0];
    assert!(matches!(
        sectional(&cd, &u, &[2.0, 4.0, 0.0]),
        Err(GeoError::DegeneratePlane)
    ));
    assert!(riemann_inner(&cd, &u, &u, &u, &[1.0]).is_err());
    let bad = MetricChart::from_strings("bad", &[vec!["1", "2"], vec!["2", "1"]]).unwrap();
    assert!(curvature_at(&bad, &[0.0, 0.0]).is_err());
}

fn random_metric(coeffs: &[f64]) -> MetricChart {
    // symmetric perturbation of the identity; small enough to stay positive
    let e = |k: usize| coeffs[k];
    let rows = [
        vec![
            format!("1 + {:?}*x1^2 + {:?}*x2*x3", e(0), e(1)),
            format!("{:?}*x1*x2", e(2)),
            format!("{:?}*sin(x3)", e(3)),
        ],
        vec![
            format!("{:?}*x1*x2", e(2)),
            format!("1 + {:?}*x3^2 + {:?}*x1", e(4), e(5)),
            format!("{:?}*x1*x3^2", e(6)),
        ],
        vec![
            format!("{:?}*sin(x3)", e(3)),
            format!("{:?}*x1*x3^2", e(6)),
            format!("exp({:?}*x2)", e(7)),
        ],
    ];
    MetricChart::from_strings("random", &rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn curvature_has_the_algebraic_symmetries(
        coeffs in prop::collection::vec(-0.2f64..0.2, 8),
        x in prop::array::uniform3(-0.5f64..0.5),
    ) {
        let cd = curvature_at(&random_metric(&coeffs), &x).unwrap();
        let tol = 1e-10 * cd.max_abs_riemann().max(1e-300);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let r = cd.r(a, b, c, d);
                        prop_assert!((r + cd.r(b, a, c, d)).abs() <= tol);
                        prop_assert!((r + cd.r(a, b, d, c)).abs() <= tol);
                        prop_assert!((r - cd.r(c, d, a, b)).abs() <= tol);
                        prop_assert!((r + cd.r(b, c, a, d) + cd.r(c, a, b, d)).abs() <= tol);
                    }
                }
            }
        }
    }

    #[test]
    fn sectional_curvature_depends_only_on_the_plane(
        coeffs in prop::collection::vec(-0.2f64..0.2, 8),
        seed in any::<u64>(),
        mix in prop::array::uniform4(-2.0f64..2.0),
    ) {
        let det = mix[0] * mix[3] - mix[1] * mix[2];
        prop_assume!(det.abs() > 0.1);
        let cd = curvature_at(&random_metric(&coeffs), &[0.1, -0.2, 0.3]).unwrap();
        let mut rng = stream(seed, 0, "plane");
        let u = gaussian_vector(&mut rng, 3);
        let v = gaussian_vector(&mut rng, 3);
        let k = sectional(&cd, &u, &v).unwrap();
        let u2: Vec<f64> = (0..3).map(|i| mix[0] * u[i] + mix[1] * v[i]).collect();
        let v2: Vec<f64> = (0..3).map(|i| mix[2] * u[i] + mix[3] * v[i]).collect();
        let k2 = sectional(&cd, &u2, &v2).unwrap();
        prop_assert!((k - k2).abs() <= 1e-9 * (1.0 + cd.max_abs_riemann()));
    }

    #[test]
    fn riemann_inner_is_multilinear(seed in any::<u64>(), t in -3.0f64..3.0) {
        let chart = common::metric("conformal-bump", "");
        let cd = curvature_at(&chart, &[0.2, 0.1, -0.3]).unwrap();
        let mut rng = stream(seed, 0, "multilinear");
        let vs: Vec<Vec<f64>> = (0..5).map(|_| gaussian_vector(&mut rng, 3)).collect();
        let comb: Vec<f64> = (0..3).map(|i| vs[0][i] + t * vs[4][i]).collect();
        let lhs = riemann_inner(&cd, &comb, &vs[1], &vs[2], &vs[3]).unwrap();
        let rhs = riemann_inner(&cd, &vs[0], &vs[1], &vs[2], &vs[3]).unwrap()
            + t * riemann_inner(&cd, &vs[4], &vs[1], &vs[2], &vs[3]).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs() + rhs.abs()) * (1.0 + t.abs()));
    }
}
