mod common;

use curvcheck::kahler::{
    constant_hol_curvature_check_at, hol_vanishing_probe, holomorphic_sectional_at, kahler_identity_suite_at,
    kahler_verify_at, xy_chain_at, xy_check_at, xy_equivalences_at, ComplexStructureField, KahlerChart, KahlerPoint,
};
use curvcheck::linalg::inner;
use curvcheck::sampling::{gaussian_vector, stream};
use curvcheck::{GeoError, Tolerances};
use proptest::prelude::*;

/// Model tensor of constant holomorphic curvature c:
/// `R(X,Y)Z = (c/4)[⟨Y,Z⟩X − ⟨X,Z⟩Y + ⟨JY,Z⟩JX − ⟨JX,Z⟩JY + 2⟨X,JY⟩JZ]`.
fn model(kp: &KahlerPoint, c: f64, x: &[f64], y: &[f64], z: &[f64], w: &[f64]) -> f64 {
    let g = &kp.cd.g;
    let (jx, jy, jz) = (kp.apply_j(x), kp.apply_j(y), kp.apply_j(z));
    let ip = |a: &[f64], b: &[f64]| inner(g, a, b);
    0.25 * c
        * (ip(y, z) * ip(x, w) - ip(x, z) * ip(y, w) + ip(&jy, z) * ip(&jx, w) - ip(&jx, z) * ip(&jy, w)
            + 2.0 * ip(x, &jy) * ip(&jz, w))
}

fn random_vectors(seed: u64, m: usize, k: usize) -> Vec<Vec<f64>> {
    let mut rng = stream(seed, 0, "vectors");
    (0..k).map(|_| gaussian_vector(&mut rng, m)).collect()
}

fn fs_point(n: usize, x: &[f64]) -> KahlerPoint {
    common::kahler("fubini-study", &format!(r#"{{"n": {n}}}"#))
        .at(x)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fubini_study_matches_the_constant_holomorphic_model(
        x in prop::collection::vec(-0.8f64..0.8, 4),
        seed in any::<u64>(),
    ) {
        let kp = fs_point(2, &x);
        let vs = random_vectors(seed, 4, 4);
        let got = kp.r(&vs[0], &vs[1], &vs[2], &vs[3]);
        let want = model(&kp, 4.0, &vs[0], &vs[1], &vs[2], &vs[3]);
        let size: f64 = vs.iter().map(|v| kp.cd.norm(v)).product();
        prop_assert!((got - want).abs() <= 1e-9 * (1.0 + size), "{got} vs {want}");
    }

    #[test]
    fn fubini_study_sectional_curvature_is_pinched(
        x in prop::collection::vec(-0.8f64..0.8, 6),
        seed in any::<u64>(),
    ) {
        let kp = fs_point(3, &x);
        let vs = random_vectors(seed, 6, 2);
        let k = curvcheck::riemann::sectional(&kp.cd, &vs[0], &vs[1]).unwrap();
        prop_assert!((1.0 - 1e-9..=4.0 + 1e-9).contains(&k), "sectional {k}");
        prop_assert!((holomorphic_sectional_at(&kp, &vs[0]).unwrap() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn curvature_is_j_invariant_on_perturbed_charts(
        x in prop::collection::vec(-0.5f64..0.5, 4),
        seed in any::<u64>(),
    ) {
        let kp = common::kahler("kahler-perturbed", "").at(&x).unwrap();
        let vs = random_vectors(seed, 4, 4);
        let a = kp.r(&vs[0], &vs[1], &vs[2], &vs[3]);
        let b = kp.r(&vs[0], &vs[1], &kp.apply_j(&vs[2]), &kp.apply_j(&vs[3]));
        let c = kp.r(&kp.apply_j(&vs[0]), &kp.apply_j(&vs[1]), &vs[2], &vs[3]);
        let scale = 1.0 + kp.cd.max_abs_riemann() * vs.iter().map(|v| kp.cd.norm(v)).product::<f64>();
        prop_assert!((a - b).abs() <= 1e-10 * scale && (a - c).abs() <= 1e-10 * scale);
        let h1 = holomorphic_sectional_at(&kp, &vs[0]).unwrap();
        let h2 = holomorphic_sectional_at(&kp, &kp.apply_j(&vs[0])).unwrap();
        prop_assert!((h1 - h2).abs() <= 1e-10 * scale);
    }

    /// All three XY forms vanish on constant holomorphic curvature.
    #[test]
    fn xy_forms_on_fubini_study(x in prop::collection::vec(-0.6f64..0.6, 4), seed in any::<u64>()) {
        let kp = fs_point(2, &x);
        let mut rng = stream(seed, 0, "quad");
        let q = kp.sample_quadruple(&mut rng).unwrap();
        let forms = xy_equivalences_at(&kp, &q).unwrap();
        for f in forms {
            prop_assert!(f.abs() < 1e-10);
        }
    }
}

#[test]
fn perturbed_charts_are_kahler_but_not_constant() {
    for name in ["kahler-perturbed", "fs-perturbed", "cp1xcp1"] {
        let kc = common::kahler(name, "");
        let bounds = kc.metric.domain_hint.clone().unwrap();
        for x in common::points(5, name, &bounds, 5) {
            let kp = kc.at(&x).unwrap();
            assert!(kahler_verify_at(&kp, 1e-8, 1e-4).passed(), "{name}");
            assert!(kahler_identity_suite_at(&kp, 32, 1, 1e-7).unwrap().passed(), "{name}");
            let hol = constant_hol_curvature_check_at(&kp, 32, 1, 1e-8).unwrap();
            assert!(hol.failed(), "{name} at {x:?}");
            assert!(hol.detail("hol_spread").unwrap() > 1e-3);
        }
    }
}

#[test]
fn hermitian_non_kahler_pair_is_rejected() {
    // conformally flat metric with the standard J: compatible, not parallel
    let metric = common::metric("conformal-bump", r#"{"m": 6}"#);
    let kc = KahlerChart::from_metric(metric, ComplexStructureField::standard(6)).unwrap();
    let kp = kc.at(&[0.3, 0.1, -0.2, 0.4, 0.0, 0.2]).unwrap();
    let v = kahler_verify_at(&kp, 1e-8, 1e-4);
    assert!(v.failed());
    assert!(v.detail("j_squared").unwrap() < 1e-14);
    assert!(v.detail("compatibility").unwrap() < 1e-14);
    assert!(v.detail("nabla_j").unwrap() > 1e-2);

    let s = kp.sample_sextuple(&mut stream(1, 0, "s")).unwrap();
    let tols = Tolerances::default();
    assert!(matches!(xy_chain_at(&kp, &s, 1, tols), Err(GeoError::Precondition(_))));
}

#[test]
fn odd_or_mismatched_structures_are_refused() {
    let metric = common::metric("sphere", "");
    assert!(KahlerChart::from_metric(metric, ComplexStructureField::standard(3)).is_err());
    let metric = common::metric("euclidean", r#"{"m": 4}"#);
    assert!(KahlerChart::from_metric(metric, ComplexStructureField::standard(2)).is_err());
}

#[test]
fn chain_is_degenerate_on_constant_holomorphic_charts() {
    let tols = Tolerances::default();
    for (name, params) in [("fubini-study", r#"{"n": 3}"#), ("flat-cn", r#"{"n": 3}"#)] {
        let kc = common::kahler(name, params);
        let kp = kc.at(&[0.2, -0.1, 0.3, 0.05, -0.25, 0.1]).unwrap();
        let mut rng = stream(9, 0, "chain");
        for i in 0..10 {
            let s = kp.sample_sextuple(&mut rng).unwrap();
            let v = xy_chain_at(&kp, &s, i, tols).unwrap();
            assert!(v.passed(), "{name}");
            for key in ["q1", "q2", "q3", "q4", "z_spread"] {
                assert!(v.detail(key).unwrap().abs() <= 1e-8, "{name} {key}");
            }
            for p in hol_vanishing_probe(&kp, &s, tols).unwrap() {
                assert!(p.abs() <= 1e-8);
            }
        }
    }
}

#[test]
fn probes_require_constant_holomorphic_curvature() {
    let kp = common::kahler("fs-perturbed", "")
        .at(&[0.2, -0.1, 0.3, 0.05, -0.25, 0.1])
        .unwrap();
    let s = kp.sample_sextuple(&mut stream(2, 0, "s")).unwrap();
    assert!(matches!(
        hol_vanishing_probe(&kp, &s, Tolerances::default()),
        Err(GeoError::Precondition(_))
    ));
    assert!(xy_check_at(&kp, 32, 1, 1e-8).unwrap().failed());
}
