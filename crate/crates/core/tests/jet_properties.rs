mod common;

use std::collections::HashMap;

use curvcheck::dsl::{eval_value, indexed_names, parse};
use curvcheck::jet::{eval_jet, eval_jet_generic, Jet2};
use proptest::prelude::*;

fn value_at(e: &curvcheck::dsl::Expr, vars: &[String], x: &[f64]) -> Option<f64> {
    let b: HashMap<String, f64> = vars.iter().cloned().zip(x.iter().copied()).collect();
    eval_value(e, &b).ok()
}

fn shifted(x: &[f64], steps: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(i, d) in steps {
        y[i] += d;
    }
    y
}

/// Richardson-extrapolated difference quotient at the step where successive
/// extrapolations agree best, with that disagreement. Sharp features make
/// large steps meaningless and tiny steps noisy, so the step is searched.
fn settled(d: impl Fn(f64) -> Option<f64>) -> Option<(f64, f64)> {
    let quotients: Vec<f64> = (0..14).map(|k| d(1e-2 * 0.5_f64.powi(k))).collect::<Option<_>>()?;
    let rich: Vec<f64> = quotients.windows(2).map(|w| (4.0 * w[1] - w[0]) / 3.0).collect();
    rich.windows(2)
        .map(|w| (w[1], (w[1] - w[0]).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
}

/// Compares the jet of a random expression with settled difference
/// quotients. Returns whether any derivative was actually compared.
fn compare_with_differences(seed: u64, x: [f64; 3]) -> Result<bool, String> {
    let vars = indexed_names("x", 3);
    let src = common::random_source(seed, &["x1", "x2", "x3"], 2);
    let e = parse(&src, &vars).map_err(|err| err.to_string())?;
    let Ok(jet) = eval_jet(&e, &x, &vars) else {
        return Ok(false);
    };
    let scale = 1.0
        + jet.value.abs()
        + jet.gradient.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
        + jet.hessian.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale > 1e4 {
        return Ok(false);
    }
    for i in 0..3 {
        for j in 0..3 {
            if jet.hess(i, j).to_bits() != jet.hess(j, i).to_bits() {
                return Err(format!("{src}: Hessian not symmetric"));
            }
        }
    }

    let f = |p: Vec<f64>| value_at(&e, &vars, &p);
    let grad_fd = |i: usize, h: f64| -> Option<f64> {
        Some((f(shifted(&x, &[(i, h)]))? - f(shifted(&x, &[(i, -h)]))?) / (2.0 * h))
    };
    let hess_fd = |i: usize, j: usize, h: f64| -> Option<f64> {
        let pp = f(shifted(&x, &[(i, h), (j, h)]))?;
        let pm = f(shifted(&x, &[(i, h), (j, -h)]))?;
        let mp = f(shifted(&x, &[(i, -h), (j, h)]))?;
        let mm = f(shifted(&x, &[(i, -h), (j, -h)]))?;
        Some((pp - pm - mp + mm) / (4.0 * h * h))
    };
    let mut compared = false;
    for i in 0..3 {
        let Some((g, spread)) = settled(|h| grad_fd(i, h)) else {
            return Ok(compared);
        };
        if spread <= 1e-8 * scale {
            compared = true;
            if (g - jet.grad(i)).abs() > 1e-6 * scale {
                return Err(format!("{src} d{i}: fd {g}, jet {}", jet.grad(i)));
            }
        }
        for j in 0..3 {
            let Some((d2, spread)) = settled(|h| hess_fd(i, j, h)) else {
                return Ok(compared);
            };
            if spread <= 1e-6 * scale {
                compared = true;
                if (d2 - jet.hess(i, j)).abs() > 1e-4 * scale {
                    return Err(format!("{src} d{i}d{j}: fd {d2}, jet {}", jet.hess(i, j)));
                }
            }
        }
    }
    Ok(compared)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jets_match_difference_quotients(seed in any::<u64>(), x in prop::array::uniform3(-1.5f64..1.5)) {
        compare_with_differences(seed, x).map_err(TestCaseError::fail)?;
    }

    /// Nested jets: the outer value's jet equals the plain jet, and the
    /// inner gradient of an outer gradient entry is a Hessian entry.
    #[test]
    fn nested_jets_are_consistent(seed in any::<u64>(), x in prop::array::uniform2(-1.0f64..1.0)) {
        let vars = indexed_names("x", 2);
        let src = common::random_source(seed, &["x1", "x2"], 2);
        let e = parse(&src, &vars).unwrap();
        let (Ok(flat), Ok(nested)) = (
            eval_jet(&e, &x, &vars),
            eval_jet_generic::<Jet2<f64>>(&e, &x, &vars),
        ) else { return Ok(()) };
        let scale = 1.0 + flat.hessian.iter().fold(flat.value.abs(), |m, v| m.max(v.abs()));
        prop_assert!((nested.value.value - flat.value).abs() <= 1e-12 * scale);
        for i in 0..2 {
            prop_assert!((nested.grad(i).value - flat.grad(i)).abs() <= 1e-12 * scale);
            prop_assert!((nested.value.grad(i) - flat.grad(i)).abs() <= 1e-12 * scale);
            for j in 0..2 {
                prop_assert!((nested.grad(i).grad(j) - flat.hess(i, j)).abs() <= 1e-12 * scale);
                prop_assert!((nested.hess(i, j).value - flat.hess(i, j)).abs() <= 1e-12 * scale);
            }
        }
    }
}

#[test]
fn known_derivatives() {
    let vars = indexed_names("x", 2);
    let e = parse("x1^2*x2 + sin(x2)", &vars).unwrap();
    let j = eval_jet(&e, &[1.5, 0.25], &vars).unwrap();
    assert!((j.grad(0) - 2.0 * 1.5 * 0.25).abs() < 1e-15);
    assert!((j.grad(1) - (1.5 * 1.5 + 0.25_f64.cos())).abs() < 1e-15);
    assert!((j.hess(0, 1) - 3.0).abs() < 1e-15);
    assert!((j.hess(1, 1) + 0.25_f64.sin()).abs() < 1e-15);

    // d^4/dx^4 of exp(2x) through two levels of jets
    let vars = indexed_names("x", 1);
    let e = parse("exp(2*x1)", &vars).unwrap();
    let j = eval_jet_generic::<Jet2<f64>>(&e, &[0.3], &vars).unwrap();
    let want = 16.0 * 0.6_f64.exp();
    assert!((j.hess(0, 0).hess(0, 0) - want).abs() < 1e-12 * want);
}

#[test]
fn most_random_expressions_are_compared() {
    let mut compared = 0;
    for seed in 0..300 {
        if compare_with_differences(seed, [0.4, -0.7, 1.1]).unwrap() {
            compared += 1;
        }
    }
    assert!(compared >= 150, "only {compared} of 300 expressions compared");
}
