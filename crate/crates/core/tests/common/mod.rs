#![allow(dead_code)]

use curvcheck::catalog::{instantiate, Instance, Params};
use curvcheck::immersion::ImmersionChart;
use curvcheck::kahler::KahlerChart;
use curvcheck::riemann::MetricChart;

pub fn params(json: &str) -> Params {
    if json.is_empty() {
        Params::new()
    } else {
        serde_json::from_str(json).expect("test params are JSON")
    }
}

pub fn metric(name: &str, json: &str) -> MetricChart {
    match instantiate(name, &params(json)).unwrap() {
        Instance::Metric(m) => m,
        Instance::Kahler(k) => k.metric,
        other => panic!("{} is not an ambient", other.name()),
    }
}

pub fn kahler(name: &str, json: &str) -> KahlerChart {
    match instantiate(name, &params(json)).unwrap() {
        Instance::Kahler(k) => k,
        other => panic!("{} is not a Kähler chart", other.name()),
    }
}

pub fn immersion(name: &str, json: &str) -> ImmersionChart {
    match instantiate(name, &params(json)).unwrap() {
        Instance::Immersion(im) => im,
        other => panic!("{} is not an immersion", other.name()),
    }
}

/// Points drawn from a fixed generator inside `bounds`.
pub fn points(seed: u64, tag: &str, bounds: &[(f64, f64)], n: usize) -> Vec<Vec<f64>> {
    let mut rng = curvcheck::sampling::stream(seed, 0, tag);
    (0..n)
        .map(|_| curvcheck::sampling::uniform_in_box(&mut rng, bounds))
        .collect()
}

pub fn cube(dim: usize, half: f64) -> Vec<(f64, f64)> {
    vec![(-half, half); dim]
}

/// Random source text following the expression grammar. Precedence and
/// unary minus appear without redundant parentheses so the parser's
/// handling of them is exercised.
pub fn random_source(seed: u64, vars: &[&str], depth: u32) -> String {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    gen_expr(&mut rng, vars, depth, &mut out);
    out
}

fn gen_expr(rng: &mut impl rand::Rng, vars: &[&str], depth: u32, out: &mut String) {
    let terms = rng.random_range(1..=3);
    for i in 0..terms {
        if i > 0 {
            out.push_str(if rng.random_bool(0.5) { " + " } else { " - " });
        }
        gen_term(rng, vars, depth, out);
    }
}

fn gen_term(rng: &mut impl rand::Rng, vars: &[&str], depth: u32, out: &mut String) {
    let factors = rng.random_range(1..=3);
    for i in 0..factors {
        if i > 0 {
            out.push_str(if rng.random_bool(0.6) { "*" } else { "/" });
        }
        if rng.random_bool(0.15) {
            out.push('-');
        }
        gen_atom(rng, vars, depth, out);
        if rng.random_bool(0.2) {
            out.push_str(&format!("^{}", rng.random_range(0..=4)));
        }
    }
}

const FUNCS: [&str; 10] = ["sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "tanh", "atan"];

fn gen_atom(rng: &mut impl rand::Rng, vars: &[&str], depth: u32, out: &mut String) {
    let choice = if depth == 0 {
        rng.random_range(0..3)
    } else {
        rng.random_range(0..6)
    };
    match choice {
        0 => {
            let v: f64 = rng.random_range(0.0..4.0);
            let text = match rng.random_range(0..3) {
                0 => format!("{}", rng.random_range(1..10)),
                1 => format!("{v:.3}"),
                _ => format!("{:.2}e-1", v * 10.0),
            };
            out.push_str(&text);
        }
        1 | 2 if !vars.is_empty() => out.push_str(vars[rng.random_range(0..vars.len())]),
        1 | 2 => out.push_str("pi"),
        3 | 4 => {
            out.push_str(FUNCS[rng.random_range(0..FUNCS.len())]);
            out.push('(');
            gen_expr(rng, vars, depth - 1, out);
            out.push(')');
        }
        _ => {
            out.push('(');
            gen_expr(rng, vars, depth - 1, out);
            out.push(')');
        }
    }
}
