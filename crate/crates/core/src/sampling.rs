//! Seeded random vectors and orthonormal tuples.
//!
//! Each check draws from its own ChaCha stream keyed by (seed, point index,
//! stream tag), so results do not depend on execution order or thread count.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{GeoError, Result};
use crate::linalg::{norm, project_out, scaled};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 64;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent RNG stream for `(seed, index, tag)`.
pub fn stream(seed: u64, index: u64, tag: &str) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    h = splitmix(h ^ index);
    for b in tag.bytes() {
        h = splitmix(h ^ u64::from(b));
    }
    ChaCha8Rng::seed_from_u64(h)
}

pub fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn uniform_in_box(rng: &mut ChaCha8Rng, bounds: &[(f64, f64)]) -> Vec<f64> {
    use rand::Rng;
    bounds
        .iter()
        .map(|&(lo, hi)| lo + (hi - lo) * rng.random::<f64>())
        .collect()
}

/// Random g-unit vector orthogonal to the orthonormal set `against`.
pub fn unit_orthogonal_to(rng: &mut ChaCha8Rng, g: &DMatrix<f64>, against: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = g.nrows();
    if against.len() >= n {
        return Err(GeoError::Precondition(format!(
            "no room for a unit vector orthogonal to {} vectors in dimension {n}",
            against.len()
        )));
    }
    for _ in 0..16 {
        let v = gaussian_vector(rng, n);
        let w = project_out(&v, against, g);
        let len = norm(g, &w);
        if len > 1e-6 * norm(g, &v) {
            return Ok(scaled(1.0 / len, &w));
        }
    }
    Err(GeoError::RankDeficient(
        "failed to sample an orthogonal direction".into(),
    ))
}

/// Random g-orthonormal `k`-frame (a random rotation when `k = n`).
pub fn orthonormal_frame(rng: &mut ChaCha8Rng, g: &DMatrix<f64>, k: usize) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let v = unit_orthogonal_to(rng, g, &out)?;
        out.push(v);
    }
    Ok(out)
}
