//! Small dense helpers on `Vec<f64>` vectors and `nalgebra` matrices.

use nalgebra::DMatrix;

use crate::error::{GeoError, Result};

/// Residual norms below this fraction of the input norm count as rank loss.
pub const RANK_TOL: f64 = 1e-12;

pub fn inner(g: &DMatrix<f64>, u: &[f64], v: &[f64]) -> f64 {
    let n = u.len();
    let mut s = 0.0;
    for i in 0..n {
        if u[i] == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..n {
            row += g[(i, j)] * v[j];
        }
        s += u[i] * row;
    }
    s
}

pub fn norm(g: &DMatrix<f64>, u: &[f64]) -> f64 {
    inner(g, u, u).max(0.0).sqrt()
}

pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

pub fn scaled(a: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| a * v).collect()
}

pub fn add(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

pub fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

pub fn basis_vector(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// Orthonormalizes `vectors` with respect to the inner product `g`, keeping
/// the span of every prefix. Modified Gram–Schmidt with one
/// reorthogonalization pass; no pivoting, so the output is reproducible.
pub fn gram_schmidt(vectors: &[Vec<f64>], g: &DMatrix<f64>) -> Result<Vec<Vec<f64>>> {
    gram_schmidt_with_coeffs(vectors, g).map(|(e, _)| e)
}

/// Orthonormal vectors paired with their expansion coefficients.
pub type FrameWithCoeffs = (Vec<Vec<f64>>, Vec<Vec<f64>>);

/// Like [`gram_schmidt`], also returning upper-triangular coefficients `c`
/// with `e[i] = Σ_a c[i][a] · vectors[a]`.
pub fn gram_schmidt_with_coeffs(vectors: &[Vec<f64>], g: &DMatrix<f64>) -> Result<FrameWithCoeffs> {
    let k = vectors.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (a, v) in vectors.iter().enumerate() {
        if v.len() != g.nrows() {
            return Err(GeoError::Dimension {
                expected: g.nrows(),
                got: v.len(),
            });
        }
        let scale = norm(g, v);
        let mut w = v.clone();
        let mut c = vec![0.0; k];
        c[a] = 1.0;
        for _pass in 0..2 {
            for (e, ce) in out.iter().zip(&coeffs) {
                let p = inner(g, e, &w);
                axpy(-p, e, &mut w);
                axpy(-p, ce, &mut c);
            }
        }
        let n = norm(g, &w);
        if !(n > RANK_TOL * scale) || scale == 0.0 {
            return Err(GeoError::RankDeficient(format!(
                "vector {a} is (numerically) in the span of the previous ones"
            )));
        }
        out.push(scaled(1.0 / n, &w));
        coeffs.push(scaled(1.0 / n, &c));
    }
    Ok((out, coeffs))
}

/// Gram matrix `⟨e_i, e_j⟩_g`.
pub fn gram_matrix(vectors: &[Vec<f64>], g: &DMatrix<f64>) -> DMatrix<f64> {
    let k = vectors.len();
    DMatrix::from_fn(k, k, |i, j| inner(g, &vectors[i], &vectors[j]))
}

/// Projects `v` onto the g-orthogonal complement of the orthonormal set `basis`.
pub fn project_out(v: &[f64], basis: &[Vec<f64>], g: &DMatrix<f64>) -> Vec<f64> {
    let mut w = v.to_vec();
    for _pass in 0..2 {
        for e in basis {
            let p = inner(g, e, &w);
            axpy(-p, e, &mut w);
        }
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_case() {
        let g = DMatrix::identity(2, 2);
        let e = gram_schmidt(&[vec![1.0, 0.0], vec![1.0, 1.0]], &g).unwrap();
        assert_eq!(e, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn orthonormal_input_unchanged() {
        let s = 0.5_f64.sqrt();
        let g = DMatrix::identity(3, 3);
        let input = vec![vec![s, s, 0.0], vec![-s, s, 0.0], vec![0.0, 0.0, 1.0]];
        let e = gram_schmidt(&input, &g).unwrap();
        for (a, b) in e.iter().flatten().zip(input.iter().flatten()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn coefficients_reconstruct_frame() {
        let g = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let v = vec![vec![1.0, 2.0], vec![-1.0, 0.5]];
        let (e, c) = gram_schmidt_with_coeffs(&v, &g).unwrap();
        for i in 0..2 {
            let mut r = vec![0.0; 2];
            for a in 0..2 {
                axpy(c[i][a], &v[a], &mut r);
            }
            assert!((r[0] - e[i][0]).abs() < 1e-14 && (r[1] - e[i][1]).abs() < 1e-14);
        }
        assert_eq!(c[0][1], 0.0);
    }

    #[test]
    fn rank_deficiency_detected() {
        let g = DMatrix::identity(3, 3);
        let v = vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]];
        assert!(matches!(gram_schmidt(&v, &g), Err(GeoError::RankDeficient(_))));
        assert!(gram_schmidt(&[vec![0.0; 3]], &g).is_err());
    }
}
