//! Metric charts and their curvature.
//!
//! Conventions: `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`, stored lowered as
//! `R_abcd = ⟨R(∂_a,∂_b)∂_c, ∂_d⟩`. With this sign a space form of curvature
//! ρ has `⟨R(v,w)v,η⟩ = ρ(⟨v,η⟩⟨w,v⟩ − ⟨v,v⟩⟨w,η⟩)` and the sectional
//! curvature is `K(u,v) = ⟨R(u,v)v,u⟩ / |u∧v|²`.

use nalgebra::DMatrix;

use crate::dsl::{indexed_names, parse, Expr};
use crate::error::{GeoError, Result};
use crate::jet::{eval_jet, eval_jet_generic, Jet2};
use crate::linalg::{basis_vector, inner, max_abs};
use crate::verdict::CheckVerdict;

pub use crate::linalg::gram_schmidt;

/// Metrics whose condition number exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

/// Where the metric coefficients come from.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSource {
    /// Upper triangle, row-major: `(0,0), (0,1), …, (0,m-1), (1,1), …`.
    Entries(Vec<Expr>),
    /// Real potential φ in `x1..xn, y1..yn`; the metric is assembled from
    /// its complex Hessian (see [`crate::kahler`]).
    KahlerPotential { potential: Expr, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricChart {
    pub name: String,
    pub dim: usize,
    pub source: MetricSource,
    /// Box `[lo, hi]` per coordinate where the chart is known to be valid.
    pub domain_hint: Option<Vec<(f64, f64)>>,
    var_names: Vec<String>,
}

fn upper_index(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * m - i * (i + 1) / 2 + j
}

impl MetricChart {
    /// Chart from the upper triangle of the metric (length `m(m+1)/2`).
    pub fn from_upper(name: impl Into<String>, dim: usize, upper: Vec<Expr>) -> Result<Self> {
        if dim < 2 {
            return Err(GeoError::InvalidParam {
                name: "dim".into(),
                reason: format!("metric charts need dimension >= 2, got {dim}"),
            });
        }
        if upper.len() != dim * (dim + 1) / 2 {
            return Err(GeoError::Dimension {
                expected: dim * (dim + 1) / 2,
                got: upper.len(),
            });
        }
        Ok(Self {
            name: name.into(),
            dim,
            source: MetricSource::Entries(upper),
            domain_hint: None,
            var_names: indexed_names("x", dim),
        })
    }

    /// Chart from a full matrix of source strings in `x1..xm`. The matrix
    /// must be symmetric as parsed expressions.
    pub fn from_strings<S: AsRef<str>>(name: impl Into<String>, rows: &[Vec<S>]) -> Result<Self> {
        let dim = rows.len();
        let vars = indexed_names("x", dim);
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(GeoError::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            for j in i..dim {
                let e = parse(row[j].as_ref(), &vars)?;
                let mirror = parse(rows[j][i].as_ref(), &vars)?;
                if e != mirror {
                    return Err(GeoError::Precondition(format!(
                        "metric entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
                upper.push(e);
            }
        }
        Self::from_upper(name, dim, upper)
    }

    /// Chart `λ(x) δ_ij` for a conformal factor given as source text.
    pub fn conformally_flat(name: impl Into<String>, dim: usize, factor: &str) -> Result<Self> {
        let vars = indexed_names("x", dim);
        let lam = parse(factor, &vars)?;
        let zero = parse("0", &vars)?;
        let mut upper = Vec::new();
        for i in 0..dim {
            for j in i..dim {
                upper.push(if i == j { lam.clone() } else { zero.clone() });
            }
        }
        Self::from_upper(name, dim, upper)
    }

    pub(crate) fn from_potential(name: impl Into<String>, potential: Expr, n: usize) -> Self {
        let mut var_names = indexed_names("x", n);
        var_names.extend(indexed_names("y", n));
        Self {
            name: name.into(),
            dim: 2 * n,
            source: MetricSource::KahlerPotential { potential, n },
            domain_hint: None,
            var_names,
        }
    }

    pub fn with_domain_hint(mut self, hint: Vec<(f64, f64)>) -> Self {
        self.domain_hint = Some(hint);
        self
    }

    /// Coordinate names, in chart order.
    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    /// The expression for `g_ij` when the chart is given by entries.
    pub fn entry(&self, i: usize, j: usize) -> Option<&Expr> {
        match &self.source {
            MetricSource::Entries(upper) => upper.get(upper_index(self.dim, i, j)),
            MetricSource::KahlerPotential { .. } => None,
        }
    }

    fn check_point(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dim {
            return Err(GeoError::Dimension {
                expected: self.dim,
                got: point.len(),
            });
        }
        Ok(())
    }

    /// Metric coefficients as jets (value, ∂g, ∂²g), full `m × m`, row-major.
    pub fn metric_jets(&self, point: &[f64]) -> Result<Vec<Jet2<f64>>> {
        self.check_point(point)?;
        let m = self.dim;
        match &self.source {
            MetricSource::Entries(upper) => {
                let mut upper_jets = Vec::with_capacity(upper.len());
                for e in upper {
                    upper_jets.push(eval_jet(e, point, &self.var_names)?);
                }
                Ok((0..m * m)
                    .map(|k| upper_jets[upper_index(m, k / m, k % m)].clone())
                    .collect())
            }
            MetricSource::KahlerPotential { potential, n } => {
                let phi: Jet2<Jet2<f64>> = eval_jet_generic(potential, point, &self.var_names)?;
                Ok(crate::kahler::metric_from_potential_hessian(&phi, *n))
            }
        }
    }

    /// Metric matrix at `point` (values only).
    pub fn metric_at(&self, point: &[f64]) -> Result<DMatrix<f64>> {
        let m = self.dim;
        match &self.source {
            MetricSource::Entries(upper) => {
                self.check_point(point)?;
                let lookup = |name: &str| self.var_names.iter().position(|v| v == name).map(|i| point[i]);
                let mut g = DMatrix::zeros(m, m);
                for i in 0..m {
                    for j in i..m {
                        let v = crate::dsl::eval_generic::<f64>(&upper[upper_index(m, i, j)], &lookup)?;
                        g[(i, j)] = v;
                        g[(j, i)] = v;
                    }
                }
                Ok(g)
            }
            MetricSource::KahlerPotential { .. } => {
                let jets = self.metric_jets(point)?;
                Ok(DMatrix::from_fn(m, m, |i, j| jets[i * m + j].value))
            }
        }
    }
}

/// Checks symmetric positive definiteness and conditioning; returns the inverse.
pub fn checked_inverse(g: &DMatrix<f64>, point: &[f64]) -> Result<DMatrix<f64>> {
    let eig = g.clone().symmetric_eigen();
    let lo = eig.eigenvalues.min();
    let hi = eig.eigenvalues.max();
    if !(lo > 0.0) || !hi.is_finite() {
        return Err(GeoError::NotPositiveDefinite { point: point.to_vec() });
    }
    let condition = hi / lo;
    if condition > MAX_CONDITION {
        return Err(GeoError::IllConditioned {
            point: point.to_vec(),
            condition,
        });
    }
    let chol = g
        .clone()
        .cholesky()
        .ok_or_else(|| GeoError::NotPositiveDefinite { point: point.to_vec() })?;
    Ok(chol.inverse())
}

/// Metric, connection and curvature at one chart point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureData {
    pub point: Vec<f64>,
    pub dim: usize,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `dg[(a*m + b)*m + c] = ∂_a g_bc`.
    pub dg: Vec<f64>,
    /// `christoffel[(i*m + j)*m + k] = Γ^i_jk`.
    pub christoffel: Vec<f64>,
    /// `riemann[((a*m + b)*m + c)*m + d] = R_abcd`.
    pub riemann: Vec<f64>,
    /// `riemann_up[((e*m + a)*m + b)*m + c]`: component e of `R(∂_a,∂_b)∂_c`.
    riemann_up: Vec<f64>,
}

impl CurvatureData {
    #[inline]
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> f64 {
        let m = self.dim;
        self.christoffel[(i * m + j) * m + k]
    }

    #[inline]
    pub fn r(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        let m = self.dim;
        self.riemann[((a * m + b) * m + c) * m + d]
    }

    pub fn max_abs_riemann(&self) -> f64 {
        max_abs(&self.riemann)
    }

    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        inner(&self.g, u, v)
    }

    pub fn norm(&self, u: &[f64]) -> f64 {
        crate::linalg::norm(&self.g, u)
    }

    /// `Γ(u, v)^i = Γ^i_jk u^j v^k`.
    pub fn christoffel_contract(&self, u: &[f64], v: &[f64]) -> Vec<f64> {
        let m = self.dim;
        (0..m)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..m {
                    if u[j] == 0.0 {
                        continue;
                    }
                    for k in 0..m {
                        s += self.gamma(i, j, k) * u[j] * v[k];
                    }
                }
                s
            })
            .collect()
    }

    /// Vector-valued curvature `R(u,v)w`. Summed over `a < b` with the
    /// wedge coefficient `u^a v^b − u^b v^a`, so `R(u,u)w` is exactly zero.
    pub fn riemann_vector(&self, u: &[f64], v: &[f64], w: &[f64]) -> Vec<f64> {
        let m = self.dim;
        let mut out = vec![0.0; m];
        for a in 0..m {
            for b in a + 1..m {
                let ab = u[a] * v[b] - u[b] * v[a];
                if ab == 0.0 {
                    continue;
                }
                for c in 0..m {
                    let abc = ab * w[c];
                    if abc == 0.0 {
                        continue;
                    }
                    for (e, o) in out.iter_mut().enumerate() {
                        *o += self.riemann_up[((e * m + a) * m + b) * m + c] * abc;
                    }
                }
            }
        }
        out
    }

    /// Orthonormal frame obtained from the coordinate basis.
    pub fn coordinate_frame(&self) -> Result<Vec<Vec<f64>>> {
        let basis: Vec<Vec<f64>> = (0..self.dim).map(|i| basis_vector(self.dim, i)).collect();
        gram_schmidt(&basis, &self.g)
    }
}

/// Computes metric, Christoffel symbols and the Riemann tensor at `point`.
/// All derivatives come from jets, so the result is exact up to roundoff.
pub fn curvature_at(chart: &MetricChart, point: &[f64]) -> Result<CurvatureData> {
    let m = chart.dim;
    let jets = chart.metric_jets(point)?;
    let g = DMatrix::from_fn(m, m, |i, j| jets[i * m + j].value);
    let g_inv = checked_inverse(&g, point)?;

    let i3 = |a: usize, b: usize, c: usize| (a * m + b) * m + c;
    let i4 = |a: usize, b: usize, c: usize, d: usize| ((a * m + b) * m + c) * m + d;

    // dg[a][b][c] = ∂_a g_bc; d2g[a][e][b][c] = ∂_a ∂_e g_bc
    let mut dg = vec![0.0; m * m * m];
    let mut d2g = vec![0.0; m * m * m * m];
    for b in 0..m {
        for c in 0..m {
            let jet = &jets[b * m + c];
            for a in 0..m {
                dg[i3(a, b, c)] = jet.grad(a);
                for e in 0..m {
                    d2g[i4(a, e, b, c)] = jet.hess(a, e);
                }
            }
        }
    }

    // First-kind symbols s[l][j][k] = ½(∂_j g_lk + ∂_k g_jl − ∂_l g_jk) and
    // their derivatives ds[a][l][j][k].
    let mut s = vec![0.0; m * m * m];
    let mut ds = vec![0.0; m * m * m * m];
    for l in 0..m {
        for j in 0..m {
            for k in 0..m {
                s[i3(l, j, k)] = 0.5 * (dg[i3(j, l, k)] + dg[i3(k, j, l)] - dg[i3(l, j, k)]);
                for a in 0..m {
                    ds[i4(a, l, j, k)] = 0.5 * (d2g[i4(a, j, l, k)] + d2g[i4(a, k, j, l)] - d2g[i4(a, l, j, k)]);
                }
            }
        }
    }

    // ∂_a g^{il} = −g^{ip} ∂_a g_pq g^{ql}
    let mut dginv = vec![0.0; m * m * m];
    for a in 0..m {
        let dga = DMatrix::from_fn(m, m, |p, q| dg[i3(a, p, q)]);
        let prod = &g_inv * dga * &g_inv;
        for i in 0..m {
            for l in 0..m {
                dginv[i3(a, i, l)] = -prod[(i, l)];
            }
        }
    }

    let mut christoffel = vec![0.0; m * m * m];
    let mut dgamma = vec![0.0; m * m * m * m]; // [a][i][j][k] = ∂_a Γ^i_jk
    for i in 0..m {
        for j in 0..m {
            for k in j..m {
                let mut gam = 0.0;
                for l in 0..m {
                    gam += g_inv[(i, l)] * s[i3(l, j, k)];
                }
                christoffel[i3(i, j, k)] = gam;
                christoffel[i3(i, k, j)] = gam;
                for a in 0..m {
                    let mut d = 0.0;
                    for l in 0..m {
                        d += dginv[i3(a, i, l)] * s[i3(l, j, k)] + g_inv[(i, l)] * ds[i4(a, l, j, k)];
                    }
                    dgamma[i4(a, i, j, k)] = d;
                    dgamma[i4(a, i, k, j)] = d;
                }
            }
        }
    }

    // R^e_abc = ∂_a Γ^e_bc − ∂_b Γ^e_ac + Γ^f_bc Γ^e_af − Γ^f_ac Γ^e_bf
    let mut riemann_up = vec![0.0; m * m * m * m];
    for e in 0..m {
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let mut v = dgamma[i4(a, e, b, c)] - dgamma[i4(b, e, a, c)];
                    for f in 0..m {
                        v += christoffel[i3(f, b, c)] * christoffel[i3(e, a, f)]
                            - christoffel[i3(f, a, c)] * christoffel[i3(e, b, f)];
                    }
                    riemann_up[i4(e, a, b, c)] = v;
                }
            }
        }
    }
    let mut riemann = vec![0.0; m * m * m * m];
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let mut v = 0.0;
                    for e in 0..m {
                        v += g[(e, d)] * riemann_up[i4(e, a, b, c)];
                    }
                    riemann[i4(a, b, c, d)] = v;
                }
            }
        }
    }

    Ok(CurvatureData {
        point: point.to_vec(),
        dim: m,
        g,
        g_inv,
        dg,
        christoffel,
        riemann,
        riemann_up,
    })
}

fn check_len(cd: &CurvatureData, vs: &[&[f64]]) -> Result<()> {
    for v in vs {
        if v.len() != cd.dim {
            return Err(GeoError::Dimension {
                expected: cd.dim,
                got: v.len(),
            });
        }
    }
    Ok(())
}

/// `⟨R(u,v)w, z⟩ = Σ R_abcd u^a v^b w^c z^d`.
pub fn riemann_inner(cd: &CurvatureData, u: &[f64], v: &[f64], w: &[f64], z: &[f64]) -> Result<f64> {
    check_len(cd, &[u, v, w, z])?;
    Ok(riemann_inner_unchecked(cd, u, v, w, z))
}

pub(crate) fn riemann_inner_unchecked(cd: &CurvatureData, u: &[f64], v: &[f64], w: &[f64], z: &[f64]) -> f64 {
    let m = cd.dim;
    let mut s = 0.0;
    for a in 0..m {
        for b in a + 1..m {
            let ab = u[a] * v[b] - u[b] * v[a];
            if ab == 0.0 {
                continue;
            }
            for c in 0..m {
                let abc = ab * w[c];
                if abc == 0.0 {
                    continue;
                }
                let base = ((a * m + b) * m + c) * m;
                let mut t = 0.0;
                for d in 0..m {
                    t += cd.riemann[base + d] * z[d];
                }
                s += abc * t;
            }
        }
    }
    s
}

/// Sectional curvature of the plane spanned by `u`, `v`.
pub fn sectional(cd: &CurvatureData, u: &[f64], v: &[f64]) -> Result<f64> {
    check_len(cd, &[u, v])?;
    let uu = cd.inner(u, u);
    let vv = cd.inner(v, v);
    let uv = cd.inner(u, v);
    let denom = uu * vv - uv * uv;
    if !(denom > 1e-14 * uu * vv) {
        return Err(GeoError::DegeneratePlane);
    }
    Ok(riemann_inner_unchecked(cd, u, v, v, u) / denom)
}

/// `Ric(w,η) = −Σ_i ⟨R(v_i,w)v_i, η⟩` over a g-orthonormal basis, computed
/// as the trace against `g⁻¹`.
pub fn ricci(cd: &CurvatureData, w: &[f64], eta: &[f64]) -> Result<f64> {
    check_len(cd, &[w, eta])?;
    let m = cd.dim;
    let mut s = 0.0;
    for a in 0..m {
        for b in 0..m {
            let gab = cd.g_inv[(a, b)];
            if gab == 0.0 {
                continue;
            }
            let mut t = 0.0;
            for c in 0..m {
                if w[c] == 0.0 {
                    continue;
                }
                for d in 0..m {
                    t += cd.r(a, c, b, d) * w[c] * eta[d];
                }
            }
            s += gab * t;
        }
    }
    Ok(-s)
}

/// Einstein test `Ric = ρ g` on an orthonormal frame; the threshold is
/// `tol·(1 + max|R|)`.
pub fn einstein_check_at(cd: &CurvatureData, tol: f64) -> Result<CheckVerdict> {
    let frame = cd.coordinate_frame()?;
    let m = cd.dim;
    let mut ric = vec![0.0; m * m];
    for i in 0..m {
        for j in i..m {
            let v = ricci(cd, &frame[i], &frame[j])?;
            ric[i * m + j] = v;
            ric[j * m + i] = v;
        }
    }
    let rho = (0..m).map(|i| ric[i * m + i]).sum::<f64>() / m as f64;
    let mut defect = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            let target = if i == j { rho } else { 0.0 };
            defect = defect.max((ric[i * m + j] - target).abs());
        }
    }
    Ok(CheckVerdict::from_defect(defect, tol * (1.0 + cd.max_abs_riemann())).with("rho", rho))
}

/// Pointwise constant-curvature test: compares R with the space-form model
/// `ρ(g_ad g_bc − g_ac g_bd)` where ρ is the curvature of one frame plane.
pub fn constant_curvature_check_at(cd: &CurvatureData, tol: f64) -> Result<CheckVerdict> {
    let m = cd.dim;
    let frame = cd.coordinate_frame()?;
    let rho = sectional(cd, &frame[0], &frame[1])?;
    let g = &cd.g;
    let mut defect = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let model = rho * (g[(a, d)] * g[(b, c)] - g[(a, c)] * g[(b, d)]);
                    defect = defect.max((cd.r(a, b, c, d) - model).abs());
                }
            }
        }
    }
    let scale = 1.0_f64.max(rho.abs()).max(cd.max_abs_riemann());
    Ok(CheckVerdict::from_defect(defect, tol * scale)
        .with("rho", rho)
        .with("scale", scale))
}

/// Largest violation of the algebraic symmetries of R (pair antisymmetry,
/// pair exchange, first Bianchi), relative to `max |R|` (or 1 if R = 0).
pub fn symmetry_defect(cd: &CurvatureData) -> f64 {
    let m = cd.dim;
    let mut worst = 0.0_f64;
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for d in 0..m {
                    let r = cd.r(a, b, c, d);
                    worst = worst
                        .max((r + cd.r(b, a, c, d)).abs())
                        .max((r + cd.r(a, b, d, c)).abs())
                        .max((r - cd.r(c, d, a, b)).abs())
                        .max((r + cd.r(b, c, a, d) + cd.r(c, a, b, d)).abs());
                }
            }
        }
    }
    let scale = cd.max_abs_riemann();
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euclid(m: usize) -> MetricChart {
        MetricChart::conformally_flat("euclidean", m, "1").unwrap()
    }

    fn sphere(m: usize) -> MetricChart {
        let s: Vec<String> = (1..=m).map(|k| format!("x{k}^2")).collect();
        MetricChart::conformally_flat("sphere", m, &format!("4/(1 + {})^2", s.join(" + "))).unwrap()
    }

    #[test]
    fn flat_space_has_no_curvature() {
        let cd = curvature_at(&euclid(3), &[0.3, -1.0, 2.0]).unwrap();
        assert!(cd.christoffel.iter().all(|&v| v == 0.0));
        assert!(cd.riemann.iter().all(|&v| v == 0.0));
        let u = [1.0, 2.0, 3.0];
        assert_eq!(riemann_inner(&cd, &u, &u, &u, &u).unwrap(), 0.0);
        assert_eq!(ricci(&cd, &u, &u).unwrap(), 0.0);
        let v = constant_curvature_check_at(&cd, 1e-8).unwrap();
        assert!(v.passed());
        assert_eq!(v.detail("rho"), Some(0.0));
    }

    #[test]
    fn round_sphere_at_origin() {
        let cd = curvature_at(&sphere(3), &[0.0; 3]).unwrap();
        assert!(cd.christoffel.iter().all(|v| v.abs() < 1e-15));
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let k = sectional(&cd, &basis_vector(3, i), &basis_vector(3, j)).unwrap();
            assert!((k - 1.0).abs() < 1e-12, "K = {k}");
        }
    }

    #[test]
    fn sectional_rejects_parallel_vectors() {
        let cd = curvature_at(&sphere(2), &[0.1, 0.2]).unwrap();
        assert_eq!(sectional(&cd, &[1.0, 2.0], &[2.0, 4.0]), Err(GeoError::DegeneratePlane));
    }

    #[test]
    fn dimension_mismatch() {
        let cd = curvature_at(&sphere(2), &[0.1, 0.2]).unwrap();
        assert!(matches!(
            riemann_inner(&cd, &[1.0], &[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0]),
            Err(GeoError::Dimension { .. })
        ));
        assert!(curvature_at(&sphere(2), &[0.1]).is_err());
    }

    #[test]
    fn non_spd_metric_is_an_error() {
        let chart = MetricChart::from_strings("bad", &[vec!["1", "2"], vec!["2", "1"]]).unwrap();
        assert!(matches!(
            curvature_at(&chart, &[0.0, 0.0]),
            Err(GeoError::NotPositiveDefinite { .. })
        ));
        let chart = MetricChart::from_strings("thin", &[vec!["1", "0"], vec!["0", "1e-13"]]).unwrap();
        assert!(matches!(
            curvature_at(&chart, &[0.0, 0.0]),
            Err(GeoError::IllConditioned { .. })
        ));
    }

    #[test]
    fn asymmetric_entries_rejected() {
        assert!(MetricChart::from_strings("x", &[vec!["1", "x1"], vec!["x2", "1"]]).is_err());
    }

    #[test]
    fn two_dimensional_metric_is_pointwise_einstein() {
        let chart = MetricChart::from_strings("bumpy2", &[vec!["1 + x2^2", "0"], vec!["0", "1 + x1^2"]]).unwrap();
        let cd = curvature_at(&chart, &[0.4, -0.3]).unwrap();
        // In dimension 2 every metric is Einstein pointwise (Ric = K g).
        assert!(einstein_check_at(&cd, 1e-10).unwrap().passed());
        assert!(symmetry_defect(&cd) < 1e-12);
    }
}
