//! Parametrized immersions `f: U ⊂ R^r → M` into a chart.
//!
//! Everything is evaluated in ambient coordinates. The second fundamental
//! form comes from `D_ab = ∂_a∂_b f + Γ(∂_a f, ∂_b f)`, the ambient
//! covariant derivative of the coordinate fields, projected to the normal
//! space.
//!
//! The very-special condition `R(v,w)v ∈ T_pS` is quadratic in `v`, so it
//! holds for all `v` iff its polarization `R(v,w)v' + R(v',w)v` is tangent
//! for all `v, v'`; by linearity it suffices to test frame triples.

use nalgebra::DMatrix;

use crate::dsl::{indexed_names, parse, Expr};
use crate::error::{GeoError, Result};
use crate::jet::{eval_jet, Jet2};
use crate::kahler::KahlerChart;
use crate::linalg::{add, axpy, gram_schmidt_with_coeffs, inner, mat_vec, max_abs, norm, scaled, sub};
use crate::riemann::{curvature_at, CurvatureData, MetricChart};
use crate::sampling::{orthonormal_frame, stream};
use crate::verdict::CheckVerdict;
use crate::Tolerances;

#[derive(Debug, Clone, PartialEq)]
pub enum Ambient {
    Riemannian(MetricChart),
    Kahler(KahlerChart),
}

impl Ambient {
    pub fn metric(&self) -> &MetricChart {
        match self {
            Ambient::Riemannian(c) => c,
            Ambient::Kahler(k) => &k.metric,
        }
    }

    pub fn dim(&self) -> usize {
        self.metric().dim
    }

    pub fn name(&self) -> &str {
        &self.metric().name
    }

    pub fn as_kahler(&self) -> Option<&KahlerChart> {
        match self {
            Ambient::Kahler(k) => Some(k),
            Ambient::Riemannian(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionChart {
    pub name: String,
    pub domain_dim: usize,
    /// `f^i(u1..ur)`, one per ambient coordinate.
    pub components: Vec<Expr>,
    pub ambient: Ambient,
    pub domain_hint: Option<Vec<(f64, f64)>>,
    var_names: Vec<String>,
}

impl ImmersionChart {
    pub fn new(name: impl Into<String>, domain_dim: usize, components: Vec<Expr>, ambient: Ambient) -> Result<Self> {
        if domain_dim == 0 {
            return Err(GeoError::InvalidParam {
                name: "domain_dim".into(),
                reason: "must be >= 1".into(),
            });
        }
        if components.len() != ambient.dim() {
            return Err(GeoError::Dimension {
                expected: ambient.dim(),
                got: components.len(),
            });
        }
        if domain_dim > ambient.dim() {
            return Err(GeoError::InvalidParam {
                name: "domain_dim".into(),
                reason: format!("{domain_dim} exceeds ambient dimension {}", ambient.dim()),
            });
        }
        Ok(Self {
            name: name.into(),
            domain_dim,
            components,
            ambient,
            domain_hint: None,
            var_names: indexed_names("u", domain_dim),
        })
    }

    /// Parses component sources in `u1..ur`.
    pub fn from_strings<S: AsRef<str>>(
        name: impl Into<String>,
        domain_dim: usize,
        components: &[S],
        ambient: Ambient,
    ) -> Result<Self> {
        let vars = indexed_names("u", domain_dim);
        let exprs = components
            .iter()
            .map(|s| parse(s.as_ref(), &vars).map_err(GeoError::from))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, domain_dim, exprs, ambient)
    }

    pub fn with_domain_hint(mut self, hint: Vec<(f64, f64)>) -> Self {
        self.domain_hint = Some(hint);
        self
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient.dim()
    }

    fn component_jets(&self, u: &[f64]) -> Result<Vec<Jet2<f64>>> {
        if u.len() != self.domain_dim {
            return Err(GeoError::Dimension {
                expected: self.domain_dim,
                got: u.len(),
            });
        }
        self.components
            .iter()
            .map(|e| eval_jet(e, u, &self.var_names))
            .collect()
    }
}

/// Extrinsic data of an immersion at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionFrame {
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    /// `m × r`, column a is `∂_a f`.
    pub jacobian: DMatrix<f64>,
    pub induced_g: DMatrix<f64>,
    /// g-orthonormal tangent vectors `e_i`.
    pub tangent_frame: Vec<Vec<f64>>,
    /// `P⊥ = I − E Eᵀ g`.
    pub normal_projector: DMatrix<f64>,
    /// `alpha[i][j] = α(e_i, e_j)`.
    pub alpha: Vec<Vec<Vec<f64>>>,
    pub h: Vec<f64>,
    /// `α(∂_a, ∂_b)`.
    pub alpha_coord: Vec<Vec<Vec<f64>>>,
    /// `D_ab = ∇̄_{∂_a} ∂_b f`.
    pub d2: Vec<Vec<Vec<f64>>>,
    /// `∂_a ∂_b f`.
    pub hessian: Vec<Vec<Vec<f64>>>,
    /// `e_i = Σ_a coeffs[i][a] ∂_a f`.
    pub coeffs: Vec<Vec<f64>>,
    g: DMatrix<f64>,
}

impl ImmersionFrame {
    pub fn dim(&self) -> usize {
        self.tangent_frame.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.p.len()
    }

    pub fn project_normal(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.normal_projector, v)
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        norm(&self.g, v)
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    /// `∂_a f`.
    pub fn coordinate_tangent(&self, a: usize) -> Vec<f64> {
        self.jacobian.column(a).iter().copied().collect()
    }

    /// `max_ij ‖α(e_i, e_j)‖`.
    pub fn alpha_norm(&self) -> f64 {
        self.alpha.iter().flatten().map(|v| self.norm(v)).fold(0.0, f64::max)
    }
}

/// Frame and ambient curvature at `u`.
pub fn frame_and_curvature(im: &ImmersionChart, u: &[f64]) -> Result<(ImmersionFrame, CurvatureData)> {
    let jets = im.component_jets(u)?;
    let p: Vec<f64> = jets.iter().map(|j| j.value).collect();
    let cd = curvature_at(im.ambient.metric(), &p)?;
    let fr = build_frame(u, &jets, &cd)?;
    Ok((fr, cd))
}

pub fn frame_at(im: &ImmersionChart, u: &[f64]) -> Result<ImmersionFrame> {
    frame_and_curvature(im, u).map(|(fr, _)| fr)
}

fn build_frame(u: &[f64], jets: &[Jet2<f64>], cd: &CurvatureData) -> Result<ImmersionFrame> {
    let m = jets.len();
    let r = u.len();
    let g = &cd.g;
    let jacobian = DMatrix::from_fn(m, r, |i, a| jets[i].grad(a));
    let cols: Vec<Vec<f64>> = (0..r).map(|a| jacobian.column(a).iter().copied().collect()).collect();
    let (frame, coeffs) = gram_schmidt_with_coeffs(&cols, g)
        .map_err(|_| GeoError::RankDeficient(format!("Jacobian does not have full rank {r} at u = {u:?}")))?;
    let induced_g = DMatrix::from_fn(r, r, |a, b| inner(g, &cols[a], &cols[b]));

    let e = DMatrix::from_fn(m, r, |i, k| frame[k][i]);
    let normal_projector = DMatrix::identity(m, m) - &e * e.transpose() * g;

    let hessian: Vec<Vec<Vec<f64>>> = (0..r)
        .map(|a| (0..r).map(|b| jets.iter().map(|j| j.hess(a, b)).collect()).collect())
        .collect();
    let d2: Vec<Vec<Vec<f64>>> = (0..r)
        .map(|a| {
            (0..r)
                .map(|b| add(&hessian[a][b], &cd.christoffel_contract(&cols[a], &cols[b])))
                .collect()
        })
        .collect();
    let alpha_coord: Vec<Vec<Vec<f64>>> = d2
        .iter()
        .map(|row| row.iter().map(|v| mat_vec(&normal_projector, v)).collect())
        .collect();

    let mut alpha = vec![vec![vec![0.0; m]; r]; r];
    for i in 0..r {
        for j in i..r {
            let mut v = vec![0.0; m];
            for a in 0..r {
                for b in 0..r {
                    let c = coeffs[i][a] * coeffs[j][b];
                    if c != 0.0 {
                        axpy(c, &alpha_coord[a][b], &mut v);
                    }
                }
            }
            alpha[j][i] = v.clone();
            alpha[i][j] = v;
        }
    }
    let mut h = vec![0.0; m];
    for (i, row) in alpha.iter().enumerate() {
        axpy(1.0 / r as f64, &row[i], &mut h);
    }

    Ok(ImmersionFrame {
        u: u.to_vec(),
        p: jets.iter().map(|j| j.value).collect(),
        jacobian,
        induced_g,
        tangent_frame: frame,
        normal_projector,
        alpha,
        h,
        alpha_coord,
        d2,
        hessian,
        coeffs,
        g: g.clone(),
    })
}

fn require_matching(fr: &ImmersionFrame, cd: &CurvatureData) -> Result<()> {
    if cd.dim != fr.ambient_dim() {
        return Err(GeoError::Dimension {
            expected: fr.ambient_dim(),
            got: cd.dim,
        });
    }
    if max_abs(&sub(&cd.point, &fr.p)) > 1e-12 * (1.0 + max_abs(&fr.p)) {
        return Err(GeoError::Precondition(
            "curvature data was computed at a different point than the frame".into(),
        ));
    }
    Ok(())
}

/// `Σ_i R(e_i, w) e_i` over the given orthonormal tangent frame.
fn traced_curvature(cd: &CurvatureData, frame: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; cd.dim];
    for e in frame {
        axpy(1.0, &cd.riemann_vector(e, w, e), &mut s);
    }
    s
}

/// Special condition: `Σ_i R(e_i, e_j) e_i` is tangent for every j.
pub fn special_check_at(fr: &ImmersionFrame, cd: &CurvatureData, tol: f64) -> Result<CheckVerdict> {
    require_matching(fr, cd)?;
    let mut defect = 0.0_f64;
    for w in &fr.tangent_frame {
        let v = fr.project_normal(&traced_curvature(cd, &fr.tangent_frame, w));
        defect = defect.max(fr.norm(&v));
    }
    Ok(CheckVerdict::from_defect(defect, tol * (1.0 + cd.max_abs_riemann())))
}

/// Very-special condition via symmetrized frame triples.
pub fn very_special_check_at(fr: &ImmersionFrame, cd: &CurvatureData, tol: f64) -> Result<CheckVerdict> {
    require_matching(fr, cd)?;
    let e = &fr.tangent_frame;
    let r = e.len();
    let mut defect = 0.0_f64;
    for k in 0..r {
        for i in 0..r {
            for j in i..r {
                let v = add(
                    &cd.riemann_vector(&e[i], &e[k], &e[j]),
                    &cd.riemann_vector(&e[j], &e[k], &e[i]),
                );
                defect = defect.max(fr.norm(&fr.project_normal(&v)));
            }
        }
    }
    Ok(CheckVerdict::from_defect(defect, tol * (1.0 + cd.max_abs_riemann())))
}

/// `α(X,Y) = ⟨X,Y⟩ H`.
pub fn umbilical_check_at(fr: &ImmersionFrame, tol: f64) -> CheckVerdict {
    let r = fr.dim();
    let mut defect = 0.0_f64;
    for i in 0..r {
        for j in 0..r {
            let v = if i == j {
                sub(&fr.alpha[i][j], &fr.h)
            } else {
                fr.alpha[i][j].clone()
            };
            defect = defect.max(fr.norm(&v));
        }
    }
    let a = fr.alpha_norm();
    CheckVerdict::from_defect(defect, tol * (1.0 + a))
        .with("alpha_norm", a)
        .with("mean_curvature", fr.norm(&fr.h))
}

/// Default central-difference step around `u`.
pub fn fd_step(u: &[f64]) -> f64 {
    f64::EPSILON.cbrt() * 1.0_f64.max(max_abs(u))
}

fn shifted(u: &[f64], a: usize, h: f64) -> Vec<f64> {
    let mut v = u.to_vec();
    v[a] += h;
    v
}

fn stencil_frames(im: &ImmersionChart, u: &[f64], a: usize, h: f64) -> Result<(ImmersionFrame, ImmersionFrame)> {
    if !(h > 0.0) || u[a] + h == u[a] {
        return Err(GeoError::Precondition(format!(
            "finite-difference step {h:e} underflows at u = {u:?}"
        )));
    }
    let plus = frame_at(im, &shifted(u, a, h)).map_err(|e| stencil_error(e, u, a))?;
    let minus = frame_at(im, &shifted(u, a, -h)).map_err(|e| stencil_error(e, u, a))?;
    Ok((plus, minus))
}

fn stencil_error(e: GeoError, u: &[f64], a: usize) -> GeoError {
    GeoError::Precondition(format!(
        "finite-difference stencil leaves the domain at u = {u:?} along u{}: {e}",
        a + 1
    ))
}

/// `∇⊥_{∂_d} H` at `u`, by central differences of H along `u_d` plus the
/// ambient connection term, projected to the normal space.
pub fn normal_derivative_h(im: &ImmersionChart, u: &[f64], direction: usize, h: f64) -> Result<Vec<f64>> {
    let (fr, cd) = frame_and_curvature(im, u)?;
    normal_derivative_h_with(im, &fr, &cd, direction, h)
}

fn normal_derivative_h_with(
    im: &ImmersionChart,
    fr: &ImmersionFrame,
    cd: &CurvatureData,
    direction: usize,
    h: f64,
) -> Result<Vec<f64>> {
    if direction >= im.domain_dim {
        return Err(GeoError::Dimension {
            expected: im.domain_dim,
            got: direction + 1,
        });
    }
    let (plus, minus) = stencil_frames(im, &fr.u, direction, h)?;
    let dh = scaled(0.5 / h, &sub(&plus.h, &minus.h));
    let conn = cd.christoffel_contract(&fr.coordinate_tangent(direction), &fr.h);
    Ok(fr.project_normal(&add(&dh, &conn)))
}

/// Umbilical at `tols.exact` and `‖∇⊥H‖ ≤ tols.fd·(1 + ‖α‖)` in every
/// coordinate direction.
pub fn extrinsic_sphere_check_at(im: &ImmersionChart, u: &[f64], tols: Tolerances) -> Result<CheckVerdict> {
    let (fr, cd) = frame_and_curvature(im, u)?;
    let umb = umbilical_check_at(&fr, tols.exact);
    let h = fd_step(u);
    let mut worst = 0.0_f64;
    for d in 0..im.domain_dim {
        let v = normal_derivative_h_with(im, &fr, &cd, d, h)?;
        worst = worst.max(fr.norm(&v));
    }
    let parallel = CheckVerdict::from_defect(worst, tols.fd * (1.0 + fr.alpha_norm()));
    Ok(CheckVerdict::all_of(tols.fd, &[("umbilical", &umb), ("parallel_h", &parallel)]).with("nabla_perp_h", worst))
}

/// Christoffel symbols of the induced metric, `gamma[e][a][b] = Γ^e_ab`,
/// from `∂_c h_ab = ⟨∂_c∂_a f, ∂_b f⟩ + ⟨∂_a f, ∂_c∂_b f⟩ + (∂_k g_ij) f_a^i f_b^j f_c^k`.
pub fn induced_christoffel(fr: &ImmersionFrame, cd: &CurvatureData) -> Result<Vec<Vec<Vec<f64>>>> {
    let r = fr.dim();
    let m = fr.ambient_dim();
    let g = &cd.g;
    let f: Vec<Vec<f64>> = (0..r).map(|a| fr.coordinate_tangent(a)).collect();
    let dgf = |c: usize, x: &[f64], y: &[f64]| {
        let mut s = 0.0;
        for k in 0..m {
            if f[c][k] == 0.0 {
                continue;
            }
            for i in 0..m {
                for j in 0..m {
                    s += cd.dg[(k * m + i) * m + j] * x[i] * y[j] * f[c][k];
                }
            }
        }
        s
    };
    // dh[c][a][b] = ∂_c h_ab
    let mut dh = vec![vec![vec![0.0; r]; r]; r];
    for c in 0..r {
        for a in 0..r {
            for b in 0..r {
                dh[c][a][b] =
                    inner(g, &fr.hessian[c][a], &f[b]) + inner(g, &f[a], &fr.hessian[c][b]) + dgf(c, &f[a], &f[b]);
            }
        }
    }
    let h_inv = fr
        .induced_g
        .clone()
        .try_inverse()
        .ok_or_else(|| GeoError::RankDeficient("induced metric is singular".into()))?;
    let mut gamma = vec![vec![vec![0.0; r]; r]; r];
    for e in 0..r {
        for a in 0..r {
            for b in 0..r {
                let mut s = 0.0;
                for d in 0..r {
                    s += 0.5 * h_inv[(e, d)] * (dh[a][d][b] + dh[b][a][d] - dh[d][a][b]);
                }
                gamma[e][a][b] = s;
            }
        }
    }
    Ok(gamma)
}

/// Largest `‖(R(∂_a,∂_b)∂_c)^⊥ − (∇⊥_a α)(b,c) + (∇⊥_b α)(a,c)‖` over all
/// coordinate triples, with FD step `h`, and the scale used for the verdict.
pub fn codazzi_defect_with_step(im: &ImmersionChart, u: &[f64], h: f64) -> Result<(f64, f64)> {
    let r = im.domain_dim;
    if r < 2 {
        return Err(GeoError::Precondition(
            "the Codazzi check needs domain dimension >= 2".into(),
        ));
    }
    let (fr, cd) = frame_and_curvature(im, u)?;
    let gamma = induced_christoffel(&fr, &cd)?;
    let f: Vec<Vec<f64>> = (0..r).map(|a| fr.coordinate_tangent(a)).collect();

    // nabla[a][b][c] = (∇⊥_a α)(∂_b, ∂_c)
    let mut nabla = vec![vec![vec![Vec::new(); r]; r]; r];
    for a in 0..r {
        let (plus, minus) = stencil_frames(im, u, a, h)?;
        for b in 0..r {
            for c in 0..r {
                let d = scaled(0.5 / h, &sub(&plus.alpha_coord[b][c], &minus.alpha_coord[b][c]));
                let amb = add(&d, &cd.christoffel_contract(&f[a], &fr.alpha_coord[b][c]));
                let mut v = fr.project_normal(&amb);
                for e in 0..r {
                    axpy(-gamma[e][a][b], &fr.alpha_coord[e][c], &mut v);
                    axpy(-gamma[e][a][c], &fr.alpha_coord[b][e], &mut v);
                }
                nabla[a][b][c] = v;
            }
        }
    }

    let mut defect = 0.0_f64;
    for a in 0..r {
        for b in 0..r {
            if a == b {
                continue;
            }
            for c in 0..r {
                let lhs = fr.project_normal(&cd.riemann_vector(&f[a], &f[b], &f[c]));
                let rhs = sub(&nabla[a][b][c], &nabla[b][a][c]);
                defect = defect.max(fr.norm(&sub(&lhs, &rhs)));
            }
        }
    }
    let alpha_scale = fr.alpha_coord.iter().flatten().map(|v| fr.norm(v)).fold(0.0, f64::max);
    Ok((defect, cd.max_abs_riemann().max(alpha_scale)))
}

/// Codazzi equation with coordinate fields at the default FD step.
pub fn codazzi_residual_at(im: &ImmersionChart, u: &[f64], tol_fd: f64) -> Result<CheckVerdict> {
    let (defect, scale) = codazzi_defect_with_step(im, u, fd_step(u))?;
    Ok(CheckVerdict::from_defect(defect, tol_fd * (1.0 + scale)).with("scale", scale))
}

/// Largest change of the traced curvature `Σ_i R(e_i, w) e_i` (normal
/// part, `w` ranging over the original frame) when the tangent frame is
/// replaced by random rotations of itself.
pub fn basis_independence_probe(fr: &ImmersionFrame, cd: &CurvatureData, trials: usize, seed: u64) -> Result<f64> {
    require_matching(fr, cd)?;
    let r = fr.dim();
    let base: Vec<Vec<f64>> = fr
        .tangent_frame
        .iter()
        .map(|w| fr.project_normal(&traced_curvature(cd, &fr.tangent_frame, w)))
        .collect();
    let mut rng = stream(seed, 0, "basis-rotation");
    let id = DMatrix::identity(r, r);
    let mut spread = 0.0_f64;
    for _ in 0..trials {
        let q = orthonormal_frame(&mut rng, &id, r)?;
        let rotated: Vec<Vec<f64>> = q
            .iter()
            .map(|row| {
                let mut v = vec![0.0; fr.ambient_dim()];
                for (k, &c) in row.iter().enumerate() {
                    axpy(c, &fr.tangent_frame[k], &mut v);
                }
                v
            })
            .collect();
        for (w, b) in fr.tangent_frame.iter().zip(&base) {
            let v = fr.project_normal(&traced_curvature(cd, &rotated, w));
            spread = spread.max(fr.norm(&sub(&v, b)));
        }
    }
    Ok(spread)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat(m: usize) -> Ambient {
        Ambient::Riemannian(MetricChart::conformally_flat("euclidean", m, "1").unwrap())
    }

    fn round_sphere(a: f64) -> ImmersionChart {
        let c = [
            format!("{a}*sin(u1)*cos(u2)"),
            format!("{a}*sin(u1)*sin(u2)"),
            format!("{a}*cos(u1)"),
        ];
        ImmersionChart::from_strings("round-sphere", 2, &c, flat(3)).unwrap()
    }

    #[test]
    fn linear_subspace_is_totally_geodesic() {
        let im = ImmersionChart::from_strings("plane", 2, &["u1", "u2", "0"], flat(3)).unwrap();
        let (fr, cd) = frame_and_curvature(&im, &[0.3, -0.7]).unwrap();
        assert!(fr.alpha.iter().flatten().flatten().all(|&v| v == 0.0));
        assert!(fr.h.iter().all(|&v| v == 0.0));
        assert!(special_check_at(&fr, &cd, 1e-12).unwrap().passed());
        assert_eq!(normal_derivative_h(&im, &[0.3, -0.7], 0, 1e-4).unwrap(), vec![0.0; 3]);
        assert_eq!(codazzi_defect_with_step(&im, &[0.3, -0.7], 1e-4).unwrap().0, 0.0);
    }

    #[test]
    fn round_sphere_is_an_extrinsic_sphere() {
        let im = round_sphere(2.0);
        let u = [1.1, 0.4];
        let fr = frame_at(&im, &u).unwrap();
        assert!((fr.norm(&fr.h) - 0.5).abs() < 1e-8);
        assert!(umbilical_check_at(&fr, 1e-8).passed());
        for d in 0..2 {
            let v = normal_derivative_h(&im, &u, d, fd_step(&u)).unwrap();
            assert!(fr.norm(&v) < 1e-5);
        }
        assert!(extrinsic_sphere_check_at(&im, &u, Tolerances::default())
            .unwrap()
            .passed());
    }

    #[test]
    fn projector_properties() {
        let im = round_sphere(1.5);
        let fr = frame_at(&im, &[0.8, 2.0]).unwrap();
        let p = &fr.normal_projector;
        assert!((p * p - p).abs().max() < 1e-10);
        let gp = fr.metric() * p;
        assert!((&gp - gp.transpose()).abs().max() < 1e-10);
        for e in &fr.tangent_frame {
            assert!(max_abs(&fr.project_normal(e)) < 1e-12);
        }
    }

    #[test]
    fn paraboloid_is_not_umbilical() {
        let im = ImmersionChart::from_strings("paraboloid", 2, &["u1", "u2", "u1^2 + 2*u2^2"], flat(3)).unwrap();
        let fr = frame_at(&im, &[0.3, 0.2]).unwrap();
        assert!(umbilical_check_at(&fr, 1e-8).failed());
        let v = normal_derivative_h(&im, &[0.3, 0.2], 0, 1e-5).unwrap();
        assert!(fr.norm(&v) > 1e-3);
    }

    #[test]
    fn induced_christoffels_match_gauss_formula() {
        let sphere = MetricChart::conformally_flat("sphere", 3, "4/(1 + x1^2 + x2^2 + x3^2)^2").unwrap();
        let im = ImmersionChart::from_strings(
            "surface",
            2,
            &["u1 + 0.1*u2^2", "u2 - 0.2*u1*u2", "0.15*u1^2 + 0.05*u2^3"],
            Ambient::Riemannian(sphere),
        )
        .unwrap();
        let (fr, cd) = frame_and_curvature(&im, &[0.2, -0.1]).unwrap();
        let gamma = induced_christoffel(&fr, &cd).unwrap();
        // Tangential part of D_ab expressed in the coordinate basis.
        let h_inv = fr.induced_g.clone().try_inverse().unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for e in 0..2 {
                    let oracle: f64 = (0..2)
                        .map(|d| h_inv[(e, d)] * inner(fr.metric(), &fr.d2[a][b], &fr.coordinate_tangent(d)))
                        .sum();
                    assert!((gamma[e][a][b] - oracle).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rank_deficient_jacobian_is_an_error() {
        let im = ImmersionChart::from_strings("fold", 2, &["u1 + u2", "u1 + u2", "0"], flat(3)).unwrap();
        assert!(matches!(frame_at(&im, &[0.1, 0.2]), Err(GeoError::RankDeficient(_))));
    }

    #[test]
    fn curves_are_very_special() {
        let sphere = MetricChart::conformally_flat("sphere", 3, "4/(1 + x1^2 + x2^2 + x3^2)^2").unwrap();
        let im =
            ImmersionChart::from_strings("curve", 1, &["u1", "u1^2", "sin(u1)"], Ambient::Riemannian(sphere)).unwrap();
        let (fr, cd) = frame_and_curvature(&im, &[0.4]).unwrap();
        assert_eq!(very_special_check_at(&fr, &cd, 1e-12).unwrap().defect, 0.0);
    }
}
