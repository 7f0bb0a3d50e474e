//! Kähler charts: metrics from potentials, the Kähler conditions, and the
//! curvature identities of Kähler and XY-manifolds.
//!
//! Chart coordinates are ordered `(x1..xn, y1..yn)` and the standard complex
//! structure sends `∂x_k ↦ ∂y_k`, `∂y_k ↦ −∂x_k`.
//!
//! A potential φ is turned into a metric through its complex Hessian
//! `h_jk = ∂²φ/∂z_j∂z̄_k = A + iB`, with
//! `A = ¼(φ_{x_j x_k} + φ_{y_j y_k})` and `B = ¼(φ_{x_j y_k} − φ_{y_j x_k})`.
//! The real metric is `g = [[A, B], [−B, A]]`, i.e. `g(X,Y) = ω(X,JY)` for
//! `ω = (i/2) Σ h_jk dz_j ∧ dz̄_k`. For `φ = |z|²` this is the identity.
//!
//! In real dimension ≥ 6, antisymmetric manifolds
//! (`⟨R(X,JX)Y,JX⟩ = −⟨R(Y,JY)X,JY⟩`) already have constant holomorphic
//! sectional curvature; no separate check is provided for that class.

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;

use crate::dsl::{indexed_names, parse, Expr};
use crate::error::{GeoError, Result};
use crate::jet::{eval_jet, Jet2, Scalar};
use crate::linalg::{add, inner, mat_vec, max_abs, scaled, sub};
use crate::riemann::{curvature_at, riemann_inner_unchecked, CurvatureData, MetricChart};
use crate::sampling::{gaussian_vector, stream, unit_orthogonal_to, DEFAULT_SAMPLES};
use crate::verdict::{CheckVerdict, Outcome};
use crate::Tolerances;

/// Almost complex structure on a chart.
#[derive(Debug, Clone, PartialEq)]
pub enum ComplexStructureField {
    /// Constant block matrix `[[0, −I], [I, 0]]`.
    Standard { dim: usize },
    /// Arbitrary `m × m` expression matrix, row-major, in the chart variables.
    Field { dim: usize, entries: Vec<Expr> },
}

impl ComplexStructureField {
    pub fn standard(dim: usize) -> Self {
        ComplexStructureField::Standard { dim }
    }

    pub fn from_strings<S: AsRef<str>>(rows: &[Vec<S>], var_names: &[String]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(GeoError::Dimension {
                    expected: dim,
                    got: row.len(),
                });
            }
            for s in row {
                entries.push(parse(s.as_ref(), var_names)?);
            }
        }
        Ok(ComplexStructureField::Field { dim, entries })
    }

    pub fn dim(&self) -> usize {
        match self {
            ComplexStructureField::Standard { dim } | ComplexStructureField::Field { dim, .. } => *dim,
        }
    }

    pub fn is_standard(&self) -> bool {
        matches!(self, ComplexStructureField::Standard { .. })
    }

    /// J at `point` and, for non-constant fields, `∂_a J` (`dj[a]`).
    pub fn eval(&self, point: &[f64], var_names: &[String]) -> Result<(DMatrix<f64>, Vec<DMatrix<f64>>)> {
        match self {
            ComplexStructureField::Standard { dim } => {
                let n = dim / 2;
                let j = DMatrix::from_fn(*dim, *dim, |r, c| {
                    if r >= n && c == r - n {
                        1.0
                    } else if r < n && c == r + n {
                        -1.0
                    } else {
                        0.0
                    }
                });
                Ok((j, vec![DMatrix::zeros(*dim, *dim); *dim]))
            }
            ComplexStructureField::Field { dim, entries } => {
                let m = *dim;
                let jets: Vec<Jet2<f64>> = entries
                    .iter()
                    .map(|e| eval_jet(e, point, var_names))
                    .collect::<Result<_>>()?;
                let j = DMatrix::from_fn(m, m, |r, c| jets[r * m + c].value);
                let dj = (0..m)
                    .map(|a| DMatrix::from_fn(m, m, |r, c| jets[r * m + c].grad(a)))
                    .collect();
                Ok((j, dj))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KahlerChart {
    pub metric: MetricChart,
    pub j: ComplexStructureField,
    /// Set when the metric was built from a potential.
    pub potential: Option<Expr>,
}

impl KahlerChart {
    /// Pairs an arbitrary metric chart with a complex structure. Nothing is
    /// assumed; [`kahler_verify_at`] decides whether the pair is Kähler.
    pub fn from_metric(metric: MetricChart, j: ComplexStructureField) -> Result<Self> {
        if !metric.dim.is_multiple_of(2) || j.dim() != metric.dim {
            return Err(GeoError::Precondition(format!(
                "complex structure of size {} on a chart of dimension {}",
                j.dim(),
                metric.dim
            )));
        }
        Ok(Self {
            metric,
            j,
            potential: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim
    }

    pub fn name(&self) -> &str {
        &self.metric.name
    }

    /// Evaluates curvature and J at `point`.
    pub fn at(&self, point: &[f64]) -> Result<KahlerPoint> {
        self.with_curvature(curvature_at(&self.metric, point)?)
    }

    /// Pairs already computed curvature data with J at the same point.
    pub fn with_curvature(&self, cd: CurvatureData) -> Result<KahlerPoint> {
        let (j, dj) = self.j.eval(&cd.point, self.metric.var_names())?;
        Ok(KahlerPoint {
            cd,
            j,
            dj,
            standard: self.j.is_standard(),
        })
    }
}

/// Builds the Kähler chart of a potential in `x1..xn, y1..yn`. The metric
/// is probed at `probe` (origin by default) and must be positive definite.
pub fn metric_from_kahler_potential(
    name: impl Into<String>,
    phi: Expr,
    n: usize,
    probe: Option<&[f64]>,
) -> Result<KahlerChart> {
    if n == 0 {
        return Err(GeoError::InvalidParam {
            name: "n".into(),
            reason: "complex dimension must be >= 1".into(),
        });
    }
    let metric = MetricChart::from_potential(name, phi.clone(), n);
    let origin = vec![0.0; 2 * n];
    let probe = probe.unwrap_or(&origin);
    let g = metric.metric_at(probe)?;
    crate::riemann::checked_inverse(&g, probe).map_err(|_| {
        GeoError::Precondition(format!(
            "potential is not strictly plurisubharmonic at {probe:?} (metric not positive definite)"
        ))
    })?;
    Ok(KahlerChart {
        metric,
        j: ComplexStructureField::standard(2 * n),
        potential: Some(phi),
    })
}

/// Parses a potential over `x1..xn, y1..yn`.
pub fn parse_potential(source: &str, n: usize) -> Result<Expr> {
    let mut vars = indexed_names("x", n);
    vars.extend(indexed_names("y", n));
    Ok(parse(source, &vars)?)
}

/// Assembles metric jets from the outer Hessian of a doubly-seeded potential.
pub(crate) fn metric_from_potential_hessian(phi: &Jet2<Jet2<f64>>, n: usize) -> Vec<Jet2<f64>> {
    assemble_potential_metric(phi, n, 1.0)
}

/// `b_sign` selects the sign of the off-diagonal block; only `+1` yields a
/// parallel J (exposed for the test that pins the convention).
#[doc(hidden)]
pub fn assemble_potential_metric(phi: &Jet2<Jet2<f64>>, n: usize, b_sign: f64) -> Vec<Jet2<f64>> {
    let m = 2 * n;
    let h = |i: usize, j: usize| phi.hess(i, j);
    let mut g = vec![Jet2::<f64>::constant(0.0); m * m];
    for a in 0..n {
        for b in 0..n {
            let re = (h(a, b) + h(n + a, n + b)).scale(0.25);
            let im = (h(a, n + b) - h(n + a, b)).scale(0.25 * b_sign);
            g[a * m + b] = re.clone();
            g[(n + a) * m + (n + b)] = re;
            g[a * m + (n + b)] = im.clone();
            g[(n + a) * m + b] = -im;
        }
    }
    g
}

/// Curvature data and complex structure evaluated at one point.
#[derive(Debug, Clone)]
pub struct KahlerPoint {
    pub cd: CurvatureData,
    pub j: DMatrix<f64>,
    /// `dj[a] = ∂_a J`.
    pub dj: Vec<DMatrix<f64>>,
    pub standard: bool,
}

/// An orthonormal `(X, JX, Y, JY)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadruple {
    pub x: Vec<f64>,
    pub jx: Vec<f64>,
    pub y: Vec<f64>,
    pub jy: Vec<f64>,
}

/// An orthonormal `(X, JX, Y, JY, Z, JZ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sextuple {
    pub quad: Quadruple,
    pub z: Vec<f64>,
    pub jz: Vec<f64>,
}

impl KahlerPoint {
    pub fn dim(&self) -> usize {
        self.cd.dim
    }

    pub fn apply_j(&self, v: &[f64]) -> Vec<f64> {
        mat_vec(&self.j, v)
    }

    /// `⟨R(u,v)w, z⟩`.
    pub fn r(&self, u: &[f64], v: &[f64], w: &[f64], z: &[f64]) -> f64 {
        riemann_inner_unchecked(&self.cd, u, v, w, z)
    }

    fn scale(&self) -> f64 {
        1.0 + self.cd.max_abs_riemann()
    }

    fn require_dim(&self, min: usize, what: &str) -> Result<()> {
        if self.dim() < min {
            return Err(GeoError::Precondition(format!(
                "{what} needs real dimension >= {min}, chart has {}",
                self.dim()
            )));
        }
        Ok(())
    }

    /// Random orthonormal quadruple: X uniform, Y uniform in span(X, JX)^⊥.
    pub fn sample_quadruple(&self, rng: &mut ChaCha8Rng) -> Result<Quadruple> {
        self.require_dim(4, "a quadruple")?;
        let g = &self.cd.g;
        let x = unit_orthogonal_to(rng, g, &[])?;
        let jx = self.apply_j(&x);
        let y = unit_orthogonal_to(rng, g, &[x.clone(), jx.clone()])?;
        let jy = self.apply_j(&y);
        Ok(Quadruple { x, jx, y, jy })
    }

    pub fn sample_sextuple(&self, rng: &mut ChaCha8Rng) -> Result<Sextuple> {
        self.require_dim(6, "a sextuple")?;
        let quad = self.sample_quadruple(rng)?;
        let z = self.sample_z(rng, &quad, &[])?;
        let jz = self.apply_j(&z);
        Ok(Sextuple { quad, z, jz })
    }

    /// Unit vector orthogonal to the quadruple and to `extra` (an
    /// orthonormal set closed under J).
    pub fn sample_z(&self, rng: &mut ChaCha8Rng, quad: &Quadruple, extra: &[Vec<f64>]) -> Result<Vec<f64>> {
        let mut against = vec![quad.x.clone(), quad.jx.clone(), quad.y.clone(), quad.jy.clone()];
        against.extend_from_slice(extra);
        unit_orthogonal_to(rng, &self.cd.g, &against)
    }

    /// Largest deviation of `vs` from being g-orthonormal.
    pub fn orthonormality_defect(&self, vs: &[&[f64]]) -> f64 {
        let g = &self.cd.g;
        let mut worst = 0.0_f64;
        for (i, u) in vs.iter().enumerate() {
            for (k, v) in vs.iter().enumerate().skip(i) {
                let target = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((inner(g, u, v) - target).abs());
            }
        }
        worst
    }

    fn check_quadruple(&self, q: &Quadruple) -> Result<()> {
        let d = self.orthonormality_defect(&[&q.x, &q.jx, &q.y, &q.jy]);
        let jd = max_abs(&sub(&self.apply_j(&q.x), &q.jx)).max(max_abs(&sub(&self.apply_j(&q.y), &q.jy)));
        if d > 1e-10 || jd > 1e-10 {
            return Err(GeoError::Precondition(format!(
                "(X, JX, Y, JY) is not orthonormal (defect {:.3e})",
                d.max(jd)
            )));
        }
        Ok(())
    }

    fn check_sextuple(&self, s: &Sextuple) -> Result<()> {
        self.check_quadruple(&s.quad)?;
        let q = &s.quad;
        let d = self.orthonormality_defect(&[&q.x, &q.jx, &q.y, &q.jy, &s.z, &s.jz]);
        let jd = max_abs(&sub(&self.apply_j(&s.z), &s.jz));
        if d > 1e-10 || jd > 1e-10 {
            return Err(GeoError::Precondition(format!(
                "Z is not a unit vector orthogonal to span(X, JX, Y, JY) (defect {:.3e})",
                d.max(jd)
            )));
        }
        Ok(())
    }
}

/// Kähler conditions at a point: `J² = −I`, `g(J·,J·) = g`, `∇J = 0`.
pub fn kahler_verify_at(kp: &KahlerPoint, tol_exact: f64, tol_fd: f64) -> CheckVerdict {
    let m = kp.dim();
    let j = &kp.j;
    let g = &kp.cd.g;
    let j2 = j * j + DMatrix::identity(m, m);
    let j2_res = j2.abs().max();
    let compat = j.transpose() * g * j - g;
    let gmax = g.abs().max().max(1.0);
    let compat_res = compat.abs().max() / gmax;

    // (∇_a J)^i_j = ∂_a J^i_j + Γ^i_ak J^k_j − Γ^k_aj J^i_k
    let mut nabla_res = 0.0_f64;
    let cd = &kp.cd;
    for a in 0..m {
        for i in 0..m {
            for jj in 0..m {
                let mut v = kp.dj[a][(i, jj)];
                for k in 0..m {
                    v += cd.gamma(i, a, k) * j[(k, jj)] - cd.gamma(k, a, jj) * j[(i, k)];
                }
                nabla_res = nabla_res.max(v.abs());
            }
        }
    }
    let gamma_scale = 1.0 + max_abs(&cd.christoffel) * j.abs().max();

    let algebraic = CheckVerdict::from_defect(j2_res.max(compat_res), tol_exact);
    let parallel = CheckVerdict::from_defect(nabla_res, tol_fd * gamma_scale);
    CheckVerdict::all_of(tol_exact, &[("algebraic", &algebraic), ("parallel", &parallel)])
        .with("j_squared", j2_res)
        .with("compatibility", compat_res)
        .with("nabla_j", nabla_res)
}

/// Holomorphic sectional curvature `⟨R(X,JX)JX,X⟩ / ⟨X,X⟩²`.
pub fn holomorphic_sectional_at(kp: &KahlerPoint, x: &[f64]) -> Result<f64> {
    if x.len() != kp.dim() {
        return Err(GeoError::Dimension {
            expected: kp.dim(),
            got: x.len(),
        });
    }
    let xx = kp.cd.inner(x, x);
    if !(xx > 0.0) {
        return Err(GeoError::ZeroVector);
    }
    let jx = kp.apply_j(x);
    Ok(kp.r(x, &jx, &jx, x) / (xx * xx))
}

/// XY condition `⟨R(X,JX)Y,JX⟩ = ⟨R(Y,JY)X,JY⟩` on random quadruples.
pub fn xy_check_at(kp: &KahlerPoint, samples: usize, seed: u64, tol: f64) -> Result<CheckVerdict> {
    kp.require_dim(4, "the XY condition")?;
    let mut rng = stream(seed, 0, "xy");
    let mut defect = 0.0_f64;
    let mut max_side = 0.0_f64;
    for _ in 0..samples {
        let q = kp.sample_quadruple(&mut rng)?;
        let lhs = kp.r(&q.x, &q.jx, &q.y, &q.jx);
        let rhs = kp.r(&q.y, &q.jy, &q.x, &q.jy);
        defect = defect.max((lhs - rhs).abs());
        max_side = max_side.max(lhs.abs()).max(rhs.abs());
    }
    Ok(CheckVerdict::from_defect(defect, tol * kp.scale()).with("max_side", max_side))
}

/// Signed residuals of the three equivalent XY forms:
/// (a) `⟨R(X,JX)Y,JX⟩ − ⟨R(Y,JY)X,JY⟩`, (b) `⟨R(X,JX)Y,X⟩ + ⟨R(Y,JY)X,Y⟩`,
/// (c) `⟨R(X,Y)X,JY⟩`.
pub fn xy_equivalences_at(kp: &KahlerPoint, q: &Quadruple) -> Result<[f64; 3]> {
    kp.check_quadruple(q)?;
    Ok(xy_forms(kp, q))
}

fn xy_forms(kp: &KahlerPoint, q: &Quadruple) -> [f64; 3] {
    let a = kp.r(&q.x, &q.jx, &q.y, &q.jx) - kp.r(&q.y, &q.jy, &q.x, &q.jy);
    let b = kp.r(&q.x, &q.jx, &q.y, &q.x) + kp.r(&q.y, &q.jy, &q.x, &q.y);
    let c = kp.r(&q.x, &q.y, &q.x, &q.jy);
    [a, b, c]
}

/// The quadruple with Y replaced by JY.
pub fn rotate_y(kp: &KahlerPoint, q: &Quadruple) -> Quadruple {
    Quadruple {
        x: q.x.clone(),
        jx: q.jx.clone(),
        y: q.jy.clone(),
        jy: kp.apply_j(&q.jy),
    }
}

/// Identities valid on every Kähler manifold, evaluated on random tuples:
/// Y→JY substitution between XY forms (a) and (b); the polarization
/// `4⟨R(X,Y)X,JY⟩ = 2{⟨R(A,JA)B,A⟩ + ⟨R(B,JB)A,B⟩}` with `A, B = (X ± Y)/√2`;
/// J-invariance `⟨R(X,Y)JZ,JW⟩ = ⟨R(X,Y)Z,W⟩`; and the Bianchi consequence
/// `⟨R(Z,JZ)X,JY⟩ = ⟨R(Y,Z)X,Z⟩ + ⟨R(Y,JZ)X,JZ⟩` (real dimension ≥ 6).
pub fn kahler_identity_suite_at(kp: &KahlerPoint, samples: usize, seed: u64, tol: f64) -> Result<CheckVerdict> {
    kp.require_dim(4, "the Kähler identity suite")?;
    let mut rng = stream(seed, 0, "kahler-identities");
    let m = kp.dim();
    let g = &kp.cd.g;
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let (mut subst, mut polar, mut jinv, mut bianchi) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let with_bianchi = m >= 6;
    for _ in 0..samples {
        let q = kp.sample_quadruple(&mut rng)?;
        let [_, b, c] = xy_forms(kp, &q);
        let [a_rot, _, _] = xy_forms(kp, &rotate_y(kp, &q));
        subst = subst.max((a_rot - b).abs());

        let a_vec = scaled(s2, &add(&q.x, &q.y));
        let b_vec = scaled(s2, &sub(&q.x, &q.y));
        let ja = kp.apply_j(&a_vec);
        let jb = kp.apply_j(&b_vec);
        let rhs = 2.0 * (kp.r(&a_vec, &ja, &b_vec, &a_vec) + kp.r(&b_vec, &jb, &a_vec, &b_vec));
        polar = polar.max((4.0 * c - rhs).abs());

        let vs: Vec<Vec<f64>> = (0..4)
            .map(|_| {
                let v = gaussian_vector(&mut rng, m);
                let n = crate::linalg::norm(g, &v);
                scaled(1.0 / n, &v)
            })
            .collect();
        let jz = kp.apply_j(&vs[2]);
        let jw = kp.apply_j(&vs[3]);
        jinv = jinv.max((kp.r(&vs[0], &vs[1], &jz, &jw) - kp.r(&vs[0], &vs[1], &vs[2], &vs[3])).abs());

        if with_bianchi {
            let z = kp.sample_z(&mut rng, &q, &[])?;
            let jz = kp.apply_j(&z);
            let lhs = kp.r(&z, &jz, &q.x, &q.jy);
            let rhs = kp.r(&q.y, &z, &q.x, &z) + kp.r(&q.y, &jz, &q.x, &jz);
            bianchi = bianchi.max((lhs - rhs).abs());
        }
    }
    let defect = subst.max(polar).max(jinv).max(bianchi);
    let mut v = CheckVerdict::from_defect(defect, tol * kp.scale())
        .with("substitution", subst)
        .with("polarization", polar)
        .with("j_invariance", jinv);
    if with_bianchi {
        v = v.with("bianchi", bianchi);
    } else {
        v = v.with_reason("bianchi skipped: needs real dimension >= 6");
    }
    Ok(v)
}

/// The four quantities of the XY chain for a sextuple:
/// `⟨R(X,JX)Y,JX⟩, 2⟨R(Z,JZ)X,JY⟩, 4⟨R(Z,X)Z,Y⟩, 4⟨R(JZ,X)JZ,Y⟩`.
pub fn chain_quantities(kp: &KahlerPoint, s: &Sextuple) -> [f64; 4] {
    let q = &s.quad;
    [
        kp.r(&q.x, &q.jx, &q.y, &q.jx),
        2.0 * kp.r(&s.z, &s.jz, &q.x, &q.jy),
        4.0 * kp.r(&s.z, &q.x, &s.z, &q.y),
        4.0 * kp.r(&s.jz, &q.x, &s.jz, &q.y),
    ]
}

fn require_kahler(kp: &KahlerPoint, tols: Tolerances) -> Result<()> {
    let v = kahler_verify_at(kp, tols.exact, tols.fd);
    if !v.passed() {
        return Err(GeoError::Precondition(format!(
            "chart is not Kähler at this point (defect {:.3e})",
            v.defect
        )));
    }
    Ok(())
}

/// XY chain equalities and Z-independence on an XY point. Reports
/// "not applicable" when the XY condition fails at the point; refuses
/// non-Kähler charts.
pub fn xy_chain_at(kp: &KahlerPoint, s: &Sextuple, seed: u64, tols: Tolerances) -> Result<CheckVerdict> {
    kp.require_dim(6, "the XY chain")?;
    require_kahler(kp, tols)?;
    kp.check_sextuple(s)?;
    let xy = xy_check_at(kp, DEFAULT_SAMPLES, seed, tols.exact)?;
    if !xy.passed() {
        return Ok(CheckVerdict::not_applicable(format!(
            "not an XY point (XY defect {:.3e})",
            xy.defect
        )));
    }
    let qs = chain_quantities(kp, s);
    let mut rng = stream(seed, 1, "xy-chain-alt-z");
    let z_alt = kp.sample_z(&mut rng, &s.quad, &[])?;
    let q = &s.quad;
    let q3_alt = 4.0 * kp.r(&z_alt, &q.x, &z_alt, &q.y);
    let defect = (qs[0] - qs[1])
        .abs()
        .max((qs[1] - qs[2]).abs())
        .max((qs[2] - qs[3]).abs())
        .max((qs[2] - q3_alt).abs());
    Ok(CheckVerdict::from_defect(defect, tols.exact * kp.scale())
        .with("q1", qs[0])
        .with("q2", qs[1])
        .with("q3", qs[2])
        .with("q4", qs[3])
        .with("q3_alt_z", q3_alt)
        .with("z_spread", (qs[2] - q3_alt).abs()))
}

/// Sampled version of [`xy_chain_at`].
pub fn xy_chain_sampled_at(kp: &KahlerPoint, samples: usize, seed: u64, tols: Tolerances) -> Result<CheckVerdict> {
    kp.require_dim(6, "the XY chain")?;
    let mut rng = stream(seed, 2, "xy-chain");
    let mut worst: Option<CheckVerdict> = None;
    for i in 0..samples.max(1) {
        let s = kp.sample_sextuple(&mut rng)?;
        let v = xy_chain_at(kp, &s, seed.wrapping_add(i as u64), tols)?;
        if v.outcome == Outcome::NotApplicable {
            return Ok(v);
        }
        if worst.as_ref().is_none_or(|w| v.defect > w.defect) {
            worst = Some(v);
        }
    }
    Ok(worst.expect("at least one sample"))
}

/// Constant holomorphic sectional curvature at a point, via the vanishing
/// of `⟨R(X,JX)Y,JX⟩` and `⟨R(X,JX)Y,X⟩` on random quadruples.
pub fn constant_hol_curvature_check_at(kp: &KahlerPoint, samples: usize, seed: u64, tol: f64) -> Result<CheckVerdict> {
    kp.require_dim(4, "the holomorphic curvature check")?;
    let mut rng = stream(seed, 0, "constant-hol");
    let mut defect = 0.0_f64;
    let (mut h_min, mut h_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..samples {
        let q = kp.sample_quadruple(&mut rng)?;
        let a = kp.r(&q.x, &q.jx, &q.y, &q.jx);
        let b = kp.r(&q.x, &q.jx, &q.y, &q.x);
        defect = defect.max(a.abs()).max(b.abs());
        let h = holomorphic_sectional_at(kp, &q.x)?;
        h_min = h_min.min(h);
        h_max = h_max.max(h);
    }
    let mut v = CheckVerdict::from_defect(defect, tol * kp.scale()).with("hol_spread", h_max - h_min);
    if v.passed() {
        v = v.with("hol_curvature", 0.5 * (h_min + h_max));
    }
    Ok(v)
}

/// The six scalars that vanish on constant holomorphic curvature:
/// `⟨R(X,JX)Y,JX⟩, ⟨R(X,JX)Y,X⟩, ⟨R(X,Y)X,JY⟩` and, with Z orthogonal to
/// the quadruple, `⟨R(Z,X)Z,Y⟩, ⟨R(JZ,X)JZ,Y⟩, ⟨R(Z,JX)Z,Y⟩`.
pub fn hol_vanishing_probe(kp: &KahlerPoint, s: &Sextuple, tols: Tolerances) -> Result<[f64; 6]> {
    let pre = constant_hol_curvature_check_at(kp, DEFAULT_SAMPLES, crate::sampling::DEFAULT_SEED, tols.exact)?;
    if !pre.passed() {
        return Err(GeoError::Precondition(
            "chart does not have constant holomorphic curvature at this point".into(),
        ));
    }
    kp.check_sextuple(s)?;
    let q = &s.quad;
    Ok([
        kp.r(&q.x, &q.jx, &q.y, &q.jx),
        kp.r(&q.x, &q.jx, &q.y, &q.x),
        kp.r(&q.x, &q.y, &q.x, &q.jy),
        kp.r(&s.z, &q.x, &s.z, &q.y),
        kp.r(&s.jz, &q.x, &s.jz, &q.y),
        kp.r(&s.z, &q.jx, &s.z, &q.y),
    ])
}

/// Vanishing of `⟨R(X,Y)Z,W⟩` on antiholomorphic orthonormal quadruples
/// (X, Y, Z, W with their J-images all orthonormal) at an XY point of real
/// dimension ≥ 8.
pub fn antiholomorphic_check_at(kp: &KahlerPoint, samples: usize, seed: u64, tols: Tolerances) -> Result<CheckVerdict> {
    kp.require_dim(8, "the antiholomorphic probe")?;
    require_kahler(kp, tols)?;
    let xy = xy_check_at(kp, DEFAULT_SAMPLES, seed, tols.exact)?;
    if !xy.passed() {
        return Ok(CheckVerdict::not_applicable("not an XY point"));
    }
    let mut rng = stream(seed, 0, "antiholomorphic");
    let mut defect = 0.0_f64;
    for _ in 0..samples {
        let q = kp.sample_quadruple(&mut rng)?;
        let z = kp.sample_z(&mut rng, &q, &[])?;
        let jz = kp.apply_j(&z);
        let w = kp.sample_z(&mut rng, &q, &[z.clone(), jz])?;
        defect = defect.max(kp.r(&q.x, &q.y, &z, &w).abs());
    }
    Ok(CheckVerdict::from_defect(defect, tols.exact * kp.scale()))
}
