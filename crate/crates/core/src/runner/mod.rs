//! Scenario execution: check dispatch, report assembly and the bundled
//! verification suite.

mod report;
mod scenario;
mod suite;

use std::fmt;

use serde::Serialize;

use crate::error::{GeoError, Result};
use crate::immersion::{
    basis_independence_probe, codazzi_residual_at, extrinsic_sphere_check_at, frame_and_curvature, special_check_at,
    umbilical_check_at, very_special_check_at, Ambient, ImmersionChart, ImmersionFrame,
};
use crate::kahler::{
    constant_hol_curvature_check_at, hol_vanishing_probe, kahler_identity_suite_at, kahler_verify_at,
    xy_chain_sampled_at, xy_check_at, KahlerPoint,
};
use crate::riemann::{constant_curvature_check_at, curvature_at, einstein_check_at, CurvatureData};
use crate::sampling::stream;
use crate::verdict::CheckVerdict;
use crate::Tolerances;

pub use report::{render_report_text, CheckReport, CheckRow, Summary};
pub use scenario::{load_scenario, parse_scenario, Format, Overrides, Scenario};
pub use suite::{render_suite_text, verify_suite, SuiteOptions, SuiteReport, SuiteRow, GROUPS};

/// Rotations used by the basis-independence probe.
pub const INDEPENDENCE_TRIALS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    Special,
    VerySpecial,
    Umbilical,
    ExtrinsicSphere,
    Codazzi,
    Einstein,
    ConstantCurvature,
    KahlerVerify,
    Xy,
    KahlerIdentities,
    XyChain,
    ConstantHolCurvature,
    BasisIndependence,
    HolProbes,
}

impl CheckName {
    pub const ALL: [CheckName; 14] = [
        CheckName::Special,
        CheckName::VerySpecial,
        CheckName::Umbilical,
        CheckName::ExtrinsicSphere,
        CheckName::Codazzi,
        CheckName::Einstein,
        CheckName::ConstantCurvature,
        CheckName::KahlerVerify,
        CheckName::Xy,
        CheckName::KahlerIdentities,
        CheckName::XyChain,
        CheckName::ConstantHolCurvature,
        CheckName::BasisIndependence,
        CheckName::HolProbes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckName::Special => "special",
            CheckName::VerySpecial => "very-special",
            CheckName::Umbilical => "umbilical",
            CheckName::ExtrinsicSphere => "extrinsic-sphere",
            CheckName::Codazzi => "codazzi",
            CheckName::Einstein => "einstein",
            CheckName::ConstantCurvature => "constant-curvature",
            CheckName::KahlerVerify => "kahler-verify",
            CheckName::Xy => "xy",
            CheckName::KahlerIdentities => "kahler-identities",
            CheckName::XyChain => "xy-chain",
            CheckName::ConstantHolCurvature => "constant-hol-curvature",
            CheckName::BasisIndependence => "basis-independence",
            CheckName::HolProbes => "hol-probes",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| GeoError::UnknownName {
                kind: "check",
                name: s.into(),
                valid: Self::ALL.iter().map(|c| c.name().to_string()).collect(),
            })
    }

    /// The mathematical statement the check tests.
    pub fn statement(self) -> &'static str {
        match self {
            CheckName::Special => {
                "special: Σ_i R(e_i,w)e_i is tangent for an orthonormal tangent frame and every tangent w"
            }
            CheckName::VerySpecial => "very special: R(v,w)v is tangent for all tangent v, w",
            CheckName::Umbilical => "umbilical: α(X,Y) = ⟨X,Y⟩H",
            CheckName::ExtrinsicSphere => "extrinsic sphere: umbilical with ∇⊥H = 0",
            CheckName::Codazzi => "Codazzi: (R(X,Y)Z)^⊥ = (∇⊥_X α)(Y,Z) − (∇⊥_Y α)(X,Z)",
            CheckName::Einstein => "Einstein: Ric = ρ g",
            CheckName::ConstantCurvature => "constant curvature: R = ρ(g∧g), ⟨R(v,w)v,η⟩ = ρ(⟨v,η⟩⟨w,v⟩ − ⟨v,v⟩⟨w,η⟩)",
            CheckName::KahlerVerify => "Kähler: J² = −I, g(J·,J·) = g, ∇J = 0",
            CheckName::Xy => "XY: ⟨R(X,JX)Y,JX⟩ = ⟨R(Y,JY)X,JY⟩ for orthonormal X, JX, Y, JY",
            CheckName::KahlerIdentities => {
                "Kähler identities: XY-form substitution, polarization, J-invariance, Bianchi consequence"
            }
            CheckName::XyChain => {
                "XY chain: ⟨R(X,JX)Y,JX⟩ = 2⟨R(Z,JZ)X,JY⟩ = 4⟨R(Z,X)Z,Y⟩ = 4⟨R(JZ,X)JZ,Y⟩, independent of Z"
            }
            CheckName::ConstantHolCurvature => "constant holomorphic curvature: ⟨R(X,JX)Y,JX⟩ = ⟨R(X,JX)Y,X⟩ = 0",
            CheckName::BasisIndependence => "Σ_i R(v_i,w)v_i is independent of the orthonormal tangent basis",
            CheckName::HolProbes => {
                "constant holomorphic curvature: the six mixed scalars in X, JX, Y, JY, Z, JZ vanish"
            }
        }
    }

    pub fn needs_immersion(self) -> bool {
        matches!(
            self,
            CheckName::Special
                | CheckName::VerySpecial
                | CheckName::Umbilical
                | CheckName::ExtrinsicSphere
                | CheckName::Codazzi
                | CheckName::BasisIndependence
        )
    }

    pub fn needs_kahler(self) -> bool {
        matches!(
            self,
            CheckName::KahlerVerify
                | CheckName::Xy
                | CheckName::KahlerIdentities
                | CheckName::XyChain
                | CheckName::ConstantHolCurvature
                | CheckName::HolProbes
        )
    }

    /// Minimal real ambient dimension.
    pub fn min_ambient_dim(self) -> usize {
        match self {
            CheckName::Xy | CheckName::KahlerIdentities | CheckName::ConstantHolCurvature => 4,
            CheckName::XyChain | CheckName::HolProbes => 6,
            _ => 2,
        }
    }

    /// Whether the verdict relies on finite differences.
    pub fn uses_fd(self) -> bool {
        matches!(self, CheckName::ExtrinsicSphere | CheckName::Codazzi)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What the checks are run against.
#[derive(Debug, Clone, PartialEq)]
pub struct Subject {
    pub ambient: Ambient,
    pub immersion: Option<ImmersionChart>,
}

impl Subject {
    pub fn point_dim(&self) -> usize {
        match &self.immersion {
            Some(im) => im.domain_dim,
            None => self.ambient.dim(),
        }
    }

    /// Rejects checks that cannot apply to this subject.
    pub fn validate(&self, checks: &[CheckName]) -> Result<()> {
        for &c in checks {
            if c.needs_immersion() && self.immersion.is_none() {
                return Err(GeoError::Scenario(format!("check '{c}' needs an immersion")));
            }
            if c.needs_kahler() && self.ambient.as_kahler().is_none() {
                return Err(GeoError::Scenario(format!(
                    "check '{c}' needs a Kähler ambient (potential or complex structure)"
                )));
            }
            if c.needs_kahler() && self.ambient.dim() < c.min_ambient_dim() {
                return Err(GeoError::Scenario(format!(
                    "check '{c}' needs real ambient dimension >= {}, {} has {}",
                    c.min_ambient_dim(),
                    self.ambient.name(),
                    self.ambient.dim()
                )));
            }
            if c == CheckName::Codazzi && self.immersion.as_ref().is_some_and(|im| im.domain_dim < 2) {
                return Err(GeoError::Scenario(
                    "check 'codazzi' needs an immersion of dimension >= 2".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Run parameters shared by all cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub tolerances: Tolerances,
    pub samples: usize,
    pub seed: u64,
}

/// Lazily computed per-point data.
struct PointData<'a> {
    subject: &'a Subject,
    point: &'a [f64],
    frame: Option<(ImmersionFrame, CurvatureData)>,
    cd: Option<CurvatureData>,
    kahler: Option<KahlerPoint>,
}

impl<'a> PointData<'a> {
    fn new(subject: &'a Subject, point: &'a [f64]) -> Self {
        Self {
            subject,
            point,
            frame: None,
            cd: None,
            kahler: None,
        }
    }

    fn frame(&mut self) -> Result<&(ImmersionFrame, CurvatureData)> {
        if self.frame.is_none() {
            let im = self.subject.immersion.as_ref().expect("validated");
            self.frame = Some(frame_and_curvature(im, self.point)?);
        }
        Ok(self.frame.as_ref().expect("set above"))
    }

    fn curvature(&mut self) -> Result<&CurvatureData> {
        if self.cd.is_none() {
            let cd = if self.subject.immersion.is_some() {
                self.frame()?.1.clone()
            } else {
                curvature_at(self.subject.ambient.metric(), self.point)?
            };
            self.cd = Some(cd);
        }
        Ok(self.cd.as_ref().expect("set above"))
    }

    fn kahler(&mut self) -> Result<&KahlerPoint> {
        if self.kahler.is_none() {
            let cd = self.curvature()?.clone();
            let kc = self.subject.ambient.as_kahler().expect("validated");
            self.kahler = Some(kc.with_curvature(cd)?);
        }
        Ok(self.kahler.as_ref().expect("set above"))
    }
}

/// Evaluates `checks` at one point. Errors become per-cell error verdicts.
pub fn run_point(
    subject: &Subject,
    checks: &[CheckName],
    point: &[f64],
    point_index: usize,
    cfg: &RunConfig,
) -> Vec<CheckVerdict> {
    let mut data = PointData::new(subject, point);
    checks
        .iter()
        .map(|&c| match run_cell(&mut data, c, point_index, cfg) {
            Ok(v) => v,
            Err(e) => CheckVerdict::error(e.to_string()),
        })
        .collect()
}

fn cell_seed(seed: u64, point_index: usize, check: CheckName) -> u64 {
    use rand::RngCore;
    stream(seed, point_index as u64, check.name()).next_u64()
}

fn run_cell(data: &mut PointData, check: CheckName, point_index: usize, cfg: &RunConfig) -> Result<CheckVerdict> {
    let tols = cfg.tolerances;
    let seed = cell_seed(cfg.seed, point_index, check);
    let samples = cfg.samples.max(1);
    match check {
        CheckName::Special => {
            let (fr, cd) = data.frame()?;
            special_check_at(fr, cd, tols.exact)
        }
        CheckName::VerySpecial => {
            let (fr, cd) = data.frame()?;
            very_special_check_at(fr, cd, tols.exact)
        }
        CheckName::Umbilical => {
            let (fr, _) = data.frame()?;
            Ok(umbilical_check_at(fr, tols.exact))
        }
        CheckName::ExtrinsicSphere => {
            let im = data.subject.immersion.as_ref().expect("validated");
            extrinsic_sphere_check_at(im, data.point, tols)
        }
        CheckName::Codazzi => {
            let im = data.subject.immersion.as_ref().expect("validated");
            codazzi_residual_at(im, data.point, tols.fd)
        }
        CheckName::BasisIndependence => {
            let (fr, cd) = data.frame()?;
            let spread = basis_independence_probe(fr, cd, INDEPENDENCE_TRIALS, seed)?;
            // Roundoff-level threshold: the identity is exact.
            Ok(CheckVerdict::from_defect(
                spread,
                tols.exact * 1e-2 * (1.0 + cd.max_abs_riemann()),
            ))
        }
        CheckName::Einstein => einstein_check_at(data.curvature()?, tols.exact),
        CheckName::ConstantCurvature => constant_curvature_check_at(data.curvature()?, tols.exact),
        CheckName::KahlerVerify => Ok(kahler_verify_at(data.kahler()?, tols.exact, tols.fd)),
        CheckName::Xy => xy_check_at(data.kahler()?, samples, seed, tols.exact),
        CheckName::KahlerIdentities => kahler_identity_suite_at(data.kahler()?, samples, seed, tols.exact),
        CheckName::XyChain => xy_chain_sampled_at(data.kahler()?, samples.min(16), seed, tols),
        CheckName::ConstantHolCurvature => constant_hol_curvature_check_at(data.kahler()?, samples, seed, tols.exact),
        CheckName::HolProbes => hol_probes(data.kahler()?, samples.min(16), seed, tols),
    }
}

fn hol_probes(kp: &KahlerPoint, samples: usize, seed: u64, tols: Tolerances) -> Result<CheckVerdict> {
    let mut rng = stream(seed, 0, "hol-probes");
    let mut defect = 0.0_f64;
    for _ in 0..samples {
        let s = kp.sample_sextuple(&mut rng)?;
        match hol_vanishing_probe(kp, &s, tols) {
            Ok(vals) => defect = vals.iter().fold(defect, |m, v| m.max(v.abs())),
            Err(GeoError::Precondition(msg)) if msg.contains("constant holomorphic") => {
                return Ok(CheckVerdict::not_applicable(msg));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(CheckVerdict::from_defect(
        defect,
        tols.exact * (1.0 + kp.cd.max_abs_riemann()),
    ))
}
