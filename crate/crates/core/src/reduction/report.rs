//! Named verification checks run over seeded sample points.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::{component_residuals, crosscheck_components};
use super::consistency::{loong3b, momentum_conservation, ricci_decomposition_fit, RicciDecomposition};
use super::continuity::kg2_residual;
use super::identify::{cond00, mass_squared_general};
use super::model::Model;
use super::sweep::SweepResult;
use super::trace::{kg1_quantum_residual, kg1_residual, trace_integrand, trace_integrand_direct, trace_reduced_residual};
use crate::error::{Error, Result};
use crate::tensor::curvature::background_geometry;
use crate::tensor::{
    covariant_divergence_stress, einstein_divergence_fd, einstein_residual, max_derivative_discrepancy, ChartPoint4,
    ChartPoint5,
};

/// Step of the finite-difference oracles.
pub const FD_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    /// All 25 components of `G_{AB} − G_D T_{AB} + g_{AB}Λ/2`.
    Einstein,
    /// The written-out component equations.
    Components,
    /// Component equations against the direct residual.
    Crosscheck,
    /// Term-by-term trace integrand against `−(√ρ/2)(R + (2G_D T − 5Λ)/3)`.
    TraceRoutes,
    /// Period-averaged exact trace equation.
    TraceReduced,
    Kg1,
    /// First Klein–Gordon equation in classical against quantum variables.
    Kg1Identification,
    Kg2,
    /// `∇_B T^B_A`.
    Conservation,
    /// `|R̂ − Λ|`.
    Cond00,
    RicciFit,
    Loong3b,
    /// Both sides of `loong3b` separately.
    Loong3bSides,
    Momentum,
    /// Jet derivatives against finite differences.
    Oracle,
    /// `∇_A G^{AB}` with an outer finite difference.
    Bianchi,
    /// Counts points where the signature is wrong.
    Signature,
    /// Largest 2×2 minor of `T_{AB}`.
    StressRank,
}

impl CheckName {
    pub const ALL: [CheckName; 18] = [
        CheckName::Einstein,
        CheckName::Components,
        CheckName::Crosscheck,
        CheckName::TraceRoutes,
        CheckName::TraceReduced,
        CheckName::Kg1,
        CheckName::Kg1Identification,
        CheckName::Kg2,
        CheckName::Conservation,
        CheckName::Cond00,
        CheckName::RicciFit,
        CheckName::Loong3b,
        CheckName::Loong3bSides,
        CheckName::Momentum,
        CheckName::Oracle,
        CheckName::Bianchi,
        CheckName::Signature,
        CheckName::StressRank,
    ];

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckName::Oracle => 1e-5,
            CheckName::Bianchi => 1e-4,
            CheckName::Loong3bSides | CheckName::TraceRoutes | CheckName::StressRank => 1e-10,
            CheckName::Kg1Identification => 1e-12,
            CheckName::Signature => 0.5,
            _ => 1e-8,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::Einstein => "einstein",
            CheckName::Components => "components",
            CheckName::Crosscheck => "crosscheck",
            CheckName::TraceRoutes => "trace_routes",
            CheckName::TraceReduced => "trace_reduced",
            CheckName::Kg1 => "kg1",
            CheckName::Kg1Identification => "kg1_identification",
            CheckName::Kg2 => "kg2",
            CheckName::Conservation => "conservation",
            CheckName::Cond00 => "cond00",
            CheckName::RicciFit => "ricci_fit",
            CheckName::Loong3b => "loong3b",
            CheckName::Loong3bSides => "loong3b_sides",
            CheckName::Momentum => "momentum",
            CheckName::Oracle => "oracle",
            CheckName::Bianchi => "bianchi",
            CheckName::Signature => "signature",
            CheckName::StressRank => "stress_rank",
        }
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A check to run, optionally with its own tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRequest {
    pub name: CheckName,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

impl From<CheckName> for CheckRequest {
    fn from(name: CheckName) -> Self {
        CheckRequest { name, tolerance: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: CheckName,
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Conventions every report states up front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub chart: String,
    pub signature: String,
    pub ricci: String,
    pub einstein: String,
    pub de_sitter: String,
    pub classical_energy: String,
    pub delta_surrogate: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            chart: "(tbar, t, x, y, z), index 0 is tbar".into(),
            signature: "(+,+,-,-,-) in five dimensions, (+,-,-,-) in four".into(),
            ricci: "R_BD = d_A Gamma^A_DB - d_D Gamma^A_AB + Gamma^A_AE Gamma^E_DB - Gamma^A_DE Gamma^E_AB".into(),
            einstein: "G_AB = G_D T_AB - g_AB Lambda / 2 with T_AB = dS dS".into(),
            de_sitter: "Ricci = -3 H^2 g, R = -12 H^2".into(),
            classical_energy: "E = p_0".into(),
            delta_surrogate: "normalized Gaussian of width sigma".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub conventions: Conventions,
    pub checks: Vec<CheckResult>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<SweepResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Box in the chart from which sample points are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartBounds {
    pub lo: [f64; 5],
    pub hi: [f64; 5],
}

impl ChartBounds {
    /// `t̄ ∈ [0, period)`, spacetime coordinates in `[−r, r]`.
    pub fn around_origin(period: f64, r: f64) -> Self {
        ChartBounds { lo: [0.0, -r, -r, -r, -r], hi: [period, r, r, r, r] }
    }
}

pub fn sample_points(seed: u64, count: usize, bounds: &ChartBounds) -> Vec<ChartPoint5> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ChartPoint5::new(std::array::from_fn(|i| bounds.lo[i] + (bounds.hi[i] - bounds.lo[i]) * rng.gen::<f64>())))
        .collect()
}

fn max_abs<'a>(v: impl IntoIterator<Item = &'a f64>) -> f64 {
    v.into_iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Largest value of a pointwise measure, evaluated in parallel.
fn over_points<P: Sync>(points: &[P], f: impl Fn(&P) -> Result<f64> + Sync) -> Result<f64> {
    points
        .par_iter()
        .map(|p| f(p))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Verification runs over one model; the Ricci decomposition is fitted once.
pub struct Suite<'a> {
    model: &'a Model,
    points: Vec<ChartPoint5>,
    fit: Option<Result<RicciDecomposition>>,
}

impl<'a> Suite<'a> {
    pub fn new(model: &'a Model, points: Vec<ChartPoint5>) -> Self {
        Suite { model, points, fit: None }
    }

    pub fn points(&self) -> &[ChartPoint5] {
        &self.points
    }

    fn spacetime_points(&self) -> Vec<ChartPoint4> {
        self.points.iter().map(|p| p.spacetime()).collect()
    }

    fn decomposition(&mut self) -> Result<RicciDecomposition> {
        let model = self.model;
        let p4 = self.spacetime_points();
        self.fit
            .get_or_insert_with(|| ricci_decomposition_fit(&model.params.background, model.g_d(), &p4))
            .clone()
    }

    /// Largest residual of a check together with an optional note.
    pub fn measure(&mut self, name: CheckName) -> Result<(f64, Option<String>)> {
        let m = self.model;
        let params = &m.params;
        let spec = &params.spec;
        let pts = &self.points;
        let p4 = self.spacetime_points();
        let cfg = params.field_config();
        let bg = &params.background;
        let value = match name {
            CheckName::Einstein => over_points(pts, |p| {
                Ok(max_abs(einstein_residual(&m.metric, &m.stress, spec.lambda, spec.g_d, p)?.iter().flatten()))
            })?,
            CheckName::Components => {
                over_points(pts, |p| Ok(max_abs(component_residuals(m, p)?.iter().flatten())))?
            }
            CheckName::Crosscheck => over_points(pts, |p| crosscheck_components(m, p))?,
            CheckName::TraceRoutes => {
                over_points(pts, |p| Ok((trace_integrand(m, p)? - trace_integrand_direct(m, p)?).abs()))?
            }
            CheckName::TraceReduced => over_points(&p4, |q| Ok(trace_reduced_residual(m, q)?.abs()))?,
            CheckName::Kg1 => {
                over_points(&p4, |q| Ok(kg1_residual(&cfg, bg, spec.lambda, spec.g_d, spec.hbar, q)?.abs()))?
            }
            CheckName::Kg1Identification => {
                let s_q = cfg.s_q();
                over_points(&p4, |q| {
                    let r_hat = background_geometry(bg, q)?.ricci_scalar();
                    let m2 = mass_squared_general(spec.lambda, r_hat, spec.hbar);
                    let a = kg1_residual(&cfg, bg, spec.lambda, spec.g_d, spec.hbar, q)?;
                    let b = kg1_quantum_residual(&cfg.rho, &s_q, m2, bg, spec.hbar, q)?;
                    Ok((a - b).abs() / (1.0 + a.abs()))
                })?
            }
            CheckName::Kg2 => over_points(&p4, |q| Ok(kg2_residual(&cfg, bg, q)?.abs()))?,
            CheckName::Conservation => {
                over_points(pts, |p| Ok(max_abs(&covariant_divergence_stress(&m.metric, &m.stress, p)?)))?
            }
            CheckName::Cond00 => {
                over_points(&p4, |q| Ok(cond00(background_geometry(bg, q)?.ricci_scalar(), spec.lambda)))?
            }
            CheckName::RicciFit => {
                let d = self.decomposition()?;
                return Ok((d.residual, Some(format!("n1 = {:.6e}, p = {:?}", d.n1, d.p))));
            }
            CheckName::Loong3b | CheckName::Loong3bSides => {
                let d = self.decomposition()?;
                over_points(&p4, |q| {
                    let l = loong3b(m, &d, q)?;
                    Ok(if name == CheckName::Loong3b { l.max_residual() } else { l.max_side() })
                })?
            }
            CheckName::Momentum => over_points(&p4, |q| Ok(momentum_conservation(m, q)?.max_gap()))?,
            CheckName::Oracle => over_points(pts, |p| {
                let mut worst: f64 = 0.0;
                for f in [&params.rho, &params.s_tilde, &m.alpha, &m.sqrt_rho, m.stress.principal()] {
                    worst = worst.max(max_derivative_discrepancy(f, p, FD_STEP));
                }
                for a in 0..5 {
                    for b in a..5 {
                        worst = worst.max(max_derivative_discrepancy(&m.metric.component(a, b), p, FD_STEP));
                    }
                }
                Ok(worst)
            })?,
            CheckName::Bianchi => over_points(pts, |p| Ok(max_abs(&einstein_divergence_fd(&m.metric, p, FD_STEP)?)))?,
            CheckName::Signature => {
                let bad = pts.par_iter().filter(|p| params.check_point(p).is_err()).count();
                return Ok((bad as f64, (bad > 0).then(|| format!("{bad} points violate the signature"))));
            }
            CheckName::StressRank => over_points(pts, |p| m.stress.max_minor(p))?,
        };
        let note = match name {
            CheckName::Cond00 if value > 0.0 && bg_is_flat(spec) => {
                Some("a non-zero cosmological constant is inconsistent with a flat background".into())
            }
            _ => None,
        };
        Ok((value, note))
    }

    pub fn run_check(&mut self, request: CheckRequest, tolerance_scale: f64) -> Result<CheckResult> {
        let tolerance = request.tolerance.unwrap_or_else(|| request.name.default_tolerance()) * tolerance_scale;
        let (max_residual, note) = self.measure(request.name)?;
        let samples = match request.name {
            CheckName::RicciFit => self.points.len() * 10,
            _ => self.points.len(),
        };
        Ok(CheckResult {
            name: request.name,
            max_residual,
            samples,
            tolerance,
            passed: max_residual.is_finite() && max_residual <= tolerance,
            note,
        })
    }

    pub fn run(&mut self, requests: &[CheckRequest], tolerance_scale: f64) -> Result<VerificationReport> {
        let mut seen = std::collections::HashSet::new();
        for r in requests {
            if !seen.insert(r.name) {
                return Err(Error::InvalidAnsatz(format!("check {} requested twice", r.name)));
            }
        }
        let checks = requests
            .iter()
            .map(|r| self.run_check(*r, tolerance_scale))
            .collect::<Result<Vec<_>>>()?;
        Ok(VerificationReport { conventions: Conventions::default(), checks, sweeps: Vec::new() })
    }
}

fn bg_is_flat(spec: &crate::ansatz::AnsatzSpec) -> bool {
    matches!(spec.background, crate::ansatz::BackgroundSpec::Minkowski)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzSpec;

    #[test]
    fn sampling_is_deterministic() {
        let b = ChartBounds::around_origin(1.0, 0.5);
        let a = sample_points(7, 5, &b);
        assert_eq!(a, sample_points(7, 5, &b));
        assert_ne!(a, sample_points(8, 5, &b));
        assert!(a.iter().all(|p| (0.0..1.0).contains(&p.coords[0]) && p.coords[1..].iter().all(|x| x.abs() <= 0.5)));
    }

    #[test]
    fn flat_sector_passes_everything() {
        let model = Model::from_spec(&AnsatzSpec::flat()).unwrap();
        let pts = sample_points(1, 16, &ChartBounds::around_origin(1.0, 0.5));
        let requests: Vec<CheckRequest> = CheckName::ALL.iter().map(|n| (*n).into()).collect();
        let report = Suite::new(&model, pts).run(&requests, 1.0).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn lambda_on_minkowski_fails_cond00() {
        let spec = AnsatzSpec { lambda: 0.3, ..AnsatzSpec::flat() };
        let model = Model::from_spec(&spec).unwrap();
        let pts = sample_points(2, 4, &ChartBounds::around_origin(1.0, 0.5));
        let r = Suite::new(&model, pts).run_check(CheckName::Cond00.into(), 1.0).unwrap();
        assert!(!r.passed);
        assert!((r.max_residual - 0.3).abs() < 1e-15);
        assert!(r.note.is_some());
    }

    #[test]
    fn duplicate_requests_are_rejected() {
        let model = Model::from_spec(&AnsatzSpec::flat()).unwrap();
        let r = Suite::new(&model, vec![]).run(&[CheckName::Kg1.into(), CheckName::Kg1.into()], 1.0);
        assert!(r.is_err());
    }
}
