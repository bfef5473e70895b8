//! The three run modes and the report they produce.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use anyhow::anyhow;
use kgdual::ansatz::BackgroundFacts;
use kgdual::reduction::{
    epsilon_sweep, identify_mass, sample_points, CheckResult, Conventions, Model, Suite, SweepResult,
};
use kgdual::solver::{
    conserved_charge, evolve, frequency, init_plane_wave, init_two_mode, madelung_decompose, madelung_residuals,
    measure_dispersion_at, Grid1p1, MadelungResiduals, Trajectory,
};
use kgdual::Error;
use serde::Serialize;

use crate::config::{ExperimentConfig, InitConfig, MassConfig, Mode};
use crate::output::{num, write_atomic};

pub const SCHEMA_VERSION: u32 = 1;
pub const RNG: &str = "ChaCha8";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

/// Exit code for a library error: bad inputs are configuration errors,
/// everything else is numeric.
pub fn classify(e: &Error) -> i32 {
    match e {
        Error::InvalidAnsatz(_)
        | Error::SignMismatch(_)
        | Error::InvalidMassShell { .. }
        | Error::TachyonicMass { .. }
        | Error::InvalidSweep(_)
        | Error::ModeMismatch { .. }
        | Error::CflViolation { .. }
        | Error::InvalidGrid(_) => EXIT_CONFIG,
        Error::BlowUp { .. } => EXIT_FAIL,
        _ => EXIT_NUMERIC,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportConventions {
    #[serde(flatten)]
    pub base: Conventions,
    pub rng: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub background: Option<BackgroundFacts>,
}

/// One pass/fail line of a run.
#[derive(Debug, Clone, Serialize)]
pub struct ReportCheck {
    pub name: String,
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<CheckResult> for ReportCheck {
    fn from(c: CheckResult) -> Self {
        ReportCheck {
            name: c.name.to_string(),
            max_residual: c.max_residual,
            samples: c.samples,
            tolerance: c.tolerance,
            passed: c.passed,
            note: c.note,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunError {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check: Option<String>,
    pub message: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    #[serde(flatten)]
    pub result: SweepResult,
    pub min_slope: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverDiagnostics {
    pub n: usize,
    pub dx: f64,
    pub dt: f64,
    pub mass: f64,
    pub steps: u64,
    pub final_time: f64,
    pub charge_initial: f64,
    pub charge_final: f64,
    pub charge_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_expected: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_measured: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub madelung: Option<MadelungResiduals>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: &'static str,
    pub mode: Mode,
    pub config: ExperimentConfig,
    pub conventions: ReportConventions,
    pub checks: Vec<ReportCheck>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<SweepSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverDiagnostics>,
    pub errors: Vec<RunError>,
    pub passed: bool,
    pub exit_code: i32,
    pub wall_time_seconds: f64,
}

impl RunReport {
    fn new(mode: Mode, config: ExperimentConfig) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION"),
            mode,
            config,
            conventions: ReportConventions { base: Conventions::default(), rng: RNG, background: None },
            checks: Vec::new(),
            sweeps: Vec::new(),
            solver: None,
            errors: Vec::new(),
            passed: false,
            exit_code: EXIT_PASS,
            wall_time_seconds: 0.0,
        }
    }

    fn error(&mut self, check: Option<String>, e: &Error) {
        self.errors.push(RunError { check, message: e.to_string(), exit_code: classify(e) });
    }

    /// Configuration errors outrank numeric ones, which outrank failed checks.
    fn finish(&mut self, start: Instant) {
        let worst_error = [EXIT_CONFIG, EXIT_NUMERIC, EXIT_FAIL]
            .into_iter()
            .find(|c| self.errors.iter().any(|e| e.exit_code == *c));
        let failed = self.checks.iter().any(|c| !c.passed) || self.sweeps.iter().any(|s| !s.passed);
        self.exit_code = worst_error.unwrap_or(if failed { EXIT_FAIL } else { EXIT_PASS });
        self.passed = self.exit_code == EXIT_PASS;
        self.wall_time_seconds = start.elapsed().as_secs_f64();
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "{status} {:<20} {:.3e} (tolerance {:.1e})", c.name, c.max_residual, c.tolerance);
        }
        for w in &self.sweeps {
            let status = if w.passed { "PASS" } else { "FAIL" };
            let slope = match (w.result.slope, w.result.degenerate) {
                (_, true) => "degenerate".to_string(),
                (Some(v), _) => format!("slope {v:.3}"),
                (None, _) => "slope undefined".to_string(),
            };
            let _ = writeln!(s, "{status} sweep {:<14} {slope} (minimum {})", w.result.check.name(), w.min_slope);
        }
        for e in &self.errors {
            let _ = writeln!(s, "ERROR {}: {}", e.check.as_deref().unwrap_or("run"), e.message);
        }
        s
    }
}

/// Output of a run: the report plus an optional CSV body.
pub struct RunOutput {
    pub report: RunReport,
    pub data: Option<String>,
}

pub fn run(mode: Mode, config: ExperimentConfig, tolerance_scale: f64) -> RunOutput {
    let start = Instant::now();
    let mut report = RunReport::new(mode, config.clone());
    let data = match mode {
        Mode::Verify => {
            verify(&config, tolerance_scale, &mut report);
            None
        }
        Mode::Solve => solve(&config, tolerance_scale, &mut report),
        Mode::Sweep => sweep(&config, &mut report),
    };
    report.finish(start);
    RunOutput { report, data }
}

fn build_model(config: &ExperimentConfig, report: &mut RunReport) -> Option<Model> {
    let spec = config.ansatz.as_ref()?;
    match Model::from_spec(spec) {
        Ok(m) => {
            report.conventions.background = Some(m.params.facts.clone());
            Some(m)
        }
        Err(e) => {
            report.error(Some("ansatz".into()), &e);
            None
        }
    }
}

fn verify(config: &ExperimentConfig, tolerance_scale: f64, report: &mut RunReport) {
    let Some(model) = build_model(config, report) else { return };
    let Some(sp) = &config.sample_points else { return };
    let (Some(seed), Some(bounds)) = (sp.seed, sp.bounds) else { return };
    let mut suite = Suite::new(&model, sample_points(seed, sp.count, &bounds));
    for request in &config.checks {
        match suite.run_check(*request, tolerance_scale) {
            Ok(r) => report.checks.push(r.into()),
            Err(e) => report.error(Some(request.name.to_string()), &e),
        }
    }
}

fn sweep(config: &ExperimentConfig, report: &mut RunReport) -> Option<String> {
    let spec = config.ansatz.as_ref()?;
    let sw = config.sweep.clone().unwrap_or_default();
    build_model(config, report)?;
    let sp = config.sample_points.as_ref()?;
    let points: Vec<_> = sample_points(sp.seed?, sp.count, &sp.bounds?).iter().map(|p| p.spacetime()).collect();
    match epsilon_sweep(spec, &sw.scales, &sw.checks, &points) {
        Ok(results) => {
            let mut csv = String::from("check,scale,gap\n");
            for r in &results {
                for (s, g) in r.scales.iter().zip(&r.gaps) {
                    let _ = writeln!(csv, "{},{},{}", r.check.name(), num(*s), num(*g));
                }
            }
            report.sweeps = results
                .into_iter()
                .map(|r| {
                    let passed = r.degenerate || r.slope.is_some_and(|s| s >= sw.min_slope);
                    SweepSummary { result: r, min_slope: sw.min_slope, passed }
                })
                .collect();
            Some(csv)
        }
        Err(e) => {
            report.error(Some("sweep".into()), &e);
            None
        }
    }
}

fn trajectory_csv(traj: &Trajectory, stride: usize) -> String {
    let mut csv = String::from("t,x,re_phi,im_phi,rho,s_q\n");
    for (i, (t, frame)) in traj.times.iter().zip(&traj.frames).enumerate() {
        if i % stride != 0 {
            continue;
        }
        let phases = madelung_decompose(frame).ok().map(|v| v.s_q);
        for (j, z) in frame.iter().enumerate() {
            let s = phases.as_ref().map_or(f64::NAN, |p| p[j]);
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{}",
                num(*t),
                num(traj.grid.x(j)),
                num(z.re),
                num(z.im),
                num(z.norm_sqr()),
                num(s)
            );
        }
    }
    csv
}

fn solve(config: &ExperimentConfig, tolerance_scale: f64, report: &mut RunReport) -> Option<String> {
    let sc = config.solver.as_ref()?;
    let fail = |report: &mut RunReport, e: Error| {
        report.error(Some("solver".into()), &e);
        None
    };
    let mass = match sc.mass {
        MassConfig::Value(m) if m >= 0.0 && m.is_finite() => m,
        MassConfig::Value(m) => return fail(report, Error::InvalidGrid(format!("mass {m} must be non-negative"))),
        MassConfig::FromLambda { from_lambda, hbar } => match identify_mass(from_lambda, hbar) {
            Ok(m) => m,
            Err(e) => return fail(report, e),
        },
    };
    let dx = sc.grid.length / sc.grid.n as f64;
    let grid = match Grid1p1::new(sc.grid.n, sc.grid.length, sc.grid.dt.unwrap_or(sc.grid.courant * dx)) {
        Ok(g) => g,
        Err(e) => return fail(report, e),
    };
    let (state, omega) = match sc.init {
        InitConfig::PlaneWave { mode, amplitude } => {
            let k = grid.mode(mode);
            (init_plane_wave(&grid, k, mass, amplitude), Some(frequency(k, mass)))
        }
        InitConfig::TwoMode => (init_two_mode(&grid, mass), None),
    };
    let state = match state {
        Ok(s) => s,
        Err(e) => return fail(report, e),
    };
    let q0 = conserved_charge(&state, &grid);
    let (end, traj) = match evolve(&state, &grid, sc.steps, 1) {
        Ok(r) => r,
        Err(e) => return fail(report, e),
    };
    let q1 = conserved_charge(&end, &grid);
    let drift = if q0.abs() > 1e-300 { (q1 - q0).abs() / q0.abs() } else { (q1 - q0).abs() };
    report.checks.push(ReportCheck {
        name: "charge_drift".into(),
        max_residual: drift,
        samples: sc.steps,
        tolerance: sc.charge_tolerance * tolerance_scale,
        passed: drift <= sc.charge_tolerance * tolerance_scale,
        note: (q0.abs() <= 1e-300).then(|| "zero initial charge: absolute drift".into()),
    });
    let mut measured = None;
    if let Some(w) = omega {
        match measure_dispersion_at(&traj, sc.probe) {
            Ok(wm) => {
                measured = Some(wm);
                let (err, note) = if w > 0.0 {
                    ((wm * wm - w * w).abs() / (w * w), None)
                } else {
                    (wm.abs(), Some("static mode: absolute frequency".to_string()))
                };
                let tol = sc.dispersion_tolerance * tolerance_scale;
                report.checks.push(ReportCheck {
                    name: "dispersion".into(),
                    max_residual: err,
                    samples: traj.times.len(),
                    tolerance: tol,
                    passed: err <= tol,
                    note,
                });
            }
            Err(e) => report.error(Some("dispersion".into()), &e),
        }
    }
    let madelung = madelung_residuals(&traj).ok();
    report.solver = Some(SolverDiagnostics {
        n: grid.n,
        dx: grid.dx(),
        dt: grid.dt,
        mass,
        steps: end.steps,
        final_time: end.t,
        charge_initial: q0,
        charge_final: q1,
        charge_drift: drift,
        omega_expected: omega,
        omega_measured: measured,
        madelung,
    });
    Some(trajectory_csv(&traj, sc.output_stride))
}

/// Writes the report and data file into `out`.
pub fn write_outputs(out: &Path, config: &ExperimentConfig, output: &RunOutput) -> anyhow::Result<()> {
    if let (Some(name), Some(body)) = (&config.output.data, &output.data) {
        write_atomic(&out.join(name), body.as_bytes())?;
    }
    let json = serde_json::to_string_pretty(&output.report).map_err(|e| anyhow!("serializing report: {e}"))?;
    write_atomic(&out.join(&config.output.report), format!("{json}\n").as_bytes())
}
