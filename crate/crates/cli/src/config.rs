//! Experiment configuration file.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context, Result};
use kgdual::ansatz::AnsatzSpec;
use kgdual::reduction::{ChartBounds, CheckName, CheckRequest, SweepCheck};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Verify,
    Solve,
    Sweep,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Verify => "verify",
            Mode::Solve => "solve",
            Mode::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ansatz: Option<AnsatzSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_points: Option<SamplePoints>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplePoints {
    pub count: usize,
    /// Required, either here or on the command line.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<ChartBounds>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    #[serde(default = "two_pi")]
    pub length: f64,
    /// Explicit step; otherwise `courant · dx`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "default_courant")]
    pub courant: f64,
}

fn two_pi() -> f64 {
    2.0 * PI
}

fn default_courant() -> f64 {
    kgdual::solver::DEFAULT_COURANT
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MassConfig {
    Value(f64),
    /// `m = ħ √(Λ/3)`.
    FromLambda {
        from_lambda: f64,
        #[serde(default = "one")]
        hbar: f64,
    },
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitConfig {
    /// Lattice mode `mode`, wavenumber `2π·mode/L`.
    PlaneWave {
        mode: i64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    TwoMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    pub grid: GridConfig,
    pub mass: MassConfig,
    pub init: InitConfig,
    pub steps: usize,
    /// Every `output_stride`-th step is written to the trajectory CSV.
    #[serde(default = "one_usize")]
    pub output_stride: usize,
    /// Grid index of the dispersion probe.
    #[serde(default)]
    pub probe: usize,
    #[serde(default = "default_charge_tolerance")]
    pub charge_tolerance: f64,
    #[serde(default = "default_dispersion_tolerance")]
    pub dispersion_tolerance: f64,
}

fn one_usize() -> usize {
    1
}

fn default_charge_tolerance() -> f64 {
    1e-6
}

fn default_dispersion_tolerance() -> f64 {
    1e-3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
    #[serde(default = "default_sweep_checks")]
    pub checks: Vec<SweepCheck>,
    #[serde(default = "default_min_slope")]
    pub min_slope: f64,
}

fn default_scales() -> Vec<f64> {
    vec![0.1, 0.05, 0.025, 0.0125]
}

fn default_sweep_checks() -> Vec<SweepCheck> {
    SweepCheck::ALL.to_vec()
}

fn default_min_slope() -> f64 {
    0.9
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { scales: default_scales(), checks: default_sweep_checks(), min_slope: default_min_slope() }
    }
}

/// File names, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<String>,
}

fn default_report() -> String {
    "report.json".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { report: default_report(), data: None }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Applies command-line overrides and fills in defaults, so the echoed
    /// configuration reproduces the run on its own.
    pub fn resolve(mut self, mode: Mode, seed: Option<u64>) -> Result<Self> {
        if let Some(m) = self.mode {
            if m != mode {
                bail!("config is for mode {} but {} was requested", m.as_str(), mode.as_str());
            }
        }
        self.mode = Some(mode);
        match mode {
            Mode::Verify | Mode::Sweep => {
                let ansatz = self.ansatz.as_ref().context("an `ansatz` section is required")?;
                let sp = self.sample_points.as_mut().context("a `sample_points` section is required")?;
                if let Some(s) = seed {
                    sp.seed = Some(s);
                }
                if sp.seed.is_none() {
                    bail!("sample_points.seed is required (or pass --seed)");
                }
                if sp.count == 0 {
                    bail!("sample_points.count must be positive");
                }
                if sp.bounds.is_none() {
                    sp.bounds = Some(ChartBounds::around_origin(ansatz.period, 0.5));
                }
                if let Some(b) = sp.bounds {
                    if (0..5).any(|i| !(b.lo[i] <= b.hi[i]) || !b.lo[i].is_finite() || !b.hi[i].is_finite()) {
                        bail!("sample_points.bounds must satisfy lo <= hi componentwise");
                    }
                }
            }
            Mode::Solve => {
                let s = self.solver.as_ref().context("a `solver` section is required")?;
                if s.output_stride == 0 {
                    bail!("solver.output_stride must be at least 1");
                }
                if s.probe >= s.grid.n {
                    bail!("solver.probe {} is outside the grid", s.probe);
                }
                for (name, t) in [("charge_tolerance", s.charge_tolerance), ("dispersion_tolerance", s.dispersion_tolerance)] {
                    if !(t > 0.0) {
                        bail!("solver.{name} must be positive");
                    }
                }
            }
        }
        match mode {
            Mode::Verify => {
                if self.checks.is_empty() {
                    self.checks = CheckName::ALL.iter().map(|n| (*n).into()).collect();
                }
                let mut seen = std::collections::HashSet::new();
                for c in &self.checks {
                    if !seen.insert(c.name) {
                        bail!("check {} is listed twice", c.name);
                    }
                    if let Some(t) = c.tolerance {
                        if !(t > 0.0) {
                            bail!("tolerance of {} must be positive", c.name);
                        }
                    }
                }
            }
            Mode::Sweep => {
                let sw = self.sweep.get_or_insert_with(SweepConfig::default);
                if sw.checks.is_empty() {
                    bail!("sweep.checks is empty");
                }
            }
            Mode::Solve => {}
        }
        if self.output.data.is_none() {
            self.output.data = match mode {
                Mode::Verify => None,
                Mode::Solve => Some("trajectory.csv".into()),
                Mode::Sweep => Some("sweep.csv".into()),
            };
        }
        for name in std::iter::once(&self.output.report).chain(self.output.data.iter()) {
            if name.is_empty() || Path::new(name).is_absolute() || name.contains("..") {
                bail!("output file {name:?} must be a plain relative name");
            }
        }
        Ok(self)
    }
}
