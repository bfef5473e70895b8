//! Leapfrog evolution of the flat-space Klein–Gordon equation on a periodic
//! 1+1 grid, `∂_t²Φ − ∂_x²Φ = −m²Φ` with `ħ = 1`.

mod dispersion;
mod madelung;

pub use dispersion::{measure_dispersion, measure_dispersion_at, zero_crossings};
pub use madelung::{madelung_compose, madelung_decompose, madelung_residuals, MadelungResiduals, MadelungView, FLOOR};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `|Φ|` before a run is declared unstable.
pub const BLOW_UP: f64 = 1e6;
/// Default Courant number `dt/dx`.
pub const DEFAULT_COURANT: f64 = 0.4;
pub const MIN_POINTS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1p1 {
    pub n: usize,
    pub length: f64,
    /// Signed step; negative values run the scheme backwards.
    pub dt: f64,
}

impl Grid1p1 {
    pub fn new(n: usize, length: f64, dt: f64) -> Result<Self> {
        let g = Grid1p1 { n, length, dt };
        g.validate()?;
        Ok(g)
    }

    /// `dt = courant · dx`.
    pub fn with_courant(n: usize, length: f64, courant: f64) -> Result<Self> {
        Grid1p1::new(n, length, courant * length / n as f64)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_POINTS {
            return Err(Error::InvalidGrid(format!("{} points, at least {MIN_POINTS} required", self.n)));
        }
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::InvalidGrid(format!("domain length {} must be positive", self.length)));
        }
        if self.dt == 0.0 || !self.dt.is_finite() {
            return Err(Error::InvalidGrid("dt must be finite and non-zero".into()));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.dx()
    }

    /// Wavenumber of lattice mode `n`.
    pub fn mode(&self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.length
    }

    pub fn reversed(&self) -> Self {
        Grid1p1 { dt: -self.dt, ..*self }
    }

    /// Stability limit on `|dt|/dx` for mass `m`:
    /// `dt² (4/dx² + m²) ≤ 4`.
    pub fn cfl_limit(&self, mass: f64) -> f64 {
        let dx = self.dx();
        2.0 / (4.0 / (dx * dx) + mass * mass).sqrt() / dx
    }

    pub fn check_cfl(&self, mass: f64) -> Result<()> {
        let ratio = self.dt.abs() / self.dx();
        let limit = self.cfl_limit(mass);
        if ratio > limit {
            return Err(Error::CflViolation { ratio, limit });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub phi: Vec<Complex64>,
    pub phi_prev: Vec<Complex64>,
    pub t: f64,
    pub mass: f64,
    pub steps: u64,
}

impl SolverState {
    /// The same state with its two time levels exchanged, so that stepping
    /// with `grid.reversed()` retraces the evolution.
    pub fn time_reversed(&self) -> Self {
        SolverState { phi: self.phi_prev.clone(), phi_prev: self.phi.clone(), ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.phi.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }
}

fn lattice_index(k: f64, grid: &Grid1p1) -> Result<i64> {
    let n = k * grid.length / (2.0 * PI);
    if !n.is_finite() || (n - n.round()).abs() > 1e-9 * (1.0 + n.abs()) {
        return Err(Error::ModeMismatch { k, length: grid.length });
    }
    Ok(n.round() as i64)
}

/// `ω = √(k² + m²)`.
pub fn frequency(k: f64, mass: f64) -> f64 {
    (k * k + mass * mass).sqrt()
}

/// Superposition `Σ A_j exp(i(k_j x + ω_j t))` sampled at `t = 0` and `t = −dt`.
pub fn init_modes(grid: &Grid1p1, mass: f64, modes: &[(f64, f64)]) -> Result<SolverState> {
    grid.validate()?;
    grid.check_cfl(mass)?;
    for (k, _) in modes {
        lattice_index(*k, grid)?;
    }
    let sample = |t: f64| -> Vec<Complex64> {
        (0..grid.n)
            .map(|j| {
                let x = grid.x(j);
                modes
                    .iter()
                    .map(|(k, a)| Complex64::from_polar(*a, k * x + frequency(*k, mass) * t))
                    .sum()
            })
            .collect()
    };
    Ok(SolverState { phi: sample(0.0), phi_prev: sample(-grid.dt), t: 0.0, mass, steps: 0 })
}

/// `Φ(x, 0) = A e^{ikx}`, with the previous level advanced by the exact `ω`.
pub fn init_plane_wave(grid: &Grid1p1, k: f64, mass: f64, amplitude: f64) -> Result<SolverState> {
    init_modes(grid, mass, &[(k, amplitude)])
}

/// Nodeless two-mode packet used for the Madelung convergence study.
pub fn init_two_mode(grid: &Grid1p1, mass: f64) -> Result<SolverState> {
    init_modes(grid, mass, &[(grid.mode(1), 1.0), (grid.mode(-2), 0.3)])
}

pub fn step_leapfrog(state: &SolverState, grid: &Grid1p1) -> Result<SolverState> {
    grid.check_cfl(state.mass)?;
    let n = grid.n;
    let r = (grid.dt / grid.dx()).powi(2);
    let m2 = (grid.dt * state.mass).powi(2);
    let u = &state.phi;
    let mut next = Vec::with_capacity(n);
    let mut worst = 0.0_f64;
    for j in 0..n {
        let left = u[(j + n - 1) % n];
        let right = u[(j + 1) % n];
        let v = 2.0 * u[j] - state.phi_prev[j] + r * (left - 2.0 * u[j] + right) - m2 * u[j];
        worst = worst.max(v.norm());
        next.push(v);
    }
    if !(worst <= BLOW_UP) {
        return Err(Error::BlowUp { step: state.steps + 1, max_abs: worst });
    }
    Ok(SolverState {
        phi: next,
        phi_prev: u.clone(),
        t: state.t + grid.dt,
        mass: state.mass,
        steps: state.steps + 1,
    })
}

/// Recorded frames of an evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid1p1,
    pub mass: f64,
    /// Time between recorded frames.
    pub frame_dt: f64,
    pub times: Vec<f64>,
    pub frames: Vec<Vec<Complex64>>,
}

impl Trajectory {
    /// Series of `Φ` at grid index `j`.
    pub fn probe(&self, j: usize) -> Vec<Complex64> {
        self.frames.iter().map(|f| f[j]).collect()
    }
}

/// Runs `steps` leapfrog steps, recording the initial level and every
/// `stride`-th level after it.
pub fn evolve(state: &SolverState, grid: &Grid1p1, steps: usize, stride: usize) -> Result<(SolverState, Trajectory)> {
    if stride == 0 {
        return Err(Error::InvalidGrid("stride must be at least 1".into()));
    }
    let mut s = state.clone();
    let mut traj = Trajectory {
        grid: *grid,
        mass: state.mass,
        frame_dt: grid.dt * stride as f64,
        times: vec![s.t],
        frames: vec![s.phi.clone()],
    };
    for i in 1..=steps {
        s = step_leapfrog(&s, grid)?;
        if i % stride == 0 {
            traj.times.push(s.t);
            traj.frames.push(s.phi.clone());
        }
    }
    Ok((s, traj))
}

/// `Q = Σ_j Im(Φ_prev* Φ)/dt · dx`, the discrete form of `Σ Im(Φ* ∂_tΦ) dx`,
/// conserved exactly by the leapfrog scheme.
pub fn conserved_charge(state: &SolverState, grid: &Grid1p1) -> f64 {
    let s: f64 = state.phi.iter().zip(&state.phi_prev).map(|(u, p)| (p.conj() * u).im).sum();
    s / grid.dt * grid.dx()
}
