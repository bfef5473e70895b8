//! Polar form `Φ = √ρ e^{iS_Q}` and the discrete residuals of the two real
//! equations it splits the Klein–Gordon equation into.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::error::{Error, Result};

/// Smallest `|Φ|` for which the phase is defined.
pub const FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MadelungView {
    pub rho: Vec<f64>,
    /// Phase unwrapped along the grid, anchored at sample 0 in `(−π, π]`.
    pub s_q: Vec<f64>,
    /// Net number of turns of the phase around the periodic grid.
    pub winding: i64,
}

/// Maps an angle difference into `(−π, π]`.
pub(crate) fn wrap(d: f64) -> f64 {
    let w = d - 2.0 * PI * (d / (2.0 * PI)).round();
    if w <= -PI {
        w + 2.0 * PI
    } else {
        w
    }
}

pub fn madelung_decompose(phi: &[Complex64]) -> Result<MadelungView> {
    let mut rho = Vec::with_capacity(phi.len());
    let mut s_q = Vec::with_capacity(phi.len());
    for (j, z) in phi.iter().enumerate() {
        let a = z.norm();
        if !(a > FLOOR) {
            return Err(Error::NodeEncountered { index: j, abs: a });
        }
        rho.push(a * a);
        let arg = z.arg();
        s_q.push(match s_q.last() {
            None => arg,
            Some(prev) => prev + wrap(arg - prev),
        });
    }
    let winding = match (s_q.first(), s_q.last(), phi.first()) {
        (Some(first), Some(last), Some(z0)) => {
            let closing = last + wrap(z0.arg() - last);
            ((closing - first) / (2.0 * PI)).round() as i64
        }
        _ => 0,
    };
    Ok(MadelungView { rho, s_q, winding })
}

pub fn madelung_compose(view: &MadelungView) -> Vec<Complex64> {
    view.rho.iter().zip(&view.s_q).map(|(r, s)| Complex64::from_polar(r.sqrt(), *s)).collect()
}

/// Largest residuals of `□√ρ − √ρ((∂S_Q)² − m²)` and `∂_μ(ρ ∂^μ S_Q)` over the
/// interior frames of a trajectory, signature `(+,−)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MadelungResiduals {
    pub r1: f64,
    pub r2: f64,
}

/// Centered differences in `t` and `x`; phase differences are taken on the
/// circle so branch jumps never enter. The flux divergence uses half-step
/// fluxes `ρ_{j+½} ΔS/Δ`.
pub fn madelung_residuals(traj: &Trajectory) -> Result<MadelungResiduals> {
    if traj.frames.len() < 3 {
        return Err(Error::InsufficientData("at least three frames are needed".into()));
    }
    let views = traj.frames.iter().map(|f| madelung_decompose(f)).collect::<Result<Vec<_>>>()?;
    let n = traj.grid.n;
    let (dt, dx) = (traj.frame_dt, traj.grid.dx());
    let m2 = traj.mass * traj.mass;
    let (mut r1, mut r2) = (0.0_f64, 0.0_f64);
    for f in 1..views.len() - 1 {
        let (a, b, c) = (&views[f - 1], &views[f], &views[f + 1]);
        for j in 0..n {
            let (l, r) = ((j + n - 1) % n, (j + 1) % n);
            let sr = |v: &MadelungView, i: usize| v.rho[i].sqrt();
            let box_sr = (sr(c, j) - 2.0 * sr(b, j) + sr(a, j)) / (dt * dt)
                - (sr(b, r) - 2.0 * sr(b, j) + sr(b, l)) / (dx * dx);
            let st = wrap(c.s_q[j] - a.s_q[j]) / (2.0 * dt);
            let sx = wrap(b.s_q[r] - b.s_q[l]) / (2.0 * dx);
            r1 = r1.max((box_sr - sr(b, j) * (st * st - sx * sx - m2)).abs());

            let ft = |p: &MadelungView, q: &MadelungView| 0.5 * (p.rho[j] + q.rho[j]) * wrap(q.s_q[j] - p.s_q[j]) / dt;
            let fx = |i: usize, k: usize| 0.5 * (b.rho[i] + b.rho[k]) * wrap(b.s_q[k] - b.s_q[i]) / dx;
            let div = (ft(b, c) - ft(a, b)) / dt - (fx(j, r) - fx(l, j)) / dx;
            r2 = r2.max(div.abs());
        }
    }
    Ok(MadelungResiduals { r1, r2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::Grid1p1;

    #[test]
    fn unit_field() {
        let v = madelung_decompose(&vec![Complex64::new(1.0, 0.0); 20]).unwrap();
        assert!(v.rho.iter().all(|r| *r == 1.0));
        assert!(v.s_q.iter().all(|s| *s == 0.0));
        assert_eq!(v.winding, 0);
    }

    #[test]
    fn lattice_mode_unwraps_to_a_ramp() {
        let n = 64;
        let k = 3.0;
        let dx = 2.0 * PI / n as f64;
        let phi: Vec<_> = (0..n).map(|j| Complex64::from_polar(1.0, k * j as f64 * dx)).collect();
        let v = madelung_decompose(&phi).unwrap();
        assert_eq!(v.winding, 3);
        for (j, s) in v.s_q.iter().enumerate() {
            assert!((s - k * j as f64 * dx).abs() < 1e-12);
            assert!((v.rho[j] - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn node_is_reported() {
        let mut phi = vec![Complex64::new(1.0, 0.0); 16];
        phi[7] = Complex64::new(0.0, 1e-12);
        assert!(matches!(madelung_decompose(&phi), Err(Error::NodeEncountered { index: 7, .. })));
    }

    #[test]
    fn uniform_mode_has_no_flux_divergence() {
        let g = Grid1p1::with_courant(32, 2.0 * PI, 0.4).unwrap();
        let times: Vec<f64> = (0..40).map(|i| i as f64 * g.dt).collect();
        let frames = times.iter().map(|t| vec![Complex64::from_polar(1.0, *t); g.n]).collect();
        let traj = Trajectory { grid: g, mass: 1.0, frame_dt: g.dt, times, frames };
        let r = madelung_residuals(&traj).unwrap();
        assert!(r.r2 < 1e-12, "{}", r.r2);
        assert!(r.r1 < 1e-12, "{}", r.r1);
    }
}
