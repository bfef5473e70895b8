//! Frequency measurement from zero crossings of `Re Φ` at a probe point.

use std::f64::consts::PI;

use super::Trajectory;
use crate::error::{Error, Result};

/// Linearly interpolated sign changes of `values`.
pub fn zero_crossings(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..values.len().min(times.len()) {
        let (a, b) = (values[i - 1], values[i]);
        if a == 0.0 {
            if out.last() != Some(&times[i - 1]) {
                out.push(times[i - 1]);
            }
        } else if a * b < 0.0 {
            out.push(times[i - 1] + (times[i] - times[i - 1]) * a / (a - b));
        }
    }
    out
}

/// `ω` from the mean spacing of zero crossings; a series that does not
/// move is the static mode `ω = 0`. At least four periods are required.
pub fn measure_dispersion(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() || times.len() < 3 {
        return Err(Error::InsufficientData("series too short".into()));
    }
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let spread = values.iter().fold(0.0_f64, |m, v| m.max((v - values[0]).abs()));
    if spread <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Ok(0.0);
    }
    let c = zero_crossings(times, values);
    if c.len() < 9 {
        return Err(Error::InsufficientData(format!(
            "{} zero crossings, at least 9 (four periods) required",
            c.len()
        )));
    }
    Ok(PI * (c.len() - 1) as f64 / (c[c.len() - 1] - c[0]).abs())
}

/// [`measure_dispersion`] on `Re Φ` at grid index `probe`.
pub fn measure_dispersion_at(traj: &Trajectory, probe: usize) -> Result<f64> {
    let re: Vec<f64> = traj.probe(probe).iter().map(|z| z.re).collect();
    measure_dispersion(&traj.times, &re)
}
