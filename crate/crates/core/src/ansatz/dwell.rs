//! Time-of-residence density of a sampled trajectory: `ρ(x) ∝ ∫ dτ / |dx/dτ|`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DwellHistogram {
    /// `bins + 1` bin edges spanning the visited range.
    pub edges: Vec<f64>,
    /// Probability density per bin; `Σ density · width = 1`.
    pub density: Vec<f64>,
}

impl DwellHistogram {
    pub fn width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    /// Probability mass of each bin.
    pub fn mass(&self) -> Vec<f64> {
        let w = self.width();
        self.density.iter().map(|d| d * w).collect()
    }
}

/// Histogram of the time spent per spatial bin.
///
/// Between consecutive samples the particle is taken to move uniformly, so
/// each interval's duration is split over the bins it crosses in proportion
/// to the distance covered in each.
pub fn dwell_density(tau: &[f64], x: &[f64], bins: usize) -> Result<DwellHistogram> {
    if tau.len() != x.len() || tau.len() < 2 {
        return Err(Error::InsufficientData("need at least two (tau, x) samples".into()));
    }
    if bins == 0 {
        return Err(Error::InsufficientData("bins must be positive".into()));
    }
    if tau.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InsufficientData("sample times must be strictly increasing".into()));
    }
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi - lo > 1e-12 * (1.0 + lo.abs().max(hi.abs()))) {
        return Err(Error::DegenerateTrajectory);
    }
    let width = (hi - lo) / bins as f64;
    let bin_of = |v: f64| (((v - lo) / width) as usize).min(bins - 1);
    let mut time = vec![0.0; bins];
    for i in 0..tau.len() - 1 {
        let dt = tau[i + 1] - tau[i];
        let (a, b) = (x[i].min(x[i + 1]), x[i].max(x[i + 1]));
        if b - a <= 0.0 {
            time[bin_of(a)] += dt;
            continue;
        }
        for k in bin_of(a)..=bin_of(b) {
            let left = lo + k as f64 * width;
            let overlap = b.min(left + width) - a.max(left);
            if overlap > 0.0 {
                time[k] += dt * overlap / (b - a);
            }
        }
    }
    let total: f64 = time.iter().sum();
    Ok(DwellHistogram {
        edges: (0..=bins).map(|k| lo + k as f64 * width).collect(),
        density: time.iter().map(|t| t / (total * width)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_motion_is_flat() {
        let tau: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
        let x: Vec<f64> = tau.iter().map(|t| 2.0 * t).collect();
        let h = dwell_density(&tau, &x, 10).unwrap();
        assert!(h.density.iter().all(|d| (d - 0.5).abs() < 1e-9));
    }

    #[test]
    fn two_speeds_give_two_to_one() {
        // speed 1 on [0, 1], speed 2 on [1, 2]
        let mut tau = Vec::new();
        let mut x = Vec::new();
        for i in 0..=1000 {
            let t = i as f64 / 1000.0;
            tau.push(t);
            x.push(t);
        }
        for i in 1..=500 {
            let t = 1.0 + i as f64 / 1000.0;
            tau.push(t);
            x.push(1.0 + 2.0 * (t - 1.0));
        }
        let h = dwell_density(&tau, &x, 2).unwrap();
        assert!((h.density[0] / h.density[1] - 2.0).abs() < 0.02);
    }

    #[test]
    fn resting_particle_is_degenerate() {
        let r = dwell_density(&[0.0, 1.0, 2.0], &[0.5, 0.5, 0.5], 4);
        assert!(matches!(r, Err(Error::DegenerateTrajectory)));
    }
}
