//! Composite Gauss–Legendre quadrature over the compact `t̄` period.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Nodes per panel.
pub const NODES: usize = 32;
/// Convergence threshold on successive panel doublings, relative to `1 + |I|`.
pub const TOLERANCE: f64 = 1e-10;
const MAX_PANELS: usize = 256;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(NODES))
}

fn composite<const K: usize>(
    f: &impl Fn(f64) -> Result<[f64; K]>,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<[f64; K]> {
    let (nodes, weights) = rule();
    let width = (b - a) / panels as f64;
    let mut acc = [0.0; K];
    for j in 0..panels {
        let mid = a + (j as f64 + 0.5) * width;
        for (x, w) in nodes.iter().zip(weights) {
            let v = f(mid + 0.5 * width * x)?;
            for k in 0..K {
                acc[k] += 0.5 * width * w * v[k];
            }
        }
    }
    Ok(acc)
}

/// `∫_a^b f`, doubling panels until two successive estimates agree.
pub fn integrate_vec<const K: usize>(
    f: impl Fn(f64) -> Result<[f64; K]>,
    a: f64,
    b: f64,
) -> Result<[f64; K]> {
    let mut panels = 1;
    let mut prev = composite(&f, a, b, panels)?;
    loop {
        panels *= 2;
        let next = composite(&f, a, b, panels)?;
        let scale = next.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let delta = next
            .iter()
            .zip(&prev)
            .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        if delta <= TOLERANCE * (1.0 + scale) {
            return Ok(next);
        }
        if panels >= MAX_PANELS || !delta.is_finite() {
            return Err(Error::QuadratureNotConverged { delta, panels });
        }
        prev = next;
    }
}

pub fn integrate(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<f64> {
    Ok(integrate_vec(|x| Ok([f(x)?]), a, b)?[0])
}

/// `(1/T̄) ∫_0^T̄ f(t̄) dt̄`.
pub fn period_average_vec<const K: usize>(
    f: impl Fn(f64) -> Result<[f64; K]>,
    period: f64,
) -> Result<[f64; K]> {
    Ok(integrate_vec(f, 0.0, period)?.map(|v| v / period))
}

pub fn period_average(f: impl Fn(f64) -> Result<f64>, period: f64) -> Result<f64> {
    Ok(period_average_vec(|x| Ok([f(x)?]), period)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn weights_sum_to_two_and_nodes_are_symmetric() {
        let (x, w) = gauss_legendre(NODES);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for i in 0..NODES {
            assert!((x[i] + x[NODES - 1 - i]).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_for_high_degree_polynomials() {
        let v = integrate(|x| Ok(x.powi(20)), 0.0, 1.0).unwrap();
        assert!((v - 1.0 / 21.0).abs() < 1e-14);
    }

    #[test]
    fn periodic_means() {
        assert!(period_average(|t| Ok((TAU * t).sin()), 1.0).unwrap().abs() < 1e-14);
        let m = period_average(|t| Ok((TAU * t).cos().powi(2)), 1.0).unwrap();
        assert!((m - 0.5).abs() < 1e-14);
    }

    #[test]
    fn divergent_integrand_fails_to_converge() {
        let r = integrate(|x| Ok(1.0 / x.abs().sqrt()), -1.0, 1.0);
        assert!(matches!(r, Err(Error::QuadratureNotConverged { .. })));
    }
}
