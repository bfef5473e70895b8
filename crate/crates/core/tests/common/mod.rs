#![allow(dead_code)]

use kgdual::ansatz::{AnsatzSpec, GammaSpec, Mode, PhaseSpec, RhoSpec};
use kgdual::reduction::{sample_points, ChartBounds};
use kgdual::tensor::ChartPoint5;
use proptest::prelude::*;

pub fn mode(max_amp: f64) -> impl Strategy<Value = Mode> {
    (-max_amp..max_amp, prop::array::uniform4(-1.0..1.0f64), -3.0..3.0f64)
        .prop_map(|(amplitude, wavevector, phase)| Mode { amplitude, wavevector, phase })
}

/// Smooth ansatz with every perturbation switched on at a scale of at most
/// `max_eps`.
pub fn smooth_spec(max_eps: f64) -> impl Strategy<Value = AnsatzSpec> {
    (
        prop::array::uniform3(0.0..max_eps),
        0.8..1.3f64,
        -0.5..1.0f64,
        0.5..2.0f64,
        prop::collection::vec(mode(0.3), 1..3),
        prop::array::uniform4(-1.0..1.0f64),
        prop::collection::vec(mode(0.3), 1..3),
    )
        .prop_map(|(eps, alpha0, lambda, g_d, rho_modes, p, s_modes)| AnsatzSpec {
            alpha0,
            eps0: eps[0],
            eps1: eps[1],
            eps2: eps[2],
            lambda,
            g_d,
            gamma: GammaSpec::default_bumps(),
            rho: RhoSpec::Smooth { scale: 1.0, modes: rho_modes },
            s_tilde: PhaseSpec::Smooth { p, modes: s_modes },
            ..AnsatzSpec::default()
        })
}

pub fn points(seed: u64, count: usize) -> Vec<ChartPoint5> {
    sample_points(seed, count, &ChartBounds::around_origin(1.0, 0.5))
}

pub fn max_abs<'a>(v: impl IntoIterator<Item = &'a f64>) -> f64 {
    v.into_iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}
