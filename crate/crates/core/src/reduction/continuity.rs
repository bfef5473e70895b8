//! The `t̄` component of stress conservation and the second Klein–Gordon
//! equation it reduces to.

use serde::{Deserialize, Serialize};

use super::model::Model;
use crate::ansatz::FieldConfig;
use crate::error::{Error, Result};
use crate::quadrature::period_average_vec;
use crate::tensor::curvature::{background_geometry, spacetime_derivatives};
use crate::tensor::{covariant_divergence_stress, ChartPoint4, ChartPoint5, MetricField4};

/// `∇_B T^B_0` at a point of the five-dimensional chart.
pub fn continuity0_pointwise(model: &Model, p: &ChartPoint5) -> Result<f64> {
    Ok(covariant_divergence_stress(&model.metric, &model.stress, p)?[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuityResidual {
    /// `⟨β ∇_B T^B_0⟩` over the period.
    pub projected: f64,
    /// `√ρ √−ĝ ⟨β ∇_B T^B_0⟩ / (ε₁ ⟨β²⟩)`, which tends to the second
    /// Klein–Gordon residual as ε → 0; absent when ε₁ = 0.
    pub normalized: Option<f64>,
}

pub fn continuity0_residual(model: &Model, p4: &ChartPoint4) -> Result<ContinuityResidual> {
    let [projected, beta2] = period_average_vec(
        |tb| {
            let beta = model.params.beta_at(tb);
            Ok([beta * continuity0_pointwise(model, &p4.at_tbar(tb))?, beta * beta])
        },
        model.period(),
    )?;
    let e1 = model.params.spec.eps1;
    let normalized = if e1 > 0.0 && beta2 > 0.0 {
        let p = p4.at_tbar(0.0);
        let sr = model.sqrt_rho.value(&p);
        let det = crate::tensor::linalg::det(&model.params.background.values(p4));
        Some(sr * (-det).sqrt() * projected / (e1 * beta2))
    } else {
        None
    };
    Ok(ContinuityResidual { projected, normalized })
}

/// Normalized continuity residual; undefined without a `t̄`-dependent
/// principal function.
pub fn continuity0_normalized(model: &Model, p4: &ChartPoint4) -> Result<f64> {
    continuity0_residual(model, p4)?
        .normalized
        .ok_or_else(|| Error::DegenerateScale("eps1 = 0 or beta = 0: the normalized continuity residual is undefined".into()))
}

/// `√−ĝ ρ ĝ^{μν} ∂_ν S̃`.
pub fn kg2_flux(config: &FieldConfig, background: &MetricField4, p4: &ChartPoint4) -> Result<[f64; 4]> {
    let geo = background_geometry(background, p4)?;
    let (ds, _) = spacetime_derivatives(&config.s_tilde.jet4(p4));
    let up = geo.raise(&ds);
    let w = (-geo.det()).sqrt() * config.rho.jet4(p4).v;
    Ok(up.map(|u| w * u))
}

/// `∂_μ(√−ĝ ρ ĝ^{μν} ∂_ν S̃)`.
pub fn kg2_residual(config: &FieldConfig, background: &MetricField4, p4: &ChartPoint4) -> Result<f64> {
    let geo = background_geometry(background, p4)?;
    let (ds, hs) = spacetime_derivatives(&config.s_tilde.jet4(p4));
    let (dr, _) = spacetime_derivatives(&config.rho.jet4(p4));
    let rho = config.rho.jet4(p4).v;
    let up = geo.raise(&ds);
    let cross: f64 = (0..4).map(|m| dr[m] * up[m]).sum();
    Ok((-geo.det()).sqrt() * (rho * geo.laplacian(&ds, &hs) + cross))
}
