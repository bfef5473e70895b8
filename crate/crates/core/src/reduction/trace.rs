//! Trace of the field equations integrated over the `t̄` period, and the
//! first Klein–Gordon equation it reduces to.

use serde::{Deserialize, Serialize};

use super::model::{Model, Slice};
use crate::ansatz::FieldConfig;
use crate::error::Result;
use crate::quadrature::period_average_vec;
use crate::tensor::curvature::{background_geometry, spacetime_derivatives};
use crate::tensor::{geometry5, ChartPoint4, ChartPoint5, MetricField4, ScalarField};

/// Period averages of the terms of the trace-integrated equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceTerms {
    /// `□√ρ`
    pub dalembertian: f64,
    /// `−√ρ [G_D(∂S_H)²/3 + G_D ε₁²β²/(3ᾱ²) − 5Λ/6 + R/2]`
    pub matter: f64,
    /// `(1/2ᾱ) ∂₀(g^{αβ}ġ_{αβ}/(√ρ ᾱ))`, a total `t̄` derivative up to `ᾱ̇`
    pub boundary: f64,
    /// `(P^{αβ}P_{αβ} − (P^α_α)²/9)/(2√ρ ᾱ²)`
    pub source: f64,
    pub total: f64,
}

impl Slice {
    /// Terms of the trace integrand at this `t̄`; the sum equals
    /// `−(√ρ/2)(R + (2G_D T^A_A − 5Λ)/3)`.
    fn trace_terms(&self, g_d: f64, lambda: f64) -> [f64; 4] {
        let sr = self.sqrt_rho.v;
        let a = self.alpha;
        let s0 = self.s0();
        let matter = -sr
            * (g_d * self.geo.norm_squared(&self.s4()) / 3.0
                + g_d * s0 * s0 / (3.0 * a * a * self.rho.v)
                - 5.0 * lambda / 6.0
                + 0.5 * self.geo.ricci_scalar());
        let tr = self.tr_gd();
        let d_ratio = self.tr_gd_dot() / (sr * a) - tr * self.alpha_dot / (sr * a * a);
        let boundary = d_ratio / (2.0 * a);
        let (pp, ptr) = self.p_invariants();
        let source = (pp - ptr * ptr / 9.0) / (2.0 * sr * a * a);
        [self.box_sqrt_rho(), matter, boundary, source]
    }
}

/// Pointwise integrand of the trace-integrated equation.
pub fn trace_integrand(model: &Model, p: &ChartPoint5) -> Result<f64> {
    let t = model.slice(p)?.trace_terms(model.g_d(), model.lambda());
    Ok(t.iter().sum())
}

/// The same integrand from the five-dimensional scalar curvature and stress
/// trace: `−(√ρ/2)(R + (2G_D T^A_A − 5Λ)/3)`.
pub fn trace_integrand_direct(model: &Model, p: &ChartPoint5) -> Result<f64> {
    let r = geometry5(&model.metric, p)?.ricci_scalar();
    let t = model.stress.trace(p)?;
    let sr = model.sqrt_rho.value(p);
    Ok(-0.5 * sr * (r + (2.0 * model.g_d() * t - 5.0 * model.lambda()) / 3.0))
}

pub fn trace_terms(model: &Model, p4: &ChartPoint4) -> Result<TraceTerms> {
    let v = period_average_vec(
        |tb| Ok(model.slice_at(tb, p4)?.trace_terms(model.g_d(), model.lambda())),
        model.period(),
    )?;
    Ok(TraceTerms {
        dalembertian: v[0],
        matter: v[1],
        boundary: v[2],
        source: v[3],
        total: v.iter().sum(),
    })
}

/// Period average of the exact trace-integrated equation at `p4`.
pub fn trace_reduced_residual(model: &Model, p4: &ChartPoint4) -> Result<f64> {
    Ok(trace_terms(model, p4)?.total)
}

/// Period average of the direct-route integrand.
pub fn trace_reduced_direct(model: &Model, p4: &ChartPoint4) -> Result<f64> {
    Ok(period_average_vec(|tb| Ok([trace_integrand_direct(model, &p4.at_tbar(tb))?]), model.period())?[0])
}

/// `□√ρ − (√ρ/ħ²)[(ħ²G_D/3)(∂S̃)² − (ħ²/6)(5Λ − 3R̂)]` on the background.
pub fn kg1_residual(
    config: &FieldConfig,
    background: &MetricField4,
    lambda: f64,
    g_d: f64,
    hbar: f64,
    p4: &ChartPoint4,
) -> Result<f64> {
    let geo = background_geometry(background, p4)?;
    let sr = config.rho.jet4(p4).sqrt();
    let (d, h) = spacetime_derivatives(&sr);
    let box_sr = geo.laplacian(&d, &h);
    let (ds, _) = spacetime_derivatives(&config.s_tilde.jet4(p4));
    let r_hat = geo.ricci_scalar();
    let h2 = hbar * hbar;
    Ok(box_sr - sr.v / h2 * (h2 * g_d / 3.0 * geo.norm_squared(&ds) - h2 / 6.0 * (5.0 * lambda - 3.0 * r_hat)))
}

/// `□√ρ − (√ρ/ħ²)((∂S_Q)² − m²)`.
pub fn kg1_quantum_residual(
    rho: &ScalarField,
    s_q: &ScalarField,
    mass_squared: f64,
    background: &MetricField4,
    hbar: f64,
    p4: &ChartPoint4,
) -> Result<f64> {
    let geo = background_geometry(background, p4)?;
    let sr = rho.jet4(p4).sqrt();
    let (d, h) = spacetime_derivatives(&sr);
    let (dq, _) = spacetime_derivatives(&s_q.jet4(p4));
    Ok(geo.laplacian(&d, &h) - sr.v / (hbar * hbar) * (geo.norm_squared(&dq) - mass_squared))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::{AnsatzSpec, RhoSpec};

    #[test]
    fn integrand_routes_agree_pointwise() {
        let model = Model::from_spec(&AnsatzSpec::generic(0.4)).unwrap();
        for c in [[0.23, 0.4, 0.3, -0.2, 0.5], [0.61, -0.2, 0.5, 0.1, 0.0]] {
            let p = ChartPoint5::new(c);
            let a = trace_integrand(&model, &p).unwrap();
            let b = trace_integrand_direct(&model, &p).unwrap();
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn boundary_term_integrates_away() {
        let spec = AnsatzSpec { eps2: 0.3, ..AnsatzSpec::generic(0.0) };
        let model = Model::from_spec(&spec).unwrap();
        let t = trace_terms(&model, &ChartPoint4::new([0.1, 0.2, -0.3, 0.4])).unwrap();
        assert!(t.boundary.abs() < 1e-10);
    }

    #[test]
    fn flat_sector_reduces_exactly() {
        let model = Model::from_spec(&AnsatzSpec::flat()).unwrap();
        let p4 = ChartPoint4::new([0.3, 0.1, 0.2, -0.5]);
        assert!(trace_reduced_residual(&model, &p4).unwrap().abs() < 1e-14);
    }

    #[test]
    fn lightlike_phase_on_minkowski_is_massless_solution() {
        let cfg = FieldConfig {
            rho: ScalarField::constant(1.0),
            s_tilde: (ScalarField::coordinate(1) - ScalarField::coordinate(2)).scale(2.0),
            g_d: 1.0,
            hbar: 1.0,
            lambda: 0.0,
        };
        let p4 = ChartPoint4::new([0.4, 0.1, 0.0, 0.3]);
        let r = kg1_residual(&cfg, &MetricField4::minkowski(), 0.0, 1.0, 1.0, &p4).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn term_by_term_assembly_for_modulated_density() {
        let (delta, k, p0, lambda, g_d) = (0.3, 1.7, 0.8, 0.5, 1.2);
        let spec = AnsatzSpec {
            rho: RhoSpec::Cosine { base: 1.0, amplitude: delta, wavevector: [0.0, k, 0.0, 0.0], phase: 0.0 },
            ..AnsatzSpec::flat()
        };
        let mut cfg = crate::ansatz::AnsatzParams::from_spec(&spec).unwrap().field_config();
        cfg.s_tilde = ScalarField::coordinate(1).scale(p0);
        let x: f64 = 0.35;
        let p4 = ChartPoint4::new([0.0, x, 0.0, 0.0]);
        let r = kg1_residual(&cfg, &MetricField4::minkowski(), lambda, g_d, 1.0, &p4).unwrap();
        // √ρ = √(1 + δ cos kx); □ = −∂_x² on a static profile
        let rho = 1.0 + delta * (k * x).cos();
        let rho1 = -delta * k * (k * x).sin();
        let rho2 = -delta * k * k * (k * x).cos();
        let sr2 = rho2 / (2.0 * rho.sqrt()) - rho1 * rho1 / (4.0 * rho.powf(1.5));
        let expected = -sr2 - rho.sqrt() * (g_d / 3.0 * p0 * p0 - 5.0 * lambda / 6.0);
        assert!((r - expected).abs() < 1e-10);
    }
}
