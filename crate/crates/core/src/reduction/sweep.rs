//! Measured order of the first-order reductions under a joint rescaling of
//! ε₀, ε₁ and ε₂.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::consistency::momentum_conservation;
use super::continuity::{continuity0_residual, kg2_residual};
use super::model::Model;
use super::trace::{kg1_residual, trace_reduced_residual};
use crate::ansatz::AnsatzSpec;
use crate::error::{Error, Result};
use crate::tensor::ChartPoint4;

/// Gaps at or below this are treated as an exact reduction.
pub const UNDERFLOW: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepCheck {
    /// Exact trace-integrated equation against the first Klein–Gordon equation.
    Trace,
    /// Normalized `t̄` conservation law against the second Klein–Gordon equation.
    Continuity,
    /// Exact four-momentum conservation against its first-order expansion.
    Momentum,
}

impl SweepCheck {
    pub const ALL: [SweepCheck; 3] = [SweepCheck::Trace, SweepCheck::Continuity, SweepCheck::Momentum];

    pub fn name(self) -> &'static str {
        match self {
            SweepCheck::Trace => "trace",
            SweepCheck::Continuity => "continuity",
            SweepCheck::Momentum => "momentum",
        }
    }

    /// Gap at one point for a model built at a given scale.
    pub fn gap(self, model: &Model, p4: &ChartPoint4) -> Result<f64> {
        let params = &model.params;
        match self {
            SweepCheck::Trace => {
                let exact = trace_reduced_residual(model, p4)?;
                let s = &params.spec;
                let reduced = kg1_residual(&params.field_config(), &params.background, s.lambda, s.g_d, s.hbar, p4)?;
                Ok((exact - reduced).abs())
            }
            // Without a t̄-dependent principal function the conservation law
            // carries no first-order information; the gap is reported as zero.
            SweepCheck::Continuity => match continuity0_residual(model, p4)?.normalized {
                Some(exact) => Ok((exact - kg2_residual(&params.field_config(), &params.background, p4)?).abs()),
                None => Ok(0.0),
            },
            SweepCheck::Momentum => Ok(momentum_conservation(model, p4)?.max_gap()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub check: SweepCheck,
    pub scales: Vec<f64>,
    /// Largest gap over the sample points at each scale.
    pub gaps: Vec<f64>,
    /// Fitted exponent `s` of `gap ≈ C ε^s`; absent when degenerate.
    pub slope: Option<f64>,
    pub r_squared: Option<f64>,
    /// Some gap underflowed, so the reduction is exact and the slope undefined.
    pub degenerate: bool,
}

/// Least-squares line through `(ln x, ln y)`: `(slope, R²)`.
pub fn loglog_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    (slope, r2)
}

fn validate(scales: &[f64]) -> Result<()> {
    if scales.len() < 4 {
        return Err(Error::InvalidSweep(format!("{} scales, at least 4 required", scales.len())));
    }
    if scales.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
        return Err(Error::InvalidSweep("scales must be positive and finite".into()));
    }
    let (lo, hi) = scales.iter().fold((f64::INFINITY, 0.0_f64), |(l, h), s| (l.min(*s), h.max(*s)));
    if hi / lo < 8.0 {
        return Err(Error::InvalidSweep(format!("scales span a factor {:.3}, at least 8 required", hi / lo)));
    }
    Ok(())
}

/// Sweeps `base.with_eps(scale)` over `scales` and fits the gap order of
/// each check.
pub fn epsilon_sweep(
    base: &AnsatzSpec,
    scales: &[f64],
    checks: &[SweepCheck],
    points: &[ChartPoint4],
) -> Result<Vec<SweepResult>> {
    validate(scales)?;
    if points.is_empty() {
        return Err(Error::InvalidSweep("no sample points".into()));
    }
    let models = scales
        .iter()
        .map(|s| Model::from_spec(&base.with_eps(*s)))
        .collect::<Result<Vec<_>>>()?;
    checks
        .iter()
        .map(|&check| {
            let gaps = models
                .iter()
                .map(|m| {
                    let g = points
                        .par_iter()
                        .map(|p| check.gap(m, p))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(g.into_iter().fold(0.0_f64, f64::max))
                })
                .collect::<Result<Vec<_>>>()?;
            let degenerate = gaps.iter().any(|g| *g <= UNDERFLOW);
            let (slope, r_squared) = if degenerate {
                (None, None)
            } else {
                let (s, r) = loglog_fit(scales, &gaps);
                (Some(s), Some(r))
            };
            Ok(SweepResult { check, scales: scales.to_vec(), gaps, slope, r_squared, degenerate })
        })
        .collect()
}
