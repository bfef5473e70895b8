//! Dust-like stress tensor `T^A_B = (∂^A S)(∂_B S)` of a principal function.

use super::curvature::LocalGeometry;
use super::field::{ChartPoint5, MetricField5, ScalarField};
use super::linalg::{self, Mat};
use crate::error::Result;

#[derive(Debug, Clone)]
pub struct StressField {
    metric: MetricField5,
    principal: ScalarField,
}

impl StressField {
    pub fn new(metric: MetricField5, principal: ScalarField) -> Self {
        StressField { metric, principal }
    }

    pub fn metric(&self) -> &MetricField5 {
        &self.metric
    }

    pub fn principal(&self) -> &ScalarField {
        &self.principal
    }

    pub fn gradient(&self, p: &ChartPoint5) -> [f64; 5] {
        self.principal.jet(p).g
    }

    /// `T_{AB} = ∂_A S ∂_B S`.
    pub fn lowered(&self, p: &ChartPoint5) -> Mat<5> {
        let d = self.gradient(p);
        std::array::from_fn(|a| std::array::from_fn(|b| d[a] * d[b]))
    }

    /// `T^A_B` as `t[a][b]`.
    pub fn mixed(&self, p: &ChartPoint5) -> Result<Mat<5>> {
        let ginv = linalg::invert_metric(&self.metric.values(p))?;
        let d = self.gradient(p);
        let up: [f64; 5] = std::array::from_fn(|a| (0..5).map(|c| ginv[a][c] * d[c]).sum());
        Ok(std::array::from_fn(|a| std::array::from_fn(|b| up[a] * d[b])))
    }

    pub(crate) fn mixed_with(&self, geo: &LocalGeometry<5>, d: &[f64; 5]) -> Mat<5> {
        let up = geo.raise(d);
        std::array::from_fn(|a| std::array::from_fn(|b| up[a] * d[b]))
    }

    /// `T^A_A` by contraction of the mixed tensor.
    pub fn trace(&self, p: &ChartPoint5) -> Result<f64> {
        let t = self.mixed(p)?;
        Ok((0..5).map(|a| t[a][a]).sum())
    }

    /// `T^A_A = (∂^0 S)(∂_0 S) + (∂^μ S)(∂_μ S)` with the `t̄` and spacetime
    /// blocks inverted separately (valid for block metrics, `g_{0μ} = 0`).
    pub fn trace_split(&self, p: &ChartPoint5) -> Result<f64> {
        let g = self.metric.values(p);
        let d = self.gradient(p);
        let block: Mat<4> = std::array::from_fn(|a| std::array::from_fn(|b| g[a + 1][b + 1]));
        let binv = linalg::invert_metric(&block)?;
        let mut s = d[0] * d[0] / g[0][0];
        for m in 0..4 {
            for n in 0..4 {
                s += binv[m][n] * d[m + 1] * d[n + 1];
            }
        }
        Ok(s)
    }

    /// Largest absolute 2×2 minor of `T^A_B`; zero for a rank-one tensor.
    pub fn max_minor(&self, p: &ChartPoint5) -> Result<f64> {
        let t = self.mixed(p)?;
        let mut m = 0.0_f64;
        for a in 0..5 {
            for b in a + 1..5 {
                for c in 0..5 {
                    for d in c + 1..5 {
                        m = m.max((t[a][c] * t[b][d] - t[a][d] * t[b][c]).abs());
                    }
                }
            }
        }
        Ok(m)
    }
}
