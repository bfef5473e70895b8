//! The twenty-five field equations written out under the block ansatz, and
//! their certification against the direct Einstein residual.

use super::model::{Model, Slice};
use crate::error::Result;
use crate::tensor::linalg::Mat;
use crate::tensor::{einstein_residual, ChartPoint5};

impl Slice {
    /// Left side of the `00` equation:
    /// `−ᾱ²√ρ □√ρ − ∂₀(g^{λβ}ġ_{λβ})/2 + ᾱ̇ g^{λβ}ġ_{λβ}/(2ᾱ) − g^{μβ}g^{λσ}ġ_{λβ}ġ_{μσ}/4`.
    pub fn lhs_00(&self) -> f64 {
        -self.alpha * self.alpha * self.sqrt_rho.v * self.box_sqrt_rho() - 0.5 * self.tr_gd_dot()
            + self.alpha_dot * self.tr_gd() / (2.0 * self.alpha)
            - 0.25 * self.gd_squared()
    }

    /// Left sides of the `0δ` equations.
    pub fn lhs_0d(&self) -> [f64; 4] {
        let (gi, gd, dg) = (&self.gi, &self.gd, &self.dg);
        let rho = self.rho.v;
        let drho = Slice::split(&self.rho).0;
        let tr = self.tr_gd();
        let tr_grad = self.tr_gd_grad();
        let gi_dot = self.gi_dot();
        // ∂_λ g^{λμ}
        let dgi: [Mat<4>; 4] = std::array::from_fn(|l| {
            let m = crate::tensor::linalg::matmul(&crate::tensor::linalg::matmul(gi, &dg[l]), gi);
            m.map(|r| r.map(|v| -v))
        });
        std::array::from_fn(|d| {
            let mut s = tr * drho[d] / (4.0 * rho);
            for l in 0..4 {
                for b in 0..4 {
                    s -= gi[l][b] * drho[b] * gd[d][l] / (4.0 * rho);
                }
            }
            let mut div = 0.0;
            for l in 0..4 {
                for m in 0..4 {
                    div += dgi[l][l][m] * gd[m][d] + gi[l][m] * self.dgd[l][m][d];
                }
            }
            s += 0.5 * div - 0.5 * tr_grad[d];
            for l in 0..4 {
                for sg in 0..4 {
                    for m in 0..4 {
                        for b in 0..4 {
                            s += 0.25 * gi[l][sg] * gi[m][b] * gd[sg][d] * dg[l][m][b];
                        }
                    }
                }
            }
            for m in 0..4 {
                for b in 0..4 {
                    s += 0.25 * gi_dot[m][b] * dg[d][m][b];
                }
            }
            s
        })
    }

    /// Left sides of the `δβ` equations.
    pub fn lhs_db(&self) -> Mat<4> {
        let ric = self.geo.ricci();
        let hess = self.hess_sqrt_rho();
        let tr = self.tr_gd();
        let pre = 1.0 / (2.0 * self.g00());
        let (gi, gd) = (&self.gi, &self.gd);
        std::array::from_fn(|d| {
            std::array::from_fn(|b| {
                let mut quad = 0.0;
                for l in 0..4 {
                    for m in 0..4 {
                        quad += gi[l][m] * gd[d][l] * gd[b][m];
                    }
                }
                ric[d][b] - hess[d][b] / self.sqrt_rho.v
                    + pre
                        * (self.alpha_dot * gd[d][b] / self.alpha - self.gdd[d][b] + quad
                            - 0.5 * tr * gd[d][b])
            })
        })
    }
}

/// Right sides `G_D(T_{AB} − g_{AB}T/3) + g_{AB}Λ/3`, indices `A, B ∈ 0..5`.
fn rhs(model: &Model, s: &Slice) -> Mat<5> {
    let (gd_, lam) = (model.g_d(), model.lambda());
    let mut d = [0.0; 5];
    d[0] = s.s0();
    d[1..].copy_from_slice(&s.s4());
    let t = s.stress_trace();
    let g5 = |a: usize, b: usize| match (a, b) {
        (0, 0) => s.g00(),
        (0, _) | (_, 0) => 0.0,
        _ => s.g[a - 1][b - 1],
    };
    std::array::from_fn(|a| {
        std::array::from_fn(|b| gd_ * (d[a] * d[b] - g5(a, b) * t / 3.0) + g5(a, b) * lam / 3.0)
    })
}

/// All twenty-five component residuals (left minus right side).
pub fn component_residuals(model: &Model, p: &ChartPoint5) -> Result<Mat<5>> {
    let s = model.slice(p)?;
    let r = rhs(model, &s);
    let l00 = s.lhs_00();
    let l0d = s.lhs_0d();
    let ldb = s.lhs_db();
    Ok(std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            let lhs = match (a, b) {
                (0, 0) => l00,
                (0, d) | (d, 0) => l0d[d - 1],
                (d, e) => ldb[d - 1][e - 1],
            };
            lhs - r[a][b]
        })
    }))
}

pub fn residual_00(model: &Model, p: &ChartPoint5) -> Result<f64> {
    Ok(component_residuals(model, p)?[0][0])
}

/// `δ ∈ 1..=4` (chart index of the spacetime direction).
pub fn residual_0delta(model: &Model, p: &ChartPoint5, delta: usize) -> Result<f64> {
    Ok(component_residuals(model, p)?[0][delta])
}

/// `δ, β ∈ 1..=4`.
pub fn residual_deltabeta(model: &Model, p: &ChartPoint5, delta: usize, beta: usize) -> Result<f64> {
    Ok(component_residuals(model, p)?[delta][beta])
}

/// The direct residual `E_{AB}` mapped to the trace-reversed form
/// `C_{AB} = E_{AB} − (g_{AB}/3) g^{CD}E_{CD}
///        = R_{AB} − G_D(T_{AB} − g_{AB}T/3) − g_{AB}Λ/3`.
pub fn direct_component_form(model: &Model, p: &ChartPoint5) -> Result<Mat<5>> {
    let e = einstein_residual(&model.metric, &model.stress, model.lambda(), model.g_d(), p)?;
    let g = model.metric.values(p);
    let gi = crate::tensor::invert_metric(&g)?;
    let mut tr = 0.0;
    for a in 0..5 {
        for b in 0..5 {
            tr += gi[a][b] * e[a][b];
        }
    }
    Ok(std::array::from_fn(|a| std::array::from_fn(|b| e[a][b] - g[a][b] * tr / 3.0)))
}

/// Largest discrepancy between the written-out component equations and the
/// direct Einstein residual.
pub fn crosscheck_components(model: &Model, p: &ChartPoint5) -> Result<f64> {
    let c = component_residuals(model, p)?;
    let d = direct_component_form(model, p)?;
    Ok(c.iter()
        .flatten()
        .zip(d.iter().flatten())
        .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ansatz::AnsatzSpec;

    #[test]
    fn flat_sector_vanishes() {
        let model = Model::from_spec(&AnsatzSpec::flat()).unwrap();
        let p = ChartPoint5::new([0.2, 0.3, -0.1, 0.4, 0.5]);
        let r = component_residuals(&model, &p).unwrap();
        assert!(r.iter().flatten().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn generic_components_match_direct_form() {
        let model = Model::from_spec(&AnsatzSpec::generic(0.3)).unwrap();
        for c in [[0.23, 0.4, 0.3, -0.2, 0.5], [0.71, -0.3, 0.1, 0.6, -0.4]] {
            let p = ChartPoint5::new(c);
            assert!(crosscheck_components(&model, &p).unwrap() < 1e-10);
        }
    }

    #[test]
    fn mixed_equation_without_metric_perturbation() {
        let spec = AnsatzSpec { eps1: 0.2, eps2: 0.0, ..AnsatzSpec::generic(0.0) };
        let model = Model::from_spec(&spec).unwrap();
        let p = ChartPoint5::new([0.1, 0.2, 0.3, 0.1, -0.2]);
        let s = model.slice(&p).unwrap();
        assert!(s.lhs_0d().iter().all(|x| *x == 0.0));
        for d in 1..5 {
            let expected = -model.g_d() * s.s0() * s.s4()[d - 1];
            assert!((residual_0delta(&model, &p, d).unwrap() - expected).abs() < 1e-15);
        }
    }
}
