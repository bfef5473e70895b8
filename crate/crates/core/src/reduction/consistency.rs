//! Consistency of the reduced equations with the remaining field and
//! conservation equations.

use serde::{Deserialize, Serialize};

use super::model::Model;
use crate::error::{Error, Result};
use crate::quadrature::period_average_vec;
use crate::tensor::curvature::{background_geometry, spacetime_derivatives};
use crate::tensor::linalg::{eigen_signs, Lu, Mat};
use crate::tensor::{covariant_divergence_stress, ChartPoint4, MetricField4, ScalarField};

/// `R̂_{μν} ≈ n₁ ĝ_{μν} + G_D p_μ p_ν` with global `n₁`, `p_μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RicciDecomposition {
    pub n1: f64,
    pub p: [f64; 4],
    /// Largest absolute component misfit over all samples.
    pub residual: f64,
}

/// Minimum number of sample points for the decomposition fit.
pub const MIN_FIT_POINTS: usize = 14;

fn upper_pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..4).flat_map(|a| (a..4).map(move |b| (a, b)))
}

fn misfits(samples: &[(Mat<4>, Mat<4>)], g_d: f64, x: &[f64; 5]) -> Vec<f64> {
    let p = [x[1], x[2], x[3], x[4]];
    samples
        .iter()
        .flat_map(|(r, g)| upper_pairs().map(move |(a, b)| r[a][b] - x[0] * g[a][b] - g_d * p[a] * p[b]))
        .collect()
}

fn cost(samples: &[(Mat<4>, Mat<4>)], g_d: f64, x: &[f64; 5]) -> f64 {
    misfits(samples, g_d, x).iter().map(|r| r * r).sum()
}

/// Levenberg–Marquardt on the five parameters `(n₁, p_μ)`.
fn levenberg_marquardt(samples: &[(Mat<4>, Mat<4>)], g_d: f64, start: [f64; 5]) -> [f64; 5] {
    let mut x = start;
    let mut mu = 1e-3;
    let mut c = cost(samples, g_d, &x);
    for _ in 0..500 {
        let r = misfits(samples, g_d, &x);
        let mut jtj = [[0.0; 5]; 5];
        let mut jtr = [0.0; 5];
        let mut k = 0;
        for (_, g) in samples {
            for (a, b) in upper_pairs() {
                let mut row = [0.0; 5];
                row[0] = -g[a][b];
                row[a + 1] -= g_d * x[b + 1];
                row[b + 1] -= g_d * x[a + 1];
                for i in 0..5 {
                    jtr[i] += row[i] * r[k];
                    for j in 0..5 {
                        jtj[i][j] += row[i] * row[j];
                    }
                }
                k += 1;
            }
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut m = jtj;
            for i in 0..5 {
                m[i][i] += mu * (1.0 + jtj[i][i]);
            }
            let step = Lu::new(&m).solve(&jtr.map(|v| -v));
            let trial: [f64; 5] = std::array::from_fn(|i| x[i] + step[i]);
            let ct = cost(samples, g_d, &trial);
            if ct.is_finite() && ct < c {
                let small = step.iter().fold(0.0_f64, |s, v| s.max(v.abs())) < 1e-15;
                x = trial;
                c = ct;
                mu = (mu * 0.3).max(1e-15);
                improved = !small;
                break;
            }
            mu *= 10.0;
        }
        if !improved || c < 1e-30 {
            break;
        }
    }
    x
}

/// Fits `n₁`, `p_μ` to sampled Ricci/metric pairs.
pub fn fit_ricci_samples(samples: &[(Mat<4>, Mat<4>)], g_d: f64) -> Result<RicciDecomposition> {
    if samples.len() < MIN_FIT_POINTS {
        return Err(Error::IllConditionedFit(format!(
            "{} sample points, at least {MIN_FIT_POINTS} required",
            samples.len()
        )));
    }
    if !(g_d > 0.0) {
        return Err(Error::IllConditionedFit("G_D must be positive".into()));
    }
    // n₁ alone by least squares, then the dominant direction of the remainder
    let (mut num, mut den) = (0.0, 0.0);
    for (r, g) in samples {
        for (a, b) in upper_pairs() {
            num += r[a][b] * g[a][b];
            den += g[a][b] * g[a][b];
        }
    }
    if !(den > 0.0) {
        return Err(Error::IllConditionedFit("metric samples vanish".into()));
    }
    let n1 = num / den;
    let mut avg = [[0.0; 4]; 4];
    for (r, g) in samples {
        for a in 0..4 {
            for b in 0..4 {
                avg[a][b] += (r[a][b] - n1 * g[a][b]) / samples.len() as f64;
            }
        }
    }
    let m = nalgebra::Matrix4::from_fn(|i, j| avg[i][j]);
    let eig = nalgebra::SymmetricEigen::new(m);
    let (mut best, mut lam) = (0, 0.0_f64);
    for i in 0..4 {
        if eig.eigenvalues[i].abs() > lam.abs() {
            lam = eig.eigenvalues[i];
            best = i;
        }
    }
    let scale = (lam.max(0.0) / g_d).sqrt();
    let v = eig.eigenvectors.column(best);
    let starts = [
        [n1, 0.0, 0.0, 0.0, 0.0],
        [n1, scale * v[0], scale * v[1], scale * v[2], scale * v[3]],
    ];
    let x = starts
        .iter()
        .map(|s| levenberg_marquardt(samples, g_d, *s))
        .min_by(|a, b| cost(samples, g_d, a).total_cmp(&cost(samples, g_d, b)))
        .unwrap_or(starts[0]);
    let mut p = [x[1], x[2], x[3], x[4]];
    let lead = p.iter().copied().find(|v| v.abs() > 1e-12).unwrap_or(0.0);
    if lead < 0.0 {
        p = p.map(|v| -v);
    }
    let residual = misfits(samples, g_d, &[x[0], p[0], p[1], p[2], p[3]])
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.abs()));
    Ok(RicciDecomposition { n1: x[0], p, residual })
}

/// Fits the decomposition to the background Ricci tensor at `points`.
pub fn ricci_decomposition_fit(background: &MetricField4, g_d: f64, points: &[ChartPoint4]) -> Result<RicciDecomposition> {
    let samples = points
        .iter()
        .map(|p| {
            let geo = background_geometry(background, p)?;
            Ok((geo.ricci(), geo.g))
        })
        .collect::<Result<Vec<_>>>()?;
    fit_ricci_samples(&samples, g_d)
}

/// Both sides of the nine remaining `δβ` equations, period-averaged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Loong3b {
    /// `⟨(√ρ)_{;δ;β}/√ρ⟩`
    pub lhs: Mat<4>,
    /// `−⟨G_D(S̃_δS̃_β − p_δp_β) − (g_{δβ}/3)(G_D(∂S̃)² − Λ) + (g_{δβ}/4)(G_D p² − Λ)⟩`
    pub rhs: Mat<4>,
}

impl Loong3b {
    pub fn residual(&self) -> Mat<4> {
        std::array::from_fn(|a| std::array::from_fn(|b| self.lhs[a][b] - self.rhs[a][b]))
    }

    pub fn max_residual(&self) -> f64 {
        self.residual().iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn max_side(&self) -> f64 {
        self.lhs.iter().chain(&self.rhs).flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

fn unpack(v: &[f64]) -> Mat<4> {
    std::array::from_fn(|a| std::array::from_fn(|b| v[4 * a + b]))
}

pub fn loong3b(model: &Model, decomposition: &RicciDecomposition, p4: &ChartPoint4) -> Result<Loong3b> {
    let (g_d, lam) = (model.g_d(), model.lambda());
    let pv = decomposition.p;
    let v = period_average_vec(
        |tb| {
            let s = model.slice_at(tb, p4)?;
            let hess = s.hess_sqrt_rho();
            let (ds, _) = spacetime_derivatives(&model.params.s_tilde.jet(&p4.at_tbar(tb)));
            let s2 = s.geo.norm_squared(&ds);
            let p2 = s.geo.norm_squared(&pv);
            let mut out = [0.0; 32];
            for a in 0..4 {
                for b in 0..4 {
                    out[4 * a + b] = hess[a][b] / s.sqrt_rho.v;
                    out[16 + 4 * a + b] = -(g_d * (ds[a] * ds[b] - pv[a] * pv[b]) - s.g[a][b] / 3.0 * (g_d * s2 - lam)
                        + s.g[a][b] / 4.0 * (g_d * p2 - lam));
                }
            }
            Ok(out)
        },
        model.period(),
    )?;
    Ok(Loong3b { lhs: unpack(&v[..16]), rhs: unpack(&v[16..]) })
}

/// Single `(δ, β)` entry of the `loong3b` residual, `δ, β ∈ 0..4`.
pub fn loong3b_residual(model: &Model, decomposition: &RicciDecomposition, delta: usize, beta: usize, p4: &ChartPoint4) -> Result<f64> {
    Ok(loong3b(model, decomposition, p4)?.residual()[delta][beta])
}

/// Four-momentum conservation: the first-order expansion and the exact
/// period-averaged `∇_B T^B_μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumCheck {
    pub expanded: [f64; 4],
    pub exact: [f64; 4],
}

impl MomentumCheck {
    pub fn max_gap(&self) -> f64 {
        (0..4).fold(0.0_f64, |m, i| m.max((self.expanded[i] - self.exact[i]).abs()))
    }
}

/// `∂_δ(ĝ^{δν}S̃_μS̃_ν) − Γ̂^δ_{μν}ĝ^{γν}S̃_γS̃_δ + Γ̂^ν_{δν}ĝ^{γδ}S̃_μS̃_γ
///  + (ρ_ν/2ρ) ĝ^{γν}S̃_γS̃_μ`.
pub fn momentum_expansion(rho: &ScalarField, s_tilde: &ScalarField, background: &MetricField4, p4: &ChartPoint4) -> Result<[f64; 4]> {
    let geo = background_geometry(background, p4)?;
    let gam = geo.christoffel();
    let dginv = geo.dginv();
    let (s, hs) = spacetime_derivatives(&s_tilde.jet4(p4));
    let rj = rho.jet4(p4);
    let (dr, _) = spacetime_derivatives(&rj);
    let up = geo.raise(&s);
    let trace: [f64; 4] = std::array::from_fn(|d| (0..4).map(|n| gam[n][d][n]).sum());
    let flux_div: f64 = (0..4).map(|d| (0..4).map(|n| dginv[d][d][n] * s[n] + geo.ginv[d][n] * hs[n][d]).sum::<f64>()).sum();
    Ok(std::array::from_fn(|m| {
        let mut v = flux_div * s[m];
        for d in 0..4 {
            v += up[d] * hs[m][d];
        }
        for d in 0..4 {
            for n in 0..4 {
                v -= gam[d][m][n] * up[n] * s[d];
            }
        }
        for d in 0..4 {
            v += trace[d] * up[d] * s[m];
            v += dr[d] / (2.0 * rj.v) * up[d] * s[m];
        }
        v
    }))
}

pub fn momentum_conservation(model: &Model, p4: &ChartPoint4) -> Result<MomentumCheck> {
    let exact = period_average_vec(
        |tb| {
            let d = covariant_divergence_stress(&model.metric, &model.stress, &p4.at_tbar(tb))?;
            Ok([d[1], d[2], d[3], d[4]])
        },
        model.period(),
    )?;
    let expanded = momentum_expansion(&model.params.rho, &model.params.s_tilde, &model.params.background, p4)?;
    Ok(MomentumCheck { expanded, exact })
}

/// Expansion-minus-exact for component `mu ∈ 0..4`.
pub fn momentum_conservation_residual(model: &Model, mu: usize, p4: &ChartPoint4) -> Result<f64> {
    let c = momentum_conservation(model, p4)?;
    Ok(c.expanded[mu] - c.exact[mu])
}

/// Normalized Gaussian `(2πσ²)^{-3/2} exp(−|x⃗ − x⃗ₙ|²/(2σ²))`.
pub fn delta_surrogate(x: &[f64; 3], center: &[f64; 3], sigma: f64) -> f64 {
    let r2: f64 = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum();
    (2.0 * std::f64::consts::PI * sigma * sigma).powf(-1.5) * (-0.5 * r2 / (sigma * sigma)).exp()
}

/// Matter term of the classical limit with `E = p̃₀` and `p̃²` raised by
/// `ĝ = 3g⁰/2`: `(G_D/E)(p̃_μp̃_ν − (g⁰_{μν}/2)p̃²) δ³`.
fn classical_matter(g0: &Mat<4>, ghat_inv: &Mat<4>, pt: &[f64; 4], g_d: f64, delta: f64) -> Result<Mat<4>> {
    if pt.iter().all(|v| *v == 0.0) {
        return Ok([[0.0; 4]; 4]);
    }
    let e = pt[0];
    if e == 0.0 {
        return Err(Error::DegenerateScale("E = p0 vanishes for a non-zero momentum".into()));
    }
    let mut p2 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            p2 += ghat_inv[a][b] * pt[a] * pt[b];
        }
    }
    Ok(std::array::from_fn(|a| {
        std::array::from_fn(|b| g_d / e * (pt[a] * pt[b] - 0.5 * g0[a][b] * p2) * delta)
    }))
}

/// Inputs of the classical-limit check.
#[derive(Debug, Clone)]
pub struct ClassicalLimit {
    /// `g⁰`, so that `ĝ = 3g⁰/2`.
    pub g0: MetricField4,
    pub s_tilde: ScalarField,
    pub lambda: f64,
    pub g_d: f64,
    pub sigma: f64,
    pub center: [f64; 3],
}

impl ClassicalLimit {
    fn parts(&self, p4: &ChartPoint4) -> Result<(Mat<4>, Mat<4>, Mat<4>, [f64; 4], f64)> {
        let ghat = self.g0.scaled(1.5);
        let geo = background_geometry(&ghat, p4)?;
        let g0 = self.g0.values(p4);
        let (pt, _) = spacetime_derivatives(&self.s_tilde.jet4(p4));
        let c = p4.coords;
        let delta = delta_surrogate(&[c[1], c[2], c[3]], &self.center, self.sigma);
        Ok((geo.ricci(), g0, geo.ginv, pt, delta))
    }

    /// `R̂ − (G_D/E)(p̃p̃ − (g⁰/2)p̃²)δ³ − (g⁰/2)Λ`.
    pub fn residual(&self, p4: &ChartPoint4) -> Result<Mat<4>> {
        let (ric, g0, gi, pt, delta) = self.parts(p4)?;
        let m = classical_matter(&g0, &gi, &pt, self.g_d, delta)?;
        Ok(std::array::from_fn(|a| {
            std::array::from_fn(|b| ric[a][b] - m[a][b] - 0.5 * g0[a][b] * self.lambda)
        }))
    }

    /// Right side in the classical-limit form.
    pub fn rhs_classical(&self, p4: &ChartPoint4) -> Result<Mat<4>> {
        let (_, g0, gi, pt, delta) = self.parts(p4)?;
        let m = classical_matter(&g0, &gi, &pt, self.g_d, delta)?;
        Ok(std::array::from_fn(|a| std::array::from_fn(|b| m[a][b] + 0.5 * g0[a][b] * self.lambda)))
    }

    /// Right side in the trace-reversed component form,
    /// `G_D(T_{μν} − ĝ_{μν}T/3) + ĝ_{μν}Λ/3` with `T_{μν} = p̃_μp̃_ν δ³/E`.
    pub fn rhs_component_form(&self, p4: &ChartPoint4) -> Result<Mat<4>> {
        let (_, g0, gi, pt, delta) = self.parts(p4)?;
        let ghat = g0.map(|r| r.map(|v| 1.5 * v));
        if pt.iter().all(|v| *v == 0.0) {
            return Ok(std::array::from_fn(|a| std::array::from_fn(|b| ghat[a][b] * self.lambda / 3.0)));
        }
        let t: Mat<4> = std::array::from_fn(|a| std::array::from_fn(|b| pt[a] * pt[b] * delta / pt[0]));
        let mut tr = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                tr += gi[a][b] * t[a][b];
            }
        }
        Ok(std::array::from_fn(|a| {
            std::array::from_fn(|b| self.g_d * (t[a][b] - ghat[a][b] * tr / 3.0) + ghat[a][b] * self.lambda / 3.0)
        }))
    }
}

/// Signs of the eigenvalues of a fitted `G_D p p` term, used to report
/// whether `p` is timelike, null or spacelike on the background.
pub fn momentum_character(background: &MetricField4, p: &[f64; 4], p4: &ChartPoint4) -> Result<(f64, [i8; 4])> {
    let geo = background_geometry(background, p4)?;
    let pp: Mat<4> = std::array::from_fn(|a| std::array::from_fn(|b| p[a] * p[b]));
    Ok((geo.norm_squared(p), eigen_signs(&pp, 1e-14)))
}
