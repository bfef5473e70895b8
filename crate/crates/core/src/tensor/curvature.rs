//! Pointwise curvature of a coordinate chart.
//!
//! Conventions:
//! `Γ^a_{bc} = ½ g^{ad}(∂_b g_{dc} + ∂_c g_{db} − ∂_d g_{bc})` and
//! `R_{bd} = ∂_a Γ^a_{db} − ∂_d Γ^a_{ab} + Γ^a_{ae} Γ^e_{db} − Γ^a_{de} Γ^e_{ab}`.
//! With these, the flat-slicing de Sitter block `diag(1, −e^{2Ht}, …)` has
//! `R̂_{μν} = −3H² ĝ_{μν}` and `R̂ = −12H²`.

use super::field::{ChartPoint4, ChartPoint5, MetricField4, MetricField5, ScalarField, SymField4};
use super::jet::Jet5;
use super::linalg::{self, Mat};
use super::stress::StressField;
use crate::error::Result;

pub type Rank3<const N: usize> = [[[f64; N]; N]; N];
pub type Rank4<const N: usize> = [[[[f64; N]; N]; N]; N];

/// Metric value, inverse and first two derivatives at one point.
#[derive(Debug, Clone)]
pub struct LocalGeometry<const N: usize> {
    pub g: Mat<N>,
    pub ginv: Mat<N>,
    /// `dg[c][a][b] = ∂_c g_{ab}`
    pub dg: Rank3<N>,
    /// `ddg[c][d][a][b] = ∂_c ∂_d g_{ab}`
    pub ddg: Rank4<N>,
}

impl<const N: usize> LocalGeometry<N> {
    /// Builds the local data from metric jets, reading derivatives along the
    /// jet slots listed in `axes`.
    pub fn from_jets(m: &[[Jet5; N]; N], axes: [usize; N]) -> Result<Self> {
        let g: Mat<N> = m.map(|row| row.map(|j| j.v));
        let ginv = linalg::invert_metric(&g)?;
        let dg = std::array::from_fn(|c| {
            std::array::from_fn(|a| std::array::from_fn(|b| m[a][b].g[axes[c]]))
        });
        let ddg = std::array::from_fn(|c| {
            std::array::from_fn(|d| {
                std::array::from_fn(|a| std::array::from_fn(|b| m[a][b].h[axes[c]][axes[d]]))
            })
        });
        Ok(LocalGeometry { g, ginv, dg, ddg })
    }

    /// `∂_c g^{ab}`
    pub fn dginv(&self) -> Rank3<N> {
        std::array::from_fn(|c| {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| {
                    let mut s = 0.0;
                    for p in 0..N {
                        for q in 0..N {
                            s -= self.ginv[a][p] * self.dg[c][p][q] * self.ginv[q][b];
                        }
                    }
                    s
                })
            })
        })
    }

    /// `Γ^a_{bc}` as `gam[a][b][c]`.
    pub fn christoffel(&self) -> Rank3<N> {
        let lower: Rank3<N> = std::array::from_fn(|d| {
            std::array::from_fn(|b| {
                std::array::from_fn(|c| 0.5 * (self.dg[b][d][c] + self.dg[c][d][b] - self.dg[d][b][c]))
            })
        });
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                std::array::from_fn(|c| (0..N).map(|d| self.ginv[a][d] * lower[d][b][c]).sum())
            })
        })
    }

    /// `∂_e Γ^a_{bc}` as `dgam[e][a][b][c]`.
    pub fn christoffel_derivatives(&self) -> Rank4<N> {
        let dginv = self.dginv();
        let lower: Rank3<N> = std::array::from_fn(|d| {
            std::array::from_fn(|b| {
                std::array::from_fn(|c| 0.5 * (self.dg[b][d][c] + self.dg[c][d][b] - self.dg[d][b][c]))
            })
        });
        std::array::from_fn(|e| {
            std::array::from_fn(|a| {
                std::array::from_fn(|b| {
                    std::array::from_fn(|c| {
                        (0..N)
                            .map(|d| {
                                let dlower = 0.5
                                    * (self.ddg[e][b][d][c] + self.ddg[e][c][d][b]
                                        - self.ddg[e][d][b][c]);
                                dginv[e][a][d] * lower[d][b][c] + self.ginv[a][d] * dlower
                            })
                            .sum()
                    })
                })
            })
        })
    }

    /// Ricci tensor before symmetrisation.
    pub fn ricci_raw(&self) -> Mat<N> {
        let gam = self.christoffel();
        let dgam = self.christoffel_derivatives();
        let trace: [f64; N] = std::array::from_fn(|e| (0..N).map(|a| gam[a][a][e]).sum());
        std::array::from_fn(|b| {
            std::array::from_fn(|d| {
                let mut r = 0.0;
                for a in 0..N {
                    r += dgam[a][a][d][b] - dgam[d][a][a][b];
                }
                for e in 0..N {
                    r += trace[e] * gam[e][d][b];
                    for a in 0..N {
                        r -= gam[a][d][e] * gam[e][a][b];
                    }
                }
                r
            })
        })
    }

    pub fn ricci(&self) -> Mat<N> {
        linalg::symmetrize(&self.ricci_raw())
    }

    pub fn contract(&self, t: &Mat<N>) -> f64 {
        let mut s = 0.0;
        for a in 0..N {
            for b in 0..N {
                s += self.ginv[a][b] * t[a][b];
            }
        }
        s
    }

    pub fn ricci_scalar(&self) -> f64 {
        self.contract(&self.ricci())
    }

    /// `g^{ab}(∂_a∂_b f − Γ^c_{ab} ∂_c f)` for a scalar with the given local
    /// gradient and Hessian (same axis ordering as the geometry).
    pub fn laplacian(&self, grad: &[f64; N], hess: &Mat<N>) -> f64 {
        let gam = self.christoffel();
        let mut s = 0.0;
        for a in 0..N {
            for b in 0..N {
                let conn: f64 = (0..N).map(|c| gam[c][a][b] * grad[c]).sum();
                s += self.ginv[a][b] * (hess[a][b] - conn);
            }
        }
        s
    }

    /// Covariant Hessian `∇_a∇_b f`.
    pub fn covariant_hessian(&self, grad: &[f64; N], hess: &Mat<N>) -> Mat<N> {
        let gam = self.christoffel();
        std::array::from_fn(|a| {
            std::array::from_fn(|b| hess[a][b] - (0..N).map(|c| gam[c][a][b] * grad[c]).sum::<f64>())
        })
    }

    pub fn raise(&self, v: &[f64; N]) -> [f64; N] {
        std::array::from_fn(|a| (0..N).map(|b| self.ginv[a][b] * v[b]).sum())
    }

    pub fn norm_squared(&self, v: &[f64; N]) -> f64 {
        let up = self.raise(v);
        (0..N).map(|a| up[a] * v[a]).sum()
    }

    pub fn det(&self) -> f64 {
        linalg::det(&self.g)
    }
}

const AXES5: [usize; 5] = [0, 1, 2, 3, 4];
const AXES4: [usize; 4] = [1, 2, 3, 4];

pub fn geometry5(g: &MetricField5, p: &ChartPoint5) -> Result<LocalGeometry<5>> {
    LocalGeometry::from_jets(&g.jets(p), AXES5)
}

/// Geometry of a four-dimensional block at fixed `t̄ = p.tbar()`.
pub fn geometry4(h: &SymField4, p: &ChartPoint5) -> Result<LocalGeometry<4>> {
    LocalGeometry::from_jets(&h.jets(p), AXES4)
}

pub fn background_geometry(h: &MetricField4, p: &ChartPoint4) -> Result<LocalGeometry<4>> {
    geometry4(h.as_sym(), &p.at_tbar(0.0))
}

/// Gradient and Hessian of a scalar restricted to the `(t, x, y, z)` slots.
pub fn spacetime_derivatives(j: &Jet5) -> ([f64; 4], Mat<4>) {
    let grad = std::array::from_fn(|a| j.g[a + 1]);
    let hess = std::array::from_fn(|a| std::array::from_fn(|b| j.h[a + 1][b + 1]));
    (grad, hess)
}

pub fn christoffel(g: &MetricField5, p: &ChartPoint5) -> Result<Rank3<5>> {
    Ok(geometry5(g, p)?.christoffel())
}

pub fn ricci(g: &MetricField5, p: &ChartPoint5) -> Result<Mat<5>> {
    Ok(geometry5(g, p)?.ricci())
}

pub fn ricci_scalar(g: &MetricField5, p: &ChartPoint5) -> Result<f64> {
    Ok(geometry5(g, p)?.ricci_scalar())
}

pub fn ricci4(h: &MetricField4, p: &ChartPoint4) -> Result<Mat<4>> {
    Ok(background_geometry(h, p)?.ricci())
}

pub fn ricci_scalar4(h: &MetricField4, p: &ChartPoint4) -> Result<f64> {
    Ok(background_geometry(h, p)?.ricci_scalar())
}

/// `R_{AB} − ½ g_{AB} R − G_D T_{AB} + ½ g_{AB} Λ` with `T_{AB} = g_{AC} T^C_B`.
pub fn einstein_residual(
    g: &MetricField5,
    stress: &StressField,
    lambda: f64,
    g_d: f64,
    p: &ChartPoint5,
) -> Result<Mat<5>> {
    let geo = geometry5(g, p)?;
    let ric = geo.ricci();
    let r = geo.contract(&ric);
    let t = stress.lowered(p);
    Ok(std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            ric[a][b] - 0.5 * geo.g[a][b] * r - g_d * t[a][b] + 0.5 * geo.g[a][b] * lambda
        })
    }))
}

/// Covariant d'Alembertian `∂_μ(√−ĝ ĝ^{μν} ∂_ν f)/√−ĝ` on the background.
pub fn dalembert4(h: &MetricField4, f: &ScalarField, p: &ChartPoint4) -> Result<f64> {
    let geo = background_geometry(h, p)?;
    let (grad, hess) = spacetime_derivatives(&f.jet4(p));
    Ok(geo.laplacian(&grad, &hess))
}

/// `∇_B T^B_A = ∂_B T^B_A − Γ^D_{AB} T^B_D + Γ^B_{BD} T^D_A`.
pub fn covariant_divergence_stress(
    g: &MetricField5,
    stress: &StressField,
    p: &ChartPoint5,
) -> Result<[f64; 5]> {
    let geo = geometry5(g, p)?;
    let gam = geo.christoffel();
    let dginv = geo.dginv();
    let s = stress.principal().jet(p);
    let mixed = stress.mixed_with(&geo, &s.g);
    let trace: [f64; 5] = std::array::from_fn(|d| (0..5).map(|b| gam[b][b][d]).sum());
    Ok(std::array::from_fn(|a| {
        let mut div = 0.0;
        for b in 0..5 {
            for c in 0..5 {
                div += dginv[b][b][c] * s.g[c] * s.g[a]
                    + geo.ginv[b][c] * (s.h[c][b] * s.g[a] + s.g[c] * s.h[a][b]);
            }
        }
        for b in 0..5 {
            for d in 0..5 {
                div -= gam[d][a][b] * mixed[b][d];
            }
        }
        for d in 0..5 {
            div += trace[d] * mixed[d][a];
        }
        div
    }))
}

/// Contravariant Einstein tensor `G^{AB}` at `p`.
pub fn einstein_upper(g: &MetricField5, p: &ChartPoint5) -> Result<Mat<5>> {
    let geo = geometry5(g, p)?;
    let ric = geo.ricci();
    let r = geo.contract(&ric);
    let lower: Mat<5> =
        std::array::from_fn(|a| std::array::from_fn(|b| ric[a][b] - 0.5 * geo.g[a][b] * r));
    let gi = geo.ginv;
    Ok(linalg::matmul(&linalg::matmul(&gi, &lower), &gi))
}

/// `∇_A G^{AB}` with the outer derivative taken by a fourth-order central
/// difference of the exact Einstein tensor (third metric derivatives are not
/// carried by the field jets).
pub fn einstein_divergence_fd(g: &MetricField5, p: &ChartPoint5, h: f64) -> Result<[f64; 5]> {
    let geo = geometry5(g, p)?;
    let gam = geo.christoffel();
    let center = einstein_upper(g, p)?;
    let mut partial = [0.0; 5];
    for a in 0..5 {
        let e = |k: f64| einstein_upper(g, &p.shifted(a, k * h));
        let (p2, p1, m1, m2) = (e(2.0)?, e(1.0)?, e(-1.0)?, e(-2.0)?);
        for b in 0..5 {
            partial[b] += (-p2[a][b] + 8.0 * p1[a][b] - 8.0 * m1[a][b] + m2[a][b]) / (12.0 * h);
        }
    }
    let trace: [f64; 5] = std::array::from_fn(|c| (0..5).map(|a| gam[a][a][c]).sum());
    Ok(std::array::from_fn(|b| {
        let mut s = partial[b];
        for c in 0..5 {
            s += trace[c] * center[c][b];
            for a in 0..5 {
                s += gam[b][a][c] * center[a][c];
            }
        }
        s
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::oracle::{fd_oracle_partial, Partial};

    fn de_sitter_5d(h: f64) -> MetricField5 {
        MetricField5::new(move |x| {
            let mut m = [[Jet5::constant(0.0); 5]; 5];
            m[0][0] = Jet5::constant(1.0);
            m[1][1] = Jet5::constant(1.0);
            let a2 = (x[1] * (2.0 * h)).exp();
            for i in 2..5 {
                m[i][i] = -a2;
            }
            m
        })
    }

    #[test]
    fn flat_metric_has_zero_curvature() {
        let p = ChartPoint5::new([0.3, -0.2, 0.5, 0.1, 0.9]);
        let g = MetricField5::flat();
        assert!(christoffel(&g, &p).unwrap().iter().flatten().flatten().all(|&x| x == 0.0));
        assert!(ricci(&g, &p).unwrap().iter().flatten().all(|&x| x == 0.0));
        assert_eq!(ricci_scalar(&g, &p).unwrap(), 0.0);
    }

    #[test]
    fn lapse_christoffel_matches_finite_difference() {
        // g00 = rho(x) = 1 + x², other entries flat, at x = 1.
        let g = MetricField5::new(|x| {
            let mut m = [[Jet5::constant(0.0); 5]; 5];
            m[0][0] = x[2] * x[2] + 1.0;
            m[1][1] = Jet5::constant(1.0);
            for i in 2..5 {
                m[i][i] = Jet5::constant(-1.0);
            }
            m
        });
        let p = ChartPoint5::new([0.0, 0.0, 1.0, 0.0, 0.0]);
        let gam = christoffel(&g, &p).unwrap();
        // Γ^0_{02} = ρ'/(2ρ)
        assert!((gam[0][0][2] - 0.5).abs() < 1e-14);
        // Oracle on the defining formula: Γ^2_{00} = −½ g^{22} ∂_2 g_{00}
        let g00 = |c: &[f64; 5]| 1.0 + c[2] * c[2];
        let d = fd_oracle_partial(g00, &p.coords, Partial::First(2), 1e-3);
        let expected = -0.5 * (-1.0) * d;
        assert!((gam[2][0][0] - expected).abs() < 1e-9);
        assert_eq!(gam[0][0][2], gam[0][2][0]);
    }

    #[test]
    fn de_sitter_christoffel_pattern() {
        let h = 0.7;
        let p = ChartPoint5::new([0.0, 0.4, 0.1, 0.2, 0.3]);
        let gam = christoffel(&de_sitter_5d(h), &p).unwrap();
        let a2 = (2.0 * h * 0.4_f64).exp();
        assert!((gam[1][2][2] - a2 * h).abs() < 1e-13);
        assert!((gam[2][1][2] - h).abs() < 1e-13);
    }

    #[test]
    fn de_sitter_ricci_is_minus_three_h_squared_times_metric() {
        let h = 1.0;
        let g = de_sitter_5d(h);
        let p = ChartPoint5::new([0.2, 0.5, -0.3, 0.2, 0.1]);
        let ric = ricci(&g, &p).unwrap();
        let vals = g.values(&p);
        for a in 1..5 {
            for b in 1..5 {
                assert!((ric[a][b] + 3.0 * h * h * vals[a][b]).abs() < 1e-10);
            }
        }
        for b in 0..5 {
            assert_eq!(ric[0][b], 0.0);
        }
        assert!((ricci_scalar(&g, &p).unwrap() + 12.0).abs() < 1e-10);
    }

    #[test]
    fn flat_dalembertian_signs() {
        let eta = MetricField4::minkowski();
        let p = ChartPoint4::new([0.3, 0.7, 0.0, 0.0]);
        let t2 = ScalarField::coordinate(1) * ScalarField::coordinate(1);
        let x2 = ScalarField::coordinate(2) * ScalarField::coordinate(2);
        assert_eq!(dalembert4(&eta, &t2, &p).unwrap(), 2.0);
        assert_eq!(dalembert4(&eta, &x2, &p).unwrap(), -2.0);
    }
}
