//! Fields of one ansatz instance, built once, plus per-point slice data.

use crate::ansatz::{build_metric, build_principal, AnsatzParams, AnsatzSpec};
use crate::error::Result;
use crate::tensor::curvature::{geometry4, LocalGeometry};
use crate::tensor::linalg::{invert_metric, matmul, Mat};
use crate::tensor::{ChartPoint4, ChartPoint5, Jet5, MetricField5, ScalarField, StressField, SymField4};

/// The metric, principal function and stress tensor of an ansatz instance.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: AnsatzParams,
    pub metric: MetricField5,
    pub stress: StressField,
    pub block: SymField4,
    pub alpha: ScalarField,
    pub sqrt_rho: ScalarField,
}

impl Model {
    pub fn new(params: AnsatzParams) -> Self {
        let metric = build_metric(&params);
        let stress = StressField::new(metric.clone(), build_principal(&params));
        Model {
            block: params.block_metric(),
            alpha: params.alpha(),
            sqrt_rho: params.sqrt_rho(),
            metric,
            stress,
            params,
        }
    }

    pub fn from_spec(spec: &AnsatzSpec) -> Result<Self> {
        Ok(Model::new(AnsatzParams::from_spec(spec)?))
    }

    pub fn g_d(&self) -> f64 {
        self.params.spec.g_d
    }

    pub fn lambda(&self) -> f64 {
        self.params.spec.lambda
    }

    pub fn period(&self) -> f64 {
        self.params.spec.period
    }

    pub fn slice(&self, p: &ChartPoint5) -> Result<Slice> {
        Slice::new(self, p)
    }

    pub fn slice_at(&self, tbar: f64, p4: &ChartPoint4) -> Result<Slice> {
        Slice::new(self, &p4.at_tbar(tbar))
    }
}

/// Everything the component equations need at one point `(t̄, x)`:
/// the four-block `g_{μν}(t̄)` with its `t̄` and spacetime derivatives.
#[derive(Debug, Clone)]
pub struct Slice {
    pub alpha: f64,
    pub alpha_dot: f64,
    pub beta: f64,
    pub rho: Jet5,
    pub sqrt_rho: Jet5,
    pub principal: Jet5,
    pub g: Mat<4>,
    pub gi: Mat<4>,
    /// `ġ_{μν}`
    pub gd: Mat<4>,
    /// `g̈_{μν}`
    pub gdd: Mat<4>,
    /// `dg[λ] = ∂_λ g_{μν}`
    pub dg: [Mat<4>; 4],
    /// `dgd[λ] = ∂_λ ġ_{μν}`
    pub dgd: [Mat<4>; 4],
    /// Geometry of `g_{μν}(t̄)` at fixed `t̄`.
    pub geo: LocalGeometry<4>,
}

fn neg_sandwich(gi: &Mat<4>, m: &Mat<4>) -> Mat<4> {
    matmul(&matmul(gi, m), gi).map(|r| r.map(|v| -v))
}

fn contract(a: &Mat<4>, b: &Mat<4>) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            s += a[i][j] * b[i][j];
        }
    }
    s
}

impl Slice {
    fn new(model: &Model, p: &ChartPoint5) -> Result<Self> {
        let jets = model.block.jets(p);
        let geo = geometry4(&model.block, p)?;
        let g = geo.g;
        let gi = invert_metric(&g)?;
        let comp = |f: &dyn Fn(&Jet5) -> f64| -> Mat<4> { jets.map(|r| r.map(|j| f(&j))) };
        let gd = comp(&|j| j.g[0]);
        let gdd = comp(&|j| j.h[0][0]);
        let dg = std::array::from_fn(|l| comp(&|j| j.g[l + 1]));
        let dgd = std::array::from_fn(|l| comp(&|j| j.h[l + 1][0]));
        let a = model.alpha.jet(p);
        let rho = model.params.rho.jet(p);
        Ok(Slice {
            alpha: a.v,
            alpha_dot: a.g[0],
            beta: model.params.b.jet(p).g[0],
            sqrt_rho: rho.sqrt(),
            rho,
            principal: model.stress.principal().jet(p),
            g,
            gi,
            gd,
            gdd,
            dg,
            dgd,
            geo,
        })
    }

    /// `g^{μν} ġ_{μν}`
    pub fn tr_gd(&self) -> f64 {
        contract(&self.gi, &self.gd)
    }

    /// `∂₀ g^{μν}`
    pub fn gi_dot(&self) -> Mat<4> {
        neg_sandwich(&self.gi, &self.gd)
    }

    /// `∂₀(g^{μν} ġ_{μν})`
    pub fn tr_gd_dot(&self) -> f64 {
        contract(&self.gi_dot(), &self.gd) + contract(&self.gi, &self.gdd)
    }

    /// `∂_λ(g^{μν} ġ_{μν})`
    pub fn tr_gd_grad(&self) -> [f64; 4] {
        std::array::from_fn(|l| contract(&neg_sandwich(&self.gi, &self.dg[l]), &self.gd) + contract(&self.gi, &self.dgd[l]))
    }

    /// `g^{μβ} g^{λσ} ġ_{λβ} ġ_{μσ}`
    pub fn gd_squared(&self) -> f64 {
        let m = matmul(&self.gi, &self.gd);
        (0..4).map(|i| (0..4).map(|j| m[i][j] * m[j][i]).sum::<f64>()).sum()
    }

    /// `P_{μν} = (ġ_{μν} − g_{μν} g^{αβ}ġ_{αβ})/2`
    pub fn p_tensor(&self) -> Mat<4> {
        let tr = self.tr_gd();
        std::array::from_fn(|a| std::array::from_fn(|b| 0.5 * (self.gd[a][b] - self.g[a][b] * tr)))
    }

    /// `(P^{αβ}P_{αβ}, P^α_α)`
    pub fn p_invariants(&self) -> (f64, f64) {
        let p = self.p_tensor();
        let pu = matmul(&matmul(&self.gi, &p), &self.gi);
        (contract(&pu, &p), contract(&self.gi, &p))
    }

    /// Spacetime gradient and Hessian of a jet.
    pub fn split(j: &Jet5) -> ([f64; 4], Mat<4>) {
        crate::tensor::curvature::spacetime_derivatives(j)
    }

    /// `□√ρ` with respect to `g_{μν}(t̄)`.
    pub fn box_sqrt_rho(&self) -> f64 {
        let (d, h) = Self::split(&self.sqrt_rho);
        self.geo.laplacian(&d, &h)
    }

    /// `(√ρ)_{;δ;β}`
    pub fn hess_sqrt_rho(&self) -> Mat<4> {
        let (d, h) = Self::split(&self.sqrt_rho);
        self.geo.covariant_hessian(&d, &h)
    }

    /// `∂₀ S_H`
    pub fn s0(&self) -> f64 {
        self.principal.g[0]
    }

    /// `∂_μ S_H`
    pub fn s4(&self) -> [f64; 4] {
        Self::split(&self.principal).0
    }

    /// `g_{00} = ᾱ² ρ`
    pub fn g00(&self) -> f64 {
        self.alpha * self.alpha * self.rho.v
    }

    /// `T^A_A = g^{00} (∂₀S)² + g^{μν} ∂_μS ∂_νS`
    pub fn stress_trace(&self) -> f64 {
        self.s0() * self.s0() / self.g00() + self.geo.norm_squared(&self.s4())
    }
}
