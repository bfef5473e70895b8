//! The five-dimensional metric ansatz, principal function, stress tensor,
//! four-dimensional backgrounds and exemplary configurations.

mod dwell;
mod spec;

pub use dwell::{dwell_density, DwellHistogram};
pub use spec::{
    AnsatzSpec, BackgroundSpec, Bump, GammaSpec, Harmonic, Mode, PeriodicProfile, PhaseSpec, RhoSpec,
};

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::reduction::identify::{identify_mass, identify_phase};
use crate::tensor::curvature::background_geometry;
use crate::tensor::{ChartPoint4, ChartPoint5, Jet5, MetricField4, MetricField5, ScalarField, StressField, SymField4};

/// Tolerance on `ĝ^{μν} γ_{μν}`.
pub const TRACE_TOLERANCE: f64 = 1e-12;
/// Tolerance on the period means of `ω̄` and `B`.
pub const MEAN_TOLERANCE: f64 = 1e-10;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidAnsatz(msg.into())
}

fn periodic_field(profile: &PeriodicProfile, period: f64) -> ScalarField {
    let profile = profile.clone();
    ScalarField::new(move |x| {
        let mut f = Jet5::constant(profile.constant);
        for h in &profile.harmonics {
            let arg = x[0] * (TAU * h.n as f64 / period);
            if h.cos != 0.0 {
                f += arg.cos() * h.cos;
            }
            if h.sin != 0.0 {
                f += arg.sin() * h.sin;
            }
        }
        f
    })
}

fn dot4(k: &[f64; 4], x: &[Jet5; 5]) -> Jet5 {
    (0..4).map(|m| x[m + 1] * k[m]).sum()
}

fn mode_sum(modes: &[Mode], x: &[Jet5; 5]) -> Jet5 {
    modes
        .iter()
        .map(|m| (dot4(&m.wavevector, x) + m.phase).sin() * m.amplitude)
        .sum()
}

fn rho_field(spec: &RhoSpec) -> Result<ScalarField> {
    Ok(match spec.clone() {
        RhoSpec::Constant { value } => {
            if !(value > 0.0) {
                return Err(invalid(format!("rho = {value} must be positive")));
            }
            ScalarField::constant(value)
        }
        RhoSpec::Quadratic { base, coeffs } => {
            if !(base > 0.0) || coeffs.iter().any(|c| !(*c >= 0.0)) {
                return Err(invalid("quadratic rho needs base > 0 and non-negative coefficients"));
            }
            ScalarField::new(move |x| {
                let mut f = Jet5::constant(base);
                for m in 0..4 {
                    if coeffs[m] != 0.0 {
                        f += x[m + 1].square() * coeffs[m];
                    }
                }
                f
            })
        }
        RhoSpec::Cosine { base, amplitude, wavevector, phase } => {
            if !(base - amplitude.abs() > 0.0) {
                return Err(invalid("cosine rho needs base > |amplitude|"));
            }
            ScalarField::new(move |x| (dot4(&wavevector, x) + phase).cos() * amplitude + base)
        }
        RhoSpec::Smooth { scale, modes } => {
            if !(scale > 0.0) {
                return Err(invalid("smooth rho needs a positive scale"));
            }
            ScalarField::new(move |x| mode_sum(&modes, x).exp() * scale)
        }
    })
}

fn phase_field(spec: &PhaseSpec) -> ScalarField {
    match spec.clone() {
        PhaseSpec::Linear { p } => ScalarField::new(move |x| dot4(&p, x)),
        PhaseSpec::Smooth { p, modes } => ScalarField::new(move |x| dot4(&p, x) + mode_sum(&modes, x)),
    }
}

fn gamma_raw(spec: &GammaSpec, period: f64) -> Result<SymField4> {
    let bumps = match spec {
        GammaSpec::None => return Ok(SymField4::zero()),
        GammaSpec::Bumps { bumps } => bumps.clone(),
    };
    for b in &bumps {
        if b.component.iter().any(|&i| i > 3) {
            return Err(invalid(format!("gamma component {:?} out of range", b.component)));
        }
        if !(b.width > 0.0) || b.harmonic == 0 {
            return Err(invalid("gamma bumps need positive width and harmonic >= 1"));
        }
    }
    Ok(SymField4::new(move |x| {
        let mut m = [[Jet5::constant(0.0); 4]; 4];
        for b in &bumps {
            let r2: Jet5 = (0..4).map(|k| (x[k + 1] - b.center[k]).square()).sum();
            let envelope = (r2 * (-0.5 / (b.width * b.width))).exp();
            let osc = (x[0] * (TAU * b.harmonic as f64 / period)).sin();
            let (i, j) = (b.component[0].min(b.component[1]), b.component[0].max(b.component[1]));
            m[i][j] += osc * envelope * b.amplitude;
        }
        m
    }))
}

/// Inverse of a 4×4 matrix of jets by Gauss–Jordan elimination with
/// partial pivoting on the values.
fn invert_jets(m: &[[Jet5; 4]; 4]) -> [[Jet5; 4]; 4] {
    let mut a = *m;
    let mut inv: [[Jet5; 4]; 4] =
        std::array::from_fn(|i| std::array::from_fn(|j| Jet5::constant(if i == j { 1.0 } else { 0.0 })));
    for k in 0..4 {
        let p = (k..4)
            .max_by(|&i, &j| a[i][k].v.abs().total_cmp(&a[j][k].v.abs()))
            .unwrap_or(k);
        a.swap(p, k);
        inv.swap(p, k);
        let d = a[k][k].recip();
        for j in 0..4 {
            a[k][j] = a[k][j] * d;
            inv[k][j] = inv[k][j] * d;
        }
        for i in 0..4 {
            if i != k {
                let f = a[i][k];
                for j in 0..4 {
                    a[i][j] = a[i][j] - f * a[k][j];
                    inv[i][j] = inv[i][j] - f * inv[k][j];
                }
            }
        }
    }
    inv
}

fn trace_jets(ginv: &[[Jet5; 4]; 4], t: &[[Jet5; 4]; 4]) -> Jet5 {
    let mut s = Jet5::constant(0.0);
    for a in 0..4 {
        for b in 0..4 {
            s += ginv[a][b] * t[a][b];
        }
    }
    s
}

/// `γ − (ĝ^{αβ}γ_{αβ}/4) ĝ`, traceless with respect to `ĝ` with exact
/// derivatives.
pub fn traceless_project(raw: &SymField4, ghat: &MetricField4) -> SymField4 {
    let (raw, ghat) = (raw.clone(), ghat.clone());
    SymField4::new(move |x| {
        let r = raw.eval(x);
        let g = ghat.eval(x);
        let tr = trace_jets(&invert_jets(&g), &r) * 0.25;
        std::array::from_fn(|a| std::array::from_fn(|b| r[a][b] - tr * g[a][b]))
    })
}

/// `ĝ^{μν} T_{μν}` at a point.
pub fn trace_against(t: &SymField4, ghat: &SymField4, p: &ChartPoint5) -> Result<f64> {
    let ginv = crate::tensor::invert_metric(&ghat.values(p))?;
    let v = t.values(p);
    let mut s = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            s += ginv[a][b] * v[a][b];
        }
    }
    Ok(s)
}

/// Recorded properties of a constructed background.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackgroundFacts {
    pub kind: String,
    /// Hubble rate of the de Sitter chart.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hubble: Option<f64>,
    /// `R̂` measured by the curvature engine at the chart origin.
    pub ricci_scalar: f64,
    /// Null-wave profile coefficient `c` in `H = c (x² + y²)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wave_coefficient: Option<f64>,
}

/// `diag(1, −e^{2Ht}, −e^{2Ht}, −e^{2Ht})`.
pub fn de_sitter(h: f64) -> MetricField4 {
    MetricField4::new(move |x| {
        let mut m = [[Jet5::constant(0.0); 4]; 4];
        m[0][0] = Jet5::constant(1.0);
        let a2 = -(x[1] * (2.0 * h)).exp();
        for i in 1..4 {
            m[i][i] = a2;
        }
        m
    })
}

/// `η − c (x² + y²) k⊗k` with `k = dt − dz`.
pub fn null_wave(c: f64) -> MetricField4 {
    MetricField4::new(move |x| {
        let hh = (x[2].square() + x[3].square()) * c;
        let mut m = [[Jet5::constant(0.0); 4]; 4];
        m[0][0] = 1.0 - hh;
        m[0][3] = hh;
        m[1][1] = Jet5::constant(-1.0);
        m[2][2] = Jet5::constant(-1.0);
        m[3][3] = -hh - 1.0;
        m
    })
}

/// Builds `ĝ` and records its curvature facts.
///
/// De Sitter without an explicit Hubble rate is matched to `R̂ = Λ`; under
/// the fixed curvature convention `R̂ = −12H²`, so this needs `Λ < 0`.
pub fn build_background(kind: &BackgroundSpec, lambda: f64, g_d: f64) -> Result<(MetricField4, BackgroundFacts)> {
    let (metric, name, hubble, wave) = match *kind {
        BackgroundSpec::Minkowski => (MetricField4::minkowski(), "minkowski", None, None),
        BackgroundSpec::DeSitter { hubble } => {
            let h = match hubble {
                Some(h) => h,
                None => {
                    if !(lambda < 0.0) {
                        return Err(Error::SignMismatch(format!(
                            "de Sitter has R = -12 H^2 under the implemented curvature convention; \
                             Lambda = {lambda} cannot be matched"
                        )));
                    }
                    (-lambda / 12.0).sqrt()
                }
            };
            (de_sitter(h), "de_sitter", Some(h), None)
        }
        BackgroundSpec::NullWave { p0 } => {
            let c = -0.5 * g_d * p0 * p0;
            (null_wave(c), "null_wave", None, Some(c))
        }
    };
    let origin = ChartPoint4::new([0.0; 4]);
    let ricci_scalar = background_geometry(&metric, &origin)?.ricci_scalar();
    Ok((
        metric,
        BackgroundFacts {
            kind: name.to_string(),
            hubble,
            ricci_scalar,
            wave_coefficient: wave,
        },
    ))
}

/// All constants and profile fields of one ansatz instance.
#[derive(Debug, Clone)]
pub struct AnsatzParams {
    pub spec: AnsatzSpec,
    pub omega_bar: ScalarField,
    pub b: ScalarField,
    /// Traceless perturbation `γ_{μν}`.
    pub gamma: SymField4,
    pub background: MetricField4,
    pub facts: BackgroundFacts,
    pub rho: ScalarField,
    pub s_tilde: ScalarField,
}

impl AnsatzParams {
    pub fn from_spec(spec: &AnsatzSpec) -> Result<Self> {
        let s = spec;
        if !(s.alpha0 > 0.0) {
            return Err(invalid("alpha0 must be positive"));
        }
        if [s.eps0, s.eps1, s.eps2].iter().any(|e| !(*e >= 0.0 && e.is_finite())) {
            return Err(invalid("perturbation scales must be finite and non-negative"));
        }
        if !(s.g_d > 0.0) || !(s.hbar > 0.0) || !(s.period > 0.0) {
            return Err(invalid("G_D, hbar and the period must be positive"));
        }
        if !s.lambda.is_finite() {
            return Err(invalid("Lambda must be finite"));
        }
        let omega_bar = periodic_field(&s.omega_bar, s.period);
        let b = periodic_field(&s.b, s.period);
        for (name, f) in [("omega_bar", &omega_bar), ("B", &b)] {
            let mean = quadrature::period_average(|t| Ok(f.value_at(&[t, 0.0, 0.0, 0.0, 0.0])), s.period)?;
            if mean.abs() > MEAN_TOLERANCE {
                return Err(invalid(format!("{name} has period mean {mean:e}, expected zero")));
            }
        }
        let (background, facts) = build_background(&s.background, s.lambda, s.g_d)?;
        let gamma = traceless_project(&gamma_raw(&s.gamma, s.period)?, &background);
        Ok(AnsatzParams {
            spec: s.clone(),
            omega_bar,
            b,
            gamma,
            background,
            facts,
            rho: rho_field(&s.rho)?,
            s_tilde: phase_field(&s.s_tilde),
        })
    }

    /// `ᾱ = α₀ + ε₀ ω̄`.
    pub fn alpha(&self) -> ScalarField {
        let (a0, e0) = (self.spec.alpha0, self.spec.eps0);
        self.omega_bar.map(move |w| w * e0 + a0)
    }

    /// `(ᾱ, ∂₀ᾱ)` at `t̄`.
    pub fn alpha_at(&self, tbar: f64) -> (f64, f64) {
        let j = self.alpha().jet(&ChartPoint5::new([tbar, 0.0, 0.0, 0.0, 0.0]));
        (j.v, j.g[0])
    }

    /// `β = ∂₀B` at `t̄`.
    pub fn beta_at(&self, tbar: f64) -> f64 {
        self.b.jet(&ChartPoint5::new([tbar, 0.0, 0.0, 0.0, 0.0])).g[0]
    }

    pub fn sqrt_rho(&self) -> ScalarField {
        self.rho.map(|r| r.sqrt())
    }

    /// `g_{μν}(t̄) = ĝ_{μν} + ε₂² γ_{μν}`.
    pub fn block_metric(&self) -> SymField4 {
        let (g, gamma, e2) = (self.background.clone(), self.gamma.clone(), self.spec.eps2);
        let e22 = e2 * e2;
        SymField4::new(move |x| {
            let a = g.eval(x);
            if e22 == 0.0 {
                return a;
            }
            let c = gamma.eval(x);
            std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + c[i][j] * e22))
        })
    }

    pub fn field_config(&self) -> FieldConfig {
        FieldConfig {
            rho: self.rho.clone(),
            s_tilde: self.s_tilde.clone(),
            g_d: self.spec.g_d,
            hbar: self.spec.hbar,
            lambda: self.spec.lambda,
        }
    }

    /// Point-level invariants: `ρ > 0`, traceless `γ`, and the 5D signature.
    pub fn check_point(&self, p: &ChartPoint5) -> Result<()> {
        let r = self.rho.value(p);
        if !(r > 0.0) {
            return Err(invalid(format!("rho = {r:e} is not positive at {:?}", p.coords)));
        }
        let tr = trace_against(&self.gamma, self.background.as_sym(), p)?;
        if tr.abs() > TRACE_TOLERANCE {
            return Err(invalid(format!("gamma trace {tr:e} at {:?}", p.coords)));
        }
        build_metric(self).check_signature(p)
    }
}

/// `g₀₀ = ᾱ²ρ`, `g₀μ = 0`, `g_{μν} = ĝ_{μν} + ε₂² γ_{μν}`.
pub fn build_metric(params: &AnsatzParams) -> MetricField5 {
    let alpha = params.alpha();
    let lapse = alpha.clone() * alpha * params.rho.clone();
    MetricField5::block(lapse, params.block_metric())
}

/// `S_H = ε₁ √ρ B(t̄) + S̃`.
pub fn build_principal(params: &AnsatzParams) -> ScalarField {
    let e1 = params.spec.eps1;
    if e1 == 0.0 {
        return params.s_tilde.clone();
    }
    (params.sqrt_rho() * params.b.clone()).scale(e1) + params.s_tilde.clone()
}

pub fn build_stress(params: &AnsatzParams, g: &MetricField5) -> StressField {
    StressField::new(g.clone(), build_principal(params))
}

/// Four-dimensional field content `(ρ, S̃)` with its quantum identifications.
#[derive(Debug, Clone)]
pub struct FieldConfig {
    pub rho: ScalarField,
    pub s_tilde: ScalarField,
    pub g_d: f64,
    pub hbar: f64,
    pub lambda: f64,
}

impl FieldConfig {
    /// `S_Q = ħ √(G_D/3) S̃`.
    pub fn s_q(&self) -> ScalarField {
        let (g, h) = (self.g_d, self.hbar);
        self.s_tilde.map(move |s| s.scale(identify_phase(1.0, g, h)))
    }

    /// `m = ħ √(Λ/3)`.
    pub fn mass(&self) -> Result<f64> {
        identify_mass(self.lambda, self.hbar)
    }
}

/// `ρ = 1`, `S̃ = p₀ t` with `p₀ = √(Λ/G_D)`.
pub fn plane_wave_config(lambda: f64, g_d: f64, hbar: f64) -> Result<FieldConfig> {
    let ratio = lambda / g_d;
    if !(ratio >= 0.0) {
        return Err(Error::InvalidMassShell { ratio });
    }
    let p0 = ratio.sqrt();
    Ok(FieldConfig {
        rho: ScalarField::constant(1.0),
        s_tilde: ScalarField::coordinate(1).scale(p0),
        g_d,
        hbar,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::max_derivative_discrepancy;

    fn point(c: [f64; 5]) -> ChartPoint5 {
        ChartPoint5::new(c)
    }

    #[test]
    fn flat_spec_builds_signature_metric() {
        let params = AnsatzParams::from_spec(&AnsatzSpec::flat()).unwrap();
        let g = build_metric(&params).values(&point([0.3, 0.1, -0.2, 0.5, 0.9]));
        let flat = MetricField5::flat().values(&point([0.0; 5]));
        assert_eq!(g, flat);
    }

    #[test]
    fn quadratic_rho_enters_lapse() {
        let spec = AnsatzSpec {
            rho: RhoSpec::Quadratic { base: 1.0, coeffs: [0.0, 1.0, 0.0, 0.0] },
            ..AnsatzSpec::flat()
        };
        let params = AnsatzParams::from_spec(&spec).unwrap();
        let g = build_metric(&params).values(&point([0.0, 0.0, 1.0, 0.0, 0.0]));
        assert_eq!(g[0][0], 2.0);
        assert!((1..5).all(|m| g[0][m] == 0.0));
    }

    #[test]
    fn gamma_perturbation_scales_with_eps_squared() {
        let spec = AnsatzSpec { eps2: 0.1, ..AnsatzSpec::flat() };
        let params = AnsatzParams::from_spec(&spec).unwrap();
        let p = point([0.13, 0.2, 0.1, -0.3, 0.4]);
        let g = build_metric(&params).values(&p);
        let gamma = params.gamma.values(&p);
        assert!((g[1][2] - 0.01 * gamma[0][1]).abs() < 1e-15);
        let g12 = build_metric(&params).component(1, 2);
        assert!(max_derivative_discrepancy(&g12, &p, 1e-3) < 1e-5);
    }

    #[test]
    fn constant_offset_in_profile_is_rejected() {
        let spec = AnsatzSpec {
            b: PeriodicProfile { constant: 0.1, harmonics: vec![] },
            ..AnsatzSpec::flat()
        };
        assert!(matches!(AnsatzParams::from_spec(&spec), Err(Error::InvalidAnsatz(_))));
    }

    #[test]
    fn nonpositive_rho_is_rejected() {
        let spec = AnsatzSpec { rho: RhoSpec::Constant { value: 0.0 }, ..AnsatzSpec::flat() };
        assert!(matches!(AnsatzParams::from_spec(&spec), Err(Error::InvalidAnsatz(_))));
    }

    #[test]
    fn principal_function_derivatives() {
        let spec = AnsatzSpec {
            s_tilde: PhaseSpec::Linear { p: [3.0, 0.0, 0.0, 0.0] },
            ..AnsatzSpec::flat()
        };
        let params = AnsatzParams::from_spec(&spec).unwrap();
        let j = build_principal(&params).jet(&point([0.2, 1.5, 0.0, 0.0, 0.0]));
        assert_eq!(j.v, 4.5);
        assert_eq!(j.g[0], 0.0);

        let spec = AnsatzSpec {
            eps1: 0.1,
            rho: RhoSpec::Constant { value: 4.0 },
            b: PeriodicProfile::sine(),
            ..AnsatzSpec::flat()
        };
        let params = AnsatzParams::from_spec(&spec).unwrap();
        let j = build_principal(&params).jet(&point([0.0; 5]));
        assert!((j.g[0] - 0.1 * 2.0 * TAU).abs() < 1e-14);
    }

    #[test]
    fn projection_removes_pure_trace_and_is_idempotent() {
        let eta = MetricField4::minkowski();
        let p = point([0.0, 0.3, 0.2, 0.1, 0.0]);
        let pure = traceless_project(eta.as_sym(), &eta);
        assert!(pure.values(&p).iter().flatten().all(|x| x.abs() < 1e-15));

        let ds = de_sitter(0.5);
        let raw = gamma_raw(&GammaSpec::default_bumps(), 1.0).unwrap();
        let once = traceless_project(&raw, &ds);
        let twice = traceless_project(&once, &ds);
        let q = point([0.17, 0.4, -0.2, 0.3, 0.1]);
        assert!(trace_against(&once, ds.as_sym(), &q).unwrap().abs() < 1e-12);
        for (a, b) in once.values(&q).iter().flatten().zip(twice.values(&q).iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn de_sitter_background_matches_lambda() {
        let (_, facts) = build_background(&BackgroundSpec::DeSitter { hubble: None }, -12.0, 1.0).unwrap();
        assert_eq!(facts.hubble, Some(1.0));
        assert!((facts.ricci_scalar + 12.0).abs() < 1e-8);
        let err = build_background(&BackgroundSpec::DeSitter { hubble: None }, 12.0, 1.0);
        assert!(matches!(err, Err(Error::SignMismatch(_))));
    }

    #[test]
    fn plane_wave_configurations() {
        let c = plane_wave_config(3.0, 1.0, 1.0).unwrap();
        let j = c.s_tilde.jet4(&ChartPoint4::new([1.0, 0.0, 0.0, 0.0]));
        assert!((j.g[1] - 3f64.sqrt()).abs() < 1e-15);
        let vac = plane_wave_config(0.0, 1.0, 1.0).unwrap();
        assert_eq!(vac.s_tilde.value_at(&[0.0, 5.0, 1.0, 2.0, 3.0]), 0.0);
        assert!(matches!(plane_wave_config(-1.0, 1.0, 1.0), Err(Error::InvalidMassShell { .. })));
    }

    #[test]
    fn phase_identification_ratio() {
        let spec = AnsatzSpec {
            g_d: 12.0,
            hbar: 2.0,
            s_tilde: PhaseSpec::Linear { p: [1.0, 2.0, 0.0, 0.0] },
            ..AnsatzSpec::flat()
        };
        let cfg = AnsatzParams::from_spec(&spec).unwrap().field_config();
        let x = [0.0, 0.7, 0.3, 0.0, 0.0];
        assert!((cfg.s_q().value_at(&x) / cfg.s_tilde.value_at(&x) - 4.0).abs() < 1e-15);
    }
}
