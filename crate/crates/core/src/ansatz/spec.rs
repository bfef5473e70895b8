//! Serializable description of an ansatz: constants and closed-form profiles.

use serde::{Deserialize, Serialize};

fn one() -> f64 {
    1.0
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// One Fourier term `cos·cos(2πn t̄/T̄) + sin·sin(2πn t̄/T̄)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Harmonic {
    pub n: u32,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub cos: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub sin: f64,
}

/// Profile of `t̄` alone, periodic with the compact period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicProfile {
    #[serde(default, skip_serializing_if = "is_zero")]
    pub constant: f64,
    #[serde(default)]
    pub harmonics: Vec<Harmonic>,
}

impl PeriodicProfile {
    pub fn sine() -> Self {
        PeriodicProfile {
            constant: 0.0,
            harmonics: vec![Harmonic { n: 1, cos: 0.0, sin: 1.0 }],
        }
    }

    pub fn cosine() -> Self {
        PeriodicProfile {
            constant: 0.0,
            harmonics: vec![Harmonic { n: 1, cos: 1.0, sin: 0.0 }],
        }
    }

    pub fn zero() -> Self {
        PeriodicProfile {
            constant: 0.0,
            harmonics: Vec::new(),
        }
    }
}

/// `amplitude · sin(k·x + phase)` over `(t, x, y, z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub amplitude: f64,
    pub wavevector: [f64; 4],
    #[serde(default, skip_serializing_if = "is_zero")]
    pub phase: f64,
}

/// Density `ρ(t, x⃗)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RhoSpec {
    Constant { value: f64 },
    /// `base + Σ coeffs[μ] (x^μ)²`
    Quadratic { base: f64, coeffs: [f64; 4] },
    /// `base + amplitude · cos(k·x + phase)`
    Cosine {
        base: f64,
        amplitude: f64,
        wavevector: [f64; 4],
        #[serde(default)]
        phase: f64,
    },
    /// `scale · exp(Σ modes)`
    Smooth {
        #[serde(default = "one")]
        scale: f64,
        modes: Vec<Mode>,
    },
}

impl Default for RhoSpec {
    fn default() -> Self {
        RhoSpec::Constant { value: 1.0 }
    }
}

/// Four-dimensional principal function `S̃(t, x⃗)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseSpec {
    /// `p_μ x^μ`
    Linear { p: [f64; 4] },
    /// `p_μ x^μ + Σ modes`
    Smooth {
        #[serde(default)]
        p: [f64; 4],
        modes: Vec<Mode>,
    },
}

impl Default for PhaseSpec {
    fn default() -> Self {
        PhaseSpec::Linear { p: [0.0; 4] }
    }
}

/// Gaussian bump in `γ_{μν}` modulated by a `t̄` harmonic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub component: [usize; 2],
    pub amplitude: f64,
    #[serde(default)]
    pub center: [f64; 4],
    #[serde(default = "one")]
    pub width: f64,
    #[serde(default = "default_harmonic")]
    pub harmonic: u32,
}

fn default_harmonic() -> u32 {
    1
}

/// Raw `t̄`-dependent metric perturbation, traceless-projected on build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaSpec {
    None,
    Bumps { bumps: Vec<Bump> },
}

impl GammaSpec {
    pub fn default_bumps() -> Self {
        let bump = |component, amplitude, center, width| Bump {
            component,
            amplitude,
            center,
            width,
            harmonic: 1,
        };
        GammaSpec::Bumps {
            bumps: vec![
                bump([0, 1], 1.0, [0.0, 0.0, 0.0, 0.0], 1.0),
                bump([1, 1], 0.8, [0.2, -0.3, 0.1, 0.0], 1.2),
                bump([1, 2], 0.5, [0.0, 0.4, -0.2, 0.3], 0.9),
                bump([2, 3], -0.6, [-0.1, 0.0, 0.3, -0.4], 1.1),
                bump([3, 3], 0.4, [0.3, 0.2, 0.0, 0.1], 1.0),
            ],
        }
    }
}

impl Default for GammaSpec {
    fn default() -> Self {
        GammaSpec::default_bumps()
    }
}

/// `t̄`-independent four-dimensional background `ĝ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BackgroundSpec {
    Minkowski,
    /// Flat-slicing de Sitter. Without `hubble`, `H` is fixed by `R̂ = Λ`.
    DeSitter {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hubble: Option<f64>,
    },
    /// Plane-fronted null wave `η − H k⊗k`, `k = dt − dz`, with the profile
    /// chosen so that `R̂_{μν} = G_D p_μ p_ν` for `p = p0 k`.
    NullWave { p0: f64 },
}

impl Default for BackgroundSpec {
    fn default() -> Self {
        BackgroundSpec::Minkowski
    }
}

/// Every constant and profile of the metric and principal-function ansatz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzSpec {
    #[serde(default = "one")]
    pub alpha0: f64,
    #[serde(default)]
    pub eps0: f64,
    #[serde(default)]
    pub eps1: f64,
    #[serde(default)]
    pub eps2: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub g_d: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub period: f64,
    #[serde(default = "PeriodicProfile::sine")]
    pub omega_bar: PeriodicProfile,
    #[serde(default = "PeriodicProfile::cosine")]
    pub b: PeriodicProfile,
    #[serde(default)]
    pub gamma: GammaSpec,
    #[serde(default)]
    pub background: BackgroundSpec,
    #[serde(default)]
    pub rho: RhoSpec,
    #[serde(default)]
    pub s_tilde: PhaseSpec,
}

impl Default for AnsatzSpec {
    fn default() -> Self {
        AnsatzSpec {
            alpha0: 1.0,
            eps0: 0.0,
            eps1: 0.0,
            eps2: 0.0,
            lambda: 0.0,
            g_d: 1.0,
            hbar: 1.0,
            period: 1.0,
            omega_bar: PeriodicProfile::sine(),
            b: PeriodicProfile::cosine(),
            gamma: GammaSpec::default(),
            background: BackgroundSpec::Minkowski,
            rho: RhoSpec::default(),
            s_tilde: PhaseSpec::default(),
        }
    }
}

impl AnsatzSpec {
    /// Flat sector: all ε = 0, ρ = 1, S̃ = 0, Λ = 0 on Minkowski.
    pub fn flat() -> Self {
        AnsatzSpec::default()
    }

    /// Null-wave exemplary solution: ρ = 1, `S̃ = p0 (t − z)`, Λ = 0, so
    /// `p^μ p_μ = Λ/G_D = 0` and `R̂_{μν} = G_D p_μ p_ν` hold exactly.
    pub fn null_wave_exemplary(p0: f64, g_d: f64) -> Self {
        AnsatzSpec {
            g_d,
            gamma: GammaSpec::None,
            background: BackgroundSpec::NullWave { p0 },
            s_tilde: PhaseSpec::Linear { p: [p0, 0.0, 0.0, -p0] },
            ..AnsatzSpec::default()
        }
    }

    /// Smooth generic configuration with all three perturbations switched on
    /// at a common scale `eps`.
    pub fn generic(eps: f64) -> Self {
        AnsatzSpec {
            alpha0: 1.1,
            eps0: eps,
            eps1: eps,
            eps2: eps,
            lambda: 0.7,
            g_d: 1.3,
            rho: RhoSpec::Smooth {
                scale: 1.0,
                modes: vec![
                    Mode { amplitude: 0.3, wavevector: [0.5, 1.0, 0.0, 0.0], phase: 0.2 },
                    Mode { amplitude: 0.2, wavevector: [0.0, 0.0, 0.8, -0.6], phase: -0.4 },
                ],
            },
            s_tilde: PhaseSpec::Smooth {
                p: [0.7, 0.1, 0.0, -0.2],
                modes: vec![
                    Mode { amplitude: 0.3, wavevector: [0.3, 0.6, -0.4, 0.0], phase: 0.5 },
                    Mode { amplitude: 0.1, wavevector: [0.0, 0.0, 0.5, 1.0], phase: 0.0 },
                ],
            },
            ..AnsatzSpec::default()
        }
    }

    /// Applies a common perturbation scale to ε₀, ε₁, ε₂.
    pub fn with_eps(&self, eps: f64) -> Self {
        AnsatzSpec {
            eps0: eps,
            eps1: eps,
            eps2: eps,
            ..self.clone()
        }
    }
}
