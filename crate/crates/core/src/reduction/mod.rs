//! Reduction of the five-dimensional field equations to the Klein–Gordon
//! pair, and the consistency checks around it.

pub mod components;
pub mod consistency;
pub mod continuity;
pub mod identify;
pub mod model;
pub mod trace;

pub use components::{
    component_residuals, crosscheck_components, direct_component_form, residual_00, residual_0delta,
    residual_deltabeta,
};
pub use consistency::{
    delta_surrogate, fit_ricci_samples, loong3b, loong3b_residual, momentum_conservation,
    momentum_conservation_residual, momentum_expansion, ricci_decomposition_fit, ClassicalLimit, Loong3b,
    MomentumCheck, RicciDecomposition,
};
pub use continuity::*;
pub use identify::{cond00, identify_mass, identify_mass_general, identify_phase, mass_squared_general};
pub use model::{Model, Slice};
pub use trace::{
    kg1_quantum_residual, kg1_residual, trace_integrand, trace_integrand_direct, trace_reduced_direct,
    trace_reduced_residual, trace_terms, TraceTerms,
};
pub mod sweep;
pub use sweep::{epsilon_sweep, loglog_fit, SweepCheck, SweepResult};
pub mod report;
pub use report::{
    sample_points, ChartBounds, CheckName, CheckRequest, CheckResult, Conventions, Suite, VerificationReport,
};
