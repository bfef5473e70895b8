//! Coordinate-chart differential geometry in five and four dimensions.

pub mod curvature;
pub mod field;
pub mod jet;
pub mod linalg;
pub mod oracle;
pub mod stress;

pub use curvature::{
    background_geometry, christoffel, covariant_divergence_stress, dalembert4, einstein_divergence_fd,
    einstein_residual, einstein_upper, geometry4, geometry5, ricci, ricci4, ricci_scalar, ricci_scalar4,
    LocalGeometry,
};
pub use field::{ChartPoint4, ChartPoint5, MetricField4, MetricField5, ScalarField, SymField4, T, TBAR};
pub use jet::{Jet, Jet5};
pub use linalg::{invert_metric, Mat};
pub use oracle::{fd_oracle_partial, max_derivative_discrepancy, Partial};
pub use stress::StressField;
