use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular metric: |det| = {det:e} is below the invertibility threshold")]
    SingularMetric { det: f64 },

    #[error("metric signature violated at {point:?}: {detail}")]
    SignatureViolation { point: Vec<f64>, detail: String },

    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),

    #[error("sign mismatch: {0}")]
    SignMismatch(String),

    #[error("invalid mass shell: Lambda/G_D = {ratio} cannot be met by a timelike momentum")]
    InvalidMassShell { ratio: f64 },

    #[error("tachyonic mass: m^2 = {m_squared} < 0")]
    TachyonicMass { m_squared: f64 },

    #[error("quadrature did not converge: last change {delta:e} after {panels} panels")]
    QuadratureNotConverged { delta: f64, panels: usize },

    #[error("degenerate scale: {0}")]
    DegenerateScale(String),

    #[error("ill-conditioned fit: {0}")]
    IllConditionedFit(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("degenerate trajectory: the particle never moves")]
    DegenerateTrajectory,

    #[error("wavenumber {k} is not a lattice mode of a domain of length {length}")]
    ModeMismatch { k: f64, length: f64 },

    #[error("CFL violated: dt/dx = {ratio} exceeds the limit {limit}")]
    CflViolation { ratio: f64, limit: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("solution blew up at step {step} (max |phi| = {max_abs:e})")]
    BlowUp { step: u64, max_abs: f64 },

    #[error("field node at grid index {index}: |phi| = {abs:e} is below the decomposition floor")]
    NodeEncountered { index: usize, abs: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
