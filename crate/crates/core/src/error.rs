use thiserror::Error;

/// Errors raised by the numerical laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("non-positive density {value} at node (i1={i1}, i2={i2}, k={k})")]
    NonPositiveDensity {
        value: f64,
        i1: usize,
        i2: usize,
        k: usize,
    },

    #[error("non-finite value in {field} at node (i1={i1}, i2={i2}, k={k})")]
    NonFinite {
        field: &'static str,
        i1: usize,
        i2: usize,
        k: usize,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("non-uniform time spacing: {0}")]
    TimeSpacing(String),

    #[error("slip matrix on the {wall} wall is not symmetric")]
    AsymmetricSlip { wall: &'static str },

    #[error("norm order {order} exceeds the cap {cap}")]
    NormOrder { order: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("step failed at t={t} (step {step}, dt={dt}): {source}")]
    Step {
        t: f64,
        step: usize,
        dt: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("smoothness monitor tripped at t={t}: max|grad u| = {value} exceeds {limit}")]
    Smoothness { t: f64, value: f64, limit: f64 },

    #[error("sweep run for epsilon={eps} failed: {source}")]
    SweepRun {
        eps: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
