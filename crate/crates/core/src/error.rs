use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("angle {0} rad is outside the open interval (0, pi)")]
    InvalidAngle(f64),
    #[error("lines with angles {0} and {1} rad are parallel")]
    ParallelLines(f64, f64),
    #[error("invalid piecewise-linear function: {0}")]
    InvalidFunction(String),
    #[error("invalid sampled function: {0}")]
    InvalidSamples(String),
    #[error("invalid persistence diagram: {0}")]
    InvalidDiagram(String),
    #[error("degenerate landscape vertex at index {0}")]
    DegenerateVertex(usize),
    #[error("degenerate five-line estimator (denominator {0:e})")]
    DegenerateEstimator(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no function with the requested critical-point count after {0} attempts")]
    GenerationExhausted(usize),
    #[error("naive and rolling-ball reconstructions disagree for n = {0}")]
    ReconstructionMismatch(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
