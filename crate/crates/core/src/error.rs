//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid history: {0}")]
    InvalidHistory(String),

    #[error("non-transversal zero: {0}")]
    NonTransversalZero(String),

    #[error("event cascade overflow: more than {cap} events per forcing period")]
    EventCascadeOverflow { cap: usize },

    #[error("trajectory too short: needs t >= {needed}, covers t <= {available}")]
    TrajectoryTooShort { needed: f64, available: f64 },

    #[error("degenerate map: a1 = a2 gives |slope| = 1 and no isolated fixed point")]
    DegenerateMap,

    #[error("degenerate orbit: an iterate landed exactly on 0")]
    DegenerateOrbit,

    #[error("smoothing width must be positive here; width 0 selects the sharp relay")]
    SharpDeltaNotSmoothable,

    #[error("smoothing width {delta} too large: ramp windows overlap (min plateau duration {min_plateau})")]
    DeltaTooLarge { delta: f64, min_plateau: f64 },

    #[error("step must equal 1/N for integer N >= 10, got {0}")]
    InvalidStep(f64),

    #[error("t_end = {t_end} is not a multiple of step {step}")]
    MisalignedEndpoint { t_end: f64, step: f64 },

    #[error("grid misalignment: {0}")]
    GridMisaligned(String),

    #[error("numeric blow-up: non-finite state at t = {t}")]
    BlowUp { t: f64 },

    #[error("underdetermined fit: need at least 2 distinct grid points")]
    UnderdeterminedFit,

    #[error("grid points fail the shape checks: {0:?}")]
    InvalidGridPoints(Vec<f64>),

    #[error("rate undefined: orbit already at the fixed point")]
    RateUndefined,

    #[error("scenario parse error: {0}")]
    ScenarioParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
