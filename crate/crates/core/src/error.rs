use thiserror::Error;

pub type Result<T> = std::result::Result<T, FockError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("transmittance {0} outside [0, 1]")]
    InvalidTransmittance(f64),

    #[error("detector efficiency {0} outside [0, 1]")]
    InvalidEfficiency(f64),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("binomial C({n}, {k}) requires k <= n")]
    BinomialDomain { n: usize, k: usize },

    #[error("photon number {requested} exceeds cutoff {cutoff}")]
    CutoffExceeded { requested: usize, cutoff: usize },

    #[error("state has no weight to normalize")]
    DegenerateState,

    #[error("invalid state entry {value} at photon number {index}")]
    InvalidEntry { index: usize, value: f64 },

    #[error("fidelity undefined: no-click probability is zero")]
    UndefinedFidelity,

    #[error("post-selection impossible: no-click probability {0:e} at or below threshold")]
    DeadBranch(f64),

    #[error("state has support outside the n2 = 0 subspace")]
    NotProjected,

    #[error("beam splitter modes must be distinct and < 3 (got {0} and {1})")]
    InvalidModes(usize, usize),

    #[error(
        "Wigner grid too coarse: integral {integral} deviates from 1 by more than {tolerance}"
    )]
    InaccurateGrid { integral: f64, tolerance: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
