//! Simulation of Fock-state generation by iterated photon addition in a
//! beam-splitter feedback loop watched by a lossy threshold detector.
//!
//! A train of single-photon pulses meets the loop mode on a beam splitter of
//! transmittance `tau`. The other output goes to a threshold detector of
//! efficiency `eta`, modelled as a loss beam splitter followed by an ideal
//! vacuum projection. A run is kept only if the detector never clicks.
//!
//! The crate provides
//!
//! * [`step`]: closed-form single-step no-click probability and output diagonal,
//! * [`oracle`]: a brute-force three-mode state-vector simulator of the same step,
//! * [`iterate`]: the loop itself, mixing per-component steps,
//! * [`wigner`]: Wigner functions and negativity of diagonal Fock mixtures,
//! * [`sweep`], [`optimize`], [`verify`]: parameter scans, transmittance
//!   optimisation and the analytic-vs-oracle equivalence harness.

pub mod error;
pub mod fock;
pub mod iterate;
pub mod optimize;
pub mod oracle;
pub mod step;
pub mod sweep;
pub mod verify;
pub mod wigner;

pub use error::{FockError, Result};
pub use fock::{
    binomial, log_factorial, DiagonalFockState, Efficiency, Fidelity, PhotonCount, Probability,
    Purity, Transmittance,
};
pub use iterate::{
    mixed_step, run, run_oracle_crosscheck, Engine, IterationConfig, RunSummary, StepResult,
};
pub use step::{step_coefficients, step_fidelity, step_probability, StepCoefficients};
