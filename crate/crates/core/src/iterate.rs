//! The feedback loop: `n_pulses` successive conditional photon additions
//! starting from vacuum in the loop mode.
//!
//! The loop state stays diagonal, so a step on a mixture is the
//! probability-weighted sum of single steps on each photon-number component.

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{
    DiagonalFockState, Efficiency, Fidelity, PhotonCount, Probability, Purity, Transmittance,
};
use crate::oracle::oracle_single_step;
use crate::step::{step_coefficients, StepCoefficients};

/// Below this no-click probability a branch is treated as impossible.
pub const DEAD_BRANCH_THRESHOLD: f64 = 1e-300;

/// Largest pulse count accepted by [`run_oracle_crosscheck`].
pub const ORACLE_MAX_PULSES: PhotonCount = 6;

/// Backend used for each single step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    #[default]
    Analytic,
    Oracle,
}

impl Engine {
    fn single_step(
        self,
        n: PhotonCount,
        tau: Transmittance,
        eta: Efficiency,
    ) -> Result<StepCoefficients> {
        match self {
            Engine::Analytic => Ok(step_coefficients(n, tau, eta)),
            Engine::Oracle => oracle_single_step(n, tau, eta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    pub n_pulses: PhotonCount,
    pub tau: Transmittance,
    pub eta: Efficiency,
    pub engine: Engine,
}

impl IterationConfig {
    pub fn new(n_pulses: PhotonCount, tau: f64, eta: f64) -> Result<Self> {
        if n_pulses == 0 {
            return Err(FockError::InvalidConfig(
                "n_pulses must be at least 1".into(),
            ));
        }
        Ok(Self {
            n_pulses,
            tau: Transmittance::new(tau)?,
            eta: Efficiency::new(eta)?,
            engine: Engine::Analytic,
        })
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    /// 1-based position in the pulse train. A standalone [`mixed_step`] reports 1.
    pub index: usize,
    pub p_conditional: Probability,
    pub state_after: DiagonalFockState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub steps: Vec<StepResult>,
    pub p_net: Probability,
    pub fidelity: Fidelity,
    pub purity: Purity,
    pub final_state: DiagonalFockState,
}

/// Unnormalized loop diagonal after one no-click step on a mixture.
pub fn mixed_unnormalized(
    state: &DiagonalFockState,
    tau: Transmittance,
    eta: Efficiency,
    engine: Engine,
) -> Result<DiagonalFockState> {
    let mut out = vec![0.0; state.cutoff() + 2];
    for (k, &w) in state.probs().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let step = engine.single_step(k, tau, eta)?;
        for (acc, c) in out.iter_mut().zip(&step.weights) {
            *acc += w * c;
        }
    }
    DiagonalFockState::from_weights(out)
}

pub fn mixed_step(
    state: &DiagonalFockState,
    tau: Transmittance,
    eta: Efficiency,
    engine: Engine,
) -> Result<StepResult> {
    let raw = mixed_unnormalized(state, tau, eta, engine)?;
    let p = raw.total();
    if p <= DEAD_BRANCH_THRESHOLD {
        return Err(FockError::DeadBranch(p));
    }
    let (state_after, p) = raw.normalize()?;
    Ok(StepResult {
        index: 1,
        p_conditional: Probability::new(p)?,
        state_after,
    })
}

pub fn run(config: &IterationConfig) -> Result<RunSummary> {
    if config.n_pulses == 0 {
        return Err(FockError::InvalidConfig(
            "n_pulses must be at least 1".into(),
        ));
    }
    let mut state = DiagonalFockState::vacuum();
    let mut steps = Vec::with_capacity(config.n_pulses);
    let mut p_net = 1.0;
    for i in 0..config.n_pulses {
        let step = mixed_step(&state, config.tau, config.eta, config.engine)?;
        p_net *= step.p_conditional.value();
        state = step.state_after.clone();
        steps.push(StepResult {
            index: i + 1,
            ..step
        });
    }
    Ok(RunSummary {
        steps,
        p_net: Probability::new(p_net)?,
        fidelity: state.fidelity_to_fock(config.n_pulses)?,
        purity: state.purity(),
        final_state: state,
    })
}

/// [`run`] with every step evaluated by the brute-force oracle.
pub fn run_oracle_crosscheck(config: &IterationConfig) -> Result<RunSummary> {
    if config.n_pulses > ORACLE_MAX_PULSES {
        return Err(FockError::InvalidConfig(format!(
            "oracle cross-check supports at most {ORACLE_MAX_PULSES} pulses"
        )));
    }
    run(&config.with_engine(Engine::Oracle))
}

impl RunSummary {
    /// Largest absolute difference over every numeric field of two runs.
    pub fn max_deviation(&self, other: &RunSummary) -> f64 {
        let mut dev = (self.p_net.value() - other.p_net.value())
            .abs()
            .max((self.fidelity.value() - other.fidelity.value()).abs())
            .max((self.purity.value() - other.purity.value()).abs());
        if self.steps.len() != other.steps.len() {
            return f64::INFINITY;
        }
        for (a, b) in self.steps.iter().zip(&other.steps) {
            dev = dev.max((a.p_conditional.value() - b.p_conditional.value()).abs());
            dev = dev.max(state_deviation(&a.state_after, &b.state_after));
        }
        dev.max(state_deviation(&self.final_state, &other.final_state))
    }
}

fn state_deviation(a: &DiagonalFockState, b: &DiagonalFockState) -> f64 {
    let len = a.probs().len().max(b.probs().len());
    (0..len)
        .map(|n| (a.get(n) - b.get(n)).abs())
        .fold(0.0, f64::max)
}
