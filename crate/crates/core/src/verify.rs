//! Analytic-versus-oracle equivalence harness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{Efficiency, PhotonCount, Transmittance};
use crate::iterate::{run, run_oracle_crosscheck, IterationConfig, ORACLE_MAX_PULSES};
use crate::oracle::oracle_single_step;
use crate::step::step_coefficients;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
const GRID_LO: f64 = 0.05;
const GRID_HI: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifySpec {
    pub step_max_n: PhotonCount,
    pub step_grid: usize,
    pub run_max_n: PhotonCount,
    pub run_grid: usize,
    pub tolerance: f64,
}

impl VerifySpec {
    pub fn uniform(max_n: PhotonCount, grid: usize) -> Self {
        Self {
            step_max_n: max_n,
            step_grid: grid,
            run_max_n: max_n,
            run_grid: grid,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.step_max_n > ORACLE_MAX_PULSES || self.run_max_n > ORACLE_MAX_PULSES {
            return Err(FockError::InvalidConfig(format!(
                "max n must be <= {ORACLE_MAX_PULSES}"
            )));
        }
        if self.step_grid < 2 || self.run_grid < 2 {
            return Err(FockError::InvalidConfig(
                "grid must have at least 2 points per axis".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Step,
    Run,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub kind: CheckKind,
    pub n: PhotonCount,
    pub tau: f64,
    pub eta: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub max_step_deviation: f64,
    pub max_run_deviation: f64,
    pub checks: usize,
    pub offenders: Vec<Deviation>,
    pub passed: bool,
}

fn grid(count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| GRID_LO + (GRID_HI - GRID_LO) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Largest difference in `p` and in every normalized diagonal entry of a
/// single step.
pub fn step_deviation(n: PhotonCount, tau: Transmittance, eta: Efficiency) -> Result<f64> {
    let a = step_coefficients(n, tau, eta);
    let o = oracle_single_step(n, tau, eta)?;
    let mut dev = (a.p_noclick.value() - o.p_noclick.value()).abs();
    let (pa, po) = (a.p_noclick.value(), o.p_noclick.value());
    for (wa, wo) in a.weights.iter().zip(&o.weights) {
        dev = dev.max((wa / pa - wo / po).abs());
    }
    Ok(dev)
}

pub fn run_deviation(n_pulses: PhotonCount, tau: f64, eta: f64) -> Result<f64> {
    let cfg = IterationConfig::new(n_pulses, tau, eta)?;
    Ok(run(&cfg)?.max_deviation(&run_oracle_crosscheck(&cfg)?))
}

pub fn verify(spec: &VerifySpec) -> Result<VerifyReport> {
    spec.validate()?;
    let mut cases = Vec::new();
    for n in 0..=spec.step_max_n {
        for &tau in &grid(spec.step_grid) {
            for &eta in &grid(spec.step_grid) {
                cases.push((CheckKind::Step, n, tau, eta));
            }
        }
    }
    for n in 1..=spec.run_max_n {
        for &tau in &grid(spec.run_grid) {
            for &eta in &grid(spec.run_grid) {
                cases.push((CheckKind::Run, n, tau, eta));
            }
        }
    }

    let results = cases
        .par_iter()
        .map(|&(kind, n, tau, eta)| {
            let deviation = match kind {
                CheckKind::Step => {
                    step_deviation(n, Transmittance::new(tau)?, Efficiency::new(eta)?)?
                }
                CheckKind::Run => run_deviation(n, tau, eta)?,
            };
            Ok(Deviation {
                kind,
                n,
                tau,
                eta,
                deviation,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let max_of = |k: CheckKind| {
        results
            .iter()
            .filter(|d| d.kind == k)
            .map(|d| d.deviation)
            .fold(0.0, f64::max)
    };
    let offenders: Vec<Deviation> = results
        .iter()
        .filter(|d| !(d.deviation < spec.tolerance))
        .copied()
        .collect();
    Ok(VerifyReport {
        max_step_deviation: max_of(CheckKind::Step),
        max_run_deviation: max_of(CheckKind::Run),
        checks: results.len(),
        passed: offenders.is_empty(),
        offenders,
    })
}
