//! One-dimensional transmittance optimisation: a uniform scan over the open
//! interval `(0, 1)` followed by golden-section refinement around the best
//! scan point.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{Efficiency, PhotonCount};
use crate::iterate::{run, IterationConfig};

/// Spread below which a scanned curve counts as flat.
pub const FLAT_TOLERANCE: f64 = 1e-12;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Fidelity,
    Probability,
    /// Fidelity times net success probability.
    Product,
}

impl FromStr for Objective {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fidelity" => Ok(Objective::Fidelity),
            "probability" => Ok(Objective::Probability),
            "product" => Ok(Objective::Product),
            other => Err(FockError::InvalidConfig(format!(
                "unknown objective {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Fidelity => "fidelity",
            Objective::Probability => "probability",
            Objective::Product => "product",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizeSpec {
    pub n_pulses: PhotonCount,
    pub eta: Efficiency,
    pub objective: Objective,
    pub tau_resolution: f64,
}

impl OptimizeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_pulses == 0 {
            return Err(FockError::InvalidConfig(
                "n_pulses must be at least 1".into(),
            ));
        }
        if !(self.tau_resolution > 0.0 && self.tau_resolution <= 0.1) {
            return Err(FockError::InvalidConfig(format!(
                "tau resolution {} outside (0, 0.1]",
                self.tau_resolution
            )));
        }
        Ok(())
    }

    /// Scan abscissae `i * resolution` strictly inside `(0, 1)`.
    pub fn scan_points(&self) -> Vec<f64> {
        let count = (1.0 / self.tau_resolution - 1e-9).floor() as usize;
        (1..=count)
            .map(|i| i as f64 * self.tau_resolution)
            .filter(|&t| t < 1.0)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub tau: f64,
    /// `None` where post-selection is impossible.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    /// Refined maximiser; `None` when the curve is flat.
    pub tau_star: Option<f64>,
    pub objective_value: Option<f64>,
    /// Best scan point, ties broken toward smaller tau.
    pub scan_best: Option<CurvePoint>,
    pub flat: bool,
    pub curve: Vec<CurvePoint>,
}

/// Objective value of a full run, `None` on a dead branch.
pub fn objective_value(
    n_pulses: PhotonCount,
    eta: Efficiency,
    objective: Objective,
    tau: f64,
) -> Result<Option<f64>> {
    let config = IterationConfig::new(n_pulses, tau, eta.value())?;
    match run(&config) {
        Ok(s) => Ok(Some(match objective {
            Objective::Fidelity => s.fidelity.value(),
            Objective::Probability => s.p_net.value(),
            Objective::Product => s.fidelity.value() * s.p_net.value(),
        })),
        Err(FockError::DeadBranch(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Maximises `f` on `[lo, hi]` by golden-section search, assuming one mode
/// inside the bracket. Returns the best abscissa seen and its value.
pub fn golden_section_max<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..max_iter {
        if hi - lo <= tol {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub fn optimize(spec: &OptimizeSpec) -> Result<OptimizeResult> {
    spec.validate()?;
    let points = spec.scan_points();
    let curve = points
        .iter()
        .map(|&tau| {
            objective_value(spec.n_pulses, spec.eta, spec.objective, tau)
                .map(|value| CurvePoint { tau, value })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<(usize, f64)> = None;
    let (mut lo_val, mut hi_val) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, p) in curve.iter().enumerate() {
        if let Some(v) = p.value {
            lo_val = lo_val.min(v);
            hi_val = hi_val.max(v);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
    }

    let Some((best_i, best_v)) = best else {
        return Ok(OptimizeResult {
            tau_star: None,
            objective_value: None,
            scan_best: None,
            flat: true,
            curve,
        });
    };
    let scan_best = Some(curve[best_i]);
    if hi_val - lo_val <= FLAT_TOLERANCE {
        return Ok(OptimizeResult {
            tau_star: None,
            objective_value: None,
            scan_best,
            flat: true,
            curve,
        });
    }

    let lo = if best_i == 0 {
        0.0
    } else {
        curve[best_i - 1].tau
    };
    let hi = curve.get(best_i + 1).map_or(1.0, |p| p.tau);
    let eval = |tau: f64| {
        objective_value(spec.n_pulses, spec.eta, spec.objective, tau)
            .ok()
            .flatten()
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (tau_r, val_r) = golden_section_max(eval, lo, hi, 1e-10, 200);
    let (tau_star, value) = if val_r > best_v {
        (tau_r, val_r)
    } else {
        (curve[best_i].tau, best_v)
    };

    Ok(OptimizeResult {
        tau_star: Some(tau_star),
        objective_value: Some(value),
        scan_best,
        flat: false,
        curve,
    })
}
