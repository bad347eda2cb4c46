//! Single-mode Fock-space value types and the combinatorics they need.

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};

/// Photon number. Bounds against a cutoff are checked where a cutoff exists.
pub type PhotonCount = usize;

/// Slack allowed on probabilities before they are clamped into `[0, 1]`.
pub const CLAMP_TOLERANCE: f64 = 1e-12;

/// Beam-splitter transmittance (transmitted intensity fraction).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Transmittance(f64);

impl Transmittance {
    pub fn new(tau: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&tau) {
            Ok(Self(tau))
        } else {
            Err(FockError::InvalidTransmittance(tau))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Reflectance `1 - tau`.
    pub fn complement(self) -> f64 {
        1.0 - self.0
    }
}

/// Threshold-detector efficiency, equal to the transmittance of the loss
/// beam splitter placed in front of an ideal detector.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Efficiency(f64);

impl Efficiency {
    pub fn new(eta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&eta) {
            Ok(Self(eta))
        } else {
            Err(FockError::InvalidEfficiency(eta))
        }
    }

    pub const IDEAL: Efficiency = Efficiency(1.0);

    pub fn value(self) -> f64 {
        self.0
    }

    /// Loss probability `1 - eta`.
    pub fn loss(self) -> f64 {
        1.0 - self.0
    }
}

/// A real number in `[0, 1]`. Values within [`CLAMP_TOLERANCE`] outside the
/// interval are clamped; anything further out is rejected.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

pub type Fidelity = Probability;
pub type Purity = Probability;

impl Probability {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_finite() && (-CLAMP_TOLERANCE..=1.0 + CLAMP_TOLERANCE).contains(&p) {
            Ok(Self(p.clamp(0.0, 1.0)))
        } else {
            Err(FockError::InvalidProbability(p))
        }
    }

    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// `ln(n!)`.
///
/// Summed directly for `n <= 256`; beyond that the Stirling series with
/// three correction terms is already accurate to machine precision.
pub fn log_factorial(n: PhotonCount) -> f64 {
    if n <= 256 {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// Binomial coefficient `C(n, k)`, exact for `n <= 60`.
pub fn binomial(n: PhotonCount, k: PhotonCount) -> Result<f64> {
    if k > n {
        return Err(FockError::BinomialDomain { n, k });
    }
    if n <= 60 {
        let k = k.min(n - k) as u128;
        let n = n as u128;
        let mut acc: u128 = 1;
        for i in 0..k {
            // acc * (n - i) is divisible by (i + 1) at every step
            acc = acc * (n - i) / (i + 1);
        }
        return Ok(acc as f64);
    }
    Ok((log_factorial(n) - log_factorial(k) - log_factorial(n - k))
        .exp()
        .round())
}

/// Diagonal single-mode density matrix: a weight per photon number `0..=cutoff`.
///
/// The same type carries unnormalized weights (the output of a projection
/// before renormalisation); [`DiagonalFockState::normalize`] produces the
/// unit-trace state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalFockState {
    probs: Vec<f64>,
}

impl DiagonalFockState {
    /// Builds a state from raw weights. Entries in `[-1e-12, 0)` are clamped
    /// to zero; larger negatives and non-finite values are rejected.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(FockError::DegenerateState);
        }
        let mut probs = weights;
        for (index, w) in probs.iter_mut().enumerate() {
            if !w.is_finite() || *w < -CLAMP_TOLERANCE {
                return Err(FockError::InvalidEntry { index, value: *w });
            }
            if *w < 0.0 {
                *w = 0.0;
            }
        }
        Ok(Self { probs })
    }

    pub fn vacuum() -> Self {
        Self { probs: vec![1.0] }
    }

    /// The pure Fock state `|n><n|` with cutoff `n`.
    pub fn fock(n: PhotonCount) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[n] = 1.0;
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn cutoff(&self) -> PhotonCount {
        self.probs.len() - 1
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Weight on photon number `n`, zero above the cutoff.
    pub fn get(&self, n: PhotonCount) -> f64 {
        self.probs.get(n).copied().unwrap_or(0.0)
    }

    /// Rescales to unit trace and returns the original trace alongside.
    pub fn normalize(&self) -> Result<(Self, f64)> {
        let total = self.total();
        if !(total > 0.0) {
            return Err(FockError::DegenerateState);
        }
        let probs = self.probs.iter().map(|p| p / total).collect();
        Ok((Self { probs }, total))
    }

    /// `Tr rho^2`, the sum of squared weights.
    pub fn purity(&self) -> Purity {
        let s: f64 = self.probs.iter().map(|p| p * p).sum();
        Probability(s.clamp(0.0, 1.0))
    }

    /// Fidelity to `|target>`, which for a diagonal state is just the
    /// weight on `target`.
    pub fn fidelity_to_fock(&self, target: PhotonCount) -> Result<Fidelity> {
        if target > self.cutoff() {
            return Err(FockError::CutoffExceeded {
                requested: target,
                cutoff: self.cutoff(),
            });
        }
        Probability::new(self.probs[target])
    }

    /// Largest photon number with nonzero weight.
    pub fn max_support(&self) -> Option<PhotonCount> {
        self.probs.iter().rposition(|&p| p > 0.0)
    }
}
