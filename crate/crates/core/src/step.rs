//! Closed-form single photon-addition step.
//!
//! Mode convention: `n` photons enter port 1 (amplitude `sqrt(tau)` back into
//! the loop), one fresh photon enters port 2, and the detector watches output
//! port 2 through a loss splitter of transmittance `eta`. After projecting the
//! detector mode onto vacuum and tracing out the loss mode, the loop mode is
//! diagonal with support on `0..=n+1`:
//!
//! ```text
//! c[0]   = tau (1-tau)^n (1-eta)^(n+1) (n+1)
//! c[k]   = tau^(k-1) (1-tau)^(n-k) (1-eta)^(n-k+1) (n-k+1)!k!/n!
//!          * [C(n,k) tau - C(n,k-1) (1-tau)]^2          for 1 <= k <= n
//! c[n+1] = tau^n (1-tau) (n+1)
//! p      = sum c = (eta^2 tau (1-tau)(n+1) + 1-eta) (eta tau + 1-eta)^(n-1)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{
    binomial, DiagonalFockState, Efficiency, Fidelity, PhotonCount, Probability, Transmittance,
};

/// Unnormalized loop-mode diagonal after one no-click step, with its trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepCoefficients {
    /// Weight on photon numbers `0..=n+1`.
    pub weights: Vec<f64>,
    pub p_noclick: Probability,
}

impl StepCoefficients {
    pub fn input_photons(&self) -> PhotonCount {
        self.weights.len() - 2
    }

    pub fn fidelity(&self) -> Result<Fidelity> {
        let p = self.p_noclick.value();
        if p <= 0.0 {
            return Err(FockError::UndefinedFidelity);
        }
        Probability::new(self.weights[self.weights.len() - 1] / p)
    }

    /// The renormalized post-step loop state.
    pub fn normalized(&self) -> Result<DiagonalFockState> {
        let (state, _) = DiagonalFockState::from_weights(self.weights.clone())?.normalize()?;
        Ok(state)
    }
}

/// Probability that the detector stays dark when `n` loop photons meet one
/// fresh photon.
pub fn step_probability(n: PhotonCount, tau: Transmittance, eta: Efficiency) -> Probability {
    let t = tau.value();
    let e = eta.value();
    let base = e * t + 1.0 - e;
    let p = if n == 0 && base == 0.0 {
        // eta = 1, tau = 0: the n = 0 expression reduces to 1 - tau eta
        1.0 - t * e
    } else {
        (e * e * t * (1.0 - t) * (n as f64 + 1.0) + 1.0 - e) * base.powi(n as i32 - 1)
    };
    Probability::new(p).expect("closed-form no-click probability lies in [0, 1]")
}

pub fn step_coefficients(n: PhotonCount, tau: Transmittance, eta: Efficiency) -> StepCoefficients {
    let t = tau.value();
    let r = tau.complement();
    let loss = eta.loss();
    let nf = n as f64;

    let mut weights = vec![0.0; n + 2];
    weights[0] = t * r.powi(n as i32) * loss.powi(n as i32 + 1) * (nf + 1.0);
    for k in 1..=n {
        let c_nk = binomial(n, k).expect("k <= n");
        let c_nk1 = binomial(n, k - 1).expect("k - 1 <= n");
        let amp = c_nk * t - c_nk1 * r;
        // (n-k+1)! k! / n! = (n-k+1) / C(n,k)
        let fact_ratio = (n - k + 1) as f64 / c_nk;
        weights[k] = t.powi(k as i32 - 1)
            * r.powi((n - k) as i32)
            * loss.powi((n - k + 1) as i32)
            * fact_ratio
            * amp
            * amp;
    }
    weights[n + 1] = t.powi(n as i32) * r * (nf + 1.0);

    let p = weights.iter().sum::<f64>();
    StepCoefficients {
        weights,
        p_noclick: Probability::new(p).expect("step weights sum to a probability"),
    }
}

/// Weight of the target `|n+1>` in the normalized step output.
pub fn step_fidelity(n: PhotonCount, tau: Transmittance, eta: Efficiency) -> Result<Fidelity> {
    step_coefficients(n, tau, eta).fidelity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn t(x: f64) -> Transmittance {
        Transmittance::new(x).unwrap()
    }
    fn e(x: f64) -> Efficiency {
        Efficiency::new(x).unwrap()
    }

    #[test]
    fn probability_examples() {
        assert_abs_diff_eq!(
            step_probability(1, t(0.5), e(1.0)).value(),
            0.5,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            step_probability(3, t(0.5), e(1.0)).value(),
            0.25,
            epsilon = 1e-15
        );
        // photon reflected (0.3) or transmitted then lost (0.7 * 0.1)
        assert_abs_diff_eq!(
            step_probability(0, t(0.7), e(0.9)).value(),
            0.37,
            epsilon = 1e-14
        );
    }

    #[test]
    fn probability_degenerate_guard() {
        assert_eq!(step_probability(0, t(0.0), e(1.0)).value(), 1.0);
        assert_eq!(step_probability(1, t(0.0), e(1.0)).value(), 0.0);
        assert_eq!(step_probability(3, t(0.0), e(1.0)).value(), 0.0);
    }

    #[test]
    fn coefficients_at_n_zero() {
        let (tau, eta) = (0.35, 0.6);
        let c = step_coefficients(0, t(tau), e(eta));
        assert_eq!(c.weights.len(), 2);
        assert_abs_diff_eq!(c.weights[0], tau * (1.0 - eta), epsilon = 1e-15);
        assert_abs_diff_eq!(c.weights[1], 1.0 - tau, epsilon = 1e-15);
        assert_abs_diff_eq!(c.p_noclick.value(), 1.0 - tau * eta, epsilon = 1e-15);
    }

    #[test]
    fn coefficients_ideal_detector() {
        let c = step_coefficients(2, t(0.5), e(1.0));
        assert_eq!(c.weights, vec![0.0, 0.0, 0.0, 0.375]);
        assert_eq!(c.p_noclick.value(), 0.375);
    }

    #[test]
    fn coefficients_sum_to_closed_form() {
        let c = step_coefficients(3, t(0.4), e(0.8));
        assert_abs_diff_eq!(
            c.p_noclick.value(),
            step_probability(3, t(0.4), e(0.8)).value(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn fidelity_examples() {
        assert_eq!(step_fidelity(2, t(0.5), e(1.0)).unwrap().value(), 1.0);
        assert_abs_diff_eq!(
            step_fidelity(0, t(0.5), e(0.5)).unwrap().value(),
            2.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(
            step_fidelity(2, t(1.0), e(1.0)),
            Err(FockError::UndefinedFidelity)
        );
    }

    #[test]
    fn grid_invariants() {
        for n in 0..=10 {
            assert_abs_diff_eq!(
                step_probability(n, t(0.5), e(1.0)).value(),
                (n as f64 + 1.0) * 2f64.powi(-(n as i32) - 1),
                epsilon = 1e-13
            );
            assert_eq!(step_probability(n, t(0.37), e(0.0)).value(), 1.0);
            for i in 0..=20 {
                for j in 0..=20 {
                    let (tau, eta) = (t(i as f64 / 20.0), e(j as f64 / 20.0));
                    let c = step_coefficients(n, tau, eta);
                    assert!(c.weights.iter().all(|&w| w >= 0.0));
                    assert_abs_diff_eq!(
                        c.p_noclick.value(),
                        step_probability(n, tau, eta).value(),
                        epsilon = 1e-10
                    );
                    if j == 20 {
                        assert!(c.weights[..=n].iter().all(|&w| w == 0.0));
                    }
                }
            }
        }
    }
}
