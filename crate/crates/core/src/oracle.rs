//! Brute-force three-mode Fock-space simulator.
//!
//! Every beam splitter is applied by substituting creation operators and
//! expanding the resulting polynomial over the basis, independently of the
//! closed forms in [`crate::step`]. Modes are indexed `0, 1, 2` for the loop
//! mode, the detector arm and the loss arm.

use crate::error::{FockError, Result};
use crate::fock::{
    binomial, log_factorial, DiagonalFockState, Efficiency, PhotonCount, Probability, Transmittance,
};
use crate::step::StepCoefficients;

pub const LOOP_MODE: usize = 0;
pub const DETECTOR_MODE: usize = 1;
pub const LOSS_MODE: usize = 2;

/// Real amplitudes over `(n1, n2, n3)` with every `n_i <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct ThreeModeState {
    amps: Vec<f64>,
    cutoff: usize,
}

impl ThreeModeState {
    pub fn zeros(cutoff: usize) -> Self {
        let d = cutoff + 1;
        Self {
            amps: vec![0.0; d * d * d],
            cutoff,
        }
    }

    /// A single basis ket with unit amplitude.
    pub fn basis(occupation: [PhotonCount; 3], cutoff: usize) -> Result<Self> {
        let mut s = Self::zeros(cutoff);
        s.set(occupation, 1.0)?;
        Ok(s)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    fn index(&self, [a, b, c]: [PhotonCount; 3]) -> usize {
        let d = self.cutoff + 1;
        (a * d + b) * d + c
    }

    fn occupation(&self, idx: usize) -> [PhotonCount; 3] {
        let d = self.cutoff + 1;
        [idx / (d * d), (idx / d) % d, idx % d]
    }

    fn check(&self, occ: [PhotonCount; 3]) -> Result<()> {
        match occ.iter().max() {
            Some(&m) if m > self.cutoff => Err(FockError::CutoffExceeded {
                requested: m,
                cutoff: self.cutoff,
            }),
            _ => Ok(()),
        }
    }

    pub fn amplitude(&self, occ: [PhotonCount; 3]) -> f64 {
        if occ.iter().any(|&n| n > self.cutoff) {
            return 0.0;
        }
        self.amps[self.index(occ)]
    }

    pub fn set(&mut self, occ: [PhotonCount; 3], value: f64) -> Result<()> {
        self.check(occ)?;
        let i = self.index(occ);
        self.amps[i] = value;
        Ok(())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum()
    }

    /// Nonzero amplitudes with their occupations.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = ([PhotonCount; 3], f64)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, &a)| a != 0.0)
            .map(|(i, &a)| (self.occupation(i), a))
    }

    /// Distribution of the total photon number `n1 + n2 + n3`.
    pub fn photon_number_distribution(&self) -> Vec<f64> {
        let mut out = vec![0.0; 3 * self.cutoff + 1];
        for (occ, a) in self.iter_nonzero() {
            out[occ.iter().sum::<usize>()] += a * a;
        }
        out
    }
}

/// Two-mode real beam splitter acting on `mode_a` and `mode_b`:
///
/// ```text
/// a_a^dag = sqrt(t) b_a^dag - sqrt(1-t) b_b^dag
/// a_b^dag = sqrt(1-t) b_a^dag + sqrt(t) b_b^dag
/// ```
///
/// with `a` the input and `b` the output creation operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitterSpec {
    pub mode_a: usize,
    pub mode_b: usize,
    pub transmittance: f64,
}

impl BeamSplitterSpec {
    pub fn new(mode_a: usize, mode_b: usize, transmittance: f64) -> Result<Self> {
        if mode_a == mode_b || mode_a > 2 || mode_b > 2 {
            return Err(FockError::InvalidModes(mode_a, mode_b));
        }
        Transmittance::new(transmittance)?;
        Ok(Self {
            mode_a,
            mode_b,
            transmittance,
        })
    }

    /// The main splitter between the loop mode and the fresh-photon port.
    pub fn main(tau: Transmittance) -> Self {
        Self {
            mode_a: LOOP_MODE,
            mode_b: DETECTOR_MODE,
            transmittance: tau.value(),
        }
    }

    /// The detector-loss splitter:
    ///
    /// ```text
    /// b_2^dag =  sqrt(eta) c_2^dag + sqrt(1-eta) c_3^dag
    /// b_3^dag = -sqrt(1-eta) c_2^dag + sqrt(eta) c_3^dag
    /// ```
    ///
    /// which is the standard form with the loss arm as `mode_a`.
    pub fn loss(eta: Efficiency) -> Self {
        Self {
            mode_a: LOSS_MODE,
            mode_b: DETECTOR_MODE,
            transmittance: eta.value(),
        }
    }
}

/// Expansion coefficients of `(x b_a + y b_b)^m` as `sum_i C(m,i) x^i y^(m-i) b_a^i b_b^(m-i)`.
fn expand_power(m: usize, x: f64, y: f64) -> Vec<f64> {
    (0..=m)
        .map(|i| binomial(m, i).expect("i <= m") * x.powi(i as i32) * y.powi((m - i) as i32))
        .collect()
}

/// `|n_a, n_b> = (a_a^dag)^n_a (a_b^dag)^n_b / sqrt(n_a! n_b!) |0>`
/// is rewritten in the output operators and each monomial
/// `b_a^dag^i b_b^dag^j |0>` becomes `sqrt(i! j!) |i, j>`.
pub fn apply_beam_splitter(
    state: &ThreeModeState,
    spec: &BeamSplitterSpec,
) -> Result<ThreeModeState> {
    let (ma, mb) = (spec.mode_a, spec.mode_b);
    if ma == mb || ma > 2 || mb > 2 {
        return Err(FockError::InvalidModes(ma, mb));
    }
    let t = Transmittance::new(spec.transmittance)?.value();
    let st = t.sqrt();
    let sr = (1.0 - t).sqrt();
    let k = state.cutoff;
    let mut out = ThreeModeState::zeros(k);

    for (occ, amp) in state.iter_nonzero() {
        let (na, nb) = (occ[ma], occ[mb]);
        let total = na + nb;
        if total > k {
            return Err(FockError::CutoffExceeded {
                requested: total,
                cutoff: k,
            });
        }
        let from_a = expand_power(na, st, -sr);
        let from_b = expand_power(nb, sr, st);
        let input_norm = 0.5 * (log_factorial(na) + log_factorial(nb));
        for (i, &ca) in from_a.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (j, &cb) in from_b.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let out_a = i + j;
                let out_b = total - out_a;
                let norm = (0.5 * (log_factorial(out_a) + log_factorial(out_b)) - input_norm).exp();
                let mut target = occ;
                target[ma] = out_a;
                target[mb] = out_b;
                let idx = out.index(target);
                out.amps[idx] += amp * ca * cb * norm;
            }
        }
    }
    Ok(out)
}

/// Keeps only the `n2 = 0` components; returns them with their squared norm,
/// the no-click probability.
pub fn project_vacuum_mode2(state: &ThreeModeState) -> (ThreeModeState, Probability) {
    let mut out = state.clone();
    for (i, a) in out.amps.iter_mut().enumerate() {
        if state.occupation(i)[DETECTOR_MODE] != 0 {
            *a = 0.0;
        }
    }
    let p = out.norm_sqr();
    (out, Probability::new(p.clamp(0.0, 1.0)).expect("clamped"))
}

/// Reduced loop-mode weights `w[j] = sum_k |amp(j, 0, k)|^2`.
///
/// Each `j` pairs with exactly one loss-mode occupation in this pipeline
/// (photon number is conserved), so the reduced matrix is diagonal.
pub fn trace_out_mode3(state: &ThreeModeState) -> Result<DiagonalFockState> {
    let mut weights = vec![0.0; state.cutoff + 1];
    for (occ, a) in state.iter_nonzero() {
        if occ[DETECTOR_MODE] != 0 {
            return Err(FockError::NotProjected);
        }
        weights[occ[LOOP_MODE]] += a * a;
    }
    DiagonalFockState::from_weights(weights)
}

/// `|n, 1, 0>`.
pub fn prepare_input(n: PhotonCount, cutoff: usize) -> Result<ThreeModeState> {
    if n + 1 > cutoff {
        return Err(FockError::CutoffExceeded {
            requested: n + 1,
            cutoff,
        });
    }
    ThreeModeState::basis([n, 1, 0], cutoff)
}

/// Full single step by explicit state evolution, with cutoff `n + 2`.
pub fn oracle_single_step(
    n: PhotonCount,
    tau: Transmittance,
    eta: Efficiency,
) -> Result<StepCoefficients> {
    let input = prepare_input(n, n + 2)?;
    let mixed = apply_beam_splitter(&input, &BeamSplitterSpec::main(tau))?;
    let lossy = apply_beam_splitter(&mixed, &BeamSplitterSpec::loss(eta))?;
    let (projected, p_noclick) = project_vacuum_mode2(&lossy);
    let reduced = trace_out_mode3(&projected)?;
    let mut weights = reduced.probs().to_vec();
    weights.truncate(n + 2);
    Ok(StepCoefficients { weights, p_noclick })
}
