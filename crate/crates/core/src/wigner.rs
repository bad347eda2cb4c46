//! Wigner functions of diagonal Fock mixtures.
//!
//! Convention: `[x, p] = i` (hbar = 1), vacuum quadrature variance 1/2,
//! `W` normalized to unit integral. For `|n>`,
//! `W_n(x, p) = (-1)^n / pi * exp(-r^2) * L_n(2 r^2)` with `r^2 = x^2 + p^2`.

use std::f64::consts::PI;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::{DiagonalFockState, PhotonCount};
use crate::sweep::format_float;

/// Largest tolerated deviation of the integrated Wigner function from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 0.05;

/// Laguerre polynomials `L_0(x) ..= L_max(x)` by the three-term recurrence.
pub fn laguerre_all(max: PhotonCount, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max + 1);
    out.push(1.0);
    if max >= 1 {
        out.push(1.0 - x);
    }
    for k in 1..max {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}

pub fn laguerre(n: PhotonCount, x: f64) -> f64 {
    laguerre_all(n, x)[n]
}

pub fn wigner_fock(n: PhotonCount, x: f64, p: f64) -> f64 {
    let r2 = x * x + p * p;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / PI * (-r2).exp() * laguerre(n, 2.0 * r2)
}

fn wigner_mixture(probs: &[f64], x: f64, p: f64) -> f64 {
    let r2 = x * x + p * p;
    let lag = laguerre_all(probs.len() - 1, 2.0 * r2);
    let sum: f64 = probs
        .iter()
        .zip(&lag)
        .enumerate()
        .map(|(k, (w, l))| if k % 2 == 0 { w * l } else { -w * l })
        .sum();
    sum * (-r2).exp() / PI
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::square(5.0, 201)
    }
}

impl GridSpec {
    /// `points x points` samples over `[-half_width, half_width]^2`.
    pub fn square(half_width: f64, points: usize) -> Self {
        Self {
            x_min: -half_width,
            x_max: half_width,
            p_min: -half_width,
            p_max: half_width,
            nx: points,
            np: points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx < 2 || self.np < 2 {
            return Err(FockError::InvalidGrid(
                "need at least 2 samples per axis".into(),
            ));
        }
        let bounds = [self.x_min, self.x_max, self.p_min, self.p_max];
        if bounds.iter().any(|b| !b.is_finite())
            || self.x_min >= self.x_max
            || self.p_min >= self.p_max
        {
            return Err(FockError::InvalidGrid(
                "bounds must be finite with min < max".into(),
            ));
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * i as f64 / (self.nx - 1) as f64
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + (self.p_max - self.p_min) * j as f64 / (self.np - 1) as f64
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }
}

/// Sampled `W(x_i, p_j)`, stored with `x` as the slow index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl PhaseSpaceGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.np + j]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Writes `x,p,w` rows, `x` outer.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,p,w")?;
        for i in 0..self.spec.nx {
            let x = format_float(self.spec.x(i));
            for j in 0..self.spec.np {
                writeln!(
                    out,
                    "{},{},{}",
                    x,
                    format_float(self.spec.p(j)),
                    format_float(self.at(i, j))
                )?;
            }
        }
        Ok(())
    }
}

pub fn wigner_state(state: &DiagonalFockState, spec: &GridSpec) -> Result<PhaseSpaceGrid> {
    spec.validate()?;
    let probs = state.probs();
    let values = (0..spec.nx)
        .into_par_iter()
        .flat_map_iter(|i| {
            let x = spec.x(i);
            (0..spec.np).map(move |j| wigner_mixture(probs, x, spec.p(j)))
        })
        .collect();
    Ok(PhaseSpaceGrid {
        spec: *spec,
        values,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityReport {
    pub min_value: f64,
    /// Trapezoidal `integral W dx dp`.
    pub integral: f64,
    /// Trapezoidal `integral max(-W, 0) dx dp`.
    pub negative_volume: f64,
}

pub fn negativity(grid: &PhaseSpaceGrid) -> Result<NegativityReport> {
    let spec = &grid.spec;
    spec.validate()?;
    let edge = |i: usize, n: usize| if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
    let cell = spec.dx() * spec.dp();
    let mut integral = 0.0;
    let mut negative = 0.0;
    for i in 0..spec.nx {
        for j in 0..spec.np {
            let w = grid.at(i, j);
            let weight = edge(i, spec.nx) * edge(j, spec.np) * cell;
            integral += weight * w;
            negative += weight * (-w).max(0.0);
        }
    }
    if (integral - 1.0).abs() > NORMALIZATION_TOLERANCE {
        return Err(FockError::InaccurateGrid {
            integral,
            tolerance: NORMALIZATION_TOLERANCE,
        });
    }
    Ok(NegativityReport {
        min_value: grid.min_value(),
        integral,
        negative_volume: negative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_PI;

    #[test]
    fn laguerre_matches_explicit_polynomials() {
        for x in [0.0, 0.3, 1.7, 4.2, 11.0] {
            let l2 = 0.5 * (x * x - 4.0 * x + 2.0);
            let l3 = (-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
            assert_abs_diff_eq!(laguerre(2, x), l2, epsilon = 1e-12);
            assert_abs_diff_eq!(laguerre(3, x), l3, epsilon = 1e-12);
        }
    }

    #[test]
    fn fock_values_at_origin() {
        assert_abs_diff_eq!(wigner_fock(0, 0.0, 0.0), FRAC_1_PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_fock(1, 0.0, 0.0), -FRAC_1_PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wigner_fock(3, 0.0, 0.0), -FRAC_1_PI, epsilon = 1e-15);
        for n in 0..12 {
            let expected = if n % 2 == 0 { FRAC_1_PI } else { -FRAC_1_PI };
            assert_abs_diff_eq!(wigner_fock(n, 0.0, 0.0), expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn vacuum_grid() {
        let g = wigner_state(&DiagonalFockState::vacuum(), &GridSpec::default()).unwrap();
        assert_abs_diff_eq!(g.at(100, 100), FRAC_1_PI, epsilon = 1e-15);
        let r = negativity(&g).unwrap();
        assert!(r.min_value >= 0.0);
        assert_eq!(r.negative_volume, 0.0);
        assert_abs_diff_eq!(r.integral, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn single_photon_negativity() {
        let g = wigner_state(&DiagonalFockState::fock(1), &GridSpec::default()).unwrap();
        let r = negativity(&g).unwrap();
        assert_abs_diff_eq!(r.min_value, -FRAC_1_PI, epsilon = 1e-15);
        assert!(r.negative_volume > 0.0);
    }

    #[test]
    fn pure_component_matches_fock_function() {
        let spec = GridSpec::square(4.0, 41);
        let g = wigner_state(&DiagonalFockState::fock(3), &spec).unwrap();
        for i in 0..spec.nx {
            for j in 0..spec.np {
                assert_abs_diff_eq!(
                    g.at(i, j),
                    wigner_fock(3, spec.x(i), spec.p(j)),
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let g = wigner_state(&DiagonalFockState::fock(4), &GridSpec::square(1.0, 3)).unwrap();
        assert!(matches!(
            negativity(&g),
            Err(FockError::InaccurateGrid { .. })
        ));
        assert!(GridSpec::square(1.0, 1).validate().is_err());
    }

    #[test]
    fn csv_header_and_row_count() {
        let g = wigner_state(&DiagonalFockState::vacuum(), &GridSpec::square(1.0, 3)).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "x,p,w");
        assert_eq!(lines.len(), 10);
    }
}
