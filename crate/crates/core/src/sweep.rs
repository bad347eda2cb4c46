//! `(tau, eta)` parameter sweeps over full loop runs.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FockError, Result};
use crate::fock::PhotonCount;
use crate::iterate::{run, IterationConfig};

/// Fixed 17-significant-digit scientific formatting used for all CSV output.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Evenly spaced samples `start..=stop` with `count` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        let g = Self { start, stop, count };
        g.validate()?;
        Ok(g)
    }

    pub fn unit(count: usize) -> Self {
        Self {
            start: 0.0,
            stop: 1.0,
            count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(FockError::InvalidGrid(format!("count {} < 2", self.count)));
        }
        let inside = |v: f64| (0.0..=1.0).contains(&v);
        if !inside(self.start) || !inside(self.stop) || self.start > self.stop {
            return Err(FockError::InvalidGrid(format!(
                "bounds {}:{} must satisfy 0 <= start <= stop <= 1",
                self.start, self.stop
            )));
        }
        Ok(())
    }

    /// The `i`th sample; the last one is `stop` exactly.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }
}

impl FromStr for AxisGrid {
    type Err = FockError;

    /// Parses `start:stop:count`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || FockError::InvalidGrid(format!("expected start:stop:count, got {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse().map_err(|_| bad())?;
        let stop = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(start, stop, count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Probability,
    Fidelity,
    Purity,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Probability, Metric::Fidelity, Metric::Purity];

    pub fn column(self) -> &'static str {
        match self {
            Metric::Probability => "p_net",
            Metric::Fidelity => "fidelity",
            Metric::Purity => "purity",
        }
    }
}

impl FromStr for Metric {
    type Err = FockError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "probability" | "p_net" => Ok(Metric::Probability),
            "fidelity" => Ok(Metric::Fidelity),
            "purity" => Ok(Metric::Purity),
            other => Err(FockError::InvalidConfig(format!(
                "unknown metric {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Metric::Probability => "probability",
            Metric::Fidelity => "fidelity",
            Metric::Purity => "purity",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n_pulses: PhotonCount,
    pub tau_grid: AxisGrid,
    pub eta_grid: AxisGrid,
    pub metrics: Vec<Metric>,
}

impl SweepSpec {
    /// 41 x 41 over the unit square with every metric.
    pub fn unit_square(n_pulses: PhotonCount) -> Self {
        Self {
            n_pulses,
            tau_grid: AxisGrid::unit(41),
            eta_grid: AxisGrid::unit(41),
            metrics: Metric::ALL.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_pulses == 0 {
            return Err(FockError::InvalidConfig(
                "n_pulses must be at least 1".into(),
            ));
        }
        self.tau_grid.validate()?;
        self.eta_grid.validate()?;
        if self.metrics.is_empty() {
            return Err(FockError::InvalidConfig("no metrics selected".into()));
        }
        Ok(())
    }
}

/// One grid point. A point where post-selection is impossible has
/// `p_net = 0` and no fidelity or purity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    pub eta: f64,
    pub p_net: f64,
    pub fidelity: Option<f64>,
    pub purity: Option<f64>,
}

impl SweepRow {
    fn metric(&self, m: Metric) -> f64 {
        match m {
            Metric::Probability => self.p_net,
            Metric::Fidelity => self.fidelity.unwrap_or(f64::NAN),
            Metric::Purity => self.purity.unwrap_or(f64::NAN),
        }
    }
}

pub fn evaluate_point(n_pulses: PhotonCount, tau: f64, eta: f64) -> Result<SweepRow> {
    let config = IterationConfig::new(n_pulses, tau, eta)?;
    match run(&config) {
        Ok(summary) => Ok(SweepRow {
            tau,
            eta,
            p_net: summary.p_net.value(),
            fidelity: Some(summary.fidelity.value()),
            purity: Some(summary.purity.value()),
        }),
        Err(FockError::DeadBranch(_)) => Ok(SweepRow {
            tau,
            eta,
            p_net: 0.0,
            fidelity: None,
            purity: None,
        }),
        Err(e) => Err(e),
    }
}

/// Evaluates every grid point on the current rayon pool. Rows come back
/// tau-major regardless of completion order.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points: Vec<(f64, f64)> = spec
        .tau_grid
        .values()
        .flat_map(|tau| spec.eta_grid.values().map(move |eta| (tau, eta)))
        .collect();
    points
        .par_iter()
        .map(|&(tau, eta)| evaluate_point(spec.n_pulses, tau, eta))
        .collect()
}

/// `tau,eta,<metric columns>` with metrics in canonical order.
pub fn write_csv<W: Write>(rows: &[SweepRow], metrics: &[Metric], mut out: W) -> io::Result<()> {
    let mut selected = metrics.to_vec();
    selected.sort();
    selected.dedup();
    let mut header = String::from("tau,eta");
    for m in &selected {
        header.push(',');
        header.push_str(m.column());
    }
    writeln!(out, "{header}")?;
    for row in rows {
        let mut line = format!("{},{}", format_float(row.tau), format_float(row.eta));
        for &m in &selected {
            line.push(',');
            line.push_str(&format_float(row.metric(m)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
