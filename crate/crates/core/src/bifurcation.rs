//! Forward/backward bifurcation sweeps with state continuation.
//!
//! Each parameter value is integrated for a fixed number of forcing cycles,
//! starting from the state reached at the previous value. The steady tail of
//! the voltage Poincaré samples is recorded per value.

use crate::error::{Error, Result};
use crate::integrator::{run_orbit, tail_len, IntegratorConfig};
use crate::model::{HarvesterParams, InitialCondition};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    Amplitude,
    Frequency,
    /// Sloping angle. Values are radians internally.
    Angle,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::Amplitude => "f",
            SweepParameter::Frequency => "omega",
            SweepParameter::Angle => "phi",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f" | "amplitude" => Ok(SweepParameter::Amplitude),
            "omega" | "frequency" => Ok(SweepParameter::Frequency),
            "phi" | "angle" => Ok(SweepParameter::Angle),
            other => Err(Error::Parse(format!("unknown sweep parameter `{other}`"))),
        }
    }

    /// Copy of `base` with this parameter set to `value`.
    pub fn apply(&self, base: &HarvesterParams, value: f64) -> HarvesterParams {
        let mut p = *base;
        match self {
            SweepParameter::Amplitude => p.f = value,
            SweepParameter::Frequency => p.omega = value,
            SweepParameter::Angle => p.phi = value,
        }
        p
    }

    /// Converts an internal value to its I/O unit (degrees for angles).
    pub fn to_display(&self, value: f64) -> f64 {
        match self {
            SweepParameter::Angle => value.to_degrees(),
            _ => value,
        }
    }

    pub fn from_display(&self, value: f64) -> f64 {
        match self {
            SweepParameter::Angle => value.to_radians(),
            _ => value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "forward" | "fwd" | "up" => Ok(Direction::Forward),
            "backward" | "bwd" | "down" => Ok(Direction::Backward),
            other => Err(Error::Parse(format!("unknown sweep direction `{other}`"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Direction::Forward => "forward",
            Direction::Backward => "backward",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    /// `(lo, hi)`, internal units.
    pub range: (f64, f64),
    pub n_points: usize,
    pub direction: Direction,
    pub n_cycles: usize,
    pub tail_fraction: f64,
}

impl SweepSpec {
    pub fn new(parameter: SweepParameter, lo: f64, hi: f64, direction: Direction) -> Self {
        Self {
            parameter,
            range: (lo, hi),
            n_points: 1200,
            direction,
            n_cycles: 1000,
            tail_fraction: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid("sweep range must satisfy lo < hi"));
        }
        if self.n_points < 2 {
            return Err(Error::invalid("n_points must be at least 2"));
        }
        if self.n_cycles == 0 {
            return Err(Error::invalid("n_cycles must be at least 1"));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(Error::invalid("tail_fraction must lie in (0, 1]"));
        }
        if self.parameter == SweepParameter::Frequency && lo <= 0.0 {
            return Err(Error::invalid("frequency sweep must stay positive"));
        }
        Ok(())
    }

    /// Regularly spaced values in ascending order.
    pub fn grid(&self) -> Vec<f64> {
        let (lo, hi) = self.range;
        let last = (self.n_points - 1) as f64;
        (0..self.n_points)
            .map(|i| if i + 1 == self.n_points { hi } else { lo + (hi - lo) * (i as f64 / last) })
            .collect()
    }

    /// Values in the order they are visited.
    pub fn values_in_order(&self) -> Vec<f64> {
        let mut v = self.grid();
        if self.direction == Direction::Backward {
            v.reverse();
        }
        v
    }

    pub fn tail_len(&self) -> usize {
        tail_len(self.n_cycles, self.tail_fraction)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDiagram {
    pub parameter: SweepParameter,
    pub direction: Direction,
    /// Parameter values in sweep order, internal units.
    pub values: Vec<f64>,
    /// Steady voltage samples per value; empty where the point diverged.
    pub samples: Vec<Vec<f64>>,
    pub diverged: Vec<bool>,
    pub base: HarvesterParams,
}

impl BifurcationDiagram {
    /// Samples at the `i`-th grid value counted in ascending order.
    pub fn samples_ascending(&self, i: usize) -> &[f64] {
        match self.direction {
            Direction::Forward => &self.samples[i],
            Direction::Backward => &self.samples[self.samples.len() - 1 - i],
        }
    }
}

/// What happens when a point diverges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OnDivergence {
    /// Stop and return the error with the parameter value attached.
    Abort,
    /// Flag the point and restart the continuation from the initial condition.
    Record,
}

pub fn sweep(
    base: &HarvesterParams,
    spec: &SweepSpec,
    ic0: &InitialCondition,
    cfg: &IntegratorConfig,
) -> Result<BifurcationDiagram> {
    sweep_with(base, spec, ic0, cfg, OnDivergence::Abort)
}

pub fn sweep_with(
    base: &HarvesterParams,
    spec: &SweepSpec,
    ic0: &InitialCondition,
    cfg: &IntegratorConfig,
    on_divergence: OnDivergence,
) -> Result<BifurcationDiagram> {
    spec.validate()?;
    let values = spec.values_in_order();
    let mut samples = Vec::with_capacity(values.len());
    let mut diverged = Vec::with_capacity(values.len());
    let mut ic = *ic0;
    let keep = spec.tail_len();

    for &value in &values {
        let params = spec.parameter.apply(base, value);
        match run_orbit(&params, &ic, spec.n_cycles, spec.tail_fraction, cfg) {
            Ok(orbit) => {
                let v = &orbit.series.samples;
                samples.push(v[v.len() - keep..].iter().map(|s| s.v).collect());
                diverged.push(false);
                ic = InitialCondition::new(orbit.final_state, orbit.final_phase);
            }
            Err(e @ (Error::Divergence { .. } | Error::StepUnderflow { .. })) => match on_divergence {
                OnDivergence::Abort => {
                    return Err(Error::SweepDivergence {
                        value: spec.parameter.to_display(value),
                        source: Box::new(e),
                    })
                }
                OnDivergence::Record => {
                    samples.push(Vec::new());
                    diverged.push(true);
                    ic = *ic0;
                }
            },
            Err(e) => return Err(e),
        }
    }

    Ok(BifurcationDiagram {
        parameter: spec.parameter,
        direction: spec.direction,
        values,
        samples,
        diverged,
        base: *base,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Periodicity {
    Period(usize),
    NotPeriodic,
}

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-3;
pub const DEFAULT_MAX_PERIOD: usize = 16;

/// Centres of greedy 1-D clusters of radius `tol`, ascending.
pub fn clusters_1d(samples: &[f64], tol: f64) -> Vec<f64> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut centres = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[start] > tol {
            let members = &sorted[start..i];
            centres.push(members.iter().sum::<f64>() / members.len() as f64);
            start = i;
        }
    }
    centres
}

/// Period estimate from the number of distinct values in a steady sample set.
pub fn cluster_periodicity(samples: &[f64], tol: f64, max_period: usize) -> Periodicity {
    if samples.is_empty() {
        return Periodicity::NotPeriodic;
    }
    let n = clusters_1d(samples, tol).len();
    if n <= max_period {
        Periodicity::Period(n)
    } else {
        Periodicity::NotPeriodic
    }
}

/// Whether two sample sets have the same clusters within `tol`.
pub fn same_clusters(a: &[f64], b: &[f64], tol: f64) -> bool {
    let (ca, cb) = (clusters_1d(a, tol), clusters_1d(b, tol));
    ca.len() == cb.len() && ca.iter().zip(&cb).all(|(x, y)| (x - y).abs() <= tol)
}
