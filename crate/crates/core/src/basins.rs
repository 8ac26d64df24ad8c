//! Basins of attraction over a grid of initial conditions.
//!
//! Every cell is integrated independently. The 0-1 test on the post-transient
//! voltage Poincaré series sorts it into chaotic, inconclusive or regular;
//! regular cells are fingerprinted from the steady `(x, ẋ)` Poincaré points
//! and matched against a registry of attractors. Cell outcomes may be computed
//! in any order (and in parallel); registration always happens in grid-scan
//! order, so class ids do not depend on the number of workers.

use std::collections::BTreeMap;
use std::fmt;

use crate::chaos01::{classify_with, Chaos01Config, DynamicsClass};
use crate::error::{Error, Result};
use crate::integrator::{run_orbit, tail_len, IntegratorConfig};
use crate::model::{equilibria, force_extrema, HarvesterParams, InitialCondition, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub xdot_range: (f64, f64),
    pub v0: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_range: (-3.0, 3.0),
            xdot_range: (-3.0, 3.0),
            v0: 0.0,
            nx: 200,
            ny: 200,
        }
    }
}

impl GridSpec {
    pub fn square(n: usize) -> Self {
        Self {
            nx: n,
            ny: n,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (lo, hi) in [self.x_range, self.xdot_range] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid("grid ranges must satisfy lo < hi"));
            }
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::invalid("grid needs at least 2 points per axis"));
        }
        if !self.v0.is_finite() {
            return Err(Error::invalid("v0 must be finite"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn axis(range: (f64, f64), n: usize, i: usize) -> f64 {
        (range.0 * (n - 1 - i) as f64 + range.1 * i as f64) / (n - 1) as f64
    }

    /// Initial `(x0, ẋ0)` of cell `index`; `x0` varies fastest.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let (i, j) = (index % self.nx, index / self.nx);
        (Self::axis(self.x_range, self.nx, i), Self::axis(self.xdot_range, self.ny, j))
    }

    pub fn initial_state(&self, index: usize) -> State {
        let (x, xdot) = self.point(index);
        State::new(x, xdot, self.v0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WellMembership {
    Left,
    Right,
    InterWell,
    /// Monostable potential: only one well exists.
    SingleWell,
}

impl WellMembership {
    pub fn as_str(&self) -> &'static str {
        match self {
            WellMembership::Left => "left",
            WellMembership::Right => "right",
            WellMembership::InterWell => "inter-well",
            WellMembership::SingleWell => "single-well",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EnergyClass {
    Low,
    High,
}

impl EnergyClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            EnergyClass::Low => "low",
            EnergyClass::High => "high",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Negative,
    Positive,
}

/// Equilibria plus the force extrema, which is all the fingerprinting needs
/// to know about the potential.
#[derive(Debug, Clone, PartialEq)]
pub struct WellGeometry {
    pub equilibria: Vec<f64>,
    /// Stationary points of the restoring force, `(positive, negative)`.
    pub force_extrema: (f64, f64),
}

impl WellGeometry {
    pub fn new(equilibria: Vec<f64>, force_extrema: (f64, f64)) -> Result<Self> {
        if equilibria.len() != 1 && equilibria.len() != 3 {
            return Err(Error::invalid(format!(
                "expected 1 or 3 equilibria, got {}",
                equilibria.len()
            )));
        }
        Ok(Self {
            equilibria,
            force_extrema,
        })
    }

    pub fn from_params(params: &HarvesterParams) -> Result<Self> {
        Self::new(equilibria(params)?, force_extrema(params))
    }

    pub fn is_bistable(&self) -> bool {
        self.equilibria.len() == 3
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttractorFingerprint {
    pub period: usize,
    /// Cluster centres of the steady Poincaré points in the `(x, ẋ)` plane,
    /// sorted lexicographically.
    pub points: Vec<(f64, f64)>,
    pub well: WellMembership,
    pub energy: EnergyClass,
    /// Displacement range of the steady motion.
    pub x_range: (f64, f64),
}

impl AttractorFingerprint {
    /// Which half of the phase plane a confined orbit lives in.
    pub fn side(&self) -> Option<Side> {
        match self.well {
            WellMembership::Left => Some(Side::Negative),
            WellMembership::Right => Some(Side::Positive),
            WellMembership::InterWell => None,
            WellMembership::SingleWell => {
                let mid = 0.5 * (self.x_range.0 + self.x_range.1);
                Some(if mid >= 0.0 { Side::Positive } else { Side::Negative })
            }
        }
    }

    pub fn x_span(&self) -> f64 {
        self.x_range.1 - self.x_range.0
    }

    /// Same period, well and energy class, and a one-to-one pairing of the
    /// point sets with every pair closer than `tol`.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.period == other.period
            && self.well == other.well
            && self.energy == other.energy
            && points_match(&self.points, &other.points, tol)
    }
}

/// Perfect matching in the bipartite graph of pairs closer than `tol`.
fn points_match(a: &[(f64, f64)], b: &[(f64, f64)], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let close = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).hypot(p.1 - q.1) <= tol;
    let adj: Vec<Vec<usize>> = a
        .iter()
        .map(|&p| (0..b.len()).filter(|&j| close(p, b[j])).collect())
        .collect();
    let mut owner: Vec<Option<usize>> = vec![None; b.len()];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                if owner[v].map_or(true, |w| augment(w, adj, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    (0..a.len()).all(|u| {
        let mut seen = vec![false; b.len()];
        augment(u, &adj, &mut seen, &mut owner)
    })
}

/// Greedy clustering in the `(x, ẋ)` plane: each point joins the first
/// cluster whose seed is within `tol`. Returns sorted centroids.
pub fn cluster_points(tail: &[State], tol: f64) -> Vec<(f64, f64)> {
    let mut seeds: Vec<(f64, f64)> = Vec::new();
    let mut sums: Vec<(f64, f64, usize)> = Vec::new();
    for s in tail {
        match seeds
            .iter()
            .position(|&(x, y)| (x - s.x).hypot(y - s.xdot) <= tol)
        {
            Some(k) => {
                sums[k].0 += s.x;
                sums[k].1 += s.xdot;
                sums[k].2 += 1;
            }
            None => {
                seeds.push((s.x, s.xdot));
                sums.push((s.x, s.xdot, 1));
            }
        }
    }
    let mut centres: Vec<(f64, f64)> = sums
        .into_iter()
        .map(|(x, y, n)| (x / n as f64, y / n as f64))
        .collect();
    centres.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    centres
}

/// Fingerprints a steady orbit.
///
/// `x_range` is the displacement range of the continuous steady motion; when
/// `None` it is taken from the Poincaré points alone.
pub fn fingerprint(
    tail: &[State],
    x_range: Option<(f64, f64)>,
    geometry: &WellGeometry,
    tol: f64,
) -> Result<AttractorFingerprint> {
    if tail.is_empty() {
        return Err(Error::invalid("cannot fingerprint an empty tail"));
    }
    let points = cluster_points(tail, tol);
    let (x_min, x_max) = x_range.unwrap_or_else(|| {
        tail.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.x), hi.max(s.x)))
    });

    let (well, energy) = if geometry.is_bistable() {
        let (left, mid, right) = (geometry.equilibria[0], geometry.equilibria[1], geometry.equilibria[2]);
        if x_max < mid {
            let reach = (x_min - left).abs().max((x_max - left).abs());
            let high = reach > 0.5 * (mid - left);
            (WellMembership::Left, if high { EnergyClass::High } else { EnergyClass::Low })
        } else if x_min > mid {
            let reach = (x_min - right).abs().max((x_max - right).abs());
            let high = reach > 0.5 * (right - mid);
            (WellMembership::Right, if high { EnergyClass::High } else { EnergyClass::Low })
        } else {
            (WellMembership::InterWell, EnergyClass::High)
        }
    } else {
        // High when the motion reaches past the shoulder where the second well used to be
        let eq = geometry.equilibria[0];
        let (pos_ext, neg_ext) = geometry.force_extrema;
        let high = if eq >= 0.0 { x_min < neg_ext } else { x_max > pos_ext };
        (WellMembership::SingleWell, if high { EnergyClass::High } else { EnergyClass::Low })
    };

    Ok(AttractorFingerprint {
        period: points.len(),
        points,
        well,
        energy,
        x_range: (x_min, x_max),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegistryEntry {
    pub id: u32,
    pub fingerprint: AttractorFingerprint,
    pub color: String,
}

/// Catalogue of attractors discovered during one run.
#[derive(Debug, Clone, PartialEq)]
pub struct AttractorRegistry {
    pub entries: Vec<RegistryEntry>,
    pub tol: f64,
}

const PALETTE: [&str; 10] = [
    "yellow", "magenta", "cyan", "purple", "orange", "pink", "brown", "olive", "teal", "navy",
];

impl AttractorRegistry {
    pub fn new(tol: f64) -> Self {
        Self {
            entries: Vec::new(),
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: u32) -> Option<&RegistryEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Id of the first matching entry, registering `fp` if none matches.
    pub fn match_or_register(&mut self, fp: AttractorFingerprint) -> u32 {
        if let Some(e) = self.entries.iter().find(|e| e.fingerprint.matches(&fp, self.tol)) {
            return e.id;
        }
        let id = self.entries.len() as u32;
        self.entries.push(RegistryEntry {
            id,
            fingerprint: fp,
            color: String::new(),
        });
        id
    }

    /// Gives every entry a display colour.
    ///
    /// Green goes to the period-1 high-energy class with the largest basin;
    /// red and blue go to the period-1 low-energy classes with the smallest
    /// excursion on the positive and negative side. Everything else takes the
    /// palette in id order.
    pub fn assign_colors(&mut self, counts: &BTreeMap<u32, usize>) {
        let count = |id: u32| counts.get(&id).copied().unwrap_or(0);
        let green = self
            .entries
            .iter()
            .filter(|e| e.fingerprint.period == 1 && e.fingerprint.energy == EnergyClass::High)
            .max_by(|a, b| count(a.id).cmp(&count(b.id)).then(b.id.cmp(&a.id)))
            .map(|e| e.id);
        let low_on = |side: Side| {
            self.entries
                .iter()
                .filter(|e| {
                    e.fingerprint.period == 1
                        && e.fingerprint.energy == EnergyClass::Low
                        && e.fingerprint.side() == Some(side)
                })
                .min_by(|a, b| {
                    a.fingerprint
                        .x_span()
                        .total_cmp(&b.fingerprint.x_span())
                        .then(a.id.cmp(&b.id))
                })
                .map(|e| e.id)
        };
        let red = low_on(Side::Positive);
        let blue = low_on(Side::Negative);

        let mut palette = PALETTE.iter();
        for e in &mut self.entries {
            e.color = if Some(e.id) == green {
                "green".into()
            } else if Some(e.id) == red {
                "red".into()
            } else if Some(e.id) == blue {
                "blue".into()
            } else {
                palette
                    .next()
                    .map(|c| c.to_string())
                    .unwrap_or_else(|| format!("class-{}", e.id))
            };
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Class(u32),
    Chaotic,
    Inconclusive,
    Divergent,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Class(id) => write!(f, "{id}"),
            Label::Chaotic => f.write_str("chaotic"),
            Label::Inconclusive => f.write_str("inconclusive"),
            Label::Divergent => f.write_str("divergent"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "chaotic" => Ok(Label::Chaotic),
            "inconclusive" => Ok(Label::Inconclusive),
            "divergent" => Ok(Label::Divergent),
            other => other
                .parse::<u32>()
                .map(Label::Class)
                .map_err(|_| Error::Parse(format!("unknown label `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasinConfig {
    pub n_cycles: usize,
    /// Trailing fraction of the voltage Poincaré series fed to the 0-1 test.
    pub test_fraction: f64,
    /// Trailing fraction of the run used for the fingerprint.
    pub tail_fraction: f64,
    /// Clustering radius for the steady Poincaré points.
    pub cluster_tol: f64,
    /// Registry matching tolerance.
    pub match_tol: f64,
    pub integrator: IntegratorConfig,
    pub chaos: Chaos01Config,
}

impl BasinConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            n_cycles: 1000,
            test_fraction: 0.5,
            tail_fraction: 0.1,
            cluster_tol: 1e-3,
            match_tol: 1e-2,
            integrator: IntegratorConfig::default(),
            chaos: Chaos01Config::new(seed),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.integrator.validate()?;
        self.chaos.validate()?;
        for (name, v) in [("test_fraction", self.test_fraction), ("tail_fraction", self.tail_fraction)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::invalid(format!("{name} must lie in (0, 1]")));
            }
        }
        let tested = tail_len(self.n_cycles, self.test_fraction);
        if self.n_cycles == 0 || tested < crate::chaos01::MIN_SERIES_LEN {
            return Err(Error::invalid(format!(
                "the 0-1 test window holds {tested} samples; at least {} are needed",
                crate::chaos01::MIN_SERIES_LEN
            )));
        }
        if !(self.cluster_tol > 0.0 && self.match_tol > 0.0) {
            return Err(Error::invalid("tolerances must be positive"));
        }
        Ok(())
    }
}

/// What one grid cell turned into, before registration.
#[derive(Debug, Clone, PartialEq)]
pub enum CellOutcome {
    Regular { k: f64, fingerprint: AttractorFingerprint },
    Chaotic { k: f64 },
    Inconclusive { k: f64 },
    Divergent,
}

/// Integrates and classifies one initial condition.
pub fn evaluate_cell(
    params: &HarvesterParams,
    geometry: &WellGeometry,
    state0: State,
    frequencies: &[f64],
    cfg: &BasinConfig,
) -> Result<CellOutcome> {
    let ic = InitialCondition::at_rest(state0);
    let orbit = match run_orbit(params, &ic, cfg.n_cycles, cfg.tail_fraction, &cfg.integrator) {
        Ok(o) => o,
        Err(Error::Divergence { .. } | Error::StepUnderflow { .. }) => return Ok(CellOutcome::Divergent),
        Err(e) => return Err(e),
    };
    let samples = &orbit.series.samples;
    let n = samples.len();
    let tested: Vec<f64> = samples[n - tail_len(n, cfg.test_fraction)..]
        .iter()
        .map(|s| s.v)
        .collect();
    let result = classify_with(&tested, frequencies, &cfg.chaos)?;
    let k = result.k_median;
    Ok(match result.class {
        DynamicsClass::Chaotic => CellOutcome::Chaotic { k },
        DynamicsClass::Inconclusive => CellOutcome::Inconclusive { k },
        DynamicsClass::Regular => {
            let tail = &samples[n - tail_len(n, cfg.tail_fraction)..];
            CellOutcome::Regular {
                k,
                fingerprint: fingerprint(tail, Some(orbit.x_range), geometry, cfg.cluster_tol)?,
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinMap {
    pub grid: GridSpec,
    pub labels: Vec<Label>,
    /// Median 0-1 statistic per cell; NaN for divergent cells.
    pub k: Vec<f64>,
    pub registry: AttractorRegistry,
}

impl BasinMap {
    /// Builds the map from per-cell outcomes given in grid-scan order.
    pub fn from_outcomes(grid: GridSpec, outcomes: Vec<CellOutcome>, match_tol: f64) -> Self {
        let mut registry = AttractorRegistry::new(match_tol);
        let mut labels = Vec::with_capacity(outcomes.len());
        let mut k = Vec::with_capacity(outcomes.len());
        for outcome in outcomes {
            let (label, kv) = match outcome {
                CellOutcome::Regular { k, fingerprint } => (Label::Class(registry.match_or_register(fingerprint)), k),
                CellOutcome::Chaotic { k } => (Label::Chaotic, k),
                CellOutcome::Inconclusive { k } => (Label::Inconclusive, k),
                CellOutcome::Divergent => (Label::Divergent, f64::NAN),
            };
            labels.push(label);
            k.push(kv);
        }
        let mut counts = BTreeMap::new();
        for l in &labels {
            if let Label::Class(id) = l {
                *counts.entry(*id).or_insert(0usize) += 1;
            }
        }
        registry.assign_colors(&counts);
        Self {
            grid,
            labels,
            k,
            registry,
        }
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    /// Fraction of cells whose label satisfies `pred`.
    pub fn fraction_where(&self, pred: impl Fn(&Label, Option<&RegistryEntry>) -> bool) -> f64 {
        let hits = self
            .labels
            .iter()
            .filter(|l| {
                let entry = match l {
                    Label::Class(id) => self.registry.get(*id),
                    _ => None,
                };
                pred(l, entry)
            })
            .count();
        hits as f64 / self.labels.len() as f64
    }

    /// Fraction of cells whose attractor carries `color`.
    pub fn color_fraction(&self, color: &str) -> f64 {
        self.fraction_where(|_, e| e.is_some_and(|e| e.color == color))
    }

    pub fn energy_fraction(&self, energy: EnergyClass) -> f64 {
        self.fraction_where(|_, e| e.is_some_and(|e| e.fingerprint.energy == energy))
    }

    /// Display name of a label: the attractor colour, `gray` for chaos.
    pub fn display_name(&self, label: Label) -> String {
        match label {
            Label::Class(id) => self
                .registry
                .get(id)
                .map(|e| e.color.clone())
                .unwrap_or_else(|| id.to_string()),
            Label::Chaotic => "gray".into(),
            other => other.to_string(),
        }
    }
}

/// Computes the basin map. With the `parallel` feature the cells run on the
/// current rayon pool; the result is the same for any pool size.
pub fn compute_basins(params: &HarvesterParams, grid: &GridSpec, cfg: &BasinConfig) -> Result<BasinMap> {
    params.validate()?;
    grid.validate()?;
    cfg.validate()?;
    let geometry = WellGeometry::from_params(params)?;
    let frequencies = cfg.chaos.draw_frequencies();
    let eval = |index: usize| evaluate_cell(params, &geometry, grid.initial_state(index), &frequencies, cfg);

    #[cfg(feature = "parallel")]
    let outcomes: Vec<CellOutcome> = {
        use rayon::prelude::*;
        (0..grid.len()).into_par_iter().map(eval).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<CellOutcome> = (0..grid.len()).map(eval).collect::<Result<_>>()?;

    Ok(BasinMap::from_outcomes(*grid, outcomes, cfg.match_tol))
}

/// One row of [`relative_areas`].
#[derive(Debug, Clone, PartialEq)]
pub struct AreaRow {
    pub label: Label,
    /// Colour of the attractor, or `gray` / `inconclusive` / `divergent`.
    pub name: String,
    pub cells: usize,
    pub fraction: f64,
}

/// Fraction of the grid covered by every label present, classes first (by
/// id), then chaotic, inconclusive and divergent.
pub fn relative_areas(map: &BasinMap) -> Vec<AreaRow> {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    for l in &map.labels {
        *counts.entry(*l).or_insert(0) += 1;
    }
    let total = map.labels.len();
    counts
        .into_iter()
        .map(|(label, cells)| AreaRow {
            label,
            name: map.display_name(label),
            cells,
            fraction: cells as f64 / total as f64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometry3() -> WellGeometry {
        WellGeometry::new(vec![-1.0, 0.0, 1.0], (0.577, -0.577)).unwrap()
    }

    fn fp(points: &[(f64, f64)], well: WellMembership, energy: EnergyClass) -> AttractorFingerprint {
        AttractorFingerprint {
            period: points.len(),
            points: points.to_vec(),
            well,
            energy,
            x_range: (0.0, 0.0),
        }
    }

    #[test]
    fn grid_points_cover_corners() {
        let g = GridSpec::square(3);
        assert_eq!(g.len(), 9);
        assert_eq!(g.point(0), (-3.0, -3.0));
        assert_eq!(g.point(1), (0.0, -3.0));
        assert_eq!(g.point(8), (3.0, 3.0));
        assert!(GridSpec { nx: 1, ..g }.validate().is_err());
        assert!(GridSpec { x_range: (1.0, 1.0), ..g }.validate().is_err());
    }

    #[test]
    fn fingerprint_single_point_right_low() {
        let tail = vec![State::new(1.05, 0.2, 0.0); 100];
        let f = fingerprint(&tail, None, &geometry3(), 1e-3).unwrap();
        assert_eq!(f.period, 1);
        assert_eq!(f.well, WellMembership::Right);
        assert_eq!(f.energy, EnergyClass::Low);
        assert_eq!(f.points.len(), 1);
        assert!((f.points[0].0 - 1.05).abs() < 1e-12 && (f.points[0].1 - 0.2).abs() < 1e-12);
    }

    #[test]
    fn fingerprint_period_two_interwell() {
        let tail: Vec<State> = (0..100)
            .map(|i| {
                if i % 2 == 0 {
                    State::new(1.4, 0.1, 0.0)
                } else {
                    State::new(-1.3, -0.2, 0.0)
                }
            })
            .collect();
        let f = fingerprint(&tail, None, &geometry3(), 1e-3).unwrap();
        assert_eq!(f.period, 2);
        assert_eq!(f.well, WellMembership::InterWell);
        assert_eq!(f.energy, EnergyClass::High);
    }

    #[test]
    fn fingerprint_continuous_range_overrides_points() {
        // one Poincaré point on the right, but the orbit swings across the barrier
        let tail = vec![State::new(1.7, 0.7, 0.0); 50];
        let f = fingerprint(&tail, Some((-1.85, 1.85)), &geometry3(), 1e-3).unwrap();
        assert_eq!((f.period, f.well, f.energy), (1, WellMembership::InterWell, EnergyClass::High));
    }

    #[test]
    fn fingerprint_large_intrawell_is_high() {
        let tail = vec![State::new(-1.0, 0.0, 0.0); 10];
        let f = fingerprint(&tail, Some((-1.9, -0.3)), &geometry3(), 1e-3).unwrap();
        assert_eq!((f.well, f.energy), (WellMembership::Left, EnergyClass::High));
    }

    #[test]
    fn fingerprint_monostable() {
        let g = WellGeometry::new(vec![1.38], (0.686, -0.486)).unwrap();
        let tail = vec![State::new(1.39, 0.0, 0.0); 10];
        let small = fingerprint(&tail, Some((1.36, 1.40)), &g, 1e-3).unwrap();
        assert_eq!((small.well, small.energy), (WellMembership::SingleWell, EnergyClass::Low));
        assert_eq!(small.side(), Some(Side::Positive));
        let big = fingerprint(&tail, Some((-1.3, 2.2)), &g, 1e-3).unwrap();
        assert_eq!(big.energy, EnergyClass::High);
        assert!(WellGeometry::new(vec![0.0, 1.0], (0.5, -0.5)).is_err());
        assert!(fingerprint(&[], None, &g, 1e-3).is_err());
    }

    #[test]
    fn matching_uses_optimal_pairing() {
        let a = fp(&[(0.0, 0.0), (0.015, 0.0)], WellMembership::Right, EnergyClass::Low);
        let b = fp(&[(0.009, 0.0), (0.024, 0.0)], WellMembership::Right, EnergyClass::Low);
        // greedy nearest-neighbour would pair a[1] with b[0] and strand a[0]
        assert!(a.matches(&b, 0.01));
        assert!(b.matches(&a, 0.01));
        let c = fp(&[(0.0, 0.0), (0.05, 0.0)], WellMembership::Right, EnergyClass::Low);
        assert!(!a.matches(&c, 0.01));
        let d = fp(&[(0.0, 0.0), (0.015, 0.0)], WellMembership::Left, EnergyClass::Low);
        assert!(!a.matches(&d, 0.01));
    }

    #[test]
    fn registry_assigns_ids_in_order_and_colours() {
        let mut r = AttractorRegistry::new(1e-2);
        let green = AttractorFingerprint {
            x_range: (-1.8, 1.8),
            ..fp(&[(1.7, 0.7)], WellMembership::InterWell, EnergyClass::High)
        };
        let red = AttractorFingerprint {
            x_range: (0.9, 1.1),
            ..fp(&[(1.05, 0.0)], WellMembership::Right, EnergyClass::Low)
        };
        let blue = AttractorFingerprint {
            x_range: (-1.1, -0.9),
            ..fp(&[(-1.05, 0.0)], WellMembership::Left, EnergyClass::Low)
        };
        let p2 = fp(&[(1.0, 0.1), (1.2, -0.1)], WellMembership::Right, EnergyClass::Low);
        assert_eq!(r.match_or_register(red.clone()), 0);
        assert_eq!(r.match_or_register(p2), 1);
        assert_eq!(r.match_or_register(green.clone()), 2);
        assert_eq!(r.match_or_register(red), 0);
        assert_eq!(r.match_or_register(blue), 3);
        assert_eq!(r.match_or_register(green), 2);
        r.assign_colors(&BTreeMap::from([(0, 5), (1, 1), (2, 10), (3, 2)]));
        let colours: Vec<&str> = r.entries.iter().map(|e| e.color.as_str()).collect();
        assert_eq!(colours, vec!["red", "yellow", "green", "blue"]);
    }

    #[test]
    fn label_round_trip() {
        for l in [Label::Class(7), Label::Chaotic, Label::Inconclusive, Label::Divergent] {
            assert_eq!(l.to_string().parse::<Label>().unwrap(), l);
        }
        assert!("grey".parse::<Label>().is_err());
    }

    #[test]
    fn areas_of_uniform_map() {
        let grid = GridSpec::square(2);
        let outcomes = vec![
            CellOutcome::Regular {
                k: 0.0,
                fingerprint: fp(&[(1.0, 0.0)], WellMembership::Right, EnergyClass::Low),
            };
            4
        ];
        let map = BasinMap::from_outcomes(grid, outcomes, 1e-2);
        let rows = relative_areas(&map);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].fraction, 1.0);
        assert_eq!(rows[0].name, "red");
    }

    #[test]
    fn areas_partition() {
        let grid = GridSpec::square(2);
        let outcomes = vec![
            CellOutcome::Chaotic { k: 0.9 },
            CellOutcome::Inconclusive { k: 0.5 },
            CellOutcome::Divergent,
            CellOutcome::Regular {
                k: 0.0,
                fingerprint: fp(&[(1.0, 0.0)], WellMembership::Right, EnergyClass::Low),
            },
        ];
        let map = BasinMap::from_outcomes(grid, outcomes, 1e-2);
        let rows = relative_areas(&map);
        assert_eq!(rows.len(), 4);
        assert_eq!(rows.iter().map(|r| r.fraction).sum::<f64>(), 1.0);
        assert!(map.k[2].is_nan());
    }
}
