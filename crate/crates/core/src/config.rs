//! Flat `key = value` run configuration with named presets.
//!
//! Angles are always given in degrees. Later sources win: preset, then the
//! config file, then command-line overrides.

use std::collections::BTreeMap;

use crate::basins::{BasinConfig, GridSpec};
use crate::bifurcation::{Direction, SweepParameter, SweepSpec};
use crate::chaos01::Chaos01Config;
use crate::error::{Error, Result};
use crate::integrator::{IntegratorConfig, Method};
use crate::model::{HarvesterParams, InitialCondition, State};

/// Every key the tool understands.
pub const KNOWN_KEYS: &[&str] = &[
    "preset", "xi", "chi", "lambda", "kappa", "f", "omega", "delta", "p", "phi", "x0", "xdot0", "v0",
    "rtol", "atol", "max_step", "method", "rk4_steps", "seed", "workers", "out",
    // potential
    "x_min", "x_max", "points",
    // optimal-angle uses delta and p
    // bifurcate
    "sweep", "lo", "hi", "n_points", "direction", "n_cycles", "tail_fraction",
    // basin
    "grid_x_min", "grid_x_max", "grid_xdot_min", "grid_xdot_max", "nx", "ny", "test_fraction",
    "cluster_tol", "match_tol",
    // 0-1 test
    "n_c", "c_support", "cut_fraction", "k_chaotic", "k_regular",
    // chaos-test
    "series",
    // areas
    "inputs", "amplitudes",
];

pub const PRESETS: &[&str] = &["paper-s3", "symmetric", "a35", "a-4"];

/// Parameters of a named preset.
pub fn preset(name: &str) -> Result<HarvesterParams> {
    let base = HarvesterParams::baseline();
    match name {
        "paper-s3" => Ok(base),
        "symmetric" => Ok(HarvesterParams::symmetric()),
        "a35" => Ok(base.with_phi_degrees(35.0)),
        "a-4" => Ok(base.with_phi_degrees(-4.95)),
        other => Err(Error::invalid(format!(
            "unknown preset `{other}` (expected one of {})",
            PRESETS.join(", ")
        ))),
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected `key = value`", i + 1)))?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Parse(format!("unknown key `{key}`")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("override `{pair}` is not key=value")))?;
        self.set(k.trim(), v.trim())
    }

    /// Entries of `other` replace those of `self`.
    pub fn merge(&mut self, other: &RunConfig) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(s) => s
                .parse()
                .map_err(|_| Error::Parse(format!("`{key}`: cannot parse `{s}`"))),
        }
    }

    pub fn parse_opt<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::Parse(format!("`{key}`: cannot parse `{s}`")))
            })
            .transpose()
    }

    pub fn seed(&self) -> Result<Option<u64>> {
        self.parse_opt("seed")
    }

    pub fn require_seed(&self) -> Result<u64> {
        self.seed()?
            .ok_or_else(|| Error::invalid("this command runs the 0-1 test and needs a seed"))
    }

    pub fn params(&self) -> Result<HarvesterParams> {
        let mut p = preset(self.get("preset").unwrap_or("paper-s3"))?;
        p.xi = self.parse_or("xi", p.xi)?;
        p.chi = self.parse_or("chi", p.chi)?;
        p.lambda = self.parse_or("lambda", p.lambda)?;
        p.kappa = self.parse_or("kappa", p.kappa)?;
        p.f = self.parse_or("f", p.f)?;
        p.omega = self.parse_or("omega", p.omega)?;
        p.delta = self.parse_or("delta", p.delta)?;
        p.p = self.parse_or("p", p.p)?;
        if let Some(deg) = self.parse_opt::<f64>("phi")? {
            p = p.with_phi_degrees(deg);
        }
        p.validate()?;
        Ok(p)
    }

    pub fn initial_condition(&self) -> Result<InitialCondition> {
        let s = State::new(
            self.parse_or("x0", 1.0)?,
            self.parse_or("xdot0", 0.0)?,
            self.parse_or("v0", 0.0)?,
        );
        if !s.is_finite() {
            return Err(Error::invalid("initial condition must be finite"));
        }
        Ok(InitialCondition::at_rest(s))
    }

    pub fn integrator(&self) -> Result<IntegratorConfig> {
        let d = IntegratorConfig::default();
        let method = match self.get("method").unwrap_or("dopri") {
            "dopri" => Method::DormandPrince,
            "rk4" => Method::Rk4 {
                steps_per_period: self.parse_or("rk4_steps", Method::DEFAULT_RK4_STEPS)?,
            },
            other => return Err(Error::Parse(format!("`method`: expected dopri or rk4, got `{other}`"))),
        };
        let cfg = IntegratorConfig {
            rtol: self.parse_or("rtol", d.rtol)?,
            atol: self.parse_or("atol", d.atol)?,
            max_step: self.parse_opt("max_step")?.or(d.max_step),
            divergence_bound: d.divergence_bound,
            method,
            ..d
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn chaos(&self, seed: u64) -> Result<Chaos01Config> {
        let mut c = Chaos01Config::new(seed);
        match self.get("c_support").unwrap_or("full") {
            "full" => {}
            "restricted" => c = c.with_restricted_support(),
            other => {
                return Err(Error::Parse(format!(
                    "`c_support`: expected full or restricted, got `{other}`"
                )))
            }
        }
        c.n_c = self.parse_or("n_c", c.n_c)?;
        c.cut_fraction = self.parse_or("cut_fraction", c.cut_fraction)?;
        c.k_chaotic = self.parse_or("k_chaotic", c.k_chaotic)?;
        c.k_regular = self.parse_or("k_regular", c.k_regular)?;
        c.validate()?;
        Ok(c)
    }

    /// Sweep specification; `lo`/`hi` are in degrees for angle sweeps.
    pub fn sweep(&self) -> Result<SweepSpec> {
        let parameter = SweepParameter::parse(self.get("sweep").unwrap_or("amplitude"))?;
        let (dlo, dhi) = match parameter {
            SweepParameter::Amplitude => (0.01, 0.3),
            SweepParameter::Frequency => (0.1, 1.4),
            SweepParameter::Angle => (-35.0, 35.0),
        };
        let lo = parameter.from_display(self.parse_or("lo", dlo)?);
        let hi = parameter.from_display(self.parse_or("hi", dhi)?);
        let direction = Direction::parse(self.get("direction").unwrap_or("forward"))?;
        let mut spec = SweepSpec::new(parameter, lo, hi, direction);
        spec.n_points = self.parse_or("n_points", spec.n_points)?;
        spec.n_cycles = self.parse_or("n_cycles", spec.n_cycles)?;
        spec.tail_fraction = self.parse_or("tail_fraction", spec.tail_fraction)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn grid(&self) -> Result<GridSpec> {
        let d = GridSpec::default();
        let g = GridSpec {
            x_range: (
                self.parse_or("grid_x_min", d.x_range.0)?,
                self.parse_or("grid_x_max", d.x_range.1)?,
            ),
            xdot_range: (
                self.parse_or("grid_xdot_min", d.xdot_range.0)?,
                self.parse_or("grid_xdot_max", d.xdot_range.1)?,
            ),
            v0: self.parse_or("v0", d.v0)?,
            nx: self.parse_or("nx", d.nx)?,
            ny: self.parse_or("ny", d.ny)?,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn basin(&self, seed: u64) -> Result<BasinConfig> {
        let mut b = BasinConfig::new(seed);
        b.n_cycles = self.parse_or("n_cycles", b.n_cycles)?;
        b.test_fraction = self.parse_or("test_fraction", b.test_fraction)?;
        b.tail_fraction = self.parse_or("tail_fraction", b.tail_fraction)?;
        b.cluster_tol = self.parse_or("cluster_tol", b.cluster_tol)?;
        b.match_tol = self.parse_or("match_tol", b.match_tol)?;
        b.integrator = self.integrator()?;
        b.chaos = self.chaos(seed)?;
        b.validate()?;
        Ok(b)
    }

    /// Comma-separated list value.
    pub fn list(&self, key: &str) -> Vec<String> {
        self.get(key)
            .map(|s| {
                s.split(',')
                    .map(|t| t.trim().to_string())
                    .filter(|t| !t.is_empty())
                    .collect()
            })
            .unwrap_or_default()
    }
}
