//! The 0-1 test for chaos.
//!
//! A scalar series `x_j` is mapped to translation coordinates
//! `p_n = Σ x_j cos(jc)`, `q_n = Σ x_j sin(jc)`. Regular dynamics keep
//! `(p, q)` bounded, chaotic dynamics make it diffuse. The growth rate of the
//! mean-square displacement `M_n` is measured by its correlation `K_c` with
//! the lag `n`, and the median over random `c` decides the class.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Shortest series accepted by [`classify`].
pub const MIN_SERIES_LEN: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chaos01Config {
    /// Number of random frequencies `c`.
    pub n_c: usize,
    /// Half-open interval `[lo, hi)` the frequencies are drawn from.
    pub c_support: (f64, f64),
    /// Largest lag used for `M_n`, as a fraction of the series length.
    pub cut_fraction: f64,
    pub seed: u64,
    /// `K` above this is chaotic.
    pub k_chaotic: f64,
    /// `K` below this is regular.
    pub k_regular: f64,
}

impl Chaos01Config {
    pub fn new(seed: u64) -> Self {
        Self {
            n_c: 100,
            c_support: (0.0, TAU),
            cut_fraction: 0.1,
            seed,
            k_chaotic: 0.8,
            k_regular: 0.2,
        }
    }

    /// Support `(π/5, 4π/5)`, which avoids the resonances at `c ≈ 0` and `c ≈ π`.
    pub fn with_restricted_support(mut self) -> Self {
        self.c_support = (std::f64::consts::PI / 5.0, 4.0 * std::f64::consts::PI / 5.0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0 < self.k_regular && self.k_regular < self.k_chaotic && self.k_chaotic < 1.0) {
            return Err(Error::invalid("thresholds must satisfy 0 < k_regular < k_chaotic < 1"));
        }
        if !(self.cut_fraction > 0.0 && self.cut_fraction <= 0.5) {
            return Err(Error::invalid("cut_fraction must lie in (0, 0.5]"));
        }
        if self.n_c == 0 {
            return Err(Error::invalid("n_c must be at least 1"));
        }
        let (lo, hi) = self.c_support;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::invalid("c_support must be a finite interval with lo < hi"));
        }
        Ok(())
    }

    /// The `n_c` frequencies, drawn up front from the seeded stream.
    pub fn draw_frequencies(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (lo, hi) = self.c_support;
        (0..self.n_c).map(|_| rng.gen_range(lo..hi)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynamicsClass {
    Regular,
    Chaotic,
    Inconclusive,
}

impl DynamicsClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            DynamicsClass::Regular => "regular",
            DynamicsClass::Chaotic => "chaotic",
            DynamicsClass::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for DynamicsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chaos01Result {
    /// Median of `k_per_c`.
    pub k_median: f64,
    pub k_per_c: Vec<f64>,
    pub class: DynamicsClass,
}

/// Translation coordinates `(p_n, q_n)` for `n = 1..=N`.
pub fn translation_coords(series: &[f64], c: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = Vec::with_capacity(series.len());
    let mut q = Vec::with_capacity(series.len());
    let (mut ps, mut qs) = (0.0, 0.0);
    for (j, &x) in series.iter().enumerate() {
        let (s, co) = ((j + 1) as f64 * c).sin_cos();
        ps += x * co;
        qs += x * s;
        p.push(ps);
        q.push(qs);
    }
    (p, q)
}

/// Largest lag used for a series of length `n`.
pub fn max_lag(n: usize, cut_fraction: f64) -> usize {
    (cut_fraction * n as f64).floor() as usize
}

/// Mean-square displacement `M_n` for lags `n = 1..=⌊cut_fraction·N⌋`.
pub fn mean_square_displacement(p: &[f64], q: &[f64], cut_fraction: f64) -> Result<Vec<f64>> {
    if p.len() != q.len() {
        return Err(Error::invalid("p and q must have equal length"));
    }
    let n = p.len();
    let lags = max_lag(n, cut_fraction);
    if lags < 2 || lags >= n {
        return Err(Error::SeriesTooShort {
            len: n,
            min: (2.0 / cut_fraction).ceil() as usize,
        });
    }
    let m = (1..=lags)
        .map(|lag| {
            let count = n - lag;
            let sum: f64 = (0..count)
                .map(|j| {
                    let dp = p[j + lag] - p[j];
                    let dq = q[j + lag] - q[j];
                    dp * dp + dq * dq
                })
                .sum();
            sum / count as f64
        })
        .collect();
    Ok(m)
}

/// Pearson correlation between `lags` and `m`; zero when `m` is flat.
pub fn k_statistic(m: &[f64], lags: &[f64]) -> Result<f64> {
    if m.len() != lags.len() || m.len() < 2 {
        return Err(Error::invalid("m and lags must have equal length of at least 2"));
    }
    let len = m.len() as f64;
    let mean_l = lags.iter().sum::<f64>() / len;
    let mean_m = m.iter().sum::<f64>() / len;
    let (mut cov, mut var_l, mut var_m) = (0.0, 0.0, 0.0);
    for (&l, &v) in lags.iter().zip(m) {
        let dl = l - mean_l;
        let dm = v - mean_m;
        cov += dl * dm;
        var_l += dl * dl;
        var_m += dm * dm;
    }
    if var_l <= 0.0 {
        return Err(Error::invalid("lags have zero variance"));
    }
    // flat up to rounding of the mean
    if var_m <= (1e-14 * mean_m.abs()).powi(2) * len {
        return Ok(0.0);
    }
    Ok((cov / (var_l * var_m).sqrt()).clamp(-1.0, 1.0))
}

/// `K_c` for a single frequency.
pub fn k_for_frequency(series: &[f64], c: f64, cut_fraction: f64) -> Result<f64> {
    let (p, q) = translation_coords(series, c);
    let m = mean_square_displacement(&p, &q, cut_fraction)?;
    let lags: Vec<f64> = (1..=m.len()).map(|n| n as f64).collect();
    k_statistic(&m, &lags)
}

/// Three-way class from the median statistic.
pub fn class_for(k: f64, cfg: &Chaos01Config) -> DynamicsClass {
    if k > cfg.k_chaotic {
        DynamicsClass::Chaotic
    } else if k < cfg.k_regular {
        DynamicsClass::Regular
    } else {
        DynamicsClass::Inconclusive
    }
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs the full test on a scalar series.
pub fn classify(series: &[f64], cfg: &Chaos01Config) -> Result<Chaos01Result> {
    classify_with(series, &cfg.draw_frequencies(), cfg)
}

/// Same as [`classify`] with an explicit frequency set.
pub fn classify_with(series: &[f64], frequencies: &[f64], cfg: &Chaos01Config) -> Result<Chaos01Result> {
    cfg.validate()?;
    if series.len() < MIN_SERIES_LEN {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: MIN_SERIES_LEN,
        });
    }
    if let Some(index) = series.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    if frequencies.is_empty() {
        return Err(Error::invalid("at least one frequency is required"));
    }
    let k_per_c = frequencies
        .iter()
        .map(|&c| k_for_frequency(series, c, cfg.cut_fraction))
        .collect::<Result<Vec<_>>>()?;
    let k_median = median(&k_per_c);
    Ok(Chaos01Result {
        k_median,
        class: class_for(k_median, cfg),
        k_per_c,
    })
}
