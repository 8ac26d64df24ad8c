//! Time integration of the harvester equations.
//!
//! The default scheme is the Dormand–Prince 5(4) embedded pair with its
//! fourth-order continuous extension. Steps are never clamped to output
//! times; stroboscopic samples and the final state are read off the dense
//! output, so adaptivity and exact sample times coexist. A fixed-step
//! classical RK4 mode (with cubic Hermite interpolation) is kept for
//! cross-checks and convergence studies.

use crate::error::{Error, Result};
use crate::model::{normalize_phase, HarvesterParams, InitialCondition, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Adaptive Dormand–Prince 5(4).
    DormandPrince,
    /// Classical fourth-order Runge–Kutta with a fixed number of steps per forcing period.
    Rk4 { steps_per_period: usize },
}

impl Method {
    pub const DEFAULT_RK4_STEPS: usize = 512;

    pub fn rk4() -> Self {
        Method::Rk4 {
            steps_per_period: Self::DEFAULT_RK4_STEPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Largest accepted step. `None` means one twentieth of the forcing period.
    pub max_step: Option<f64>,
    /// Any state component beyond this magnitude is reported as divergence.
    pub divergence_bound: f64,
    pub method: Method,
    /// Replaces the restoring force with a linear spring `-k x`. Used to
    /// check the solvers against closed-form solutions.
    pub linear_stiffness: Option<f64>,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-6,
            atol: 1e-9,
            max_step: None,
            divergence_bound: 1e6,
            method: Method::DormandPrince,
            linear_stiffness: None,
        }
    }
}

impl IntegratorConfig {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::invalid("rtol and atol must be positive"));
        }
        if let Some(h) = self.max_step {
            if !(h > 0.0) {
                return Err(Error::invalid("max_step must be positive"));
            }
        }
        if !(self.divergence_bound > 0.0) {
            return Err(Error::invalid("divergence_bound must be positive"));
        }
        if let Some(k) = self.linear_stiffness {
            if !k.is_finite() {
                return Err(Error::invalid("linear_stiffness must be finite"));
            }
        }
        if let Method::Rk4 { steps_per_period } = self.method {
            if steps_per_period == 0 {
                return Err(Error::invalid("steps_per_period must be at least 1"));
            }
        }
        Ok(())
    }

    fn max_step_for(&self, params: &HarvesterParams) -> f64 {
        self.max_step.unwrap_or(params.period() / 20.0)
    }
}

/// Densely stored solution at the accepted step points.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, State)> {
        Some((*self.times.last()?, *self.states.last()?))
    }
}

/// Stroboscopic samples taken once per forcing period.
#[derive(Debug, Clone, PartialEq)]
pub struct PoincareSeries {
    pub period: f64,
    /// `samples[k]` is the state at `t = (k + 1) * period`.
    pub samples: Vec<State>,
    pub cycles: usize,
}

impl PoincareSeries {
    pub fn voltages(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.v).collect()
    }

    pub fn displacements(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.x).collect()
    }
}

/// Result of a stroboscopic run: the samples, the state reached at the end,
/// and the displacement range swept by the continuous trajectory over a
/// trailing observation window.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit {
    pub series: PoincareSeries,
    pub final_state: State,
    /// Forcing phase at the end of the run, in `[0, 2π)`.
    pub final_phase: f64,
    /// `(min x, max x)` over the observation window.
    pub x_range: (f64, f64),
}

// Dormand–Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// continuous extension (Hairer, Nørsett & Wanner)
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

type V3 = [f64; 3];

#[inline(always)]
fn axpy(y: &V3, terms: &[(f64, &V3)], h: f64) -> V3 {
    let mut out = *y;
    for i in 0..3 {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// Harvester right-hand side with the constant terms hoisted out.
#[derive(Debug, Clone, Copy)]
struct System {
    two_xi: f64,
    chi: f64,
    lambda: f64,
    kappa: f64,
    f: f64,
    omega: f64,
    delta2: f64,
    bias: f64,
    phase: f64,
    linear: Option<f64>,
}

impl System {
    fn new(params: &HarvesterParams, phase: f64, linear: Option<f64>) -> Self {
        Self {
            two_xi: 2.0 * params.xi,
            chi: params.chi,
            lambda: params.lambda,
            kappa: params.kappa,
            f: params.f,
            omega: params.omega,
            delta2: 2.0 * params.delta,
            bias: params.gravity_bias(),
            phase,
            linear,
        }
    }

    #[inline(always)]
    fn eval(&self, t: f64, y: &V3) -> V3 {
        let [x, xdot, v] = *y;
        let spring = match self.linear {
            None => 0.5 * x * (1.0 + self.delta2 * x - x * x),
            Some(k) => -k * x,
        };
        let accel = -self.two_xi * xdot
            + spring
            + self.chi * v
            + self.f * (self.omega * t + self.phase).cos()
            + self.bias;
        [xdot, accel, -self.lambda * v - self.kappa * xdot]
    }
}

/// Polynomial covering one accepted step.
#[derive(Debug, Clone, Copy)]
enum Dense {
    /// Dormand–Prince continuous extension coefficients.
    Dopri([V3; 5]),
    /// Cubic Hermite from endpoint values and derivatives.
    Hermite { y0: V3, y1: V3, f0: V3, f1: V3 },
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    t0: f64,
    t1: f64,
    dense: Dense,
}

impl Segment {
    fn eval(&self, t: f64) -> V3 {
        let h = self.t1 - self.t0;
        let th = (t - self.t0) / h;
        let th1 = 1.0 - th;
        match &self.dense {
            Dense::Dopri(r) => {
                let mut out = [0.0; 3];
                for i in 0..3 {
                    out[i] = r[0][i]
                        + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
                }
                out
            }
            Dense::Hermite { y0, y1, f0, f1 } => {
                let h00 = (1.0 + 2.0 * th) * th1 * th1;
                let h10 = th * th1 * th1;
                let h01 = th * th * (3.0 - 2.0 * th);
                let h11 = -th * th * th1;
                let mut out = [0.0; 3];
                for i in 0..3 {
                    out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
                }
                out
            }
        }
    }
}

/// Step-by-step driver shared by all the public entry points.
struct Solver {
    sys: System,
    cfg: IntegratorConfig,
    max_step: f64,
    t: f64,
    y: V3,
    f: V3,
    h: f64,
    /// RK4 only: index of the next step, so that `t = n * h` without drift.
    n: u64,
}

impl Solver {
    fn new(params: &HarvesterParams, ic: &InitialCondition, cfg: &IntegratorConfig) -> Result<Self> {
        params.validate()?;
        cfg.validate()?;
        if !ic.state0.is_finite() {
            return Err(Error::invalid("initial state must be finite"));
        }
        let sys = System::new(params, ic.phase0(), cfg.linear_stiffness);
        let y = ic.state0.to_array();
        let f = sys.eval(0.0, &y);
        let max_step = cfg.max_step_for(params);
        let h = match cfg.method {
            Method::DormandPrince => initial_step(&sys, &y, &f, cfg, max_step),
            Method::Rk4 { steps_per_period } => params.period() / steps_per_period as f64,
        };
        Ok(Self {
            sys,
            cfg: *cfg,
            max_step,
            t: 0.0,
            y,
            f,
            h,
            n: 0,
        })
    }

    fn state(&self) -> State {
        State::from_array(self.y)
    }

    fn step(&mut self) -> Result<Segment> {
        let seg = match self.cfg.method {
            Method::DormandPrince => self.dopri_step()?,
            Method::Rk4 { .. } => self.rk4_step(),
        };
        if !self.y.iter().all(|c| c.is_finite())
            || self.y.iter().any(|c| c.abs() > self.cfg.divergence_bound)
        {
            return Err(Error::Divergence { time: self.t });
        }
        Ok(seg)
    }

    fn rk4_step(&mut self) -> Segment {
        let h = self.h;
        let t0 = self.t;
        let y = self.y;
        let sys = &self.sys;
        let k1 = self.f;
        let k2 = sys.eval(t0 + 0.5 * h, &axpy(&y, &[(0.5, &k1)], h));
        let k3 = sys.eval(t0 + 0.5 * h, &axpy(&y, &[(0.5, &k2)], h));
        let k4 = sys.eval(t0 + h, &axpy(&y, &[(1.0, &k3)], h));
        let y1 = axpy(&y, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)], h);
        self.n += 1;
        let t1 = self.n as f64 * h;
        let f1 = sys.eval(t1, &y1);
        let seg = Segment {
            t0,
            t1,
            dense: Dense::Hermite { y0: y, y1, f0: k1, f1 },
        };
        self.t = t1;
        self.y = y1;
        self.f = f1;
        seg
    }

    fn dopri_step(&mut self) -> Result<Segment> {
        let sys = self.sys;
        let (rtol, atol) = (self.cfg.rtol, self.cfg.atol);
        let y = self.y;
        let k1 = self.f;
        let t = self.t;
        let mut h = self.h.min(self.max_step);
        let mut rejected = false;
        loop {
            let min_step = 16.0 * f64::EPSILON * t.abs().max(1.0);
            if h < min_step {
                return Err(Error::StepUnderflow { time: t, step: h });
            }
            let k2 = sys.eval(t + C2 * h, &axpy(&y, &[(A21, &k1)], h));
            let k3 = sys.eval(t + C3 * h, &axpy(&y, &[(A31, &k1), (A32, &k2)], h));
            let k4 = sys.eval(t + C4 * h, &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
            let k5 = sys.eval(
                t + C5 * h,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h),
            );
            let t1 = t + h;
            let k6 = sys.eval(
                t1,
                &axpy(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h),
            );
            let y1 = axpy(&y, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)], h);
            let k7 = sys.eval(t1, &y1);

            let mut err: f64 = 0.0;
            for i in 0..3 {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = atol + rtol * y[i].abs().max(y1[i].abs());
                err = err.max((e / sc).abs());
            }

            if err.is_finite() && err <= 1.0 {
                let mut fac = SAFETY * err.max(1e-10).powf(-0.2);
                fac = fac.clamp(FAC_MIN, FAC_MAX);
                if rejected {
                    fac = fac.min(1.0);
                }
                let mut r = [[0.0; 3]; 5];
                for i in 0..3 {
                    let ydiff = y1[i] - y[i];
                    let bspl = h * k1[i] - ydiff;
                    r[0][i] = y[i];
                    r[1][i] = ydiff;
                    r[2][i] = bspl;
                    r[3][i] = ydiff - h * k7[i] - bspl;
                    r[4][i] = h
                        * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
                }
                self.t = t1;
                self.y = y1;
                self.f = k7;
                self.h = (h * fac).min(self.max_step);
                return Ok(Segment {
                    t0: t,
                    t1,
                    dense: Dense::Dopri(r),
                });
            }
            let fac = if err.is_finite() {
                (SAFETY * err.powf(-0.2)).max(FAC_MIN)
            } else {
                FAC_MIN
            };
            h *= fac;
            rejected = true;
        }
    }
}

fn initial_step(sys: &System, y: &V3, f: &V3, cfg: &IntegratorConfig, max_step: f64) -> f64 {
    let sc = y.map(|c| cfg.atol + cfg.rtol * c.abs());
    let rms = |v: &V3| ((0..3).map(|i| (v[i] / sc[i]).powi(2)).sum::<f64>() / 3.0).sqrt();
    let d0 = rms(y);
    let d1 = rms(f);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(max_step);
    let y1 = axpy(y, &[(1.0, f)], h0);
    let f1 = sys.eval(h0, &y1);
    let df = [f1[0] - f[0], f1[1] - f[1], f1[2] - f[2]];
    let d2 = rms(&df) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(max_step)
}

/// Integrates from `t = 0` to `t_end`, recording every accepted step and the
/// exact-time state at `t_end`.
pub fn integrate(
    params: &HarvesterParams,
    ic: &InitialCondition,
    t_end: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::invalid("t_end must be positive and finite"));
    }
    let mut solver = Solver::new(params, ic, cfg)?;
    let mut times = vec![0.0];
    let mut states = vec![solver.state()];
    loop {
        let seg = solver.step()?;
        if seg.t1 < t_end {
            times.push(seg.t1);
            states.push(solver.state());
        } else {
            let y = if seg.t1 == t_end { solver.y } else { seg.eval(t_end) };
            times.push(t_end);
            states.push(State::from_array(y));
            break;
        }
    }
    Ok(Trajectory { times, states })
}

/// Integrates `n_cycles` forcing periods and samples the state at every
/// multiple of the period.
pub fn poincare(
    params: &HarvesterParams,
    ic: &InitialCondition,
    n_cycles: usize,
    cfg: &IntegratorConfig,
) -> Result<PoincareSeries> {
    Ok(run_orbit(params, ic, n_cycles, 1.0, cfg)?.series)
}

/// Like [`poincare`], additionally tracking the final state and the
/// displacement range of the continuous trajectory over the last
/// `observe_fraction` of the run.
pub fn run_orbit(
    params: &HarvesterParams,
    ic: &InitialCondition,
    n_cycles: usize,
    observe_fraction: f64,
    cfg: &IntegratorConfig,
) -> Result<Orbit> {
    if n_cycles == 0 {
        return Err(Error::invalid("n_cycles must be at least 1"));
    }
    if !(observe_fraction > 0.0 && observe_fraction <= 1.0) {
        return Err(Error::invalid("observe_fraction must lie in (0, 1]"));
    }
    let period = params.period();
    let observe_cycles = tail_len(n_cycles, observe_fraction);
    let observe_from = (n_cycles - observe_cycles) as f64 * period;

    let mut solver = Solver::new(params, ic, cfg)?;
    let mut samples = Vec::with_capacity(n_cycles);
    let mut k = 1usize;
    let mut next = period;
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    if observe_from == 0.0 {
        x_min = ic.state0.x;
        x_max = ic.state0.x;
    }

    while k <= n_cycles {
        let seg = solver.step()?;
        while k <= n_cycles && next <= seg.t1 {
            let y = if next == seg.t1 { solver.y } else { seg.eval(next) };
            samples.push(State::from_array(y));
            k += 1;
            next = k as f64 * period;
        }
        if seg.t1 > observe_from {
            let end = if k > n_cycles { n_cycles as f64 * period } else { seg.t1 };
            let start = seg.t0.max(observe_from);
            for j in 0..=4 {
                let t = start + (end - start) * (j as f64 / 4.0);
                let x = seg.eval(t)[0];
                x_min = x_min.min(x);
                x_max = x_max.max(x);
            }
        }
    }

    let final_state = *samples.last().expect("n_cycles >= 1");
    // whole periods leave the forcing phase unchanged
    let final_phase = normalize_phase(ic.phase0());
    Ok(Orbit {
        series: PoincareSeries {
            period,
            samples,
            cycles: n_cycles,
        },
        final_state,
        final_phase,
        x_range: (x_min, x_max),
    })
}

/// Number of samples kept by [`steady_tail`]: `⌈fraction · n⌉`, at least one.
pub fn tail_len(n: usize, fraction: f64) -> usize {
    // guard against 0.1 * 1000 = 100.00000000000001
    let raw = fraction * n as f64;
    let rounded = raw.round();
    let len = if (raw - rounded).abs() <= 1e-9 * raw.abs().max(1.0) {
        rounded as usize
    } else {
        raw.ceil() as usize
    };
    len.clamp(1, n.max(1))
}

/// The final `⌈fraction · cycles⌉` samples of a series.
pub fn steady_tail(series: &PoincareSeries, fraction: f64) -> Result<PoincareSeries> {
    if series.samples.is_empty() {
        return Err(Error::invalid("empty Poincaré series"));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid("tail fraction must lie in (0, 1]"));
    }
    let n = tail_len(series.samples.len(), fraction);
    let samples = series.samples[series.samples.len() - n..].to_vec();
    Ok(PoincareSeries {
        period: series.period,
        cycles: samples.len(),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::potential_energy;
    use approx::assert_abs_diff_eq;

    fn autonomous() -> HarvesterParams {
        HarvesterParams {
            f: 0.0,
            chi: 0.0,
            kappa: 0.0,
            ..HarvesterParams::symmetric()
        }
    }

    #[test]
    fn fixed_point_stays_put() {
        let traj = integrate(
            &autonomous(),
            &InitialCondition::at_rest(State::new(1.0, 0.0, 0.0)),
            200.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        for s in &traj.states {
            assert!((s.x - 1.0).abs() < 1e-9 && s.xdot.abs() < 1e-9 && s.v.abs() < 1e-9);
        }
    }

    #[test]
    fn damped_energy_non_increasing() {
        let params = autonomous();
        let traj = integrate(
            &params,
            &InitialCondition::at_rest(State::new(0.5, 0.0, 0.0)),
            300.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        let energy: Vec<f64> = traj
            .states
            .iter()
            .map(|s| 0.5 * s.xdot * s.xdot + potential_energy(&params, s.x))
            .collect();
        for w in energy.windows(2) {
            assert!(w[1] <= w[0] + 1e-8, "{} -> {}", w[0], w[1]);
        }
        assert!(energy.last().unwrap() < &energy[0]);
    }

    #[test]
    fn trajectory_times_strictly_increase_and_end_exactly() {
        let params = HarvesterParams::baseline();
        let traj = integrate(&params, &InitialCondition::default(), 37.3, &IntegratorConfig::default())
            .unwrap();
        assert_eq!(traj.times.len(), traj.states.len());
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(*traj.times.last().unwrap(), 37.3);
    }

    #[test]
    fn poincare_sample_count_and_linear_period_one() {
        let params = HarvesterParams {
            xi: 0.5,
            f: 1e-4,
            ..HarvesterParams::symmetric()
        };
        let ic = InitialCondition::at_rest(State::new(1.0, 0.0, 0.0));
        let series = poincare(&params, &ic, 200, &IntegratorConfig::default()).unwrap();
        assert_eq!(series.samples.len(), 200);
        assert_eq!(series.cycles, 200);
        let tail = steady_tail(&series, 0.1).unwrap();
        for w in tail.samples.windows(2) {
            assert!((w[1] - w[0]).max_abs() < 1e-6);
        }
    }

    #[test]
    fn divergence_is_reported() {
        // negative damping-free quartic escape: push far outside the wells with no damping
        let params = HarvesterParams {
            xi: 0.0,
            f: 0.0,
            ..HarvesterParams::symmetric()
        };
        let cfg = IntegratorConfig {
            divergence_bound: 10.0,
            ..IntegratorConfig::default()
        };
        let err = integrate(&params, &InitialCondition::at_rest(State::new(0.0, 50.0, 0.0)), 100.0, &cfg)
            .unwrap_err();
        assert!(matches!(err, Error::Divergence { .. }), "{err}");
    }

    #[test]
    fn steady_tail_lengths() {
        let mk = |n: usize| PoincareSeries {
            period: 1.0,
            samples: (0..n).map(|i| State::new(i as f64, 0.0, 0.0)).collect(),
            cycles: n,
        };
        assert_eq!(steady_tail(&mk(1000), 0.1).unwrap().samples.len(), 100);
        let t = steady_tail(&mk(10), 0.1).unwrap();
        assert_eq!(t.samples.len(), 1);
        assert_eq!(t.samples[0].x, 9.0);
        assert_eq!(steady_tail(&mk(15), 0.1).unwrap().samples.len(), 2);
        assert!(steady_tail(&mk(0), 0.1).is_err());
    }

    #[test]
    fn rk4_matches_adaptive() {
        let params = HarvesterParams::baseline();
        let ic = InitialCondition::default();
        let a = poincare(&params, &ic, 5, &IntegratorConfig::with_tolerances(1e-10, 1e-12)).unwrap();
        let cfg = IntegratorConfig {
            method: Method::rk4(),
            ..IntegratorConfig::default()
        };
        let b = poincare(&params, &ic, 5, &cfg).unwrap();
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_abs_diff_eq!(x.x, y.x, epsilon = 1e-6);
            assert_abs_diff_eq!(x.v, y.v, epsilon = 1e-6);
        }
    }

    #[test]
    fn tail_len_rounding() {
        assert_eq!(tail_len(1000, 0.1), 100);
        assert_eq!(tail_len(300, 0.1), 30);
        assert_eq!(tail_len(10, 0.1), 1);
        assert_eq!(tail_len(11, 0.1), 2);
        assert_eq!(tail_len(5, 1.0), 5);
    }
}
