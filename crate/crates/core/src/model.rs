//! Lumped-parameter electromechanical model of the bistable harvester.
//!
//! All quantities are dimensionless. The mechanical equation is a Duffing-type
//! oscillator with an optional quadratic asymmetry `delta` and a constant
//! gravity bias `p * sin(phi)`; the electrical equation is a first-order RC
//! circuit driven by the modal velocity. With `delta = 0` and `phi = 0` the
//! equations reduce term by term to the classic symmetric harvester.

use std::f64::consts::TAU;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Search window for equilibria of the restoring force.
pub const EQUILIBRIA_WINDOW: (f64, f64) = (-5.0, 5.0);
/// Two roots closer than this are reported as degenerate.
pub const DEGENERATE_ROOT_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarvesterParams {
    /// Damping ratio.
    pub xi: f64,
    /// Mechanical piezoelectric coupling.
    pub chi: f64,
    /// Reciprocal time constant of the circuit.
    pub lambda: f64,
    /// Electrical piezoelectric coupling.
    pub kappa: f64,
    /// Base excitation amplitude.
    pub f: f64,
    /// Base excitation frequency.
    pub omega: f64,
    /// Quadratic asymmetry coefficient.
    pub delta: f64,
    /// Equivalent gravity of the beam.
    pub p: f64,
    /// Sloping angle in radians. Use [`HarvesterParams::with_phi_degrees`] at I/O boundaries.
    pub phi: f64,
}

impl HarvesterParams {
    /// Fixed coefficients used throughout the bifurcation and basin studies
    /// (`xi = 0.01, chi = 0.05, lambda = 0.05, kappa = 0.5, p = 0.59, delta = 0.15`),
    /// level plane, `f = 0.115`, `omega = 0.8`.
    pub fn baseline() -> Self {
        Self {
            xi: 0.01,
            chi: 0.05,
            lambda: 0.05,
            kappa: 0.5,
            f: 0.115,
            omega: 0.8,
            delta: 0.15,
            p: 0.59,
            phi: 0.0,
        }
    }

    /// `baseline` with the asymmetry removed.
    pub fn symmetric() -> Self {
        Self {
            delta: 0.0,
            phi: 0.0,
            ..Self::baseline()
        }
    }

    pub fn with_phi_degrees(mut self, degrees: f64) -> Self {
        self.phi = degrees.to_radians();
        self
    }

    pub fn phi_degrees(&self) -> f64 {
        self.phi.to_degrees()
    }

    /// Forcing period `2π/Ω`.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// Constant gravity bias `p sin(phi)` entering the mechanical equation.
    pub fn gravity_bias(&self) -> f64 {
        self.p * self.phi.sin()
    }

    pub fn is_symmetric(&self) -> bool {
        self.delta == 0.0 && self.phi == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("xi", self.xi),
            ("chi", self.chi),
            ("lambda", self.lambda),
            ("kappa", self.kappa),
            ("f", self.f),
            ("omega", self.omega),
            ("delta", self.delta),
            ("p", self.p),
            ("phi", self.phi),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::invalid(format!("{name} must be finite")));
        }
        if !(self.omega > 0.0) {
            return Err(Error::invalid("omega must be positive"));
        }
        if !(self.lambda > 0.0) {
            return Err(Error::invalid("lambda must be positive"));
        }
        if self.xi < 0.0 || self.f < 0.0 || self.p < 0.0 {
            return Err(Error::invalid("xi, f and p must be non-negative"));
        }
        Ok(())
    }
}

impl Default for HarvesterParams {
    fn default() -> Self {
        Self::baseline()
    }
}

/// Phase-space point: modal displacement, modal velocity, load voltage.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub x: f64,
    pub xdot: f64,
    pub v: f64,
}

impl State {
    pub const fn new(x: f64, xdot: f64, v: f64) -> Self {
        Self { x, xdot, v }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.xdot.is_finite() && self.v.is_finite()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.xdot.abs()).max(self.v.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.xdot, self.v]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for State {
    type Output = State;
    fn add(self, o: State) -> State {
        State::new(self.x + o.x, self.xdot + o.xdot, self.v + o.v)
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, o: State) -> State {
        State::new(self.x - o.x, self.xdot - o.xdot, self.v - o.v)
    }
}

impl Mul<State> for f64 {
    type Output = State;
    fn mul(self, s: State) -> State {
        State::new(self * s.x, self * s.xdot, self * s.v)
    }
}

impl std::ops::Neg for State {
    type Output = State;
    fn neg(self) -> State {
        State::new(-self.x, -self.xdot, -self.v)
    }
}

/// Initial state plus the forcing phase at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialCondition {
    pub state0: State,
    /// Forcing phase in radians, always in `[0, 2π)`.
    phase0: f64,
}

impl InitialCondition {
    pub fn new(state0: State, phase0: f64) -> Self {
        Self {
            state0,
            phase0: normalize_phase(phase0),
        }
    }

    pub fn at_rest(state0: State) -> Self {
        Self::new(state0, 0.0)
    }

    pub fn phase0(&self) -> f64 {
        self.phase0
    }
}

impl Default for InitialCondition {
    fn default() -> Self {
        Self::at_rest(State::new(1.0, 0.0, 0.0))
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_phase(phase: f64) -> f64 {
    let r = phase.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Right-hand side of the harvester ODE with the forcing `f cos(Ωt + phase)`.
#[inline]
pub fn rhs_with_phase(params: &HarvesterParams, t: f64, phase: f64, s: State) -> State {
    let x = s.x;
    let accel = -2.0 * params.xi * s.xdot
        + 0.5 * x * (1.0 + 2.0 * params.delta * x - x * x)
        + params.chi * s.v
        + params.f * (params.omega * t + phase).cos()
        + params.gravity_bias();
    State::new(s.xdot, accel, -params.lambda * s.v - params.kappa * s.xdot)
}

/// Right-hand side `(ẋ, ẍ, v̇)` with zero forcing phase.
pub fn rhs(params: &HarvesterParams, t: f64, s: State) -> State {
    rhs_with_phase(params, t, 0.0, s)
}

/// Nonlinear restoring force `F_r(x) = -x(1 + 2δx - x²)/2 - p sin φ`.
pub fn restoring_force(params: &HarvesterParams, x: f64) -> f64 {
    -0.5 * x * (1.0 + 2.0 * params.delta * x - x * x) - params.gravity_bias()
}

/// Antiderivative of the restoring force with zero integration constant.
pub fn potential_energy(params: &HarvesterParams, x: f64) -> f64 {
    let x2 = x * x;
    x2 * x2 / 8.0 - params.delta * x2 * x / 3.0 - x2 / 4.0 - params.gravity_bias() * x
}

/// Stationary points of the restoring force, `(2δ ± √(4δ² + 3)) / 3`, larger first.
pub fn force_extrema(params: &HarvesterParams) -> (f64, f64) {
    force_extrema_for_delta(params.delta)
}

fn force_extrema_for_delta(delta: f64) -> (f64, f64) {
    let root = (4.0 * delta * delta + 3.0).sqrt();
    // the smaller-magnitude root via Vieta avoids cancellation
    if delta >= 0.0 {
        let x1 = (2.0 * delta + root) / 3.0;
        (x1, -1.0 / (3.0 * x1))
    } else {
        let x2 = (2.0 * delta - root) / 3.0;
        (-1.0 / (3.0 * x2), x2)
    }
}

/// All real roots of `F_r` in [`EQUILIBRIA_WINDOW`], ascending.
///
/// The cubic is split at its two stationary points, so each monotone piece
/// holds at most one root and plain bisection brackets it.
pub fn equilibria(params: &HarvesterParams) -> Result<Vec<f64>> {
    let fr = |x: f64| restoring_force(params, x);
    let (hi_ext, lo_ext) = force_extrema(params);
    let (a, b) = EQUILIBRIA_WINDOW;
    let mut knots = vec![a];
    knots.extend([lo_ext, hi_ext].into_iter().filter(|k| *k > a && *k < b));
    knots.push(b);

    let mut roots: Vec<f64> = Vec::with_capacity(3);
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (fr(lo), fr(hi));
        let root = if flo == 0.0 {
            Some(lo)
        } else if fhi == 0.0 {
            Some(hi)
        } else if flo.signum() != fhi.signum() {
            Some(bisect(&fr, lo, hi))
        } else {
            None
        };
        if let Some(r) = root {
            if roots.last().map_or(true, |last| (r - last).abs() > 0.0) {
                roots.push(r);
            }
        }
    }

    for w in roots.windows(2) {
        if w[1] - w[0] < DEGENERATE_ROOT_GAP {
            return Err(Error::DegenerateEquilibria { at: 0.5 * (w[0] + w[1]) });
        }
    }
    // a double root touching zero without a sign change sits at an extremum
    for ext in [lo_ext, hi_ext] {
        if fr(ext).abs() < 1e-12 {
            return Err(Error::DegenerateEquilibria { at: ext });
        }
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 || mid <= lo || mid >= hi {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Sloping angle (radians) that makes `F_r(x1) + F_r(x2) = 0` at the force extrema.
///
/// `sin φ = -(8δ³ + 9δ) / (27p)`.
pub fn optimal_angle(delta: f64, p: f64) -> Result<f64> {
    if !delta.is_finite() || !p.is_finite() {
        return Err(Error::invalid("delta and p must be finite"));
    }
    let num = 8.0 * delta.powi(3) + 9.0 * delta;
    if num == 0.0 {
        return Ok(0.0);
    }
    let ratio = num / (27.0 * p);
    if !ratio.is_finite() || ratio.abs() > 1.0 {
        return Err(Error::AsymmetryTooStrong { ratio });
    }
    Ok(-ratio.asin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bare(delta: f64, phi_deg: f64, p: f64) -> HarvesterParams {
        HarvesterParams {
            xi: 0.01,
            chi: 0.0,
            lambda: 0.05,
            kappa: 0.5,
            f: 0.0,
            omega: 0.8,
            delta,
            p,
            phi: phi_deg.to_radians(),
        }
    }

    #[test]
    fn rhs_fixed_point_and_origin() {
        let sym = bare(0.0, 0.0, 0.59);
        assert_eq!(rhs(&sym, 0.0, State::new(1.0, 0.0, 0.0)), State::default());
        let forced = HarvesterParams { f: 0.1, ..sym };
        let d = rhs(&forced, 0.0, State::default());
        assert_eq!(d, State::new(0.0, 0.1, 0.0));
    }

    #[test]
    fn rhs_gravity_bias_only() {
        let a = bare(0.15, -4.95, 0.59);
        let d = rhs(&a, 0.0, State::default());
        assert_eq!(d.x, 0.0);
        assert_eq!(d.v, 0.0);
        // 0.59 * sin(-4.95 deg), evaluated independently
        assert_abs_diff_eq!(d.xdot, -0.050_908_955_820_774_79, epsilon = 1e-15);
    }

    #[test]
    fn restoring_force_examples() {
        let sym = bare(0.0, 0.0, 0.59);
        assert_eq!(restoring_force(&sym, 0.0), 0.0);
        assert_eq!(restoring_force(&sym, 1.0), 0.0);
        assert_eq!(restoring_force(&sym, -1.0), 0.0);
        let a = bare(0.15, -4.95, 0.59);
        assert_abs_diff_eq!(restoring_force(&a, 0.0), 0.050_908_955_820_774_79, epsilon = 1e-15);
    }

    #[test]
    fn symmetric_double_well() {
        let sym = bare(0.0, 0.0, 0.59);
        assert_eq!(potential_energy(&sym, 0.0), 0.0);
        assert_eq!(potential_energy(&sym, 1.0), -0.125);
        assert_eq!(potential_energy(&sym, -1.0), -0.125);
    }

    #[test]
    fn force_extrema_values() {
        let (x1, x2) = force_extrema(&bare(0.0, 0.0, 0.59));
        assert_abs_diff_eq!(x1, 3f64.sqrt() / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x2, -3f64.sqrt() / 3.0, epsilon = 1e-15);
        let (x1, x2) = force_extrema(&bare(0.15, 0.0, 0.59));
        assert_abs_diff_eq!(x1, 0.685_946_527_708_231_5, epsilon = 1e-14);
        assert_abs_diff_eq!(x2, -0.485_946_527_708_231_5, epsilon = 1e-14);
        for d in [-2.0, -0.3, 0.0, 0.15, 0.45, 7.0] {
            let (x1, x2) = force_extrema_for_delta(d);
            assert!(x1 > 0.0 && x2 < 0.0);
            assert_abs_diff_eq!(x1 * x2, -1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn equilibria_examples() {
        let eq = equilibria(&bare(0.0, 0.0, 0.59)).unwrap();
        assert_eq!(eq.len(), 3);
        for (a, b) in eq.iter().zip([-1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }

        let eq = equilibria(&bare(0.15, 0.0, 0.59)).unwrap();
        let s = (0.15f64 * 0.15 + 1.0).sqrt();
        assert_eq!(eq.len(), 3);
        assert_abs_diff_eq!(eq[0], 0.15 - s, epsilon = 1e-12);
        assert_abs_diff_eq!(eq[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq[2], 0.15 + s, epsilon = 1e-12);

        // frozen from a dense sign-change scan refined with Brent's method
        let eq = equilibria(&bare(0.15, -4.95, 0.59)).unwrap();
        let expect = [-0.914_800_752_551_636_3, 0.099_823_215_180_288_33, 1.114_977_537_370_999_6];
        assert_eq!(eq.len(), 3);
        for (a, b) in eq.iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-10);
        }
        let a = bare(0.15, -4.95, 0.59);
        for r in &eq {
            assert!(restoring_force(&a, *r).abs() < 1e-12);
        }
    }

    #[test]
    fn steep_slope_is_monostable() {
        let eq = equilibria(&bare(0.15, 35.0, 0.59)).unwrap();
        assert_eq!(eq.len(), 1);
        assert_abs_diff_eq!(eq[0], 1.380_017_552_175_230_7, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_equilibria_reported() {
        // choose phi so the force extremum touches zero: F_r(x2) = 0
        let delta = 0.0;
        let (_, x2) = force_extrema_for_delta(delta);
        let g = -0.5 * x2 * (1.0 - x2 * x2);
        let p = 1.0;
        let params = HarvesterParams { phi: g.asin(), ..bare(delta, 0.0, p) };
        assert!(matches!(equilibria(&params), Err(Error::DegenerateEquilibria { .. })));
    }

    #[test]
    fn optimal_angle_examples() {
        let phi = optimal_angle(0.15, 0.59).unwrap().to_degrees();
        assert!((phi - -4.95).abs() <= 0.01, "{phi}");
        assert_eq!(optimal_angle(0.0, 0.59).unwrap(), 0.0);
        // bisection on F_r(x1) + F_r(x2) = 0 over phi (scipy brentq)
        let phi = optimal_angle(0.30, 0.59).unwrap().to_degrees();
        assert_abs_diff_eq!(phi, -10.547_513_724_834_44, epsilon = 1e-9);
    }

    #[test]
    fn optimal_angle_out_of_range() {
        assert!(matches!(optimal_angle(2.0, 0.59), Err(Error::AsymmetryTooStrong { .. })));
        assert!(matches!(optimal_angle(0.15, 0.0), Err(Error::AsymmetryTooStrong { .. })));
    }

    #[test]
    fn phase_normalization() {
        assert_eq!(normalize_phase(0.0), 0.0);
        assert_abs_diff_eq!(normalize_phase(-std::f64::consts::PI), std::f64::consts::PI);
        assert!(normalize_phase(-1e-18) < TAU);
        assert_abs_diff_eq!(normalize_phase(3.0 * TAU + 0.5), 0.5, epsilon = 1e-12);
    }
}
