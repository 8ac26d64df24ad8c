//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Results come back as flat `Float64Array`s so the page can plot them
//! without any serialization layer. Angles are in degrees.

use harvester_core::bifurcation::{sweep_with, Direction, OnDivergence, SweepParameter, SweepSpec};
use harvester_core::chaos01::{classify, Chaos01Config, DynamicsClass};
use harvester_core::integrator::{run_orbit, tail_len, IntegratorConfig};
use harvester_core::model::{equilibria, optimal_angle, potential_energy};
use harvester_core::{Error, HarvesterParams, InitialCondition};
use wasm_bindgen::prelude::*;

fn js_err(e: Error) -> JsValue {
    JsValue::from_str(&format!("{}: {e}", e.kind()))
}

fn params(f: f64, omega: f64, delta: f64, phi_deg: f64) -> Result<HarvesterParams, JsValue> {
    let p = HarvesterParams {
        f,
        omega,
        delta,
        ..HarvesterParams::baseline()
    }
    .with_phi_degrees(phi_deg);
    p.validate().map_err(js_err)?;
    Ok(p)
}

/// Sloping angle in degrees that equalises the wells.
#[wasm_bindgen]
pub fn optimal_angle_deg(delta: f64, p: f64) -> Result<f64, JsValue> {
    optimal_angle(delta, p).map(f64::to_degrees).map_err(js_err)
}

/// `[x0, U0, x1, U1, ...]` on `n` points of `[x_min, x_max]`.
#[wasm_bindgen]
pub fn potential_curve(delta: f64, phi_deg: f64, x_min: f64, x_max: f64, n: usize) -> Result<Vec<f64>, JsValue> {
    if !(x_min < x_max) || n < 2 {
        return Err(JsValue::from_str("need x_min < x_max and n >= 2"));
    }
    let p = params(0.0, 1.0, delta, phi_deg)?;
    Ok((0..n)
        .flat_map(|i| {
            let x = (x_min * (n - 1 - i) as f64 + x_max * i as f64) / (n - 1) as f64;
            [x, potential_energy(&p, x)]
        })
        .collect())
}

/// Equilibrium displacements, ascending.
#[wasm_bindgen]
pub fn equilibrium_points(delta: f64, phi_deg: f64) -> Result<Vec<f64>, JsValue> {
    equilibria(&params(0.0, 1.0, delta, phi_deg)?).map_err(js_err)
}

/// Amplitude sweep. Returns `[f, v, f, v, ...]` with one pair per steady
/// voltage sample; diverged points are skipped.
#[wasm_bindgen]
pub fn amplitude_sweep(
    omega: f64,
    delta: f64,
    phi_deg: f64,
    f_lo: f64,
    f_hi: f64,
    n_points: usize,
    n_cycles: usize,
    backward: bool,
) -> Result<Vec<f64>, JsValue> {
    let base = params(f_lo, omega, delta, phi_deg)?;
    let direction = if backward { Direction::Backward } else { Direction::Forward };
    let spec = SweepSpec {
        n_points,
        n_cycles,
        ..SweepSpec::new(SweepParameter::Amplitude, f_lo, f_hi, direction)
    };
    let d = sweep_with(
        &base,
        &spec,
        &InitialCondition::default(),
        &IntegratorConfig::default(),
        OnDivergence::Record,
    )
    .map_err(js_err)?;
    Ok(d.values
        .iter()
        .zip(&d.samples)
        .flat_map(|(f, s)| s.iter().flat_map(move |v| [*f, *v]))
        .collect())
}

/// 0-1 test on the second half of the voltage Poincaré series started from
/// `(x0, xdot0, 0)`. Returns `[K, class]` with class 0 regular, 1 chaotic,
/// 2 inconclusive.
#[wasm_bindgen]
pub fn chaos_test(
    f: f64,
    omega: f64,
    delta: f64,
    phi_deg: f64,
    x0: f64,
    xdot0: f64,
    n_cycles: usize,
    seed: u32,
) -> Result<Vec<f64>, JsValue> {
    let p = params(f, omega, delta, phi_deg)?;
    let ic = InitialCondition::at_rest(harvester_core::State::new(x0, xdot0, 0.0));
    let orbit = run_orbit(&p, &ic, n_cycles, 0.5, &IntegratorConfig::default()).map_err(js_err)?;
    let v = orbit.series.voltages();
    let tail = &v[v.len() - tail_len(v.len(), 0.5)..];
    let r = classify(tail, &Chaos01Config::new(seed as u64)).map_err(js_err)?;
    let class = match r.class {
        DynamicsClass::Regular => 0.0,
        DynamicsClass::Chaotic => 1.0,
        DynamicsClass::Inconclusive => 2.0,
    };
    Ok(vec![r.k_median, class])
}
