use std::f64::consts::PI;

use harvester_core::basins::{
    compute_basins, fingerprint, relative_areas, BasinConfig, BasinMap, EnergyClass, GridSpec, Label, Side,
    WellGeometry, WellMembership,
};
use harvester_core::integrator::{integrate, run_orbit, tail_len, IntegratorConfig};
use harvester_core::{HarvesterParams, InitialCondition, State};

fn small_run(params: &HarvesterParams, n: usize, cycles: usize) -> BasinMap {
    let cfg = BasinConfig {
        n_cycles: cycles,
        ..BasinConfig::new(2024)
    };
    compute_basins(params, &GridSpec::square(n), &cfg).unwrap()
}

fn check_map_invariants(map: &BasinMap) {
    assert_eq!(map.labels.len(), map.grid.len());
    assert_eq!(map.k.len(), map.grid.len());
    for l in &map.labels {
        if let Label::Class(id) = l {
            assert!(map.registry.get(*id).is_some());
        }
    }
    let total: usize = relative_areas(map).iter().map(|r| r.cells).sum();
    assert_eq!(total, map.grid.len());
    let entries = &map.registry.entries;
    for (i, a) in entries.iter().enumerate() {
        assert_eq!(a.id as usize, i);
        assert_eq!(a.fingerprint.period, a.fingerprint.points.len());
        for b in entries {
            let tol = map.registry.tol;
            assert_eq!(a.fingerprint.matches(&b.fingerprint, tol), b.fingerprint.matches(&a.fingerprint, tol));
            assert_eq!(a.fingerprint.matches(&b.fingerprint, tol), a.id == b.id);
        }
    }
}

#[test]
fn symmetric_low_forcing_has_mirrored_well_attractors() {
    let params = HarvesterParams {
        f: 0.019,
        ..HarvesterParams::symmetric()
    };
    let cycles = 300;
    let map = small_run(&params, 8, cycles);
    check_map_invariants(&map);

    let geometry = WellGeometry::from_params(&params).unwrap();
    let cfg = IntegratorConfig::default();
    let half = params.period() / 2.0;
    let mut left_seen = 0;
    for entry in &map.registry.entries {
        if entry.fingerprint.well != WellMembership::Left {
            continue;
        }
        left_seen += 1;
        let cell = map.labels.iter().position(|l| *l == Label::Class(entry.id)).unwrap();
        let ic = InitialCondition::at_rest(map.grid.initial_state(cell));
        // sample the same orbit half a forcing period later
        let shifted = integrate(&params, &ic, half, &cfg).unwrap().last().unwrap().1;
        let orbit = run_orbit(&params, &InitialCondition::new(shifted, PI), cycles, 0.1, &cfg).unwrap();
        let s = &orbit.series.samples;
        let tail: Vec<State> = s[s.len() - tail_len(s.len(), 0.1)..].iter().map(|st| -*st).collect();
        let mirrored = fingerprint(&tail, None, &geometry, 1e-3).unwrap();
        let partner = map.registry.entries.iter().find(|e| {
            e.fingerprint.well == WellMembership::Right
                && e.fingerprint.period == mirrored.period
                && e.fingerprint
                    .points
                    .iter()
                    .zip(&mirrored.points)
                    .all(|(a, b)| (a.0 - b.0).abs() < 1e-5 && (a.1 - b.1).abs() < 1e-5)
        });
        assert!(partner.is_some(), "no mirror for class {}", entry.id);
    }
    assert!(left_seen > 0);
    assert!(map.registry.entries.iter().any(|e| e.color == "red"));
    assert!(map.registry.entries.iter().any(|e| e.color == "blue"));
}

#[test]
fn reruns_give_identical_maps() {
    let params = HarvesterParams {
        f: 0.083,
        ..HarvesterParams::symmetric()
    };
    let a = small_run(&params, 6, 300);
    let b = small_run(&params, 6, 300);
    assert_eq!(a.labels, b.labels);
    assert_eq!(a.registry, b.registry);
    assert_eq!(
        a.k.iter().map(|k| k.to_bits()).collect::<Vec<_>>(),
        b.k.iter().map(|k| k.to_bits()).collect::<Vec<_>>()
    );
    check_map_invariants(&a);
}

#[test]
fn fractions_partition_the_grid() {
    let params = HarvesterParams {
        f: 0.083,
        ..HarvesterParams::symmetric()
    };
    let map = small_run(&params, 5, 300);
    let sum: f64 = relative_areas(&map).iter().map(|r| r.fraction).sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

#[test]
fn strong_forcing_is_one_interwell_orbit() {
    let params = HarvesterParams {
        f: 0.275,
        ..HarvesterParams::symmetric()
    };
    let cfg = IntegratorConfig::default();
    let orbit = run_orbit(&params, &InitialCondition::default(), 1000, 0.1, &cfg).unwrap();
    let s = &orbit.series.samples;
    let fp = fingerprint(
        &s[s.len() - 100..],
        Some(orbit.x_range),
        &WellGeometry::from_params(&params).unwrap(),
        1e-3,
    )
    .unwrap();
    assert_eq!(fp.period, 1);
    assert_eq!(fp.well, WellMembership::InterWell);
    assert_eq!(fp.energy, EnergyClass::High);
}

#[test]
fn steep_slope_low_forcing_is_one_positive_well_orbit() {
    let params = HarvesterParams {
        f: 0.019,
        ..HarvesterParams::baseline().with_phi_degrees(35.0)
    };
    let map = small_run(&params, 6, 300);
    check_map_invariants(&map);
    assert_eq!(map.registry.len(), 1);
    let e = &map.registry.entries[0];
    assert_eq!((e.fingerprint.well, e.fingerprint.energy), (WellMembership::SingleWell, EnergyClass::Low));
    assert_eq!(e.fingerprint.side(), Some(Side::Positive));
    assert_eq!(e.color, "red");
    assert_eq!(map.color_fraction("red"), 1.0);
}

#[test]
fn invalid_inputs_are_rejected() {
    let p = HarvesterParams::baseline();
    let bad_grid = GridSpec {
        nx: 1,
        ..GridSpec::square(4)
    };
    assert!(compute_basins(&p, &bad_grid, &BasinConfig::new(1)).is_err());
    // half of 150 cycles is too short a window for the 0-1 test
    let short = BasinConfig {
        n_cycles: 150,
        ..BasinConfig::new(1)
    };
    assert!(compute_basins(&p, &GridSpec::square(4), &short).is_err());
}
