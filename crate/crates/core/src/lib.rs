//! Simulation and nonlinear analysis of symmetric and asymmetric bistable
//! piezo-magneto-elastic energy harvesters.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`]: governing equations, restoring force, potential, equilibria,
//!   optimal sloping angle.
//! * [`integrator`]: adaptive Dormand–Prince 5(4) with dense output and
//!   stroboscopic (Poincaré) sampling.
//! * [`chaos01`]: the 0-1 test for chaos.
//! * [`bifurcation`]: forward/backward parameter sweeps with state continuation.
//! * [`basins`]: basins of attraction, attractor registry and area statistics.
//! * [`csv`] and [`config`]: file formats and flat `key = value` configuration.
//! * `cli` (feature `cli`): the `harvester` command-line tool.

pub mod basins;
pub mod bifurcation;
pub mod chaos01;
#[cfg(feature = "cli")]
pub mod cli;
pub mod config;
pub mod csv;
pub mod error;
pub mod integrator;
pub mod model;


pub use error::{Error, Result};
pub use model::{HarvesterParams, InitialCondition, State};
