//! Command-line front end.
//!
//! [`execute`] does all the work and returns what should be printed and
//! written, so the binary is a thin shell around it.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::basins::compute_basins;
use crate::bifurcation::{sweep_with, OnDivergence};
use crate::chaos01::classify;
use crate::config::RunConfig;
use crate::csv;
use crate::error::{Error, Result};
use crate::integrator::{run_orbit, tail_len};
use crate::model::optimal_angle;

#[derive(Debug, Parser)]
#[command(name = "harvester", version, about = "Bistable energy harvester dynamics toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (stdout when omitted, except for `basin`).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Seed for the 0-1 test frequency draws.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Worker threads for basin maps (0 = all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Parameter preset: paper-s3, symmetric, a35 or a-4.
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Option<String>,

    /// Override a configuration key; may be repeated.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Tabulate U(x) and F_r(x).
    Potential,
    /// Print the sloping angle that equalises the wells, in degrees.
    OptimalAngle,
    /// Forward or backward bifurcation sweep.
    Bifurcate,
    /// Basin-of-attraction map plus attractor registry.
    Basin,
    /// Relative basin areas for one or more scenarios.
    Areas,
    /// Run the 0-1 test on a file of scalars or a simulated voltage series.
    ChaosTest,
}

/// Text to print plus files to write.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub files: Vec<(PathBuf, String)>,
}

impl Outcome {
    fn table(out: Option<&Path>, text: String) -> Self {
        match out {
            Some(p) => Outcome {
                stdout: String::new(),
                files: vec![(p.to_path_buf(), text)],
            },
            None => Outcome {
                stdout: text,
                files: Vec::new(),
            },
        }
    }

    pub fn write_files(&self) -> Result<()> {
        for (path, text) in &self.files {
            std::fs::write(path, text)?;
        }
        Ok(())
    }
}

/// Assembles the run configuration: file, then flags, then `--set` pairs.
pub fn build_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::new(),
    };
    if let Some(p) = &cli.preset {
        cfg.set("preset", p)?;
    }
    if let Some(s) = cli.seed {
        cfg.set("seed", &s.to_string())?;
    }
    if let Some(w) = cli.workers {
        cfg.set("workers", &w.to_string())?;
    }
    if let Some(o) = &cli.out {
        cfg.set("out", &o.to_string_lossy())?;
    }
    for pair in &cli.overrides {
        cfg.set_pair(pair)?;
    }
    Ok(cfg)
}

/// Path of the registry file written next to a basin table.
pub fn registry_path(basin_out: &Path) -> PathBuf {
    let stem = basin_out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "basin".into());
    basin_out.with_file_name(format!("{stem}.registry.csv"))
}

pub fn execute(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let workers: usize = cfg.parse_or("workers", 0)?;
    with_workers(workers, || run_command(command, cfg))
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
    pool.install(f)
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T>(_workers: usize, f: impl FnOnce() -> Result<T>) -> Result<T> {
    f()
}

fn run_command(command: Command, cfg: &RunConfig) -> Result<Outcome> {
    let out = cfg.get("out").map(PathBuf::from);
    match command {
        Command::Potential => {
            let params = cfg.params()?;
            let text = csv::potential_table(
                &params,
                cfg.parse_or("x_min", -2.0)?,
                cfg.parse_or("x_max", 2.0)?,
                cfg.parse_or("points", 401)?,
            )?;
            Ok(Outcome::table(out.as_deref(), text))
        }
        Command::OptimalAngle => {
            let params = cfg.params()?;
            let deg = optimal_angle(params.delta, params.p)?.to_degrees() + 0.0;
            Ok(Outcome {
                stdout: format!("{deg:.4}\n"),
                files: Vec::new(),
            })
        }
        Command::Bifurcate => {
            let params = cfg.params()?;
            let spec = cfg.sweep()?;
            let d = sweep_with(
                &params,
                &spec,
                &cfg.initial_condition()?,
                &cfg.integrator()?,
                OnDivergence::Record,
            )?;
            Ok(Outcome::table(out.as_deref(), csv::bifurcation_table(&d)))
        }
        Command::Basin => {
            let out = out.ok_or_else(|| Error::invalid("basin writes two files; give --out"))?;
            let seed = cfg.require_seed()?;
            let map = compute_basins(&cfg.params()?, &cfg.grid()?, &cfg.basin(seed)?)?;
            Ok(Outcome {
                stdout: String::new(),
                files: vec![
                    (registry_path(&out), csv::registry_table(&map)),
                    (out, csv::basin_table(&map)),
                ],
            })
        }
        Command::Areas => {
            let mut text = String::from(csv::AREAS_HEADER);
            let inputs = cfg.list("inputs");
            if !inputs.is_empty() {
                for item in inputs {
                    let (name, path) = match item.split_once('=') {
                        Some((n, p)) => (n.to_string(), PathBuf::from(p)),
                        None => {
                            let p = PathBuf::from(&item);
                            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned());
                            (stem.unwrap_or(item.clone()), p)
                        }
                    };
                    let reg = registry_path(&path);
                    let colors = if reg.exists() {
                        csv::read_registry_colors(&std::fs::read_to_string(&reg)?)?
                    } else {
                        Default::default()
                    };
                    text.push_str(&csv::areas_from_basin_table(
                        &name,
                        &std::fs::read_to_string(&path)?,
                        &colors,
                    )?);
                }
            } else {
                let seed = cfg.require_seed()?;
                let base = cfg.params()?;
                let grid = cfg.grid()?;
                let bcfg = cfg.basin(seed)?;
                let amplitudes = cfg.list("amplitudes");
                if amplitudes.is_empty() {
                    let name = cfg.get("preset").unwrap_or("paper-s3");
                    csv::push_area_rows(&mut text, name, &compute_basins(&base, &grid, &bcfg)?);
                }
                for a in amplitudes {
                    let f: f64 = a
                        .parse()
                        .map_err(|_| Error::Parse(format!("`amplitudes`: cannot parse `{a}`")))?;
                    let params = crate::model::HarvesterParams { f, ..base };
                    params.validate()?;
                    csv::push_area_rows(&mut text, &format!("f={a}"), &compute_basins(&params, &grid, &bcfg)?);
                }
            }
            Ok(Outcome::table(out.as_deref(), text))
        }
        Command::ChaosTest => {
            let seed = cfg.require_seed()?;
            let chaos = cfg.chaos(seed)?;
            let series = match cfg.get("series") {
                Some(path) => csv::read_series(&std::fs::read_to_string(path)?)?,
                None => {
                    let n_cycles = cfg.parse_or("n_cycles", 1000)?;
                    let fraction = cfg.parse_or("test_fraction", 0.5)?;
                    if !(fraction > 0.0 && fraction <= 1.0) {
                        return Err(Error::invalid("test_fraction must lie in (0, 1]"));
                    }
                    let orbit = run_orbit(
                        &cfg.params()?,
                        &cfg.initial_condition()?,
                        n_cycles,
                        fraction,
                        &cfg.integrator()?,
                    )?;
                    let v = orbit.series.voltages();
                    v[v.len() - tail_len(v.len(), fraction)..].to_vec()
                }
            };
            let r = classify(&series, &chaos)?;
            Ok(Outcome {
                stdout: format!("K = {:.4}\nclass = {}\n", r.k_median, r.class),
                files: Vec::new(),
            })
        }
    }
}

/// The machine-parsable line printed on failure.
pub fn error_line(e: &Error) -> String {
    let msg = e.to_string().replace('\n', " ");
    format!("error: kind={} message={msg}", e.kind())
}

/// Parses arguments, runs, writes outputs. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = build_config(&cli)
        .and_then(|cfg| execute(cli.command, &cfg))
        .and_then(|o| {
            o.write_files()?;
            Ok(o)
        });
    match result {
        Ok(o) => {
            print!("{}", o.stdout);
            0
        }
        Err(e) => {
            eprintln!("{}", error_line(&e));
            1
        }
    }
}
