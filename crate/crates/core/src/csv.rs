//! Text output formats: number formatting and the CSV tables written by the
//! command-line tool.
//!
//! All tables use `,` separators, LF line endings and a header row.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::basins::{relative_areas, BasinMap, Label};
use crate::bifurcation::BifurcationDiagram;
use crate::error::{Error, Result};
use crate::model::{potential_energy, restoring_force, HarvesterParams};

/// Shortest decimal that round-trips, padded with trailing zeros to at least
/// 9 significant digits.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let mut s = format!("{x}");
    let sig = significant_digits(&s);
    if sig < 9 {
        if !s.contains('.') {
            s.push('.');
        }
        s.extend(std::iter::repeat('0').take(9 - sig));
    }
    s
}

fn significant_digits(s: &str) -> usize {
    let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    let trimmed = digits.trim_start_matches('0');
    if trimmed.is_empty() {
        // zero: count the zeros that are shown, at least one
        digits.len().max(1)
    } else {
        trimmed.len()
    }
}

/// Plain decimal with exactly `sig` significant digits.
pub fn fmt_sig(x: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return format!("{:.*}", sig - 1, 0.0);
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();

    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-exp - 1) as usize));
        out.push_str(&digits);
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            out.push_str(&digits);
            out.extend(std::iter::repeat('0').take(int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// Significant digits used for bifurcation samples.
pub const BIFURCATION_DIGITS: usize = 12;

/// `x,U,F_r` on `n` evenly spaced points of `[lo, hi]`.
pub fn potential_table(params: &HarvesterParams, lo: f64, hi: f64, n: usize) -> Result<String> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return Err(Error::invalid("potential grid needs lo < hi and at least 2 points"));
    }
    let mut out = String::from("x,U,F_r\n");
    for i in 0..n {
        let x = (lo * (n - 1 - i) as f64 + hi * i as f64) / (n - 1) as f64;
        let _ = writeln!(
            out,
            "{},{},{}",
            fmt_num(x),
            fmt_num(potential_energy(params, x)),
            fmt_num(restoring_force(params, x))
        );
    }
    Ok(out)
}

/// Bifurcation rows in sweep order. A diverged point gets a single row with
/// empty sample fields and the flag set.
pub fn bifurcation_table(d: &BifurcationDiagram) -> String {
    let mut out = String::from("param_value,sample_index,v_sample,diverged\n");
    for (i, &value) in d.values.iter().enumerate() {
        let shown = fmt_sig(d.parameter.to_display(value), BIFURCATION_DIGITS);
        if d.diverged[i] {
            let _ = writeln!(out, "{shown},,,1");
            continue;
        }
        for (k, v) in d.samples[i].iter().enumerate() {
            let _ = writeln!(out, "{shown},{k},{},0", fmt_sig(*v, BIFURCATION_DIGITS));
        }
    }
    out
}

/// `x0,xdot0,label,K` in grid-scan order.
pub fn basin_table(map: &BasinMap) -> String {
    let mut out = String::from("x0,xdot0,label,K\n");
    for (i, (label, k)) in map.labels.iter().zip(&map.k).enumerate() {
        let (x0, xdot0) = map.grid.point(i);
        let _ = writeln!(out, "{},{},{label},{}", fmt_num(x0), fmt_num(xdot0), fmt_num(*k));
    }
    out
}

/// One row per registered attractor. `points` lists the canonical Poincaré
/// points as `x:xdot` pairs separated by `;`.
pub fn registry_table(map: &BasinMap) -> String {
    let mut out = String::from("class_id,period,well,energy,color,points\n");
    for e in &map.registry.entries {
        let fp = &e.fingerprint;
        let points: Vec<String> = fp
            .points
            .iter()
            .map(|(x, y)| format!("{}:{}", fmt_num(*x), fmt_num(*y)))
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            e.id,
            fp.period,
            fp.well.as_str(),
            fp.energy.as_str(),
            e.color,
            points.join(";")
        );
    }
    out
}

/// Appends `scenario,class,fraction` rows for one map.
pub fn push_area_rows(out: &mut String, scenario: &str, map: &BasinMap) {
    for row in relative_areas(map) {
        let _ = writeln!(out, "{scenario},{},{}", row.name, fmt_num(row.fraction));
    }
}

pub const AREAS_HEADER: &str = "scenario,class,fraction\n";

/// Relative areas from a saved basin table, naming classes through an
/// optional `class id → colour` map (see [`read_registry_colors`]).
pub fn areas_from_basin_table(
    scenario: &str,
    basin_csv: &str,
    colors: &BTreeMap<u32, String>,
) -> Result<String> {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    let mut total = 0usize;
    for (n, line) in data_lines(basin_csv, "x0,xdot0,label,K")? {
        let label_field = line
            .split(',')
            .nth(2)
            .ok_or_else(|| Error::Parse(format!("line {n}: expected 4 fields")))?;
        let label: Label = label_field
            .parse()
            .map_err(|_| Error::Parse(format!("line {n}: bad label `{label_field}`")))?;
        *counts.entry(label).or_insert(0) += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::Parse("basin table has no rows".into()));
    }
    let mut out = String::new();
    for (label, cells) in counts {
        let name = match label {
            Label::Class(id) => colors.get(&id).cloned().unwrap_or_else(|| id.to_string()),
            Label::Chaotic => "gray".to_string(),
            other => other.to_string(),
        };
        let _ = writeln!(out, "{scenario},{name},{}", fmt_num(cells as f64 / total as f64));
    }
    Ok(out)
}

/// `class id → colour` from a registry table.
pub fn read_registry_colors(registry_csv: &str) -> Result<BTreeMap<u32, String>> {
    let mut colors = BTreeMap::new();
    for (n, line) in data_lines(registry_csv, "class_id,period,well,energy,color,points")? {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!("registry line {n}: expected 6 fields")));
        }
        let id: u32 = fields[0]
            .parse()
            .map_err(|_| Error::Parse(format!("registry line {n}: bad class id")))?;
        colors.insert(id, fields[4].to_string());
    }
    Ok(colors)
}

fn data_lines<'a>(text: &'a str, header: &str) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == header => {}
        _ => return Err(Error::Parse(format!("expected header `{header}`"))),
    }
    Ok(lines
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty()))
}

/// Scalars, one per line. Blank lines and lines starting with `#` are
/// skipped, as is a non-numeric first line.
pub fn read_series(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => out.push(v),
            Err(_) if i == 0 => continue,
            Err(_) => return Err(Error::Parse(format!("line {}: `{line}` is not a number", i + 1))),
        }
    }
    Ok(out)
}
