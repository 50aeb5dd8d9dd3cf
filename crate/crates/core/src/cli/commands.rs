//! Subcommand bodies. Each returns a rendered document and whether any cell failed.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::config::{Format, ScanConfig};
use super::output::{read_csv, Cell, Table};
use crate::boundary::{mirror_params, mirror_resonance_energy, polar_orientation_grid, MirrorGeometry};
use crate::dispersion::total_dispersion_with;
use crate::error::{Error, Result};
use crate::fit::{fit_scaling_exponent, local_exponents, PowerLawFit};
use crate::kinematics::NONRELATIVISTIC_LIMIT;
use crate::quadrature::QuadOptions;
use crate::resonance::{ddc_resonance_energy, inertial_resonance_signal, DdcKernelParams, DipolePair, Parity};
use crate::units::{rindler_length, unruh_temperature, RindlerRegime, CODATA, REGIME_MARGIN};

/// Tolerance on local exponents when locating the crossover.
const LAW_TOLERANCE: f64 = 0.05;

pub struct Rendered {
    pub text: String,
    pub flagged: bool,
}

fn status(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) => "domain",
        Error::Regime(_) => "regime",
        Error::Convergence { .. } => "convergence",
        Error::Configuration(_) => "configuration",
        Error::Window(_) => "window",
        Error::Fit(_) => "fit",
    }
}

fn parity_label(p: Parity) -> &'static str {
    match p {
        Parity::Symmetric => "symmetric",
        Parity::Antisymmetric => "antisymmetric",
    }
}

fn preamble(table: &mut Table, command: &str, config: &ScanConfig) -> Result<()> {
    table.meta("generator", format!("accel-qed {}", env!("CARGO_PKG_VERSION")));
    table.meta("command", command);
    table.meta("config-sha256", config.hash()?);
    table.meta("units", if config.unit_system()?.mode == crate::units::UnitMode::Si { "si" } else { "natural" });
    Ok(())
}

fn finish(table: Table, format: Format) -> Rendered {
    let flagged = table.rows.iter().any(|r| matches!(r.last(), Some(Cell::Text(s)) if s != "ok"));
    Rendered { text: table.render(format), flagged }
}

pub fn constants(accel: f64, format: Format) -> Result<Rendered> {
    let mut t = Table::new(vec!["quantity", "value", "unit"]);
    t.meta("generator", format!("accel-qed {}", env!("CARGO_PKG_VERSION")));
    t.meta("command", "constants");
    let rows = [
        ("hbar", CODATA.hbar, "J s"),
        ("c", CODATA.c, "m/s"),
        ("k_B", CODATA.k_b, "J/K"),
        ("e", CODATA.e, "C"),
        ("epsilon0", CODATA.epsilon0, "F/m"),
        ("acceleration", accel, "m/s^2"),
        ("unruh_temperature", unruh_temperature(accel)?, "K"),
        ("rindler_length", if accel > 0.0 { rindler_length(accel)? } else { f64::INFINITY }, "m"),
    ];
    for (name, value, unit) in rows {
        t.push(vec![name.into(), value.into(), unit.into()]);
    }
    Ok(Rendered { text: t.render(format), flagged: false })
}

pub fn dispersion(config: &ScanConfig, format: Format) -> Result<Rendered> {
    let u = config.unit_system()?;
    let (atom_a, atom_b) = config.internal_atoms()?;
    let opts = QuadOptions { rel_tol: config.numerics.tolerance, ..QuadOptions::default() };
    let mut cells = Vec::new();
    for r in config.geometry.separation.values() {
        for a in config.kinematics.a.values() {
            for t in config.kinematics.t.values() {
                let at = u.acceleration_in(a) * u.time_in(t);
                if at > NONRELATIVISTIC_LIMIT {
                    return Err(Error::Configuration(format!(
                        "a t / c = {at} exceeds {NONRELATIVISTIC_LIMIT} at a = {a}, t = {t}"
                    )));
                }
                cells.push((r, a, t));
            }
        }
    }
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(r, a, t)| {
            total_dispersion_with(&atom_a, &atom_b, u.length_in(r), u.acceleration_in(a), u.time_in(t), &opts)
        })
        .collect();
    let mut table = Table::new(vec!["R", "a", "t", "rest", "corr1", "corr2", "total", "quadrature_error", "status"]);
    preamble(&mut table, "dispersion", config)?;
    for (&(r, a, t), res) in cells.iter().zip(results) {
        let mut row: Vec<Cell> = vec![r.into(), a.into(), t.into()];
        match res {
            Ok(d) => {
                row.extend(
                    [d.rest_term, d.correction_a2t, d.correction_a2t2, d.total, d.quadrature_error]
                        .map(|v| Cell::Num(u.energy_out(v))),
                );
                row.push("ok".into());
            }
            Err(e) => {
                row.extend([f64::NAN; 5].map(Cell::Num));
                row.push(status(&e).into());
            }
        }
        table.push(row);
    }
    Ok(finish(table, format))
}

fn resonance_pair(config: &ScanConfig) -> Result<DipolePair> {
    let (atom_a, atom_b) = config.internal_atoms()?;
    DipolePair::new(atom_a.mu_eg, atom_b.mu_eg)
}

fn cell_params(fixed: &Option<DdcKernelParams>, separations: &[f64], omega0: f64, a: f64, tolerance: f64) -> Result<DdcKernelParams> {
    match fixed {
        Some(p) => Ok(p.clone()),
        None => DdcKernelParams::automatic(separations, omega0, a).map(|mut p| {
            p.tolerance = tolerance;
            p
        }),
    }
}

pub fn resonance(config: &ScanConfig, format: Format) -> Result<Rendered> {
    config.require_identical_atoms()?;
    let u = config.unit_system()?;
    let pair = resonance_pair(config)?;
    let state = config.correlated_state();
    let omega0 = u.frequency_in(config.atoms.a.omega0);
    let fixed = config.internal_ddc()?;
    if let Some(p) = &fixed {
        p.validate(omega0)?;
    }
    let cells: Vec<(f64, f64)> = config
        .geometry
        .separation
        .values()
        .into_iter()
        .flat_map(|z| config.kinematics.a.values().into_iter().map(move |a| (z, a)))
        .collect();
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(z, a)| {
            let (zi, ai) = (u.length_in(z), u.acceleration_in(a));
            cell_params(&fixed, &[zi], omega0, ai, config.numerics.tolerance)
                .and_then(|p| ddc_resonance_energy(&pair, &state, zi, omega0, ai, &p))
        })
        .collect();
    let mut table = Table::new(vec![
        "z", "a", "az", "parity", "config_class", "energy", "V_part", "W_part", "vf_part", "error", "status",
    ]);
    preamble(&mut table, "resonance", config)?;
    for (&(z, a), res) in cells.iter().zip(results) {
        let az = u.length_in(z) * u.acceleration_in(a);
        let mut row: Vec<Cell> =
            vec![z.into(), a.into(), az.into(), parity_label(config.state).into(), pair.classification().into()];
        match res {
            Ok(r) => {
                row.extend(
                    [r.energy, r.diagonal_part, r.off_diagonal_part, r.vacuum_fluctuation_part, r.numerical_error]
                        .map(|v| Cell::Num(u.energy_out(v))),
                );
                row.push("ok".into());
            }
            Err(e) => {
                row.extend([f64::NAN; 5].map(Cell::Num));
                row.push(status(&e).into());
            }
        }
        table.push(row);
    }
    Ok(finish(table, format))
}

pub fn mirror(config: &ScanConfig, format: Format) -> Result<Rendered> {
    config.require_identical_atoms()?;
    let mirror = config
        .geometry
        .mirror
        .as_ref()
        .ok_or_else(|| Error::Configuration("mirror scan needs a [geometry.mirror] section".into()))?;
    let u = config.unit_system()?;
    let base = resonance_pair(config)?;
    let state = config.correlated_state();
    let omega0 = u.frequency_in(config.atoms.a.omega0);
    let fixed = config.internal_ddc()?;
    if let Some(p) = &fixed {
        p.validate(omega0)?;
    }
    let orientations: Vec<DipolePair> = match mirror.orientation_grid {
        None => vec![base],
        Some(n) => {
            let norm = |v: &[f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            let (ma, mb) = (norm(&base.mu_a), norm(&base.mu_b));
            polar_orientation_grid(n)
                .into_iter()
                .map(|p| DipolePair { mu_a: p.mu_a.map(|c| c * ma), mu_b: p.mu_b.map(|c| c * mb) })
                .collect()
        }
    };
    let mut cells = Vec::new();
    for l in mirror.l.values() {
        for z in mirror.z.values() {
            for a in config.kinematics.a.values() {
                for id in 0..orientations.len() {
                    cells.push((l, z, a, id));
                }
            }
        }
    }
    let results: Vec<_> = cells
        .par_iter()
        .map(|&(l, z, a, id)| {
            let geom = MirrorGeometry::new(u.length_in(z), u.length_in(l))?;
            let ai = u.acceleration_in(a);
            let params = match &fixed {
                Some(p) => p.clone(),
                None => {
                    let mut p = mirror_params(&geom, omega0, ai)?;
                    p.tolerance = config.numerics.tolerance;
                    p
                }
            };
            mirror_resonance_energy(&orientations[id], &state, &geom, omega0, ai, &params)
        })
        .collect();
    let mut table = Table::new(vec![
        "L", "z", "R_bar", "a", "orientation_id", "total", "free_part", "plate_part", "error", "status",
    ]);
    preamble(&mut table, "mirror", config)?;
    for (&(l, z, a, id), res) in cells.iter().zip(results) {
        let mut row: Vec<Cell> = vec![l.into(), z.into(), (l + 2.0 * z).into(), a.into(), id.into()];
        match res {
            Ok(r) => {
                row.extend([r.total, r.free_part, r.plate_part, r.numerical_error].map(|v| Cell::Num(u.energy_out(v))));
                row.push("ok".into());
            }
            Err(e) => {
                row.extend([f64::NAN; 4].map(Cell::Num));
                row.push(status(&e).into());
            }
        }
        table.push(row);
    }
    Ok(finish(table, format))
}

fn column(header: &[String], name: &str) -> Result<usize> {
    header
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::Configuration(format!("column {name:?} not found in {header:?}")))
}

/// Power-law fit of column `y` against column `x` of a scan CSV.
pub fn fit(csv: &str, x: &str, y: &str, window: (f64, f64), format: Format) -> Result<Rendered> {
    let (header, rows) = read_csv(csv).ok_or_else(|| Error::Configuration("input has no header row".into()))?;
    let (ix, iy) = (column(&header, x)?, column(&header, y)?);
    let mut samples = Vec::with_capacity(rows.len());
    for row in &rows {
        let parse = |i: usize| {
            row.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::Configuration(format!("row {row:?} has no number in column {i}")))
        };
        samples.push((parse(ix)?, parse(iy)?));
    }
    // an open lower bound admits every positive abscissa
    let window = (window.0.max(f64::MIN_POSITIVE), window.1);
    let f = fit_scaling_exponent(&samples, window)?;
    let text = match format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({
                "x": x,
                "y": y,
                "window": [window.0, window.1],
                "exponent": f.exponent,
                "stderr": f.stderr,
                "log_prefactor": f.log_prefactor,
                "samples": f.samples,
            }))
            .expect("fit serialises")
                + "\n"
        }
        Format::Csv => {
            let mut t = Table::new(vec!["x", "y", "window_min", "window_max", "exponent", "stderr", "samples"]);
            t.push(vec![
                x.into(),
                y.into(),
                window.0.into(),
                window.1.into(),
                f.exponent.into(),
                f.stderr.into(),
                f.samples.into(),
            ]);
            t.to_csv()
        }
    };
    Ok(Rendered { text, flagged: false })
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverSample {
    pub z: f64,
    pub az: f64,
    pub envelope: f64,
    /// `d ln|Ê| / d ln z` of the accelerated result.
    pub local_exponent: Option<f64>,
    /// Same for atoms at rest.
    pub inertial_local_exponent: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Transition {
    /// First separation where the local exponent leaves the inertial law.
    pub start: Option<f64>,
    /// First separation from `start` on that follows the accelerated law.
    pub end: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossoverReport {
    pub generator: String,
    pub config_sha256: String,
    pub units: String,
    pub acceleration: f64,
    pub omega0: f64,
    pub rindler_length: f64,
    /// Envelope exponent expected for `az ≫ 1` (same-axis dipoles only).
    pub accelerated_law: Option<f64>,
    pub inertial_near_fit: Option<PowerLawFit>,
    pub inertial_far_fit: Option<PowerLawFit>,
    pub accelerated_fit: Option<PowerLawFit>,
    pub transition: Transition,
    pub samples: Vec<CrossoverSample>,
}

fn fit_where(samples: &[(f64, f64)], keep: impl Fn(f64) -> bool) -> Option<PowerLawFit> {
    let chosen: Vec<(f64, f64)> = samples.iter().cloned().filter(|(z, _)| keep(*z)).collect();
    let lo = chosen.first()?.0;
    let hi = chosen.last()?.0;
    fit_scaling_exponent(&chosen, (lo, hi)).ok()
}

pub fn crossover_report(config: &ScanConfig) -> Result<(CrossoverReport, bool)> {
    config.require_identical_atoms()?;
    let u = config.unit_system()?;
    let pair = resonance_pair(config)?;
    let state = config.correlated_state();
    let omega0 = u.frequency_in(config.atoms.a.omega0);
    let a = u.acceleration_in(config.kinematics.a.max);
    let zs: Vec<f64> = config.geometry.separation.values().into_iter().map(|z| u.length_in(z)).collect();
    let (az_min, az_max) = (a * zs[0], a * zs[zs.len() - 1]);
    if !(az_min < REGIME_MARGIN && az_max > 1.0 / REGIME_MARGIN) {
        return Err(Error::Configuration(format!(
            "grid does not span crossover: a z runs over [{az_min:e}, {az_max:e}], need below {REGIME_MARGIN} and above {}",
            1.0 / REGIME_MARGIN
        )));
    }
    let fixed = config.internal_ddc()?;
    let results: Vec<_> = zs
        .par_iter()
        .map(|&z| {
            cell_params(&fixed, &[z], omega0, a, config.numerics.tolerance)
                .and_then(|p| ddc_resonance_energy(&pair, &state, z, omega0, a, &p))
        })
        .collect();
    let flagged = results.iter().any(|r| r.is_err());
    let envelope: Vec<(f64, f64)> =
        zs.iter().zip(&results).map(|(&z, r)| (z, r.as_ref().map(|r| r.envelope).unwrap_or(f64::NAN))).collect();
    let inertial: Vec<(f64, f64)> = zs
        .iter()
        .map(|&z| Ok((z, inertial_resonance_signal(&pair, &state, z, omega0)?.norm())))
        .collect::<Result<_>>()?;
    let local = local_exponents(&envelope);
    let local_inertial = local_exponents(&inertial);
    let interior = |i: usize| (i >= 1 && i + 1 < zs.len()).then(|| i - 1);
    let accelerated_law = pair.parallel_same_axis().then(|| {
        let bracket = pair.mu_a[1] * pair.mu_b[1] - pair.mu_a[2] * pair.mu_b[2];
        if bracket == 0.0 { -4.0 } else { -2.0 }
    });
    let mut start = None;
    let mut end = None;
    for k in 0..local.len() {
        let (z, le) = local[k];
        if start.is_none() {
            if (le - local_inertial[k].1).abs() > LAW_TOLERANCE {
                start = Some(z);
            }
        } else if let Some(law) = accelerated_law {
            if (le - law).abs() <= LAW_TOLERANCE {
                end = Some(z);
                break;
            }
        }
    }
    let good: Vec<(f64, f64)> = envelope.iter().cloned().filter(|(_, e)| e.is_finite()).collect();
    let regime = |z: f64| crate::units::classify_regime(a * z).ok();
    let report = CrossoverReport {
        generator: format!("accel-qed {}", env!("CARGO_PKG_VERSION")),
        config_sha256: config.hash()?,
        units: if u.mode == crate::units::UnitMode::Si { "si".into() } else { "natural".into() },
        acceleration: u.acceleration_out(a),
        omega0: u.frequency_out(omega0),
        rindler_length: u.length_out(1.0 / a),
        accelerated_law,
        inertial_near_fit: fit_where(&good, |z| z * omega0 < 1e-2 && regime(z) == Some(RindlerRegime::ThermalLike)),
        inertial_far_fit: fit_where(&good, |z| z * omega0 > 1e2 && regime(z) == Some(RindlerRegime::ThermalLike)),
        accelerated_fit: fit_where(&good, |z| regime(z) == Some(RindlerRegime::Nonthermal)),
        transition: Transition { start: start.map(|z| u.length_out(z)), end: end.map(|z| u.length_out(z)) },
        samples: zs
            .iter()
            .enumerate()
            .map(|(i, &z)| CrossoverSample {
                z: u.length_out(z),
                az: a * z,
                envelope: u.energy_out(envelope[i].1),
                local_exponent: interior(i).map(|k| local[k].1).filter(|v| v.is_finite()),
                inertial_local_exponent: interior(i).map(|k| local_inertial[k].1),
                status: match &results[i] {
                    Ok(_) => "ok".into(),
                    Err(e) => status(e).into(),
                },
            })
            .collect(),
    };
    Ok((report, flagged))
}

pub fn crossover(config: &ScanConfig, format: Format) -> Result<Rendered> {
    let (report, flagged) = crossover_report(config)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serialises") + "\n",
        Format::Csv => {
            let mut t = Table::new(vec!["z", "az", "envelope", "local_exponent", "inertial_local_exponent", "status"]);
            preamble(&mut t, "crossover", config)?;
            t.meta("rindler_length", format!("{:.16e}", report.rindler_length));
            let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| format!("{x:.16e}"));
            t.meta("transition_start", opt(report.transition.start));
            t.meta("transition_end", opt(report.transition.end));
            for (name, f) in [
                ("inertial_near_exponent", &report.inertial_near_fit),
                ("inertial_far_exponent", &report.inertial_far_fit),
                ("accelerated_exponent", &report.accelerated_fit),
            ] {
                t.meta(name, opt(f.as_ref().map(|f| f.exponent)));
            }
            for s in &report.samples {
                t.push(vec![
                    s.z.into(),
                    s.az.into(),
                    s.envelope.into(),
                    s.local_exponent.unwrap_or(f64::NAN).into(),
                    s.inertial_local_exponent.unwrap_or(f64::NAN).into(),
                    s.status.clone().into(),
                ]);
            }
            t.to_csv()
        }
    };
    Ok(Rendered { text, flagged })
}
