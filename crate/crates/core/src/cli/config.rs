//! Scan configuration: a TOML document, optionally patched by `--set path=value`.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fit::log_grid;
use crate::polarizability::{AtomDescriptor, PolarizabilityModel};
use crate::resonance::{CorrelatedState, DdcKernelParams, Parity};
use crate::units::{UnitMode, UnitSystem, CODATA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Linear,
}

/// `points` values from `min` to `max`; a single point requires `min == max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default = "default_spacing")]
    pub spacing: Spacing,
}

fn default_spacing() -> Spacing {
    Spacing::Log
}

impl Grid {
    pub fn single(value: f64) -> Self {
        Self { min: value, max: value, points: 1, spacing: Spacing::Linear }
    }

    pub fn log(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points, spacing: Spacing::Log }
    }

    fn validate(&self, name: &str, allow_zero: bool) -> Result<()> {
        let bad = |why: &str| Err(Error::Configuration(format!("grid {name}: {why}")));
        if !self.min.is_finite() || !self.max.is_finite() {
            return bad("bounds must be finite");
        }
        if self.points == 0 {
            return bad("needs at least one point");
        }
        if self.points == 1 && self.min != self.max {
            return bad("a one-point grid needs min == max");
        }
        if self.points > 1 && !(self.min < self.max) {
            return bad("needs min < max");
        }
        let floor_ok = if allow_zero { self.min >= 0.0 } else { self.min > 0.0 };
        if !floor_ok {
            return bad(if allow_zero { "values must be non-negative" } else { "values must be positive" });
        }
        if self.spacing == Spacing::Log && self.points > 1 && self.min <= 0.0 {
            return bad("log spacing needs min > 0");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match (self.points, self.spacing) {
            (1, _) => vec![self.min],
            (_, Spacing::Log) => log_grid(self.min, self.max, self.points),
            (n, Spacing::Linear) => (0..n)
                .map(|i| if i == n - 1 { self.max } else { self.min + (self.max - self.min) * i as f64 / (n - 1) as f64 })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Atoms {
    pub a: AtomDescriptor,
    pub b: AtomDescriptor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MirrorConfig {
    /// Interatomic distance `L`.
    pub l: Grid,
    /// Height of atom A above the plate.
    pub z: Grid,
    /// Polar-angle orientation grid size; the atoms' own dipoles when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation_grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Geometry {
    /// Interatomic separation `R` (dispersion) or `z` (resonance).
    pub separation: Grid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mirror: Option<MirrorConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Kinematics {
    /// Proper acceleration.
    pub a: Grid,
    /// Lab time since the turning point (dispersion only).
    pub t: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Numerics {
    /// Relative quadrature tolerance.
    pub tolerance: f64,
    /// Fixed kernel parameters; chosen per cell when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ddc: Option<DdcKernelParams>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub units: UnitMode,
    /// Metres per internal length unit in SI mode; `c/ω₀` of atom A when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_scale: Option<f64>,
    pub state: Parity,
    pub atoms: Atoms,
    pub geometry: Geometry,
    pub kinematics: Kinematics,
    pub numerics: Numerics,
    pub output: Output,
}

impl Default for ScanConfig {
    fn default() -> Self {
        let atom = AtomDescriptor {
            omega0: 1.0,
            mu_eg: [1.0, 0.0, 0.0],
            polarizability: PolarizabilityModel::SingleResonance { alpha0: 1.0, omega0: 1.0 },
        };
        Self {
            units: UnitMode::Natural,
            length_scale: None,
            state: Parity::Symmetric,
            atoms: Atoms { a: atom, b: atom },
            geometry: Geometry {
                separation: Grid::log(1e-2, 1e2, 21),
                mirror: Some(MirrorConfig { l: Grid::single(1.0), z: Grid::log(0.1, 10.0, 5), orientation_grid: None }),
            },
            kinematics: Kinematics { a: Grid::single(0.0), t: Grid::single(0.0) },
            numerics: Numerics { tolerance: 1e-10, ddc: None },
            output: Output { path: None, format: Format::Csv },
        }
    }
}

/// Converts a TOML literal from the command line, falling back to a bare string.
fn parse_override_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Sets `path = value` (dotted path) inside a TOML table, creating tables on the way.
pub fn apply_override(root: &mut toml::Table, assignment: &str) -> Result<()> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::Configuration(format!("override {assignment:?} is not of the form key=value")))?;
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(Error::Configuration(format!("override path {path:?} is malformed")));
    }
    let mut table = root;
    for key in &keys[..keys.len() - 1] {
        let entry = table.entry(key.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| Error::Configuration(format!("override path {path:?}: {key} is not a table")))?;
    }
    table.insert(keys[keys.len() - 1].to_string(), parse_override_value(raw.trim()));
    Ok(())
}

impl ScanConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_toml_with_overrides(text, &[])
    }

    /// Parses `text` (defaults when empty), then applies each `key=value` in order.
    pub fn from_toml_with_overrides(text: &str, overrides: &[String]) -> Result<Self> {
        let mut table: toml::Table = if text.trim().is_empty() {
            toml::Table::try_from(Self::default()).map_err(|e| Error::Configuration(e.to_string()))?
        } else {
            text.parse().map_err(|e: toml::de::Error| Error::Configuration(e.to_string()))?
        };
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        let config: Self = toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| Error::Configuration(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Configuration(e.to_string()))
    }

    /// SHA-256 of the canonical serialisation, output destination excluded.
    pub fn hash(&self) -> Result<String> {
        let mut canonical = self.clone();
        canonical.output.path = None;
        Ok(hex::encode(Sha256::digest(canonical.to_toml()?.as_bytes())))
    }

    pub fn validate(&self) -> Result<()> {
        for (name, atom) in [("atoms.a", &self.atoms.a), ("atoms.b", &self.atoms.b)] {
            atom.validate().map_err(|e| Error::Configuration(format!("{name}: {e}")))?;
        }
        self.geometry.separation.validate("geometry.separation", false)?;
        if let Some(m) = &self.geometry.mirror {
            m.l.validate("geometry.mirror.l", false)?;
            m.z.validate("geometry.mirror.z", false)?;
            if m.orientation_grid == Some(0) {
                return Err(Error::Configuration("geometry.mirror.orientation_grid must be positive".into()));
            }
        }
        self.kinematics.a.validate("kinematics.a", true)?;
        self.kinematics.t.validate("kinematics.t", true)?;
        if !(self.numerics.tolerance > 0.0) {
            return Err(Error::Configuration(format!("numerics.tolerance must be positive, got {}", self.numerics.tolerance)));
        }
        if let Some(scale) = self.length_scale {
            if !(scale > 0.0) || !scale.is_finite() {
                return Err(Error::Configuration(format!("length_scale must be positive, got {scale}")));
            }
        }
        Ok(())
    }

    pub fn unit_system(&self) -> Result<UnitSystem> {
        match self.units {
            UnitMode::Natural => Ok(UnitSystem::natural()),
            UnitMode::Si => UnitSystem::si(self.length_scale.unwrap_or(CODATA.c / self.atoms.a.omega0))
                .map_err(|e| Error::Configuration(e.to_string())),
        }
    }

    pub fn correlated_state(&self) -> CorrelatedState {
        CorrelatedState::new(self.state)
    }

    /// Both atoms in internal units.
    pub fn internal_atoms(&self) -> Result<(AtomDescriptor, AtomDescriptor)> {
        let u = self.unit_system()?;
        let convert = |atom: &AtomDescriptor| AtomDescriptor {
            omega0: u.frequency_in(atom.omega0),
            mu_eg: atom.mu_eg.map(|c| u.dipole_in(c)),
            polarizability: match atom.polarizability {
                PolarizabilityModel::Static { alpha0 } => PolarizabilityModel::Static { alpha0: u.volume_in(alpha0) },
                PolarizabilityModel::SingleResonance { alpha0, omega0 } => PolarizabilityModel::SingleResonance {
                    alpha0: u.volume_in(alpha0),
                    omega0: u.frequency_in(omega0),
                },
            },
        };
        Ok((convert(&self.atoms.a), convert(&self.atoms.b)))
    }

    /// Kernel parameters in internal units, if fixed by the configuration.
    pub fn internal_ddc(&self) -> Result<Option<DdcKernelParams>> {
        let u = self.unit_system()?;
        Ok(self.numerics.ddc.as_ref().map(|p| DdcKernelParams {
            epsilon: u.time_in(p.epsilon),
            window: u.time_in(p.window),
            extrapolation_orders: p.extrapolation_orders.iter().map(|&e| u.time_in(e)).collect(),
            tolerance: p.tolerance,
        }))
    }

    /// Resonance and mirror scans need identical transition frequencies.
    pub fn require_identical_atoms(&self) -> Result<()> {
        if self.atoms.a.omega0 != self.atoms.b.omega0 {
            return Err(Error::Configuration(format!(
                "resonance needs equal transition frequencies, got {} and {}",
                self.atoms.a.omega0, self.atoms.b.omega0
            )));
        }
        Ok(())
    }
}
