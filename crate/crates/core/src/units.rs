//! Physical constants, unit conversion and acceleration-derived scales.
//!
//! Everything downstream of this module works in natural units with
//! `ħ = c = 1`: lengths and times share one unit `L`, accelerations,
//! frequencies and energies are measured in `1/L`, polarizabilities in `L³`
//! and squared dipole moments (Gaussian convention) in `L²`. The
//! [`UnitSystem`] converts SI inputs into that system and back.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// CODATA 2018 values, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Speed of light (m/s)
    pub c: f64,
    /// Boltzmann constant (J/K)
    pub k_b: f64,
    /// Elementary charge (C). Absorbed into the dipole matrix elements.
    pub e: f64,
    /// Vacuum permittivity (F/m), used to express SI dipoles in Gaussian form.
    pub epsilon0: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    c: 299_792_458.0,
    k_b: 1.380_649e-23,
    e: 1.602_176_634e-19,
    epsilon0: 8.854_187_812_8e-12,
};

/// Unruh temperature `ħa / (2π c k_B)` in kelvin for a proper acceleration in m/s².
pub fn unruh_temperature(a: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(domain(format!("acceleration must be finite and >= 0, got {a}")));
    }
    let k = CODATA;
    Ok(k.hbar * a / (2.0 * std::f64::consts::PI * k.c * k.k_b))
}

/// Rindler length `c²/a` in metres.
pub fn rindler_length(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(domain(format!("acceleration must be > 0, got {a}")));
    }
    Ok(CODATA.c * CODATA.c / a)
}

/// Where a separation sits relative to the Rindler length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RindlerRegime {
    /// `z ≪ c²/a`
    ThermalLike,
    Crossover,
    /// `z ≫ c²/a`
    Nonthermal,
}

/// Below this value of `az/c²` a separation counts as thermal-like; above its
/// inverse it counts as nonthermal.
pub const REGIME_MARGIN: f64 = 0.1;

/// Classifies the dimensionless product `az/c²`.
pub fn classify_regime(az_over_c2: f64) -> Result<RindlerRegime> {
    if !(az_over_c2 >= 0.0) {
        return Err(domain(format!("az/c^2 must be >= 0, got {az_over_c2}")));
    }
    Ok(if az_over_c2 < REGIME_MARGIN {
        RindlerRegime::ThermalLike
    } else if az_over_c2 > 1.0 / REGIME_MARGIN {
        RindlerRegime::Nonthermal
    } else {
        RindlerRegime::Crossover
    })
}

/// Classifies a separation `z` (m) at proper acceleration `a` (m/s²).
pub fn classify_separation(z: f64, a: f64) -> Result<RindlerRegime> {
    let za = rindler_length(a)?;
    classify_regime(z / za)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    /// Inputs are already expressed with `ħ = c = 1`.
    Natural,
    /// Inputs are SI; `length_scale` metres make one internal length unit.
    Si,
}

/// Conversion between user-facing values and the internal natural units.
///
/// In SI mode dipole moments are taken in C·m and mapped to the Gaussian
/// form `μ²/(4πε₀)` before being scaled; polarizabilities are volumes (m³).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    pub mode: UnitMode,
    pub length_scale: f64,
}

impl UnitSystem {
    pub fn natural() -> Self {
        Self { mode: UnitMode::Natural, length_scale: 1.0 }
    }

    pub fn si(length_scale: f64) -> Result<Self> {
        if !(length_scale > 0.0) || !length_scale.is_finite() {
            return Err(domain(format!("length scale must be positive, got {length_scale}")));
        }
        Ok(Self { mode: UnitMode::Si, length_scale })
    }

    fn is_si(&self) -> bool {
        self.mode == UnitMode::Si
    }

    pub fn length_in(&self, meters: f64) -> f64 {
        if self.is_si() { meters / self.length_scale } else { meters }
    }

    pub fn length_out(&self, internal: f64) -> f64 {
        if self.is_si() { internal * self.length_scale } else { internal }
    }

    pub fn time_in(&self, seconds: f64) -> f64 {
        if self.is_si() { seconds * CODATA.c / self.length_scale } else { seconds }
    }

    pub fn time_out(&self, internal: f64) -> f64 {
        if self.is_si() { internal * self.length_scale / CODATA.c } else { internal }
    }

    pub fn acceleration_in(&self, a: f64) -> f64 {
        if self.is_si() { a * self.length_scale / (CODATA.c * CODATA.c) } else { a }
    }

    pub fn acceleration_out(&self, internal: f64) -> f64 {
        if self.is_si() { internal * CODATA.c * CODATA.c / self.length_scale } else { internal }
    }

    pub fn frequency_in(&self, omega: f64) -> f64 {
        if self.is_si() { omega * self.length_scale / CODATA.c } else { omega }
    }

    pub fn frequency_out(&self, internal: f64) -> f64 {
        if self.is_si() { internal * CODATA.c / self.length_scale } else { internal }
    }

    pub fn energy_in(&self, joules: f64) -> f64 {
        if self.is_si() { joules * self.length_scale / (CODATA.hbar * CODATA.c) } else { joules }
    }

    pub fn energy_out(&self, internal: f64) -> f64 {
        if self.is_si() { internal * CODATA.hbar * CODATA.c / self.length_scale } else { internal }
    }

    pub fn volume_in(&self, m3: f64) -> f64 {
        if self.is_si() { m3 / self.length_scale.powi(3) } else { m3 }
    }

    pub fn volume_out(&self, internal: f64) -> f64 {
        if self.is_si() { internal * self.length_scale.powi(3) } else { internal }
    }

    /// Dipole moment component (C·m in SI mode) to internal units.
    pub fn dipole_in(&self, value: f64) -> f64 {
        if self.is_si() {
            let gaussian_sq = 1.0 / (4.0 * std::f64::consts::PI * CODATA.epsilon0);
            value * (gaussian_sq / (CODATA.hbar * CODATA.c)).sqrt() / self.length_scale
        } else {
            value
        }
    }

    pub fn dipole_out(&self, internal: f64) -> f64 {
        if self.is_si() {
            let gaussian_sq = 1.0 / (4.0 * std::f64::consts::PI * CODATA.epsilon0);
            internal * self.length_scale / (gaussian_sq / (CODATA.hbar * CODATA.c)).sqrt()
        } else {
            internal
        }
    }
}
