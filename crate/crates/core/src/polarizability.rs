//! Atom descriptors and dynamic polarizabilities at imaginary frequency.
//!
//! Polarizabilities are volumes (Gaussian convention); in natural units the
//! imaginary-frequency variable `u` is an inverse length.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PolarizabilityModel {
    Static { alpha0: f64 },
    /// One-pole model `α₀ / (1 + (u/ω₀)²)`.
    SingleResonance { alpha0: f64, omega0: f64 },
}

impl PolarizabilityModel {
    pub fn alpha0(&self) -> f64 {
        match *self {
            Self::Static { alpha0 } | Self::SingleResonance { alpha0, .. } => alpha0,
        }
    }

    /// Polarizability at zero frequency may be zero (a non-polarizable
    /// spectator); anything else must be positive and finite.
    pub fn validate(&self) -> Result<()> {
        let alpha0 = self.alpha0();
        if !(alpha0 >= 0.0) || !alpha0.is_finite() {
            return Err(domain(format!("alpha0 must be finite and >= 0, got {alpha0}")));
        }
        if let Self::SingleResonance { omega0, .. } = *self {
            if !(omega0 > 0.0) || !omega0.is_finite() {
                return Err(domain(format!("resonance frequency must be > 0, got {omega0}")));
            }
        }
        Ok(())
    }

    /// `α(iu) / α₀`; equals 1 for the static model.
    pub fn shape(&self, u: f64) -> f64 {
        match *self {
            Self::Static { .. } => 1.0,
            Self::SingleResonance { omega0, .. } => {
                let r = u / omega0;
                1.0 / (1.0 + r * r)
            }
        }
    }
}

/// `α(iu)` for `u >= 0`.
pub fn alpha_iu(model: &PolarizabilityModel, u: f64) -> Result<f64> {
    if !(u >= 0.0) {
        return Err(domain(format!("imaginary frequency u must be >= 0, got {u}")));
    }
    Ok(model.alpha0() * model.shape(u))
}

/// A two-level atom: transition frequency, real transition dipole and ground-state polarizability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomDescriptor {
    pub omega0: f64,
    pub mu_eg: [f64; 3],
    pub polarizability: PolarizabilityModel,
}

impl AtomDescriptor {
    pub fn new(omega0: f64, mu_eg: [f64; 3], polarizability: PolarizabilityModel) -> Result<Self> {
        let atom = Self { omega0, mu_eg, polarizability };
        atom.validate()?;
        Ok(atom)
    }

    /// Atom whose polarizability is the one-pole model at its own transition frequency.
    pub fn single_resonance(omega0: f64, alpha0: f64) -> Result<Self> {
        Self::new(omega0, [0.0; 3], PolarizabilityModel::SingleResonance { alpha0, omega0 })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0) || !self.omega0.is_finite() {
            return Err(domain(format!("omega0 must be > 0, got {}", self.omega0)));
        }
        if self.mu_eg.iter().any(|c| !c.is_finite()) {
            return Err(domain("dipole components must be finite"));
        }
        self.polarizability.validate()
    }

    /// `λ = c/ω₀`
    pub fn reduced_wavelength(&self) -> f64 {
        1.0 / self.omega0
    }
}
