//! Van der Waals / Casimir–Polder energy of two co-accelerated ground-state atoms.
//!
//! With `ħ = c = 1` the energy is the rest-atom potential plus two
//! time-dependent corrections,
//!
//! ```text
//! ΔE  = ΔE_r + a²t/(2πR³) ∫ α_A α_B (3 + 4/uR + 2/(uR)²) u² e^{-2uR} du
//!            + a²t²/(6πR²) ∫ α_A α_B (-1 + 4/uR + 8/(uR)² + 8/(uR)³ + 4/(uR)⁴) u⁴ e^{-2uR} du
//! ΔE_r = -1/(πR²) ∫ α_A α_B (1 + 2/uR + 5/(uR)² + 6/(uR)³ + 3/(uR)⁴) u⁴ e^{-2uR} du
//! ```
//!
//! Each `u`-integral is written in `x = uR` as `R^{-k} α₀ᴬ α₀ᴮ ∫ â_A â_B p(x) e^{-2x} dx`
//! with a polynomial `p` and the normalised shapes `â = α/α₀`, then mapped to
//! `s = e^{-2x} ∈ (0, 1]` for the adaptive quadrature. The dimensionless
//! integrals are O(1), so the absolute tolerance is meaningful.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kinematics::NONRELATIVISTIC_LIMIT;
use crate::polarizability::AtomDescriptor;
use crate::quadrature::{integrate, QuadOptions};

pub use crate::fit::{fit_scaling_exponent, PowerLawFit};

/// Polynomial coefficients (ascending powers of `x = uR`) of the three kernels.
const REST_KERNEL: [f64; 5] = [3.0, 6.0, 5.0, 2.0, 1.0];
const LINEAR_KERNEL: [f64; 3] = [2.0, 4.0, 3.0];
const QUADRATIC_KERNEL: [f64; 5] = [4.0, 8.0, 8.0, 4.0, -1.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionResult {
    pub rest_term: f64,
    /// Term proportional to `a²t`.
    pub correction_a2t: f64,
    /// Term proportional to `a²t²`.
    pub correction_a2t2: f64,
    pub total: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Zone {
    Near,
    Intermediate,
    Far,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZoneClassification {
    pub zone: Zone,
    /// `R/λ`
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZoneThresholds {
    pub near: f64,
    pub far: f64,
}

impl Default for ZoneThresholds {
    fn default() -> Self {
        Self { near: 1e-2, far: 1e2 }
    }
}

pub fn classify_zone(r: f64, reduced_wavelength: f64, thresholds: ZoneThresholds) -> ZoneClassification {
    let ratio = r / reduced_wavelength;
    let zone = if ratio < thresholds.near {
        Zone::Near
    } else if ratio > thresholds.far {
        Zone::Far
    } else {
        Zone::Intermediate
    };
    ZoneClassification { zone, ratio }
}

/// Value and absolute error of one dimensionless kernel integral.
#[derive(Debug, Clone, Copy)]
struct KernelIntegral {
    value: f64,
    error: f64,
}

fn kernel_integral(a: &AtomDescriptor, b: &AtomDescriptor, r: f64, poly: &[f64], opts: &QuadOptions) -> Result<KernelIntegral> {
    let (pa, pb) = (a.polarizability, b.polarizability);
    // ∫_0^∞ h(x) e^{-2x} dx = ½ ∫_0^1 h(-ln(s)/2) ds
    let integrand = |s: f64| {
        if s <= 0.0 {
            return 0.0;
        }
        let x = -0.5 * s.ln();
        let u = x / r;
        let p = poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
        0.5 * pa.shape(u) * pb.shape(u) * p
    };
    let est = integrate(integrand, &[0.0, 0.5, 1.0], opts)?;
    Ok(KernelIntegral { value: est.value, error: est.error })
}

fn check_separation(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(format!("separation must be finite and > 0, got {r}")));
    }
    Ok(())
}

fn check_atoms(a: &AtomDescriptor, b: &AtomDescriptor) -> Result<()> {
    a.polarizability.validate()?;
    b.polarizability.validate()
}

/// Rest-atom Casimir–Polder energy and its quadrature error.
pub fn rest_cp_energy_with_error(a: &AtomDescriptor, b: &AtomDescriptor, r: f64, opts: &QuadOptions) -> Result<(f64, f64)> {
    check_separation(r)?;
    check_atoms(a, b)?;
    let scale = a.polarizability.alpha0() * b.polarizability.alpha0() / (PI * r.powi(7));
    if scale == 0.0 {
        return Ok((0.0, 0.0));
    }
    let j = kernel_integral(a, b, r, &REST_KERNEL, opts)?;
    Ok((-scale * j.value, scale * j.error))
}

pub fn rest_cp_energy(a: &AtomDescriptor, b: &AtomDescriptor, r: f64) -> Result<f64> {
    rest_cp_energy_with_error(a, b, r, &QuadOptions::default()).map(|(e, _)| e)
}

fn check_kinematics(accel: f64, t: f64) -> Result<()> {
    if !(accel >= 0.0) || !accel.is_finite() {
        return Err(domain(format!("acceleration must be finite and >= 0, got {accel}")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(domain(format!("time must be finite and >= 0, got {t}")));
    }
    if accel * t > NONRELATIVISTIC_LIMIT {
        return Err(Error::Regime(format!(
            "|at| = {} exceeds the nonrelativistic limit {NONRELATIVISTIC_LIMIT}",
            accel * t
        )));
    }
    Ok(())
}

/// `(a²t term, a²t² term, combined quadrature error)`.
pub fn accel_corrections_with_error(
    a: &AtomDescriptor,
    b: &AtomDescriptor,
    r: f64,
    accel: f64,
    t: f64,
    opts: &QuadOptions,
) -> Result<(f64, f64, f64)> {
    check_separation(r)?;
    check_atoms(a, b)?;
    check_kinematics(accel, t)?;
    let alphas = a.polarizability.alpha0() * b.polarizability.alpha0();
    if accel == 0.0 || t == 0.0 || alphas == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let j1 = kernel_integral(a, b, r, &LINEAR_KERNEL, opts)?;
    let j2 = kernel_integral(a, b, r, &QUADRATIC_KERNEL, opts)?;
    let s1 = accel * accel * t * alphas / (2.0 * PI * r.powi(6));
    let s2 = accel * accel * t * t * alphas / (6.0 * PI * r.powi(7));
    Ok((s1 * j1.value, s2 * j2.value, s1 * j1.error + s2 * j2.error))
}

pub fn accel_corrections(a: &AtomDescriptor, b: &AtomDescriptor, r: f64, accel: f64, t: f64) -> Result<(f64, f64)> {
    accel_corrections_with_error(a, b, r, accel, t, &QuadOptions::default()).map(|(c1, c2, _)| (c1, c2))
}

pub fn total_dispersion_with(
    a: &AtomDescriptor,
    b: &AtomDescriptor,
    r: f64,
    accel: f64,
    t: f64,
    opts: &QuadOptions,
) -> Result<DispersionResult> {
    let (rest, e0) = rest_cp_energy_with_error(a, b, r, opts)?;
    let (c1, c2, e1) = accel_corrections_with_error(a, b, r, accel, t, opts)?;
    Ok(DispersionResult {
        rest_term: rest,
        correction_a2t: c1,
        correction_a2t2: c2,
        total: rest + c1 + c2,
        quadrature_error: e0 + e1,
    })
}

pub fn total_dispersion(a: &AtomDescriptor, b: &AtomDescriptor, r: f64, accel: f64, t: f64) -> Result<DispersionResult> {
    total_dispersion_with(a, b, r, accel, t, &QuadOptions::default())
}

/// Evaluates [`total_dispersion_with`] on every separation, in parallel, preserving order.
pub fn dispersion_scan(
    a: &AtomDescriptor,
    b: &AtomDescriptor,
    separations: &[f64],
    accel: f64,
    t: f64,
    opts: &QuadOptions,
) -> Vec<Result<DispersionResult>> {
    separations
        .par_iter()
        .map(|&r| total_dispersion_with(a, b, r, accel, t, opts))
        .collect()
}
