//! Self-reaction integral for the resonance shift, evaluated on the real
//! proper-time axis at `s - iε` and extrapolated to `ε → 0`.
//!
//! For every ordered atom pair `(X, Y)` the shift collects
//! `∫₀^W ds Im[μ^X·G(s - iε)·μ^Y] C^{XY}(s) g(s)` where `C^{XY}` is the atomic
//! symmetric correlation and `g` a cosine taper on `[3W/4, W]`. The
//! vacuum-fluctuation channel pairs `Re G` with the atomic susceptibility.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::FieldKernel;
use super::state::PairAmplitudes;
use crate::error::{Error, Result};
use crate::extrapolation::{extrapolate_to_zero, geometric_steps, noise_amplification};
use crate::quadrature::{integrate, QuadOptions, QuadValue};

/// Default `ω₀·window`.
pub const DEFAULT_WINDOW_PHASE: f64 = 200.0;
/// Smallest accepted `ω₀·window`.
pub const MIN_WINDOW_PHASE: f64 = 50.0;
/// Taper occupies the last quarter of the window.
const TAPER_START: f64 = 0.75;
/// The light-cone peak must sit this many leading ε below the taper.
const PEAK_CLEARANCE: f64 = 20.0;
/// Leading ε as a fraction of the shortest scale among `s*`, `1/a`, `1/ω₀`.
const EPSILON_FRACTION: f64 = 0.1;
/// Relative accuracy of one integrand evaluation with respect to `∫|f|`; the
/// tensor components cancel by up to a few hundred ulps near the light cone.
const EVALUATION_NOISE: f64 = 1e-13;
const EPSILON_RATIO: f64 = 2.0;
const EPSILON_COUNT: usize = 4;
/// Breakpoints sit at `s* ± ε·BREAK_RATIO^k`, so every interval away from the
/// peak spans a fixed ratio of distances and the first Kronrod pass sees the
/// decay of the kernel.
const BREAK_RATIO: f64 = 4.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DdcKernelParams {
    /// Leading light-cone regularisation; equals `extrapolation_orders[0]`.
    pub epsilon: f64,
    /// Proper-time integration length.
    pub window: f64,
    /// ε values used for the extrapolation, strictly decreasing.
    pub extrapolation_orders: Vec<f64>,
    /// Relative quadrature tolerance for each ε.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    1e-10
}

impl DdcKernelParams {
    /// Geometric sequence `ε, ε/2, ε/4, ε/8`.
    pub fn new(epsilon: f64, window: f64) -> Self {
        Self {
            epsilon,
            window,
            extrapolation_orders: geometric_steps(epsilon, EPSILON_RATIO, EPSILON_COUNT),
            tolerance: default_tolerance(),
        }
    }

    /// Parameters resolving every separation in `separations` for atoms with
    /// transition frequency `omega0` at acceleration `a`.
    pub fn automatic(separations: &[f64], omega0: f64, a: f64) -> Result<Self> {
        if separations.is_empty() || separations.iter().any(|z| !(*z > 0.0) || !z.is_finite()) {
            return Err(Error::Domain(format!("separations must be positive, got {separations:?}")));
        }
        if !(omega0 > 0.0) || !(a >= 0.0) || !omega0.is_finite() || !a.is_finite() {
            return Err(Error::Domain(format!("need omega0 > 0 and a >= 0, got {omega0}, {a}")));
        }
        let delays: Vec<f64> = separations.iter().map(|&z| super::field::light_cone_delay(a, z)).collect();
        let shortest = delays.iter().cloned().fold(1.0 / omega0, f64::min);
        let shortest = if a > 0.0 { shortest.min(1.0 / a) } else { shortest };
        let epsilon = EPSILON_FRACTION * shortest;
        let longest = delays.iter().cloned().fold(0.0, f64::max);
        let needed = 1.5 * (longest + PEAK_CLEARANCE * epsilon) / TAPER_START;
        Ok(Self::new(epsilon, (DEFAULT_WINDOW_PHASE / omega0).max(needed)))
    }

    pub fn validate(&self, omega0: f64) -> Result<()> {
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::Configuration(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if self.extrapolation_orders.len() < 2 {
            return Err(Error::Configuration("at least two extrapolation orders are required".into()));
        }
        if self.extrapolation_orders[0] != self.epsilon {
            return Err(Error::Configuration(format!(
                "extrapolation_orders must start at epsilon = {}, got {}",
                self.epsilon, self.extrapolation_orders[0]
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Configuration(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if !(self.window * omega0 >= MIN_WINDOW_PHASE) {
            return Err(Error::Window(format!(
                "omega0 * window = {} is below {MIN_WINDOW_PHASE}",
                self.window * omega0
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceResult {
    /// `self_reaction_part + vacuum_fluctuation_part`.
    pub energy: f64,
    pub self_reaction_part: f64,
    pub vacuum_fluctuation_part: f64,
    /// Self-reaction from the diagonal field components (`Ṽ` structure).
    pub diagonal_part: f64,
    /// Self-reaction from the `xz`/`zx` field components (`W̃` structure).
    pub off_diagonal_part: f64,
    /// Modulus of the analytic signal whose real part is `self_reaction_part`.
    pub envelope: f64,
    pub numerical_error: f64,
}

impl ResonanceResult {
    /// Sum of independent contributions; errors add.
    pub fn combine(&self, other: &Self) -> Self {
        let self_reaction_part = self.self_reaction_part + other.self_reaction_part;
        let vacuum_fluctuation_part = self.vacuum_fluctuation_part + other.vacuum_fluctuation_part;
        Self {
            energy: self_reaction_part + vacuum_fluctuation_part,
            self_reaction_part,
            vacuum_fluctuation_part,
            diagonal_part: self.diagonal_part + other.diagonal_part,
            off_diagonal_part: self.off_diagonal_part + other.off_diagonal_part,
            envelope: f64::NAN,
            numerical_error: self.numerical_error + other.numerical_error,
        }
    }
}

/// One ordered pair `(X(τ), Y(τ - s))` of the sum.
#[derive(Debug, Clone, Copy)]
pub struct PairTerm {
    pub kernel: FieldKernel,
    pub first: [f64; 3],
    pub second: [f64; 3],
    pub amplitudes: PairAmplitudes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Channels {
    diag: Complex64,
    off: Complex64,
}

impl Add for Channels {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { diag: self.diag + o.diag, off: self.off + o.off }
    }
}

impl Sub for Channels {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { diag: self.diag - o.diag, off: self.off - o.off }
    }
}

impl Mul<f64> for Channels {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self { diag: self.diag * k, off: self.off * k }
    }
}

impl QuadValue for Channels {
    fn zero() -> Self {
        Self { diag: Complex64::new(0.0, 0.0), off: Complex64::new(0.0, 0.0) }
    }
    fn norm(&self) -> f64 {
        self.diag.norm() + self.off.norm()
    }
}

fn taper(s: f64, window: f64) -> f64 {
    let start = TAPER_START * window;
    if s <= start {
        1.0
    } else if s >= window {
        0.0
    } else {
        0.5 * (1.0 + (std::f64::consts::PI * (s - start) / (window - start)).cos())
    }
}

/// Breakpoints in the offset `u = s - s*`: both ends, the light cone, the taper
/// start and a geometric ladder `±ε·r^k` around the light cone.
fn breakpoints(delay: f64, epsilon: f64, window: f64) -> Vec<f64> {
    let (lo, start, hi) = (-delay, TAPER_START * window - delay, window - delay);
    let mut points = vec![lo, 0.0, start, hi];
    let mut offset = epsilon;
    while offset < start {
        points.extend([-offset, offset].into_iter().filter(|&p| p > lo && p < start));
        offset *= BREAK_RATIO;
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
}

struct TermIntegrals {
    self_reaction: Channels,
    self_reaction_error: f64,
    vacuum: Complex64,
    vacuum_error: f64,
}

fn integrate_term(term: &PairTerm, omega0: f64, params: &DdcKernelParams) -> Result<TermIntegrals> {
    let window = params.window;
    // room for a few intervals per oscillation period of the window
    let periods = (omega0 * window / std::f64::consts::TAU).ceil() as usize;
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: params.tolerance,
        noise_tol: EVALUATION_NOISE,
        max_intervals: QuadOptions::default().max_intervals + 4 * periods,
    };
    // integrating in u keeps full relative resolution of the light-cone peak;
    // the phase e^{iωs*} is applied once afterwards
    let delay = term.kernel.delay;
    let lead = Complex64::from_polar(1.0, omega0 * delay);
    let phase = |u: f64| Complex64::from_polar(taper(delay + u, window), omega0 * u);
    let mut sr = Vec::with_capacity(params.extrapolation_orders.len());
    let mut vf = Vec::with_capacity(params.extrapolation_orders.len());
    let (mut sr_noise, mut vf_noise) = (0.0f64, 0.0f64);
    for &eps in &params.extrapolation_orders {
        let points = breakpoints(delay, eps, window);
        let tensor = |u: f64| term.kernel.tensor_at_offset(Complex64::new(u, -eps));
        let r = integrate(
            |u| {
                let (d, o) = tensor(u).contract(&term.first, &term.second);
                let p = phase(u);
                Channels { diag: p * d.im, off: p * o.im }
            },
            &points,
            &opts,
        )?;
        let v = integrate(
            |u| {
                let (d, o) = tensor(u).contract(&term.first, &term.second);
                phase(u) * (d.re + o.re)
            },
            &points,
            &opts,
        )?;
        sr_noise = sr_noise.max(r.error.max(EVALUATION_NOISE * r.abs_integral));
        vf_noise = vf_noise.max(v.error.max(EVALUATION_NOISE * v.abs_integral));
        sr.push(Channels { diag: lead * r.value.diag, off: lead * r.value.off });
        vf.push(lead * v.value);
    }
    let gain = noise_amplification(&params.extrapolation_orders);
    let sr = extrapolate_to_zero(&params.extrapolation_orders, &sr, gain * sr_noise)?;
    let vf = extrapolate_to_zero(&params.extrapolation_orders, &vf, gain * vf_noise)?;
    Ok(TermIntegrals {
        self_reaction: sr.value,
        self_reaction_error: sr.error,
        vacuum: vf.value,
        vacuum_error: vf.error,
    })
}

/// Checks that each light-cone peak lies well inside the untapered window.
fn check_window(terms: &[PairTerm], params: &DdcKernelParams) -> Result<()> {
    let start = TAPER_START * params.window;
    for term in terms {
        let edge = term.kernel.delay + PEAK_CLEARANCE * params.epsilon;
        if edge >= start {
            return Err(Error::Window(format!(
                "light-cone delay {} (+{PEAK_CLEARANCE} epsilon) reaches the taper at {start}",
                term.kernel.delay
            )));
        }
    }
    Ok(())
}

/// Sums the self-reaction and vacuum-fluctuation channels over `terms`.
pub fn evaluate_terms(terms: &[PairTerm], omega0: f64, params: &DdcKernelParams) -> Result<ResonanceResult> {
    params.validate(omega0)?;
    check_window(terms, params)?;
    let integrals: Vec<TermIntegrals> =
        terms.par_iter().map(|t| integrate_term(t, omega0, params)).collect::<Result<_>>()?;
    let (mut diag, mut off, mut vacuum, mut error) = (0.0, 0.0, 0.0, 0.0);
    let mut analytic = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for (term, ints) in terms.iter().zip(&integrals) {
        let a = &term.amplitudes;
        let (jd, jo) = (ints.self_reaction.diag, ints.self_reaction.off);
        diag += (a.symmetric_plus * jd + a.symmetric_minus * jd.conj()).re;
        off += (a.symmetric_plus * jo + a.symmetric_minus * jo.conj()).re;
        analytic += (a.symmetric_plus + a.symmetric_minus.conj()) * (jd + jo);
        let jv = ints.vacuum;
        vacuum += (-i * (a.susceptibility_plus * jv + a.susceptibility_minus * jv.conj())).re;
        error += (a.symmetric_plus.norm() + a.symmetric_minus.norm()) * ints.self_reaction_error
            + (a.susceptibility_plus.norm() + a.susceptibility_minus.norm()) * ints.vacuum_error;
    }
    let self_reaction_part = diag + off;
    Ok(ResonanceResult {
        energy: self_reaction_part + vacuum,
        self_reaction_part,
        vacuum_fluctuation_part: vacuum,
        diagonal_part: diag,
        off_diagonal_part: off,
        envelope: analytic.norm(),
        numerical_error: error,
    })
}
