//! Hyperbolic worldlines and the retarded distance between two co-accelerated atoms.
//!
//! Natural units (`c = 1`): times and lengths share a unit, accelerations are
//! inverse lengths. The worldline with proper acceleration `a` passing through
//! `x = 1/a` at `t = 0` is
//!
//! ```text
//! t(τ) = sinh(aτ)/a,   x(τ) = cosh(aτ)/a,   y = 0,   z = z_offset
//! ```

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Beyond this value of `|at|` the small-velocity expansion of the dispersion
/// corrections is not trusted.
pub const NONRELATIVISTIC_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpacetimeEvent {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Conformal Rindler chart: `t = e^{aξ} sinh(aτ)/a`, `x = e^{aξ} cosh(aτ)/a`.
/// Atoms riding the reference hyperbola sit at `ξ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RindlerCoordinates {
    pub tau: f64,
    pub xi: f64,
    pub y: f64,
    pub z: f64,
}

impl RindlerCoordinates {
    /// Chart coordinates of a lab event in the right Rindler wedge (`x > |t|`).
    pub fn from_event(event: &SpacetimeEvent, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(domain(format!("Rindler chart needs a > 0, got {a}")));
        }
        if !(event.x > event.t.abs()) {
            return Err(domain("event lies outside the right Rindler wedge"));
        }
        let interval = ((event.x - event.t) * (event.x + event.t)).sqrt();
        Ok(Self {
            tau: (event.t / event.x).atanh() / a,
            xi: (a * interval).ln() / a,
            y: event.y,
            z: event.z,
        })
    }

    pub fn to_event(&self, a: f64) -> SpacetimeEvent {
        let scale = (a * self.xi).exp() / a;
        SpacetimeEvent {
            t: scale * (a * self.tau).sinh(),
            x: scale * (a * self.tau).cosh(),
            y: self.y,
            z: self.z,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HyperbolicTrajectory {
    acceleration: f64,
    z_offset: f64,
}

impl HyperbolicTrajectory {
    pub fn new(acceleration: f64, z_offset: f64) -> Result<Self> {
        if !(acceleration > 0.0) || !acceleration.is_finite() {
            return Err(domain(format!("trajectory needs a finite a > 0, got {acceleration}")));
        }
        Ok(Self { acceleration, z_offset })
    }

    pub fn acceleration(&self) -> f64 {
        self.acceleration
    }

    pub fn z_offset(&self) -> f64 {
        self.z_offset
    }

    /// Lab-frame event at proper time `tau`.
    pub fn point(&self, tau: f64) -> SpacetimeEvent {
        let a = self.acceleration;
        SpacetimeEvent {
            t: (a * tau).sinh() / a,
            x: (a * tau).cosh() / a,
            y: 0.0,
            z: self.z_offset,
        }
    }

    pub fn rindler(&self, tau: f64) -> RindlerCoordinates {
        RindlerCoordinates { tau, xi: 0.0, y: 0.0, z: self.z_offset }
    }

    /// Lab time elapsed at proper time `tau`.
    pub fn lab_time(&self, tau: f64) -> f64 {
        (self.acceleration * tau).sinh() / self.acceleration
    }

    /// Proper time at lab time `t`.
    pub fn proper_time(&self, t: f64) -> f64 {
        (self.acceleration * t).asinh() / self.acceleration
    }
}

/// Lorentz factor `√(1 + (at)²)` at lab time `t` on a hyperbola of proper acceleration `a`.
pub fn lorentz_gamma(a: f64, t: f64) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(domain(format!("acceleration must be >= 0, got {a}")));
    }
    Ok((a * t).hypot(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RetardedDistance {
    /// Length of the null path between emission on one worldline and reception on the other.
    pub rho: f64,
    pub iterations: usize,
    /// `|at| <= NONRELATIVISTIC_LIMIT`
    pub nonrelativistic: bool,
}

const MAX_ITERATIONS: usize = 200;

/// Effective distance travelled by a photon exchanged between two atoms on
/// parallel hyperbolas (same `a`) separated transversely by `r`.
///
/// The photon leaves one atom at lab time `t - ρ/2` and reaches the other at
/// `t + ρ/2`, so `t` labels the midpoint of the flight and the null condition
/// reads `ρ² = (x(t+ρ/2) - x(t-ρ/2))² + r²`. The result equals `r` at `a = 0`
/// and at `t = 0`, and is even in `t`.
pub fn effective_distance(r: f64, a: f64, t: f64) -> Result<RetardedDistance> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(domain(format!("separation must be finite and > 0, got {r}")));
    }
    if !(a >= 0.0) || !a.is_finite() || !t.is_finite() {
        return Err(domain(format!("need finite a >= 0 and finite t, got a={a}, t={t}")));
    }
    let nonrelativistic = (a * t).abs() <= NONRELATIVISTIC_LIMIT;
    if a == 0.0 || t == 0.0 {
        return Ok(RetardedDistance { rho: r, iterations: 0, nonrelativistic });
    }
    // mean x-velocity over the flight; x(p) - x(q) = (p² - q²)/(x(p) + x(q)) avoids cancellation
    let drift = |rho: f64| {
        let p = t + 0.5 * rho;
        let q = t - 0.5 * rho;
        2.0 * a * t / ((a * p).hypot(1.0) + (a * q).hypot(1.0))
    };
    let residual = |rho: f64| {
        let w = drift(rho);
        rho * ((1.0 - w) * (1.0 + w)).sqrt() - r
    };

    let mut lo = r;
    let mut hi = 2.0 * r;
    let mut iterations = 0;
    while residual(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::Convergence { what: "effective distance bracket".into(), bound: hi - lo });
        }
    }
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::Convergence { what: "effective distance bisection".into(), bound: hi - lo });
        }
    }
    // fixed-point polish: ρ = r / √(1 - w(ρ)²)
    let mut rho = 0.5 * (lo + hi);
    for _ in 0..3 {
        let w = drift(rho);
        let next = r / ((1.0 - w) * (1.0 + w)).sqrt();
        if !(next >= lo && next <= hi) {
            break;
        }
        rho = next;
        iterations += 1;
    }
    Ok(RetardedDistance { rho, iterations, nonrelativistic })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_at_turning_point() {
        let traj = HyperbolicTrajectory::new(2.5, 0.7).unwrap();
        let p = traj.point(0.0);
        assert_eq!(p.t, 0.0);
        assert_eq!(p.x, 1.0 / 2.5);
        assert_eq!((p.y, p.z), (0.0, 0.7));
        assert!(HyperbolicTrajectory::new(0.0, 1.0).is_err());
    }

    #[test]
    fn small_tau_taylor_oracle() {
        let a = 1.3;
        let traj = HyperbolicTrajectory::new(a, 0.0).unwrap();
        for tau in [1e-2, 3e-3, 1e-3] {
            let x = traj.point(tau).x;
            let taylor = 1.0 / a + a * tau * tau / 2.0;
            let rel = ((x - taylor) / x).abs();
            let bound = (a * tau).powi(4);
            assert!(rel < bound, "tau={tau}: {rel:e} vs {bound:e}");
        }
    }

    #[test]
    fn rindler_chart_round_trip() {
        let a = 0.8;
        let traj = HyperbolicTrajectory::new(a, 3.0).unwrap();
        let ev = traj.point(1.7);
        let rc = RindlerCoordinates::from_event(&ev, a).unwrap();
        assert!((rc.tau - 1.7).abs() < 1e-12);
        assert!(rc.xi.abs() < 1e-12);
        assert_eq!(rc.z, 3.0);
        let back = rc.to_event(a);
        assert!((back.t - ev.t).abs() < 1e-12 && (back.x - ev.x).abs() < 1e-12);
        let outside = SpacetimeEvent { t: 2.0, x: 1.0, y: 0.0, z: 0.0 };
        assert!(RindlerCoordinates::from_event(&outside, a).is_err());
    }

    #[test]
    fn gamma_edge_cases() {
        assert_eq!(lorentz_gamma(3.0, 0.0).unwrap(), 1.0);
        assert_eq!(lorentz_gamma(0.0, 123.0).unwrap(), 1.0);
        assert!(lorentz_gamma(-1.0, 1.0).is_err());
    }

    #[test]
    fn effective_distance_rest_and_turning_point() {
        assert_eq!(effective_distance(1.0, 0.0, 5.0).unwrap().rho, 1.0);
        assert_eq!(effective_distance(2.0, 0.4, 0.0).unwrap().rho, 2.0);
        assert!(effective_distance(0.0, 0.1, 1.0).is_err());
        assert!(effective_distance(1.0, -0.1, 1.0).is_err());
    }

    #[test]
    fn effective_distance_regime_flag() {
        assert!(effective_distance(1.0, 0.1, 2.0).unwrap().nonrelativistic);
        assert!(!effective_distance(1.0, 0.1, 4.0).unwrap().nonrelativistic);
    }

    #[test]
    fn effective_distance_is_even_and_satisfies_null_condition() {
        let (r, a) = (1.5, 0.2);
        for t in [0.3, 1.0, 1.4] {
            let plus = effective_distance(r, a, t).unwrap().rho;
            let minus = effective_distance(r, a, -t).unwrap().rho;
            assert!((plus - minus).abs() <= 1e-14 * plus);
            let x = |s: f64| (1.0 / (a * a) + s * s).sqrt();
            let dx = x(t + plus / 2.0) - x(t - plus / 2.0);
            assert!((plus * plus - dx * dx - r * r).abs() < 1e-10 * r * r);
        }
    }
}
