//! Resonance shift between two identical atoms sharing one excitation.
//!
//! Both atoms accelerate along `x` with the same proper acceleration and are
//! separated by `z` along `n = (0, 0, 1)`; atom A sits at the origin.

pub mod ddc;
pub mod field;
pub mod state;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
pub use ddc::{evaluate_terms, DdcKernelParams, PairTerm, ResonanceResult};
pub use field::{light_cone_delay, FieldKernel, FieldTensor};
pub use state::{Atom, CorrelatedState, PairAmplitudes, Parity};

/// Separation direction.
pub const N_HAT: [f64; 3] = [0.0, 0.0, 1.0];
/// Acceleration direction.
pub const Q_HAT: [f64; 3] = [1.0, 0.0, 0.0];
/// Smallest `a·z` accepted by the far-regime expansion.
pub const FAR_REGIME_MIN: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipolePair {
    pub mu_a: [f64; 3],
    pub mu_b: [f64; 3],
}

fn dot(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Index of the only nonzero component, if there is exactly one.
fn single_axis(v: &[f64; 3]) -> Option<usize> {
    let nonzero: Vec<usize> = (0..3).filter(|&k| v[k] != 0.0).collect();
    (nonzero.len() == 1).then(|| nonzero[0])
}

fn in_xy_plane(v: &[f64; 3]) -> bool {
    v[2] == 0.0 && (v[0] != 0.0 || v[1] != 0.0)
}

fn along_z(v: &[f64; 3]) -> bool {
    single_axis(v) == Some(2)
}

impl DipolePair {
    pub fn new(mu_a: [f64; 3], mu_b: [f64; 3]) -> Result<Self> {
        if mu_a.iter().chain(mu_b.iter()).any(|c| !c.is_finite()) {
            return Err(domain("dipole components must be finite"));
        }
        Ok(Self { mu_a, mu_b })
    }

    /// Both dipoles along `axis` (0 = x, 1 = y, 2 = z) with the given magnitudes.
    pub fn along_axis(axis: usize, mu_a: f64, mu_b: f64) -> Self {
        let mut a = [0.0; 3];
        let mut b = [0.0; 3];
        a[axis] = mu_a;
        b[axis] = mu_b;
        Self { mu_a: a, mu_b: b }
    }

    pub fn parallel_same_axis(&self) -> bool {
        matches!((single_axis(&self.mu_a), single_axis(&self.mu_b)), (Some(i), Some(j)) if i == j)
    }

    pub fn orthogonal_z_xy(&self) -> bool {
        (along_z(&self.mu_a) && in_xy_plane(&self.mu_b)) || (along_z(&self.mu_b) && in_xy_plane(&self.mu_a))
    }

    pub fn classification(&self) -> &'static str {
        if self.parallel_same_axis() {
            "parallel"
        } else if self.orthogonal_z_xy() {
            "orthogonal"
        } else {
            "general"
        }
    }

    /// The ordered pairs `(A, B)` and `(B, A)` of the free-space sum.
    pub fn free_terms(&self, state: &CorrelatedState, z: f64, a: f64) -> [PairTerm; 2] {
        [
            PairTerm {
                kernel: FieldKernel::new(a, -z),
                first: self.mu_a,
                second: self.mu_b,
                amplitudes: PairAmplitudes::for_pair(state, Atom::A, Atom::B),
            },
            PairTerm {
                kernel: FieldKernel::new(a, z),
                first: self.mu_b,
                second: self.mu_a,
                amplitudes: PairAmplitudes::for_pair(state, Atom::B, Atom::A),
            },
        ]
    }
}

fn check_separation(z: f64, omega0: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(format!("separation must be positive, got {z}")));
    }
    if !(omega0 > 0.0) || !omega0.is_finite() {
        return Err(domain(format!("transition frequency must be positive, got {omega0}")));
    }
    Ok(())
}

/// Complex form whose real part is the inertial resonance energy:
/// `±[(μ·μ - 3μ_zμ_z)(1 - ikz) - (μ·μ - μ_zμ_z)k²z²] e^{ikz}/z³`.
pub fn inertial_resonance_signal(pair: &DipolePair, state: &CorrelatedState, z: f64, omega0: f64) -> Result<Complex64> {
    check_separation(z, omega0)?;
    let kz = omega0 * z;
    let full = dot(&pair.mu_a, &pair.mu_b);
    let normal = pair.mu_a[2] * pair.mu_b[2];
    let near = Complex64::new(full - 3.0 * normal, -(full - 3.0 * normal) * kz);
    let far = (full - normal) * kz * kz;
    Ok(state.sign() * (near - far) * Complex64::from_polar(1.0, kz) / (z * z * z))
}

/// Resonance energy of atoms at rest.
pub fn inertial_resonance_energy(pair: &DipolePair, state: &CorrelatedState, z: f64, omega0: f64) -> Result<f64> {
    let kz = omega0 * z;
    check_separation(z, omega0)?;
    let full = dot(&pair.mu_a, &pair.mu_b);
    let normal = pair.mu_a[2] * pair.mu_b[2];
    let value = (full - 3.0 * normal) * (kz.cos() + kz * kz.sin()) - (full - normal) * kz * kz * kz.cos();
    Ok(state.sign() * value / (z * z * z))
}

/// Large-`az` asymptotic form for same-axis dipoles.
pub fn far_regime_resonance_energy(
    pair: &DipolePair,
    state: &CorrelatedState,
    z: f64,
    omega0: f64,
    a: f64,
) -> Result<f64> {
    check_separation(z, omega0)?;
    if !pair.parallel_same_axis() {
        return Err(Error::Configuration(format!(
            "far-regime form needs both dipoles along one axis, got {:?} and {:?}",
            pair.mu_a, pair.mu_b
        )));
    }
    let az = a * z;
    if !(az > FAR_REGIME_MIN) {
        return Err(Error::Regime(format!("a z = {az} is not above {FAR_REGIME_MIN}")));
    }
    let phi = 2.0 * omega0 / a * az.ln();
    let (mu_a, mu_b) = (&pair.mu_a, &pair.mu_b);
    let bracket: f64 = (0..3)
        .map(|l| mu_a[l] * mu_b[l] * (1.0 - Q_HAT[l] * Q_HAT[l] - 2.0 * N_HAT[l] * N_HAT[l]))
        .sum();
    let axial = dot(mu_a, &Q_HAT) * dot(mu_b, &Q_HAT);
    let oscillating = 2.0 * omega0 * z * phi.sin() - omega0 * omega0 * z * z * (2.0 / az) * phi.cos();
    let value = bracket * oscillating + axial * (8.0 / az) * phi.cos();
    Ok(state.sign() * value / (z * z * z))
}

/// Resonance energy of the co-accelerated pair from the self-reaction integral.
pub fn ddc_resonance_energy(
    pair: &DipolePair,
    state: &CorrelatedState,
    z: f64,
    omega0: f64,
    a: f64,
    params: &DdcKernelParams,
) -> Result<ResonanceResult> {
    check_separation(z, omega0)?;
    if !(a >= 0.0) || !a.is_finite() {
        return Err(domain(format!("acceleration must be non-negative, got {a}")));
    }
    evaluate_terms(&pair.free_terms(state, z, a), omega0, params)
}

/// Shift for one dipole along `z` and the other in the `xy` plane; zero for atoms at rest.
pub fn orthogonal_dipole_signature(
    pair: &DipolePair,
    state: &CorrelatedState,
    z: f64,
    omega0: f64,
    a: f64,
    params: &DdcKernelParams,
) -> Result<ResonanceResult> {
    if !pair.orthogonal_z_xy() {
        return Err(Error::Configuration(format!(
            "need one dipole along z and the other in the xy plane, got {:?} and {:?}",
            pair.mu_a, pair.mu_b
        )));
    }
    ddc_resonance_energy(pair, state, z, omega0, a, params)
}

/// `(V, W)`: the shift carried by same-axis dipole component products and by
/// the `xz`/`zx` cross products. `V + W` is the self-reaction energy.
pub fn reconstruct_v_w_split(
    pair: &DipolePair,
    state: &CorrelatedState,
    z: f64,
    omega0: f64,
    a: f64,
    params: &DdcKernelParams,
) -> Result<(f64, f64)> {
    let r = ddc_resonance_energy(pair, state, z, omega0, a, params)?;
    Ok((r.diagonal_part, r.off_diagonal_part))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SYM: CorrelatedState = CorrelatedState::SYMMETRIC;
    const ANTI: CorrelatedState = CorrelatedState::ANTISYMMETRIC;

    #[test]
    fn classification_flags_are_exclusive() {
        let cases = [
            (DipolePair::along_axis(0, 1.0, 2.0), true, false),
            (DipolePair::new([0.0, 0.0, 1.0], [1.0, 1.0, 0.0]).unwrap(), false, true),
            (DipolePair::new([0.0, 1.0, 0.0], [0.0, 0.0, 1.0]).unwrap(), false, true),
            (DipolePair::new([1.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap(), false, false),
            (DipolePair::new([0.0, 0.0, 0.0], [1.0, 0.0, 0.0]).unwrap(), false, false),
        ];
        for (pair, parallel, orthogonal) in cases {
            assert_eq!(pair.parallel_same_axis(), parallel, "{pair:?}");
            assert_eq!(pair.orthogonal_z_xy(), orthogonal, "{pair:?}");
        }
    }

    #[test]
    fn inertial_near_zone_is_static_dipole_form() {
        let pair = DipolePair::along_axis(2, 1.0, 1.0);
        let e = inertial_resonance_energy(&pair, &SYM, 1e-4, 1.0).unwrap();
        assert!((e * 1e-12 - (-2.0)).abs() < 1e-7);
    }

    #[test]
    fn inertial_signal_real_part_is_energy() {
        let pair = DipolePair::new([0.3, -0.2, 0.7], [0.1, 0.5, -0.4]).unwrap();
        for z in [0.01, 0.7, 3.0, 40.0] {
            let e = inertial_resonance_energy(&pair, &SYM, z, 1.3).unwrap();
            let s = inertial_resonance_signal(&pair, &SYM, z, 1.3).unwrap();
            assert!((s.re - e).abs() <= 1e-12 * s.norm(), "z = {z}");
        }
    }

    #[test]
    fn inertial_orthogonal_vanishes() {
        let pair = DipolePair::new([0.0, 0.0, 1.0], [1.0, 0.0, 0.0]).unwrap();
        assert_eq!(inertial_resonance_energy(&pair, &SYM, 2.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn inertial_parity_is_exact() {
        let pair = DipolePair::along_axis(0, 1.0, 1.0);
        for z in [0.1, 1.0, 17.0] {
            let s = inertial_resonance_energy(&pair, &SYM, z, 1.0).unwrap();
            assert_eq!(inertial_resonance_energy(&pair, &ANTI, z, 1.0).unwrap(), -s);
        }
    }

    #[test]
    fn far_regime_x_axis_keeps_only_cosine_term() {
        let pair = DipolePair::along_axis(0, 1.0, 1.0);
        let (z, w, a): (f64, f64, f64) = (50.0, 0.3, 2.0);
        let phi = 2.0 * w / a * (a * z).ln();
        let expected = 8.0 / (a * z) * phi.cos() / z.powi(3);
        let e = far_regime_resonance_energy(&pair, &SYM, z, w, a).unwrap();
        assert!(((e - expected) / expected).abs() < 1e-14);
    }

    #[test]
    fn far_regime_guards() {
        let pair = DipolePair::along_axis(0, 1.0, 1.0);
        assert!(matches!(far_regime_resonance_energy(&pair, &SYM, 1.0, 1.0, 5.0), Err(Error::Regime(_))));
        let bad = DipolePair::new([1.0, 0.0, 0.0], [0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(far_regime_resonance_energy(&bad, &SYM, 100.0, 1.0, 1.0), Err(Error::Configuration(_))));
    }

    #[test]
    fn coincident_atoms_are_rejected() {
        let pair = DipolePair::along_axis(0, 1.0, 1.0);
        let p = DdcKernelParams::new(0.01, 200.0);
        assert!(matches!(ddc_resonance_energy(&pair, &SYM, 0.0, 1.0, 0.1, &p), Err(Error::Domain(_))));
        assert!(inertial_resonance_energy(&pair, &SYM, 0.0, 1.0).is_err());
    }

    #[test]
    fn orthogonal_signature_checks_configuration() {
        let pair = DipolePair::along_axis(0, 1.0, 1.0);
        let p = DdcKernelParams::new(0.01, 200.0);
        assert!(matches!(
            orthogonal_dipole_signature(&pair, &SYM, 1.0, 1.0, 0.1, &p),
            Err(Error::Configuration(_))
        ));
    }
}
