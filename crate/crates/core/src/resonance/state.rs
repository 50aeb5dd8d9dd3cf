//! Two two-level atoms sharing one excitation.
//!
//! Basis order: `|g_A g_B>, |g_A e_B>, |e_A g_B>, |e_A e_B>`. The correlated
//! states are `(|g_A e_B> ± |e_A g_B>)/√2`. In the interaction picture the
//! dipole of a real-matrix-element atom is `μ (σ₊ e^{iω₀τ} + σ₋ e^{-iω₀τ})`,
//! so two-time cross correlations of atoms `X`, `Y` are `μ^X_ℓ μ^Y_m` times
//! the amplitudes computed here.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

type Op = [[Complex64; 4]; 4];
type Ket = [Complex64; 4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Symmetric,
    Antisymmetric,
}

/// One of the two Bell-type states with the excitation delocalised over both atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CorrelatedState {
    pub parity: Parity,
}

impl CorrelatedState {
    pub const SYMMETRIC: Self = Self { parity: Parity::Symmetric };
    pub const ANTISYMMETRIC: Self = Self { parity: Parity::Antisymmetric };

    pub fn new(parity: Parity) -> Self {
        Self { parity }
    }

    pub fn sign(&self) -> f64 {
        match self.parity {
            Parity::Symmetric => 1.0,
            Parity::Antisymmetric => -1.0,
        }
    }

    pub fn flipped(&self) -> Self {
        match self.parity {
            Parity::Symmetric => Self::ANTISYMMETRIC,
            Parity::Antisymmetric => Self::SYMMETRIC,
        }
    }

    pub fn ket(&self) -> Ket {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        [z, Complex64::new(h, 0.0), Complex64::new(self.sign() * h, 0.0), z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Atom {
    A,
    B,
}

/// Raising (`true`) or lowering operator of one atom on the two-atom space.
fn ladder(atom: Atom, raising: bool) -> Op {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut op = [[zero; 4]; 4];
    for col in 0..4 {
        let (a_excited, b_excited) = (col & 2 != 0, col & 1 != 0);
        let target = match (atom, raising) {
            (Atom::A, true) if !a_excited => Some(col | 2),
            (Atom::A, false) if a_excited => Some(col & !2),
            (Atom::B, true) if !b_excited => Some(col | 1),
            (Atom::B, false) if b_excited => Some(col & !1),
            _ => None,
        };
        if let Some(row) = target {
            op[row][col] = one;
        }
    }
    op
}

fn apply(op: &Op, ket: &Ket) -> Ket {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (row, slot) in out.iter_mut().enumerate() {
        *slot = (0..4).fold(Complex64::new(0.0, 0.0), |acc, col| acc + op[row][col] * ket[col]);
    }
    out
}

/// `<ψ| first · second |ψ>`
fn expectation(state: &Ket, first: &Op, second: &Op) -> Complex64 {
    let right = apply(first, &apply(second, state));
    state.iter().zip(right.iter()).fold(Complex64::new(0.0, 0.0), |acc, (b, k)| acc + b.conj() * k)
}

/// Stationary two-time amplitudes for the ordered pair `(X(τ), Y(τ - s))`:
/// each correlation is `plus · e^{iω₀s} + minus · e^{-iω₀s}` (times `μ^X_ℓ μ^Y_m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairAmplitudes {
    /// Symmetric correlation `½<{μ^X(τ), μ^Y(τ-s)}>`.
    pub symmetric_plus: Complex64,
    pub symmetric_minus: Complex64,
    /// Linear susceptibility `½<[μ^X(τ), μ^Y(τ-s)]>`.
    pub susceptibility_plus: Complex64,
    pub susceptibility_minus: Complex64,
}

impl PairAmplitudes {
    pub fn for_pair(state: &CorrelatedState, first: Atom, second: Atom) -> Self {
        let psi = state.ket();
        let (xp, xm) = (ladder(first, true), ladder(first, false));
        let (yp, ym) = (ladder(second, true), ladder(second, false));
        // μ^X(τ) μ^Y(τ') ∋ σ₊^X σ₋^Y e^{iω₀(τ-τ')} + σ₋^X σ₊^Y e^{-iω₀(τ-τ')}
        let xy_plus = expectation(&psi, &xp, &ym);
        let yx_plus = expectation(&psi, &ym, &xp);
        let xy_minus = expectation(&psi, &xm, &yp);
        let yx_minus = expectation(&psi, &yp, &xm);
        Self {
            symmetric_plus: (xy_plus + yx_plus) * 0.5,
            symmetric_minus: (xy_minus + yx_minus) * 0.5,
            susceptibility_plus: (xy_plus - yx_plus) * 0.5,
            susceptibility_minus: (xy_minus - yx_minus) * 0.5,
        }
    }

    /// Correlations oscillating at `±2ω₀τ`; zero for the one-excitation states.
    pub fn nonstationary_weight(state: &CorrelatedState, first: Atom, second: Atom) -> f64 {
        let psi = state.ket();
        let pp = expectation(&psi, &ladder(first, true), &ladder(second, true));
        let mm = expectation(&psi, &ladder(first, false), &ladder(second, false));
        pp.norm() + mm.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn states_are_normalised() {
        for s in [CorrelatedState::SYMMETRIC, CorrelatedState::ANTISYMMETRIC] {
            let n: f64 = s.ket().iter().map(|c| c.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cross_correlations_carry_the_parity_sign() {
        let sym = PairAmplitudes::for_pair(&CorrelatedState::SYMMETRIC, Atom::A, Atom::B);
        let anti = PairAmplitudes::for_pair(&CorrelatedState::ANTISYMMETRIC, Atom::A, Atom::B);
        assert!((sym.symmetric_plus.re - 0.5).abs() < 1e-15);
        assert!((sym.symmetric_minus.re - 0.5).abs() < 1e-15);
        assert_eq!(anti.symmetric_plus, -sym.symmetric_plus);
        assert_eq!(anti.symmetric_minus, -sym.symmetric_minus);
    }

    #[test]
    fn different_atoms_commute() {
        for s in [CorrelatedState::SYMMETRIC, CorrelatedState::ANTISYMMETRIC] {
            for (x, y) in [(Atom::A, Atom::B), (Atom::B, Atom::A)] {
                let amp = PairAmplitudes::for_pair(&s, x, y);
                assert_eq!(amp.susceptibility_plus.norm(), 0.0);
                assert_eq!(amp.susceptibility_minus.norm(), 0.0);
                assert_eq!(PairAmplitudes::nonstationary_weight(&s, x, y), 0.0);
            }
        }
    }
}
