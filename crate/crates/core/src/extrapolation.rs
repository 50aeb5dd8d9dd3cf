//! Polynomial (Richardson/Neville) extrapolation of a sequence `I(h_k)` to `h = 0`.

use crate::error::{domain, Error, Result};
use crate::quadrature::QuadValue;

#[derive(Debug, Clone)]
pub struct Extrapolated<T> {
    pub value: T,
    /// Distance between the last two diagonal entries of the Neville table.
    pub error: f64,
    /// Successive diagonal estimates using the first 1, 2, ... steps.
    pub diagonal: Vec<T>,
}

/// Extrapolates `values[k] = I(steps[k])` to `h = 0` with the interpolating
/// polynomial through all points. `steps` must be positive and strictly
/// decreasing.
///
/// `noise` is the absolute uncertainty of the individual values; the
/// sequence is declared divergent when the last correction exceeds both the
/// previous one and that noise level.
pub fn extrapolate_to_zero<T: QuadValue>(steps: &[f64], values: &[T], noise: f64) -> Result<Extrapolated<T>> {
    if steps.len() != values.len() || steps.len() < 2 {
        return Err(domain("extrapolation needs at least two (step, value) pairs of equal length"));
    }
    if steps.iter().any(|h| !(*h > 0.0)) || steps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Convergence {
            what: format!("extrapolation: step sequence {steps:?} is not strictly decreasing"),
            bound: f64::INFINITY,
        });
    }
    let n = steps.len();
    // Neville on p[i] = P_{i..=k}(0), updated in place as k grows
    let mut p: Vec<T> = values.to_vec();
    let mut diagonal = vec![values[0]];
    for k in 1..n {
        for i in (0..k).rev() {
            let (hi, hk) = (steps[i], steps[k]);
            // P_{i..k}(0) = (h_i P_{i+1..k} - h_k P_{i..k-1}) / (h_i - h_k)
            p[i] = (p[i + 1] * hi - p[i] * hk) * (1.0 / (hi - hk));
        }
        diagonal.push(p[0]);
    }
    let last = diagonal[n - 1];
    let error = (last - diagonal[n - 2]).norm();
    if n >= 3 {
        let previous = (diagonal[n - 2] - diagonal[n - 3]).norm();
        if error > previous && error > noise {
            return Err(Error::Convergence {
                what: "epsilon extrapolation diverges".into(),
                bound: error,
            });
        }
    }
    Ok(Extrapolated { value: last, error: error.max(noise), diagonal })
}

/// `Σ_k |L_k(0)|`: worst-case amplification of independent value errors by the
/// extrapolating polynomial.
pub fn noise_amplification(steps: &[f64]) -> f64 {
    (0..steps.len())
        .map(|k| {
            steps
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .map(|(_, h)| h / (h - steps[k]))
                .product::<f64>()
                .abs()
        })
        .sum()
}

/// `first, first/ratio, first/ratio², ...` with `count` entries.
pub fn geometric_steps(first: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| first / ratio.powi(k as i32)).collect()
}
