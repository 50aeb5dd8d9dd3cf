//! Least-squares power-law fits on log–log data.

use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_FIT_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    /// `ln|C|` in `|E| = |C| R^p`.
    pub log_prefactor: f64,
    pub samples: usize,
}

/// Fits `ln|E| = ln|C| + p ln R` over the samples with `R` inside `window`
/// (inclusive). All energies in the window must share one sign.
pub fn fit_scaling_exponent(samples: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Fit(format!("invalid window ({lo}, {hi})")));
    }
    let inside: Vec<(f64, f64)> = samples.iter().copied().filter(|&(r, _)| r >= lo && r <= hi).collect();
    if inside.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples in window, need at least {MIN_FIT_SAMPLES}",
            inside.len()
        )));
    }
    let positive = inside.iter().filter(|s| s.1 > 0.0).count();
    let negative = inside.iter().filter(|s| s.1 < 0.0).count();
    if positive != inside.len() && negative != inside.len() {
        return Err(Error::Fit("energies change sign (or vanish) inside the window".into()));
    }
    let pts: Vec<(f64, f64)> = inside.iter().map(|&(r, e)| (r.ln(), e.abs().ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all samples share one R".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(PowerLawFit { exponent: slope, stderr, log_prefactor: intercept, samples: pts.len() })
}

/// Local maxima of `|E|` along a sampled curve, sorted by `R`.
pub fn envelope_peaks(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    samples
        .windows(3)
        .filter(|w| w[1].1.abs() > w[0].1.abs() && w[1].1.abs() >= w[2].1.abs())
        .map(|w| (w[1].0, w[1].1.abs()))
        .collect()
}

/// `(R_i, d ln|E| / d ln R)` from centred differences.
pub fn local_exponents(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    samples
        .windows(3)
        .map(|w| {
            let slope = (w[2].1.abs().ln() - w[0].1.abs().ln()) / (w[2].0.ln() - w[0].0.ln());
            (w[1].0, slope)
        })
        .collect()
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    // base 10 keeps decade-aligned grids on round numbers
    let (l0, l1) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| match i {
            0 => lo,
            i if i == n - 1 => hi,
            i => 10f64.powf(l0 + (l1 - l0) * i as f64 / (n - 1) as f64),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let samples: Vec<(f64, f64)> = log_grid(1.0, 10.0, 20).into_iter().map(|r| (r, -3.2 * r.powi(-7))).collect();
        let fit = fit_scaling_exponent(&samples, (1.0, 10.0)).unwrap();
        assert!((fit.exponent + 7.0).abs() < 1e-3);
        assert!(fit.stderr < 1e-3);
    }

    #[test]
    fn mixed_sign_rejected() {
        let samples: Vec<(f64, f64)> = log_grid(1.0, 10.0, 20).into_iter().map(|r| (r, (3.0 * r).cos())).collect();
        assert!(matches!(fit_scaling_exponent(&samples, (1.0, 10.0)), Err(Error::Fit(_))));
    }

    #[test]
    fn too_few_samples_rejected() {
        let samples: Vec<(f64, f64)> = log_grid(1.0, 10.0, 7).into_iter().map(|r| (r, r)).collect();
        assert!(fit_scaling_exponent(&samples, (1.0, 10.0)).is_err());
    }

    #[test]
    fn peaks_of_damped_cosine() {
        let samples: Vec<(f64, f64)> = (1..4000).map(|i| {
            let r = 10.0 + i as f64 * 0.01;
            (r, (r).cos() / r)
        }).collect();
        let peaks = envelope_peaks(&samples);
        assert!(peaks.len() >= 10);
        let fit = fit_scaling_exponent(&peaks, (10.0, 50.0)).unwrap();
        assert!((fit.exponent + 1.0).abs() < 0.02, "{}", fit.exponent);
    }
}
