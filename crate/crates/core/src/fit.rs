//! Least-squares fits of SAW velocity and propagation loss.

use alloc::string::String;
use alloc::vec::Vec;

// Unused when std's inherent float methods are in scope.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// A fitted parameter with its unit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitParam {
    pub name: &'static str,
    pub unit: &'static str,
    pub value: f64,
}

/// Point estimates, covariance from linearized residuals, and the residual RMS.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: Vec<FitParam>,
    /// Row-major, ordered like `params`.
    pub covariance: Vec<Vec<f64>>,
    /// RMS of the residuals in the regressed quantity.
    pub residual_rms: f64,
}

impl FitResult {
    pub fn value(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        let i = self.params.iter().position(|p| p.name == name)?;
        Some(self.covariance[i][i].max(0.0).sqrt())
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        for p in &self.params {
            let sd = self.std_error(p.name).unwrap_or(f64::NAN);
            out.push_str(&alloc::format!(
                "{} = {:e} ± {:e} {}\n",
                p.name,
                p.value,
                sd,
                p.unit
            ));
        }
        out
    }
}

fn check_finite(points: &[(f64, f64)]) -> Result<()> {
    if points.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(Error::invalid("points", "all values must be finite"));
    }
    Ok(())
}

/// Fits `d = v·Δt` through the origin to `(d, Δt)` pairs: `v = Σ d·Δt / Σ Δt²`.
pub fn fit_velocity(pairs: &[(f64, f64)]) -> Result<FitResult> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("distance/delay pairs"));
    }
    check_finite(pairs)?;
    let sxx: f64 = pairs.iter().map(|(_, t)| t * t).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all delays are zero"));
    }
    let sxy: f64 = pairs.iter().map(|(d, t)| d * t).sum();
    let v = sxy / sxx;
    let ss: f64 = pairs.iter().map(|(d, t)| (d - v * t).powi(2)).sum();
    let n = pairs.len();
    let dof = n.saturating_sub(1).max(1) as f64;
    Ok(FitResult {
        params: alloc::vec![FitParam {
            name: "v",
            unit: "m/s",
            value: v,
        }],
        covariance: alloc::vec![alloc::vec![ss / dof / sxx]],
        residual_rms: (ss / n as f64).sqrt(),
    })
}

/// Result of fitting `|S21,0| = A·exp(−d/2l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// Prefactor A: extrapolated transmission with no propagation loss.
    pub amplitude: f64,
    /// Decay length l (m); infinite when the fitted slope is exactly zero,
    /// negative when the data grow with distance.
    pub decay_length: f64,
    /// Fitted slope of `ln|S21,0|` versus d, equal to `−1/(2l)` (1/m).
    pub slope: f64,
    pub slope_std: f64,
    /// Slope within two standard errors of zero: the data are consistent with
    /// no attenuation (L ≈ 1).
    pub attenuation_insignificant: bool,
    /// Linear fit in (ln A, slope) with covariance.
    pub fit: FitResult,
}

/// Linear least squares on `ln|S21,0|` versus `d`.
pub fn fit_decay(points: &[(f64, f64)]) -> Result<DecayFit> {
    if points.len() < 2 {
        return Err(Error::invalid(
            "points",
            "decay fit needs at least two points",
        ));
    }
    check_finite(points)?;
    if points.iter().any(|&(_, a)| !(a > 0.0)) {
        return Err(Error::invalid(
            "points",
            "resonance amplitudes must be positive",
        ));
    }
    let n = points.len() as f64;
    let mean_d = points.iter().map(|p| p.0).sum::<f64>() / n;
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_d).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::DegenerateFit("all distances are equal"));
    }
    let sxy: f64 = points
        .iter()
        .zip(&ys)
        .map(|(p, y)| (p.0 - mean_d) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_d;
    let ss: f64 = points
        .iter()
        .zip(&ys)
        .map(|(p, y)| (y - intercept - slope * p.0).powi(2))
        .sum();
    let dof = (points.len() as f64 - 2.0).max(1.0);
    let sigma2 = ss / dof;
    let var_slope = sigma2 / sxx;
    let var_intercept = sigma2 * (1.0 / n + mean_d * mean_d / sxx);
    let cov = -mean_d * sigma2 / sxx;
    let slope_std = var_slope.sqrt();
    let decay_length = if slope == 0.0 {
        f64::INFINITY
    } else {
        -1.0 / (2.0 * slope)
    };
    Ok(DecayFit {
        amplitude: intercept.exp(),
        decay_length,
        slope,
        slope_std,
        attenuation_insignificant: slope.abs() <= 2.0 * slope_std,
        fit: FitResult {
            params: alloc::vec![
                FitParam {
                    name: "ln_A",
                    unit: "",
                    value: intercept,
                },
                FitParam {
                    name: "slope",
                    unit: "1/m",
                    value: slope,
                },
            ],
            covariance: alloc::vec![alloc::vec![var_intercept, cov], alloc::vec![cov, var_slope]],
            residual_rms: (ss / n).sqrt(),
        },
    })
}
