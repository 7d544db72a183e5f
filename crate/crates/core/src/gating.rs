//! Frequency↔time transforms, time gating and resonance read-out.
//!
//! A sweep of `n` points with step `Δf` maps onto a periodic impulse response
//! with period `1/Δf`. Traces for inspection can be zero-padded and tapered;
//! gating itself always works on the unpadded `n`-bin frame, where the
//! transform pair is exact and rectangular gating is a projection.

use alloc::vec::Vec;

use num_complex::Complex64;
// Unused when std's inherent float methods are in scope.
#[allow(unused_imports)]
use num_traits::Float;

use crate::dft::{Direction, SpectralEngine, SpectralWindow};
use crate::sweep::{FrequencySweep, SweepMeta};
use crate::{db_to_amplitude, Error, Result};

/// Peaks closer than this many trace steps are merged.
pub const REFRACTORY_STEPS: f64 = 5.0;

/// Sampled impulse response derived from a [`FrequencySweep`].
///
/// Samples are normalized by the window sum, so a delay line with a single
/// path of amplitude `a` shows a peak of height `a` on a rectangular window.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    pub t_start: f64,
    /// `1/(n_padded·Δf)`.
    pub t_step: f64,
    pub points: Vec<Complex64>,
    /// Length and step of the source sweep.
    pub source_len: usize,
    pub source_f_step: f64,
    pub source_meta: SweepMeta,
}

impl TimeTrace {
    pub fn time(&self, index: usize) -> f64 {
        self.t_start + index as f64 * self.t_step
    }

    pub fn pad_factor(&self) -> usize {
        self.points.len() / self.source_len.max(1)
    }

    /// Energy in the same units as [`FrequencySweep::energy`]; equal to it for
    /// rectangular windows at any pad factor.
    pub fn energy(&self) -> f64 {
        let scale = self.source_len as f64 * self.source_f_step;
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() * self.t_step * scale * scale
    }

    /// Period of the impulse response, `1/Δf`.
    pub fn period(&self) -> f64 {
        1.0 / self.source_f_step
    }
}

/// Time gate `[t_lo, t_hi]` with optional raised-cosine edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateWindow {
    pub t_lo: f64,
    pub t_hi: f64,
    /// Fraction of the gate width used by each cosine edge; 0 is a hard rectangle.
    pub taper_fraction: f64,
}

impl GateWindow {
    pub fn new(t_lo: f64, t_hi: f64, taper_fraction: f64) -> Result<Self> {
        let w = GateWindow {
            t_lo,
            t_hi,
            taper_fraction,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn rectangular(t_lo: f64, t_hi: f64) -> Result<Self> {
        Self::new(t_lo, t_hi, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_lo < self.t_hi) || !self.t_lo.is_finite() || !self.t_hi.is_finite() {
            return Err(Error::invalid("gate", "t_lo must be below t_hi"));
        }
        if !(0.0..=0.5).contains(&self.taper_fraction) {
            return Err(Error::invalid("taper_fraction", "must lie in [0, 0.5]"));
        }
        Ok(())
    }

    pub fn weight(&self, t: f64) -> f64 {
        if t < self.t_lo || t > self.t_hi {
            return 0.0;
        }
        let edge = self.taper_fraction * (self.t_hi - self.t_lo);
        if edge > 0.0 {
            let from_edge = (t - self.t_lo).min(self.t_hi - t);
            if from_edge < edge {
                return 0.5 * (1.0 - (core::f64::consts::PI * from_edge / edge).cos());
            }
        }
        1.0
    }
}

fn check_pad(pad_factor: usize) -> Result<()> {
    if pad_factor == 0 {
        Err(Error::invalid("pad_factor", "must be at least 1"))
    } else {
        Ok(())
    }
}

/// Inverse DFT of the sweep, zero-padded to `pad_factor·n` points.
pub fn to_time_domain(
    sweep: &FrequencySweep,
    pad_factor: usize,
    engine: &dyn SpectralEngine,
) -> Result<TimeTrace> {
    to_time_domain_windowed(sweep, pad_factor, SpectralWindow::Rectangular, engine)
}

/// As [`to_time_domain`], with the sweep tapered by `window` first.
pub fn to_time_domain_windowed(
    sweep: &FrequencySweep,
    pad_factor: usize,
    window: SpectralWindow,
    engine: &dyn SpectralEngine,
) -> Result<TimeTrace> {
    check_pad(pad_factor)?;
    sweep.validate()?;
    let n = sweep.len();
    let m = n * pad_factor;
    let coeffs = window.coefficients(n);
    let norm: f64 = coeffs.iter().sum();
    let mut buf = alloc::vec![Complex64::new(0.0, 0.0); m];
    for ((b, &x), &w) in buf.iter_mut().zip(&sweep.points).zip(&coeffs) {
        *b = x * w;
    }
    engine.process(&mut buf, Direction::Inverse);
    if norm > 0.0 {
        for b in &mut buf {
            *b /= norm;
        }
    }
    Ok(TimeTrace {
        t_start: 0.0,
        t_step: 1.0 / (m.max(1) as f64 * sweep.f_step),
        points: buf,
        source_len: n,
        source_f_step: sweep.f_step,
        source_meta: sweep.meta.clone(),
    })
}

/// A local maximum of |trace|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub amplitude: f64,
}

/// Local maxima of |trace| within `threshold_db` (negative) of the global
/// maximum, in time order, refined by a three-point parabola on log magnitude.
pub fn detect_peaks(trace: &TimeTrace, threshold_db: f64) -> Result<Vec<Peak>> {
    if !(threshold_db < 0.0) {
        return Err(Error::invalid(
            "threshold_db",
            "must be negative (relative to the global maximum)",
        ));
    }
    let mags: Vec<f64> = trace.points.iter().map(|p| p.norm()).collect();
    let n = mags.len();
    let global = mags.iter().copied().fold(0.0, f64::max);
    if n < 3 || global <= 0.0 {
        return Ok(Vec::new());
    }
    let level = global * db_to_amplitude(threshold_db);
    let refractory = REFRACTORY_STEPS * trace.t_step;
    let mut peaks: Vec<Peak> = Vec::new();
    for i in 0..n {
        let prev = mags[(i + n - 1) % n];
        let next = mags[(i + 1) % n];
        let here = mags[i];
        if here < level || !(here > prev) || here < next {
            continue;
        }
        let (offset, amplitude) = parabolic_log_vertex(prev, here, next);
        let peak = Peak {
            time: trace.time(i) + offset * trace.t_step,
            amplitude,
        };
        match peaks.last_mut() {
            Some(last) if peak.time - last.time < refractory => {
                if peak.amplitude > last.amplitude {
                    *last = peak;
                }
            }
            _ => peaks.push(peak),
        }
    }
    Ok(peaks)
}

/// Vertex offset (in samples, within ±0.5) and height of the parabola through
/// `ln a, ln b, ln c` at −1, 0, 1.
fn parabolic_log_vertex(a: f64, b: f64, c: f64) -> (f64, f64) {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return (0.0, b);
    }
    let (ya, yb, yc) = (a.ln(), b.ln(), c.ln());
    let curvature = ya - 2.0 * yb + yc;
    if !(curvature < 0.0) {
        return (0.0, b);
    }
    let offset = (0.5 * (ya - yc) / curvature).clamp(-0.5, 0.5);
    if offset == 0.0 {
        return (0.0, b);
    }
    let height = (yb - 0.25 * (ya - yc) * offset).exp();
    (offset, height)
}

/// Time-gates a sweep: transform, weight by `window`, transform back onto the
/// original grid.
///
/// Each time bin's weight is the window averaged over `pad_factor`
/// sub-samples of the bin. For a hard rectangle (no taper) the weight is then
/// rounded to 0 or 1, so a bin is kept when at least half of it lies inside
/// the gate and the operation is an orthogonal projection.
pub fn apply_gate(
    sweep: &FrequencySweep,
    window: &GateWindow,
    pad_factor: usize,
    engine: &dyn SpectralEngine,
) -> Result<FrequencySweep> {
    check_pad(pad_factor)?;
    window.validate()?;
    sweep.validate()?;
    let period = 1.0 / sweep.f_step;
    if window.t_lo < 0.0 || window.t_hi > period {
        return Err(Error::GateOutOfRange {
            t_lo: window.t_lo,
            t_hi: window.t_hi,
            limit: period,
        });
    }
    let n = sweep.len();
    if n == 0 {
        return Ok(sweep.clone());
    }
    let t_step = period / n as f64;
    let mut buf = sweep.points.clone();
    engine.process(&mut buf, Direction::Inverse);
    let p = pad_factor as f64;
    for (m, b) in buf.iter_mut().enumerate() {
        let mut w = 0.0;
        for j in 0..pad_factor {
            let t = (m as f64 + (j as f64 + 0.5) / p - 0.5) * t_step;
            w += window.weight(num_traits::Euclid::rem_euclid(&t, &period));
        }
        w /= p;
        if window.taper_fraction == 0.0 {
            w = if w >= 0.5 { 1.0 } else { 0.0 };
        }
        *b *= w / n as f64;
    }
    engine.process(&mut buf, Direction::Forward);
    Ok(sweep.with_points(buf))
}

/// Resonance read-out of a gated sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceMetrics {
    /// Interpolated frequency of maximum |S21| (Hz).
    pub frequency: f64,
    /// Interpolated maximum |S21|.
    pub amplitude: f64,
    /// Several samples share the maximum; the lowest frequency was reported.
    pub ambiguous: bool,
}

pub fn resonance_metrics(gated: &FrequencySweep) -> Result<ResonanceMetrics> {
    if gated.is_empty() {
        return Err(Error::EmptyInput("gated sweep"));
    }
    let mags: Vec<f64> = gated.points.iter().map(|p| p.norm()).collect();
    let max = mags.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let index = mags.iter().position(|&m| m == max).unwrap_or(0);
    let ambiguous = mags.iter().filter(|&&m| m == max).count() > 1;
    let (offset, amplitude) = if !ambiguous && index > 0 && index + 1 < mags.len() {
        parabolic_log_vertex(mags[index - 1], max, mags[index + 1])
    } else {
        (0.0, max)
    };
    Ok(ResonanceMetrics {
        frequency: gated.frequency(index) + offset * gated.f_step,
        amplitude,
        ambiguous,
    })
}

/// Ratio of resonance transmissions `|S21,0(a)| / |S21,0(b)|` of two gated sweeps.
pub fn compare_resonance(a: &FrequencySweep, b: &FrequencySweep) -> Result<f64> {
    let ra = resonance_metrics(a)?;
    let rb = resonance_metrics(b)?;
    if !(rb.amplitude > 0.0) {
        return Err(Error::invalid(
            "b",
            "reference sweep has zero resonance amplitude",
        ));
    }
    Ok(ra.amplitude / rb.amplitude)
}
