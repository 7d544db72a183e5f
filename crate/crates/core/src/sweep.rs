//! Uniformly sampled two-port transmission data.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

/// Acquisition metadata carried alongside a sweep.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepMeta {
    /// Transducer separation d (m).
    pub distance: Option<f64>,
    /// Sample temperature (K).
    pub temperature: Option<f64>,
    /// Applied bias (V).
    pub bias: Option<f64>,
    pub label: String,
    /// Free-form comment lines, e.g. from a Touchstone header.
    pub comments: Vec<String>,
}

/// Complex S21 on a uniform frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencySweep {
    pub f_start: f64,
    pub f_step: f64,
    pub points: Vec<Complex64>,
    pub meta: SweepMeta,
}

impl FrequencySweep {
    pub fn new(f_start: f64, f_step: f64, points: Vec<Complex64>, meta: SweepMeta) -> Result<Self> {
        let sweep = FrequencySweep {
            f_start,
            f_step,
            points,
            meta,
        };
        sweep.validate()?;
        Ok(sweep)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.f_step > 0.0) || !self.f_step.is_finite() {
            return Err(Error::invalid(
                "f_step",
                "frequency step must be positive and finite",
            ));
        }
        if !self.f_start.is_finite() {
            return Err(Error::invalid("f_start", "start frequency must be finite"));
        }
        if let Some(i) = self
            .points
            .iter()
            .position(|p| !(p.re.is_finite() && p.im.is_finite()))
        {
            return Err(Error::invalid(
                "points",
                alloc::format!("sample {i} is not finite"),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.f_start + index as f64 * self.f_step
    }

    pub fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points.len()).map(move |i| self.frequency(i))
    }

    pub fn f_stop(&self) -> f64 {
        self.frequency(self.points.len().saturating_sub(1))
    }

    /// `Σ|S21|²·Δf`.
    pub fn energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() * self.f_step
    }

    /// Same grid and metadata, new samples.
    pub fn with_points(&self, points: Vec<Complex64>) -> Self {
        FrequencySweep {
            f_start: self.f_start,
            f_step: self.f_step,
            points,
            meta: self.meta.clone(),
        }
    }
}

/// Frequency sampling plan for synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    pub start: f64,
    pub step: f64,
    pub points: usize,
}

impl FrequencyGrid {
    pub const DEFAULT_POINTS: usize = 1601;
    pub const DEFAULT_HALF_SPAN: f64 = 0.6e9;

    /// `points` samples covering `[center − half_span, center + half_span)`.
    ///
    /// The step is `2·half_span/points`, so the grid is exactly one period of
    /// the discrete Fourier transform: delays that are integer multiples of
    /// `1/(2·half_span)` land on transform bins.
    pub fn centered(center: f64, half_span: f64, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::invalid("points", "a grid needs at least two points"));
        }
        if !(half_span > 0.0) || !(center - half_span > 0.0) {
            return Err(Error::invalid(
                "half_span",
                "grid must be non-empty and stay at positive frequencies",
            ));
        }
        Ok(FrequencyGrid {
            start: center - half_span,
            step: 2.0 * half_span / points as f64,
            points,
        })
    }

    /// 1601 points over f0 ± 0.6 GHz.
    pub fn default_for(f0: f64) -> Result<Self> {
        Self::centered(f0, Self::DEFAULT_HALF_SPAN, Self::DEFAULT_POINTS)
    }

    pub fn frequency(&self, index: usize) -> f64 {
        self.start + index as f64 * self.step
    }

    pub fn stop(&self) -> f64 {
        self.frequency(self.points.saturating_sub(1))
    }
}
