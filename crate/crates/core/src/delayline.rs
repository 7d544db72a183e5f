//! Forward model of a two-transducer SAW delay line.
//!
//! The transmission is the sum of two paths: a frequency-flat electromagnetic
//! crosstalk arriving after `t_c`, and the acoustic path, which carries the
//! insertion loss of both transducers, exponential propagation loss and an
//! extra delay `d/v`. Their interference produces ripples in |S21| with period
//! `v/d` around the resonance.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Unused when std's inherent float methods are in scope.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::idt::{self, IdtDesign, RadiationAdmittance};
use crate::sweep::{FrequencyGrid, FrequencySweep, SweepMeta};
use crate::{db_to_amplitude, reference, Error, Result};

/// Full parameter set of the forward model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayLineScenario {
    pub idt: IdtDesign,
    pub k2: f64,
    /// Transducer separation d (m).
    pub distance: f64,
    /// SAW phase velocity (m/s).
    pub v_saw: f64,
    /// Electromagnetic path delay t_c (s).
    pub t_crosstalk: f64,
    /// Complex amplitude of the crosstalk path.
    pub crosstalk: Complex64,
    /// Amplitude decay length l (m); `f64::INFINITY` for a lossless path.
    pub decay_length: f64,
    /// Additive noise level applied by callers that post-process synthesized data (dB).
    pub noise_floor_db: Option<f64>,
}

impl DelayLineScenario {
    /// Reference device at distance `d`: measured transducer and velocity,
    /// 2.5 ns crosstalk at −55 dB, lossless propagation.
    pub fn reference(idt: IdtDesign, k2: f64, distance: f64) -> Self {
        DelayLineScenario {
            idt,
            k2,
            distance,
            v_saw: reference::V_SAW_ROOM,
            t_crosstalk: reference::T_CROSSTALK,
            crosstalk: Complex64::new(db_to_amplitude(reference::CROSSTALK_DB), 0.0),
            decay_length: f64::INFINITY,
            noise_floor_db: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.idt.validate()?;
        idt::ga_at_resonance(&self.idt, self.k2)?;
        if !(self.distance >= 0.0) || !self.distance.is_finite() {
            return Err(Error::invalid(
                "distance",
                "must be finite and non-negative",
            ));
        }
        idt::positive("v_saw", self.v_saw)?;
        if !(self.t_crosstalk >= 0.0) || !self.t_crosstalk.is_finite() {
            return Err(Error::invalid(
                "t_crosstalk",
                "must be finite and non-negative",
            ));
        }
        if !(self.crosstalk.norm() < 1.0) {
            return Err(Error::invalid(
                "crosstalk",
                "crosstalk magnitude must be below 1",
            ));
        }
        idt::positive("decay_length", self.decay_length)?;
        if let Some(db) = self.noise_floor_db {
            if !(db < 0.0) {
                return Err(Error::invalid("noise_floor_db", "must be negative"));
            }
        }
        Ok(())
    }

    /// Amplitude propagation loss `L = exp(−d/2l)`.
    pub fn propagation_loss(&self) -> f64 {
        (-self.distance / (2.0 * self.decay_length)).exp()
    }

    /// Acoustic transit time `d/v`.
    pub fn acoustic_delay(&self) -> f64 {
        self.distance / self.v_saw
    }

    /// Arrival of the acoustic signal, `t_c + d/v`.
    pub fn acoustic_arrival(&self) -> f64 {
        self.t_crosstalk + self.acoustic_delay()
    }

    /// Transmission at one frequency.
    pub fn s21(&self, ga0: f64, f: f64) -> Complex64 {
        let crosstalk =
            self.crosstalk * Complex64::from_polar(1.0, -2.0 * PI * f * self.t_crosstalk);
        let ga = idt::ga_spectrum(&self.idt, ga0, f);
        // Transmitter and receiver are identical, so sqrt(IL_t·IL_r) = IL.
        let il = idt::insertion_loss(&self.idt, RadiationAdmittance::conductance(ga));
        let acoustic = Complex64::from_polar(
            il * self.propagation_loss(),
            -2.0 * PI * f * self.acoustic_arrival(),
        );
        crosstalk + acoustic
    }
}

/// Synthesizes S21 on `grid`.
pub fn synth_sweep(scenario: &DelayLineScenario, grid: &FrequencyGrid) -> Result<FrequencySweep> {
    scenario.validate()?;
    let design = &scenario.idt;
    let n = f64::from(design.n_periods);
    let need_lo = design.f0 * (1.0 - 2.0 / n);
    let need_hi = design.f0 * (1.0 + 2.0 / n);
    if grid.points < 2 || grid.start > need_lo || grid.stop() < need_hi {
        return Err(Error::GridTooNarrow {
            start: grid.start,
            end: grid.stop(),
            need_lo,
            need_hi,
        });
    }
    let ga0 = idt::ga_at_resonance(design, scenario.k2)?;
    let peak_il = idt::insertion_loss(design, RadiationAdmittance::conductance(ga0));
    if scenario.crosstalk.norm() + peak_il >= 1.0 {
        return Err(Error::invalid("crosstalk", "scenario would not be passive"));
    }
    let points = (0..grid.points)
        .map(|i| scenario.s21(ga0, grid.frequency(i)))
        .collect();
    let meta = SweepMeta {
        distance: Some(scenario.distance),
        ..SweepMeta::default()
    };
    FrequencySweep::new(grid.start, grid.step, points, meta)
}

/// One sweep per distance on a shared grid.
pub fn synth_distance_series(
    base: &DelayLineScenario,
    distances: &[f64],
    grid: &FrequencyGrid,
) -> Result<Vec<FrequencySweep>> {
    if distances.is_empty() {
        return Err(Error::EmptyInput("distance list"));
    }
    distances
        .iter()
        .map(|&d| {
            synth_sweep(
                &DelayLineScenario {
                    distance: d,
                    ..*base
                },
                grid,
            )
        })
        .collect()
}

/// Adds circular complex Gaussian noise of RMS amplitude `10^(floor_db/20)`.
pub fn add_noise(sweep: &FrequencySweep, floor_db: f64, seed: u64) -> Result<FrequencySweep> {
    if !(floor_db < 0.0) {
        return Err(Error::invalid("floor_db", "noise floor must be below 0 dB"));
    }
    let sigma = db_to_amplitude(floor_db) / core::f64::consts::SQRT_2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = sweep
        .points
        .iter()
        .map(|&p| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            p + Complex64::new(re, im) * sigma
        })
        .collect();
    Ok(sweep.with_points(points))
}
