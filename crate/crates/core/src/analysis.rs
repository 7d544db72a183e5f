//! End-to-end inversion: arrival times, gating, resonance read-out and the
//! velocity, decay and coupling fits over a distance series.

use alloc::vec::Vec;

use crate::dft::{SpectralEngine, SpectralWindow};
use crate::fit::{self, DecayFit, FitResult};
use crate::gating::{self, GateWindow, Peak, ResonanceMetrics};
use crate::idt::{self, IdtDesign};
use crate::sweep::FrequencySweep;
use crate::{db_to_amplitude, Error, Result};

/// Peaks more than this far below the strongest one cannot be the crosstalk arrival.
pub const CROSSTALK_SEARCH_DB: f64 = -20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    pub pad_factor: usize,
    /// Taper used for peak detection only; gating is unwindowed.
    pub detection_window: SpectralWindow,
    pub threshold_db: f64,
    /// Gate spans `[t_s − gate_before, t_s + gate_after]`.
    pub gate_before: f64,
    pub gate_after: f64,
    pub taper_fraction: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            pad_factor: 8,
            detection_window: SpectralWindow::LOW_SIDELOBE,
            threshold_db: -130.0,
            gate_before: 25e-9,
            gate_after: 75e-9,
            taper_fraction: 0.0,
        }
    }
}

impl AnalysisOptions {
    pub fn gate_for(&self, t_s: f64) -> Result<GateWindow> {
        GateWindow::new(
            t_s - self.gate_before,
            t_s + self.gate_after,
            self.taper_fraction,
        )
    }
}

/// Crosstalk and acoustic arrival times.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrivals {
    pub t_crosstalk: f64,
    pub t_acoustic: f64,
    pub peaks: Vec<Peak>,
}

impl Arrivals {
    /// Acoustic transit time `Δt = t_s − t_c`.
    pub fn delta_t(&self) -> f64 {
        self.t_acoustic - self.t_crosstalk
    }
}

/// Labels the earliest strong peak as crosstalk and the largest later one as
/// the acoustic arrival.
pub fn pair_arrivals(peaks: &[Peak]) -> Result<(Peak, Peak)> {
    let strongest = peaks.iter().map(|p| p.amplitude).fold(0.0, f64::max);
    let floor = strongest * db_to_amplitude(CROSSTALK_SEARCH_DB);
    let first = peaks
        .iter()
        .position(|p| p.amplitude >= floor)
        .ok_or(Error::ArrivalNotFound("no peaks in trace"))?;
    let acoustic = peaks[first + 1..]
        .iter()
        .copied()
        .reduce(|best, p| {
            if p.amplitude > best.amplitude {
                p
            } else {
                best
            }
        })
        .ok_or(Error::ArrivalNotFound(
            "no peak after the crosstalk arrival",
        ))?;
    Ok((peaks[first], acoustic))
}

pub fn locate_arrivals(
    sweep: &FrequencySweep,
    opts: &AnalysisOptions,
    engine: &dyn SpectralEngine,
) -> Result<Arrivals> {
    let trace =
        gating::to_time_domain_windowed(sweep, opts.pad_factor, opts.detection_window, engine)?;
    let peaks = gating::detect_peaks(&trace, opts.threshold_db)?;
    let (c, s) = pair_arrivals(&peaks)?;
    Ok(Arrivals {
        t_crosstalk: c.time,
        t_acoustic: s.time,
        peaks,
    })
}

/// Per-sweep results.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAnalysis {
    pub arrivals: Arrivals,
    pub gated: FrequencySweep,
    pub resonance: ResonanceMetrics,
}

pub fn analyze_sweep(
    sweep: &FrequencySweep,
    opts: &AnalysisOptions,
    engine: &dyn SpectralEngine,
) -> Result<SweepAnalysis> {
    let arrivals = locate_arrivals(sweep, opts, engine)?;
    let gate = opts.gate_for(arrivals.t_acoustic)?;
    let gated = gating::apply_gate(sweep, &gate, opts.pad_factor, engine)?;
    let resonance = gating::resonance_metrics(&gated)?;
    Ok(SweepAnalysis {
        arrivals,
        gated,
        resonance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesAnalysis {
    pub sweeps: Vec<SweepAnalysis>,
    pub velocity: FitResult,
    pub decay: DecayFit,
    /// K² from the zero-distance prefactor A, i.e. with propagation loss removed.
    pub k2: f64,
}

impl SeriesAnalysis {
    pub fn velocity_value(&self) -> f64 {
        self.velocity.params[0].value
    }
}

/// Analyzes sweeps taken at different distances (read from `meta.distance`).
pub fn analyze_series(
    sweeps: &[FrequencySweep],
    design: &IdtDesign,
    opts: &AnalysisOptions,
    engine: &dyn SpectralEngine,
) -> Result<SeriesAnalysis> {
    if sweeps.is_empty() {
        return Err(Error::EmptyInput("sweep series"));
    }
    let distances = sweeps
        .iter()
        .map(|s| {
            s.meta.distance.ok_or_else(|| {
                Error::invalid("distance", "every sweep in a series needs a distance")
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let analyses = sweeps
        .iter()
        .map(|s| analyze_sweep(s, opts, engine))
        .collect::<Result<Vec<_>>>()?;
    let pairs: Vec<(f64, f64)> = distances
        .iter()
        .zip(&analyses)
        .map(|(&d, a)| (d, a.arrivals.delta_t()))
        .collect();
    let velocity = fit::fit_velocity(&pairs)?;
    let points: Vec<(f64, f64)> = distances
        .iter()
        .zip(&analyses)
        .map(|(&d, a)| (d, a.resonance.amplitude))
        .collect();
    let decay = fit::fit_decay(&points)?;
    let k2 = idt::extract_k2(design, decay.amplitude, 1.0)?;
    Ok(SeriesAnalysis {
        sweeps: analyses,
        velocity,
        decay,
        k2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delayline::{add_noise, synth_distance_series, synth_sweep, DelayLineScenario};
    use crate::dft::DirectDft;
    use crate::idt::GeometryPreset;
    use crate::reference;
    use crate::sweep::FrequencyGrid;
    use approx::assert_relative_eq;

    fn scenario(d: f64) -> DelayLineScenario {
        DelayLineScenario::reference(
            IdtDesign::reference(GeometryPreset::UNITY_RATIO),
            reference::K2,
            d,
        )
    }

    fn grid() -> FrequencyGrid {
        FrequencyGrid::default_for(reference::F0).unwrap()
    }

    fn peak(time: f64, amplitude: f64) -> Peak {
        Peak { time, amplitude }
    }

    #[test]
    fn pairing_rule() {
        let (c, s) = pair_arrivals(&[
            peak(1.0, 1e-6),
            peak(2.0, 1e-3),
            peak(5.0, 1e-7),
            peak(6.0, 1e-5),
        ])
        .unwrap();
        assert_eq!((c.time, s.time), (2.0, 6.0));
        assert!(matches!(
            pair_arrivals(&[peak(1.0, 1.0)]),
            Err(Error::ArrivalNotFound(_))
        ));
        assert!(pair_arrivals(&[]).is_err());
    }

    #[test]
    fn reference_scenario_two_arrivals() {
        let sc = scenario(1323e-6);
        let s = synth_sweep(&sc, &grid()).unwrap();
        let a = locate_arrivals(&s, &AnalysisOptions::default(), &DirectDft).unwrap();
        assert_eq!(a.peaks.len(), 2);
        let bin = 1.0 / (8.0 * s.len() as f64 * s.f_step);
        assert!((a.t_crosstalk - 2.5e-9).abs() < bin);
        assert!((a.t_acoustic - 263.8e-9).abs() < 0.2e-9);
        assert!((a.delta_t() - sc.acoustic_delay()).abs() < bin);
    }

    #[test]
    fn crosstalk_only_single_peak() {
        let s = synth_sweep(
            &DelayLineScenario {
                k2: 0.0,
                ..scenario(1e-3)
            },
            &grid(),
        )
        .unwrap();
        let a = locate_arrivals(&s, &AnalysisOptions::default(), &DirectDft);
        assert!(matches!(a, Err(Error::ArrivalNotFound(_))));
    }

    #[test]
    fn gated_resonance_matches_insertion_loss() {
        let sc = scenario(823e-6);
        let s = synth_sweep(&sc, &grid()).unwrap();
        let r = analyze_sweep(&s, &AnalysisOptions::default(), &DirectDft).unwrap();
        let ga0 = idt::ga_at_resonance(&sc.idt, sc.k2).unwrap();
        let expect = idt::s21_resonance(&sc.idt, ga0, 1.0);
        assert_relative_eq!(r.resonance.amplitude, expect, max_relative = 0.01);
        assert!((r.resonance.frequency - reference::F0).abs() < s.f_step);
    }

    #[test]
    fn gate_suppresses_crosstalk() {
        let sc = scenario(1323e-6);
        let s = synth_sweep(&sc, &grid()).unwrap();
        let r = analyze_sweep(&s, &AnalysisOptions::default(), &DirectDft).unwrap();
        // Far from f0 the acoustic path is negligible; what remains is leaked crosstalk.
        let c = db_to_amplitude(reference::CROSSTALK_DB);
        let edge = r.gated.points[..20]
            .iter()
            .map(|p| p.norm())
            .fold(0.0, f64::max);
        assert!(edge < c * db_to_amplitude(-40.0));
    }

    #[test]
    fn series_recovers_parameters() {
        let mut base = scenario(0.0);
        base.decay_length = reference::DECAY_LENGTH;
        let series = synth_distance_series(&base, &reference::DISTANCES, &grid()).unwrap();
        let a =
            analyze_series(&series, &base.idt, &AnalysisOptions::default(), &DirectDft).unwrap();
        assert_relative_eq!(
            a.velocity_value(),
            reference::V_SAW_ROOM,
            max_relative = 1e-3
        );
        assert_relative_eq!(
            a.decay.decay_length,
            reference::DECAY_LENGTH,
            max_relative = 0.02
        );
        assert_relative_eq!(a.k2, reference::K2, max_relative = 0.05);
    }

    #[test]
    fn series_needs_distances() {
        let mut s = synth_sweep(&scenario(1e-3), &grid()).unwrap();
        s.meta.distance = None;
        let design = IdtDesign::reference(GeometryPreset::UNITY_RATIO);
        assert!(analyze_series(&[s], &design, &AnalysisOptions::default(), &DirectDft).is_err());
        assert!(analyze_series(&[], &design, &AnalysisOptions::default(), &DirectDft).is_err());
    }

    #[test]
    fn noisy_series_k2_within_tolerance() {
        // Signal ≈ −99 dB at resonance, −110 dB noise, five distances.
        let base = scenario(0.0);
        let ds = [323e-6, 823e-6, 1323e-6, 1823e-6, 2323e-6];
        let clean = synth_distance_series(&base, &ds, &grid()).unwrap();
        let noisy: Vec<FrequencySweep> = clean
            .iter()
            .enumerate()
            .map(|(i, s)| add_noise(s, -110.0, 100 + i as u64).unwrap())
            .collect();
        let a = analyze_series(&noisy, &base.idt, &AnalysisOptions::default(), &DirectDft).unwrap();
        assert_relative_eq!(a.k2, reference::K2, max_relative = 0.15);
    }
}
