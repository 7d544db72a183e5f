//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment. Values are SI unless they
//! carry an explicit unit suffix such as `4.583 GHz`, `318 fF`, `1323 um` or
//! `2.5 ns`. Lists are comma-separated and each element may carry its own
//! suffix. Unknown keys are rejected.

use std::path::PathBuf;

use sawgate_core::analysis::AnalysisOptions;
use sawgate_core::delayline::DelayLineScenario;
use sawgate_core::idt::{GeometryPreset, IdtDesign};
use sawgate_core::junction::JunctionSpec;
use sawgate_core::{db_to_amplitude, reference, Complex64, FrequencyGrid, SpectralWindow};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("--set {assignment}: {message}")]
    Override { assignment: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Quantity {
    Plain,
    Frequency,
    Capacitance,
    Length,
    Time,
    Voltage,
    Temperature,
    Decibel,
}

impl Quantity {
    fn scale(self, suffix: &str) -> Option<f64> {
        let s = match self {
            Quantity::Plain => match suffix {
                "" => 1.0,
                _ => return None,
            },
            Quantity::Frequency => match suffix {
                "" | "Hz" => 1.0,
                "kHz" => 1e3,
                "MHz" => 1e6,
                "GHz" => 1e9,
                _ => return None,
            },
            Quantity::Capacitance => match suffix {
                "" | "F" => 1.0,
                "nF" => 1e-9,
                "pF" => 1e-12,
                "fF" => 1e-15,
                "aF" => 1e-18,
                _ => return None,
            },
            Quantity::Length => match suffix {
                "" | "m" => 1.0,
                "mm" => 1e-3,
                "um" | "µm" | "μm" => 1e-6,
                "nm" => 1e-9,
                _ => return None,
            },
            Quantity::Time => match suffix {
                "" | "s" => 1.0,
                "ms" => 1e-3,
                "us" | "µs" | "μs" => 1e-6,
                "ns" => 1e-9,
                "ps" => 1e-12,
                _ => return None,
            },
            Quantity::Voltage => match suffix {
                "" | "V" => 1.0,
                "mV" => 1e-3,
                _ => return None,
            },
            Quantity::Temperature => match suffix {
                "" | "K" => 1.0,
                _ => return None,
            },
            Quantity::Decibel => match suffix {
                "" | "dB" => 1.0,
                _ => return None,
            },
        };
        Some(s)
    }
}

fn parse_quantity(text: &str, q: Quantity) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .char_indices()
        .find(|&(_, c)| {
            c.is_alphabetic() && c != 'e' && c != 'E' || c == 'µ' || c == 'μ' || c == ' '
        })
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (number, suffix) = text.split_at(split);
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| format!("{text:?} is not a number"))?;
    if !value.is_finite() {
        return Err(format!("{text:?} is not finite"));
    }
    let scale = q
        .scale(suffix.trim())
        .ok_or_else(|| format!("unit {:?} not accepted here", suffix.trim()))?;
    Ok(value * scale)
}

fn parse_list(text: &str, q: Quantity) -> Result<Vec<f64>, String> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|t| parse_quantity(t, q)).collect()
}

fn parse_optional(text: &str, q: Quantity) -> Result<Option<f64>, String> {
    match text.trim() {
        "none" | "" => Ok(None),
        t => parse_quantity(t, q).map(Some),
    }
}

fn parse_count<T: std::str::FromStr>(text: &str) -> Result<T, String> {
    text.trim()
        .parse()
        .map_err(|_| format!("{:?} is not a non-negative integer", text.trim()))
}

/// Every tunable of every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    // transducer
    pub f0: f64,
    pub cg: f64,
    pub n_periods: u32,
    pub z0: f64,
    pub preset: GeometryPreset,
    pub k2: f64,
    // delay line and synthesis
    pub distances: Vec<f64>,
    pub v_saw: f64,
    pub t_crosstalk: f64,
    pub crosstalk_db: f64,
    /// `inf` for lossless propagation.
    pub decay_length: f64,
    pub noise_db: Option<f64>,
    pub seed: u64,
    pub grid_points: usize,
    pub grid_half_span: f64,
    // analysis
    pub pad_factor: usize,
    pub threshold_db: f64,
    pub gate_before: f64,
    pub gate_after: f64,
    pub taper_fraction: f64,
    pub kaiser_beta: f64,
    // inputs for gate / fit / extract
    pub inputs: Vec<PathBuf>,
    pub s21_resonance: Option<f64>,
    pub prop_loss: f64,
    // qubit
    pub qubit_cg: Option<f64>,
    pub qubit_f: Option<f64>,
    pub admittance_table: Option<PathBuf>,
    // junction
    pub metal_work_function_ev: f64,
    pub electron_affinity_ev: f64,
    pub band_gap_ev: f64,
    pub intrinsic_density: f64,
    pub relative_permittivity: f64,
    pub temperature: f64,
    pub domain_length: f64,
    pub biases: Vec<f64>,
    pub oxide_eot: f64,
    // output
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let j = JunctionSpec::default();
        let a = AnalysisOptions::default();
        RunConfig {
            f0: reference::F0,
            cg: reference::CG,
            n_periods: reference::N_PERIODS,
            z0: reference::Z0,
            preset: GeometryPreset::default(),
            k2: reference::K2,
            distances: reference::DISTANCES.to_vec(),
            v_saw: reference::V_SAW_ROOM,
            t_crosstalk: reference::T_CROSSTALK,
            crosstalk_db: reference::CROSSTALK_DB,
            decay_length: f64::INFINITY,
            noise_db: None,
            seed: 1,
            grid_points: FrequencyGrid::DEFAULT_POINTS,
            grid_half_span: FrequencyGrid::DEFAULT_HALF_SPAN,
            pad_factor: a.pad_factor,
            threshold_db: a.threshold_db,
            gate_before: a.gate_before,
            gate_after: a.gate_after,
            taper_fraction: a.taper_fraction,
            kaiser_beta: match a.detection_window {
                SpectralWindow::Kaiser(b) => b,
                _ => 0.0,
            },
            inputs: Vec::new(),
            s21_resonance: None,
            prop_loss: 1.0,
            qubit_cg: None,
            qubit_f: None,
            admittance_table: None,
            metal_work_function_ev: j.metal_work_function,
            electron_affinity_ev: j.electron_affinity,
            band_gap_ev: j.band_gap,
            intrinsic_density: j.intrinsic_density,
            relative_permittivity: j.relative_permittivity,
            temperature: j.temperature,
            domain_length: j.domain_length,
            biases: vec![-2.0, -1.0, 0.0, 1.0, 2.0],
            oxide_eot: j.oxide_eot,
            output_dir: PathBuf::from("."),
        }
    }
}

/// Recognized keys, in documentation order.
pub const KEYS: &[&str] = &[
    "f0",
    "cg",
    "n_periods",
    "z0",
    "preset",
    "k2",
    "distances",
    "v_saw",
    "t_crosstalk",
    "crosstalk_db",
    "decay_length",
    "noise_db",
    "seed",
    "grid_points",
    "grid_half_span",
    "pad_factor",
    "threshold_db",
    "gate_before",
    "gate_after",
    "taper_fraction",
    "kaiser_beta",
    "inputs",
    "s21_resonance",
    "prop_loss",
    "qubit_cg",
    "qubit_f",
    "admittance_table",
    "metal_work_function_ev",
    "electron_affinity_ev",
    "band_gap_ev",
    "intrinsic_density",
    "relative_permittivity",
    "temperature",
    "domain_length",
    "biases",
    "oxide_eot",
    "output_dir",
];

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |message: String| ConfigError::Line {
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| fail(format!("expected `key = value`, found {line:?}")))?;
            cfg.set(key.trim(), value.trim()).map_err(fail)?;
        }
        Ok(cfg)
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let fail = |message: String| ConfigError::Override {
            assignment: assignment.to_string(),
            message,
        };
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| fail("expected key=value".into()))?;
        self.set(key.trim(), value.trim()).map_err(fail)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        use Quantity::*;
        let q = |kind| parse_quantity(value, kind);
        match key {
            "f0" => self.f0 = q(Frequency)?,
            "cg" => self.cg = q(Capacitance)?,
            "n_periods" => self.n_periods = parse_count(value)?,
            "z0" => self.z0 = q(Plain)?,
            "preset" => {
                self.preset = GeometryPreset::by_name(value).ok_or_else(|| {
                    let names: Vec<&str> = GeometryPreset::ALL.iter().map(|p| p.name).collect();
                    format!(
                        "unknown preset {value:?}; expected one of {}",
                        names.join(", ")
                    )
                })?
            }
            "k2" => self.k2 = q(Plain)?,
            "distances" => self.distances = parse_list(value, Length)?,
            "v_saw" => self.v_saw = q(Plain)?,
            "t_crosstalk" => self.t_crosstalk = q(Time)?,
            "crosstalk_db" => self.crosstalk_db = q(Decibel)?,
            "decay_length" => {
                self.decay_length = match value {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => q(Length)?,
                }
            }
            "noise_db" => self.noise_db = parse_optional(value, Decibel)?,
            "seed" => self.seed = parse_count(value)?,
            "grid_points" => self.grid_points = parse_count(value)?,
            "grid_half_span" => self.grid_half_span = q(Frequency)?,
            "pad_factor" => self.pad_factor = parse_count(value)?,
            "threshold_db" => self.threshold_db = q(Decibel)?,
            "gate_before" => self.gate_before = q(Time)?,
            "gate_after" => self.gate_after = q(Time)?,
            "taper_fraction" => self.taper_fraction = q(Plain)?,
            "kaiser_beta" => self.kaiser_beta = q(Plain)?,
            "inputs" => {
                self.inputs = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(PathBuf::from)
                    .collect()
            }
            "s21_resonance" => self.s21_resonance = parse_optional(value, Plain)?,
            "prop_loss" => self.prop_loss = q(Plain)?,
            "qubit_cg" => self.qubit_cg = parse_optional(value, Capacitance)?,
            "qubit_f" => self.qubit_f = parse_optional(value, Frequency)?,
            "admittance_table" => {
                self.admittance_table = match value {
                    "" | "none" => None,
                    p => Some(PathBuf::from(p)),
                }
            }
            "metal_work_function_ev" => self.metal_work_function_ev = q(Plain)?,
            "electron_affinity_ev" => self.electron_affinity_ev = q(Plain)?,
            "band_gap_ev" => self.band_gap_ev = q(Plain)?,
            "intrinsic_density" => self.intrinsic_density = q(Plain)?,
            "relative_permittivity" => self.relative_permittivity = q(Plain)?,
            "temperature" => self.temperature = q(Temperature)?,
            "domain_length" => self.domain_length = q(Length)?,
            "biases" => self.biases = parse_list(value, Voltage)?,
            "oxide_eot" => self.oxide_eot = q(Length)?,
            "output_dir" => self.output_dir = PathBuf::from(value),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    pub fn design(&self) -> sawgate_core::Result<IdtDesign> {
        IdtDesign::new(self.n_periods, self.f0, self.cg, self.preset, self.z0)
    }

    pub fn scenario(&self, distance: f64) -> sawgate_core::Result<DelayLineScenario> {
        let sc = DelayLineScenario {
            idt: self.design()?,
            k2: self.k2,
            distance,
            v_saw: self.v_saw,
            t_crosstalk: self.t_crosstalk,
            crosstalk: Complex64::new(db_to_amplitude(self.crosstalk_db), 0.0),
            decay_length: self.decay_length,
            noise_floor_db: self.noise_db,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn grid(&self) -> sawgate_core::Result<FrequencyGrid> {
        FrequencyGrid::centered(self.f0, self.grid_half_span, self.grid_points)
    }

    pub fn analysis(&self) -> AnalysisOptions {
        AnalysisOptions {
            pad_factor: self.pad_factor,
            detection_window: if self.kaiser_beta > 0.0 {
                SpectralWindow::Kaiser(self.kaiser_beta)
            } else {
                SpectralWindow::Rectangular
            },
            threshold_db: self.threshold_db,
            gate_before: self.gate_before,
            gate_after: self.gate_after,
            taper_fraction: self.taper_fraction,
        }
    }

    pub fn junction(&self) -> JunctionSpec {
        JunctionSpec {
            metal_work_function: self.metal_work_function_ev,
            electron_affinity: self.electron_affinity_ev,
            band_gap: self.band_gap_ev,
            intrinsic_density: self.intrinsic_density,
            relative_permittivity: self.relative_permittivity,
            temperature: self.temperature,
            domain_length: self.domain_length,
            bias_v: 0.0,
            oxide_eot: self.oxide_eot,
        }
    }
}
