//! Lumped circuit model of an interdigital transducer (IDT).
//!
//! A transducer is a geometric capacitance `Cg` in parallel with a radiation
//! admittance `Ya = Ga + iBa`. The conductance at the electromechanical
//! resonance is set by the coupling coefficient K², the transducer size and two
//! geometry factors γ and ζ; away from resonance it follows a sinc² envelope.
//! A delay line is two identical transducers, so its transmission at resonance
//! is the product of the two insertion losses (square-rooted) times the
//! amplitude propagation loss `L`.

use core::f64::consts::PI;

// Unused when std's inherent float methods are in scope.
#[allow(unused_imports)]
use num_traits::Float;

use crate::{reference, Error, Result};

/// Coupling coefficients at or above this value violate the weak-coupling
/// assumption `Ga ≪ 1/Z0` built into the inversion.
pub const MAX_WEAK_COUPLING_K2: f64 = 0.01;

/// Geometry factors (γ, ζ) of a transducer layout.
///
/// Two assignments of the split-finger factors circulate for this device, and
/// they differ by swapping γ and ζ. Only the unity ratio reproduces the
/// measured K² from the measured |S21|, so it is the default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryPreset {
    pub name: &'static str,
    pub gamma: f64,
    pub zeta: f64,
}

impl GeometryPreset {
    /// Split-finger factors γ = 1.0836, ζ = 1.414.
    pub const SPLIT_FINGER: GeometryPreset = GeometryPreset {
        name: "split-finger",
        gamma: 1.0836,
        zeta: 1.414,
    };
    /// Split-finger factors with the roles swapped: γ = 1.414, ζ = 1.0836.
    pub const SPLIT_FINGER_SWAPPED: GeometryPreset = GeometryPreset {
        name: "split-finger-swapped",
        gamma: 1.414,
        zeta: 1.0836,
    };
    /// γ = ζ = 1.
    pub const UNITY_RATIO: GeometryPreset = GeometryPreset {
        name: "unity-ratio",
        gamma: 1.0,
        zeta: 1.0,
    };

    pub const ALL: [GeometryPreset; 3] = [
        Self::SPLIT_FINGER,
        Self::SPLIT_FINGER_SWAPPED,
        Self::UNITY_RATIO,
    ];

    pub fn by_name(name: &str) -> Option<GeometryPreset> {
        Self::ALL.iter().copied().find(|p| p.name == name)
    }
}

impl Default for GeometryPreset {
    fn default() -> Self {
        Self::UNITY_RATIO
    }
}

/// Lumped description of one transducer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdtDesign {
    /// Number of finger periods N.
    pub n_periods: u32,
    /// Electromechanical resonance frequency (Hz).
    pub f0: f64,
    /// Geometric capacitance (F).
    pub cg: f64,
    pub gamma: f64,
    pub zeta: f64,
    /// Reference impedance of source and load (Ω).
    pub z0: f64,
}

impl IdtDesign {
    pub fn new(n_periods: u32, f0: f64, cg: f64, preset: GeometryPreset, z0: f64) -> Result<Self> {
        let design = IdtDesign {
            n_periods,
            f0,
            cg,
            gamma: preset.gamma,
            zeta: preset.zeta,
            z0,
        };
        design.validate()?;
        Ok(design)
    }

    /// The measured aluminum-on-silicon transducer with the given geometry preset.
    pub fn reference(preset: GeometryPreset) -> Self {
        IdtDesign {
            n_periods: reference::N_PERIODS,
            f0: reference::F0,
            cg: reference::CG,
            gamma: preset.gamma,
            zeta: preset.zeta,
            z0: reference::Z0,
        }
    }

    pub fn with_preset(mut self, preset: GeometryPreset) -> Self {
        self.gamma = preset.gamma;
        self.zeta = preset.zeta;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_periods < 1 {
            return Err(Error::invalid("n_periods", "must be at least 1"));
        }
        positive("f0", self.f0)?;
        positive("cg", self.cg)?;
        positive("gamma", self.gamma)?;
        positive("zeta", self.zeta)?;
        positive("z0", self.z0)?;
        Ok(())
    }

    /// Angular resonance frequency ω0 = 2π·f0.
    pub fn omega0(&self) -> f64 {
        2.0 * PI * self.f0
    }

    /// Dimensionless capacitive mismatch `(ω0·Cg·Z0)²`.
    fn capacitive_mismatch(&self) -> f64 {
        let x = self.omega0() * self.cg * self.z0;
        x * x
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            alloc::format!("must be positive, got {value}"),
        ))
    }
}

/// Radiation admittance `Ga + iBa` of one transducer (S).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RadiationAdmittance {
    pub g_a: f64,
    pub b_a: f64,
}

impl RadiationAdmittance {
    pub fn new(g_a: f64, b_a: f64) -> Result<Self> {
        if !(g_a >= 0.0) || !g_a.is_finite() {
            return Err(Error::invalid(
                "g_a",
                "radiation conductance must be finite and non-negative",
            ));
        }
        if !b_a.is_finite() {
            return Err(Error::invalid(
                "b_a",
                "radiation susceptance must be finite",
            ));
        }
        Ok(RadiationAdmittance { g_a, b_a })
    }

    /// Pure conductance; the susceptance of a weakly coupled transducer is negligible.
    pub fn conductance(g_a: f64) -> Self {
        RadiationAdmittance { g_a, b_a: 0.0 }
    }
}

/// Radiation conductance at resonance, `Ga(f0) = 8·K²·γ·Cg·f0·N/ζ`.
pub fn ga_at_resonance(design: &IdtDesign, k2: f64) -> Result<f64> {
    if !(k2 >= 0.0) {
        return Err(Error::invalid(
            "k2",
            "coupling coefficient must be non-negative",
        ));
    }
    if k2 >= MAX_WEAK_COUPLING_K2 {
        return Err(Error::invalid(
            "k2",
            alloc::format!("{k2} is outside the weak-coupling range (< {MAX_WEAK_COUPLING_K2})"),
        ));
    }
    Ok(8.0 * k2 * design.gamma * design.cg * design.f0 * f64::from(design.n_periods) / design.zeta)
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Radiation conductance off resonance, `Ga(f) = Ga(f0)·sinc²(N·π·(f − f0)/f0)`.
///
/// Nulls fall at `f = f0·(1 ± k/N)`.
pub fn ga_spectrum(design: &IdtDesign, ga0: f64, f: f64) -> f64 {
    let x = f64::from(design.n_periods) * PI * (f - design.f0) / design.f0;
    let s = sinc(x);
    ga0 * s * s
}

/// Power fraction delivered into the forward acoustic wave by one transducer:
///
/// `IL = 2·Ga·Z0 / [(1 + Ga·Z0)² + (Z0·(ω0·Cg + Ba))²]`.
pub fn insertion_loss(design: &IdtDesign, ya: RadiationAdmittance) -> f64 {
    let gz = ya.g_a * design.z0;
    let bz = design.z0 * (design.omega0() * design.cg + ya.b_a);
    2.0 * gz / ((1.0 + gz) * (1.0 + gz) + bz * bz)
}

/// Delay-line transmission at resonance in the weak-coupling limit:
///
/// `|S21(f0)| = 2·Ga(f0)·Z0·L / (1 + (ω0·Cg·Z0)²)`.
pub fn s21_resonance(design: &IdtDesign, ga0: f64, prop_loss: f64) -> f64 {
    2.0 * ga0 * design.z0 * prop_loss / (1.0 + design.capacitive_mismatch())
}

/// Coupling coefficient from the transmission at resonance; the exact inverse
/// of [`ga_at_resonance`] followed by [`s21_resonance`].
pub fn extract_k2(design: &IdtDesign, s21_res: f64, prop_loss: f64) -> Result<f64> {
    if !(s21_res > 0.0 && s21_res < 1.0) {
        return Err(Error::invalid(
            "s21_res",
            alloc::format!("must lie in (0, 1), got {s21_res}"),
        ));
    }
    if !(prop_loss > 0.0 && prop_loss <= 1.0) {
        return Err(Error::invalid(
            "prop_loss",
            alloc::format!("must lie in (0, 1], got {prop_loss}"),
        ));
    }
    let matching = (1.0 + design.capacitive_mismatch()) / (2.0 * design.z0);
    let geometry = design.zeta
        / (8.0 * design.gamma * design.cg * design.f0 * f64::from(design.n_periods) * prop_loss);
    Ok(matching * geometry * s21_res)
}
