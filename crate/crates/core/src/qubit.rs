//! Transmon loss through piezoelectric radiation from its shunt capacitor.
//!
//! The qubit is a junction inductance `L_J` in parallel with the shunt
//! capacitance `Cg` and the radiation conductance `Ga(ω)` of whatever
//! piezoelectric structure the capacitor forms. The susceptance `Ba` is
//! neglected.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// Unused when std's inherent float methods are in scope.
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::{ELEMENTARY_CHARGE, PLANCK};
use crate::idt::{self, positive, IdtDesign};
use crate::{Error, Result};

/// Tabulated `Ga(f)`, linearly interpolated, never extrapolated.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmittanceTable {
    rows: Vec<(f64, f64)>,
}

impl AdmittanceTable {
    /// `rows` are `(f in Hz, Ga in S)` with strictly increasing f.
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput("admittance table"));
        }
        for (i, &(f, g)) in rows.iter().enumerate() {
            if !f.is_finite() || !(f > 0.0) {
                return Err(Error::invalid(
                    "f_hz",
                    alloc::format!("row {i}: frequency must be positive and finite"),
                ));
            }
            if !g.is_finite() || g < 0.0 {
                return Err(Error::invalid(
                    "ga_siemens",
                    alloc::format!("row {i}: conductance must be finite and non-negative"),
                ));
            }
            if i > 0 && !(f > rows[i - 1].0) {
                return Err(Error::invalid(
                    "f_hz",
                    alloc::format!("row {i}: frequencies must be strictly increasing"),
                ));
            }
        }
        Ok(AdmittanceTable { rows })
    }

    /// A single point, e.g. a conductance inverted from a quoted quality factor.
    pub fn single(f: f64, ga: f64) -> Result<Self> {
        Self::new(alloc::vec![(f, ga)])
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn range(&self) -> (f64, f64) {
        (self.rows[0].0, self.rows[self.rows.len() - 1].0)
    }

    pub fn conductance(&self, f: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(f >= lo && f <= hi) {
            return Err(Error::OutOfTableRange { f, lo, hi });
        }
        let i = self.rows.partition_point(|r| r.0 < f);
        let (f1, g1) = self.rows[i];
        if f1 == f {
            return Ok(g1);
        }
        let (f0, g0) = self.rows[i - 1];
        let t = (f - f0) / (f1 - f0);
        Ok(g0 + t * (g1 - g0))
    }
}

/// Where the radiation conductance comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum AdmittanceSource {
    /// The shunt capacitor is itself an IDT with coupling K².
    Idt {
        design: IdtDesign,
        k2: f64,
    },
    Table(AdmittanceTable),
}

impl AdmittanceSource {
    pub fn conductance(&self, f: f64) -> Result<f64> {
        match self {
            AdmittanceSource::Idt { design, k2 } => {
                let ga0 = idt::ga_at_resonance(design, *k2)?;
                Ok(idt::ga_spectrum(design, ga0, f))
            }
            AdmittanceSource::Table(t) => t.conductance(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitModel {
    /// Josephson inductance (H).
    pub l_j: f64,
    /// Shunt capacitance (F).
    pub cg_q: f64,
    pub source: AdmittanceSource,
}

impl QubitModel {
    pub fn new(l_j: f64, cg_q: f64, source: AdmittanceSource) -> Result<Self> {
        let m = QubitModel { l_j, cg_q, source };
        m.validate()?;
        Ok(m)
    }

    /// Qubit whose shunt capacitor is the transducer `design`, with `L_J` chosen
    /// so the plasmon frequency equals `f_p`.
    pub fn idt_geometry(design: IdtDesign, k2: f64, f_p: f64) -> Result<Self> {
        positive("f_p", f_p)?;
        idt::ga_at_resonance(&design, k2)?;
        let w = 2.0 * PI * f_p;
        Self::new(
            1.0 / (w * w * design.cg),
            design.cg,
            AdmittanceSource::Idt { design, k2 },
        )
    }

    pub fn validate(&self) -> Result<()> {
        positive("l_j", self.l_j)?;
        positive("cg_q", self.cg_q)?;
        if let AdmittanceSource::Idt { design, k2 } = &self.source {
            idt::ga_at_resonance(design, *k2)?;
        }
        Ok(())
    }

    pub fn conductance(&self, f: f64) -> Result<f64> {
        positive("f", f)?;
        self.source.conductance(f)
    }

    /// `1/(2π·√(L_J·Cg))`.
    pub fn plasmon_frequency(&self) -> f64 {
        1.0 / (2.0 * PI * (self.l_j * self.cg_q).sqrt())
    }

    /// Charging energy `e²/(2Cg)` expressed as a frequency (Hz).
    pub fn charging_frequency(&self) -> f64 {
        charging_frequency(self.cg_q)
    }
}

/// `e²/(2C·h)` in Hz.
pub fn charging_frequency(c: f64) -> f64 {
    ELEMENTARY_CHARGE * ELEMENTARY_CHARGE / (2.0 * c * PLANCK)
}

/// `Y = [1 − ω²L_J·Cg + iωL_J·Ga(ω)] / (iωL_J)`.
pub fn total_admittance(model: &QubitModel, f: f64) -> Result<Complex64> {
    let ga = model.conductance(f)?;
    let w = 2.0 * PI * f;
    let num = Complex64::new(1.0 - w * w * model.l_j * model.cg_q, w * model.l_j * ga);
    Ok(num / Complex64::new(0.0, w * model.l_j))
}

/// `Q = ωCg/Ga`; `f64::INFINITY` where `Ga = 0`.
pub fn q_factor(model: &QubitModel, f: f64) -> Result<f64> {
    let ga = model.conductance(f)?;
    Ok(quality(2.0 * PI * f, model.cg_q, ga))
}

fn quality(w: f64, c: f64, ga: f64) -> f64 {
    if ga == 0.0 {
        f64::INFINITY
    } else {
        w * c / ga
    }
}

/// Energy relaxation time `T1 = Cg/Ga`; infinite where `Ga = 0`.
pub fn t1(model: &QubitModel, f_q: f64) -> Result<f64> {
    let ga = model.conductance(f_q)?;
    Ok(if ga == 0.0 {
        f64::INFINITY
    } else {
        model.cg_q / ga
    })
}

/// Energy decay rate `γ = Ga/Cg` (1/s).
pub fn loss_rate(model: &QubitModel, f: f64) -> Result<f64> {
    Ok(model.conductance(f)? / model.cg_q)
}

/// Transmon transition frequency `f_p − E_C/h`.
pub fn qubit_frequency(model: &QubitModel) -> f64 {
    model.plasmon_frequency() - model.charging_frequency()
}

/// Q of a shunt capacitor `cg_q` whose conductance is tabulated.
pub fn q_from_table(table: &AdmittanceTable, cg_q: f64, f: f64) -> Result<f64> {
    positive("cg_q", cg_q)?;
    positive("f", f)?;
    Ok(quality(2.0 * PI * f, cg_q, table.conductance(f)?))
}

/// Conductance that yields quality factor `q` at `f` for capacitance `cg_q`.
pub fn conductance_for_q(q: f64, cg_q: f64, f: f64) -> Result<f64> {
    positive("q", q)?;
    positive("cg_q", cg_q)?;
    positive("f", f)?;
    Ok(2.0 * PI * f * cg_q / q)
}

/// Minimum of Q over the transducer's main lobe `f0·(1 ± 1/N)`, by golden-section search.
///
/// The ω prefactor pulls the minimum slightly below f0 (by about
/// `3·f0/(2π²N²)`); on a grid that contains f0 with a step above twice that
/// offset, the sampled minimum sits at f0.
pub fn min_q_main_lobe(design: &IdtDesign, k2: f64, cg_q: f64) -> Result<(f64, f64)> {
    positive("cg_q", cg_q)?;
    let ga0 = idt::ga_at_resonance(design, k2)?;
    if ga0 == 0.0 {
        return Err(Error::invalid("k2", "zero coupling has no finite minimum"));
    }
    let n = f64::from(design.n_periods);
    let q = |f: f64| quality(2.0 * PI * f, cg_q, idt::ga_spectrum(design, ga0, f));
    let inv_phi = (5.0.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (design.f0 * (1.0 - 0.9 / n), design.f0 * (1.0 + 0.9 / n));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut qc, mut qd) = (q(c), q(d));
    while b - a > 1e-9 * design.f0 {
        if qc < qd {
            b = d;
            d = c;
            qd = qc;
            c = b - inv_phi * (b - a);
            qc = q(c);
        } else {
            a = c;
            c = d;
            qc = qd;
            d = a + inv_phi * (b - a);
            qd = q(d);
        }
    }
    let f = 0.5 * (a + b);
    Ok((f, q(f)))
}
