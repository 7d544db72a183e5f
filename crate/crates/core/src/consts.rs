//! CODATA physical constants (SI).

pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const PLANCK: f64 = 6.626_070_15e-34;
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
/// Relative permittivity of SiO₂, used to convert an equivalent oxide thickness to a capacitance.
pub const SIO2_RELATIVE_PERMITTIVITY: f64 = 3.9;

/// Thermal voltage kT/q in volts.
#[inline]
pub fn thermal_voltage(temperature: f64) -> f64 {
    BOLTZMANN * temperature / ELEMENTARY_CHARGE
}
