//! Measured reference values for aluminum split-finger transducers on
//! undoped silicon (100), used as defaults and as regression targets.

/// Electromechanical resonance frequency (Hz).
pub const F0: f64 = 4.583e9;
/// Transducer geometric capacitance (F).
pub const CG: f64 = 318e-15;
/// Number of finger periods.
pub const N_PERIODS: u32 = 50;
/// Reference impedance (Ω).
pub const Z0: f64 = 50.0;

/// Time-gated transmission at resonance measured at 20 mK (−99 dB).
pub const S21_RESONANCE: f64 = 1.1221e-5;
/// Coupling coefficient reported for that measurement.
pub const K2: f64 = 2.32e-7;

/// SAW velocity from the room-temperature distance series (m/s).
pub const V_SAW_ROOM: f64 = 5063.0;
/// SAW velocity from the millikelvin distance series (m/s).
pub const V_SAW_CRYO: f64 = 5065.0;
/// Electromagnetic crosstalk delay (s).
pub const T_CROSSTALK: f64 = 2.5e-9;
/// Crosstalk background level (dB).
pub const CROSSTALK_DB: f64 = -55.0;

/// Room-temperature attenuation fit `|S21,0| = A·exp(−d/2l)`: prefactor A.
pub const DECAY_AMPLITUDE: f64 = 1.96e-6;
/// Room-temperature attenuation fit: amplitude decay length l (m).
pub const DECAY_LENGTH: f64 = 0.6e-3;

/// IDT-to-IDT separations of the room-temperature series (m).
pub const DISTANCES: [f64; 4] = [323e-6, 823e-6, 1323e-6, 1823e-6];

/// Quality factor of an IDT-geometry transmon limited by interface piezoelectricity.
pub const Q_IDT: f64 = 9e4;
/// Same limit for a planar coplanar shunt capacitor at 4.5 GHz.
pub const Q_PLANAR: f64 = 6e7;
/// Same limit for a parallel-plate shunt capacitor at 4.5 GHz.
pub const Q_PPC: f64 = 7e4;
/// Frequency at which the planar and parallel-plate limits are quoted (Hz).
pub const F_QUBIT_TABLE: f64 = 4.5e9;
