//! Numerical core for surface-acoustic-wave delay lines built on weakly
//! piezoelectric interfaces.
//!
//! The crate is `no_std` (it needs `alloc`) and does no IO. It covers:
//!
//! - [`idt`]: lumped interdigital-transducer circuit model and K² extraction,
//! - [`delayline`]: forward synthesis of two-port transmission spectra,
//! - [`gating`], [`fit`], [`analysis`]: time-domain gating and parameter fits,
//! - [`qubit`]: piezoelectric-loss-limited transmon quality factors,
//! - [`junction`]: 1D Poisson–Boltzmann solver for a metal/intrinsic-semiconductor contact.
//!
//! Spectral transforms go through the [`SpectralEngine`] trait so a host crate can
//! plug in a fast FFT; [`DirectDft`] is the portable reference implementation.

#![no_std]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod consts;
pub mod delayline;
pub mod dft;
mod error;
pub mod fit;
pub mod gating;
pub mod idt;
pub mod junction;
pub mod qubit;
pub mod reference;
pub mod sweep;

pub use dft::{DirectDft, Direction, SpectralEngine, SpectralWindow};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use sweep::{FrequencyGrid, FrequencySweep, SweepMeta};

/// Amplitude ratio to decibels, `20·log10(a)`.
#[inline]
pub fn amplitude_to_db(a: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    20.0 * a.log10()
}

/// Decibels to amplitude ratio, `10^(db/20)`.
#[inline]
pub fn db_to_amplitude(db: f64) -> f64 {
    #[allow(unused_imports)]
    use num_traits::Float;
    10.0.powf(db / 20.0)
}
