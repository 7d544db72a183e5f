//! File formats, an FFT-backed spectral engine and the `sawgate` command line
//! on top of [`sawgate_core`].

pub use sawgate_core as core;

pub mod cli;
pub mod config;
pub mod error;
pub mod fft;
pub mod io;
pub mod touchstone;

pub use error::AppError;
pub use fft::RustFftEngine;
