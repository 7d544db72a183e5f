//! [`SpectralEngine`] backed by `rustfft`.

use std::sync::Mutex;

use rustfft::FftPlanner;
use sawgate_core::{Complex64, Direction, SpectralEngine};

/// Caches plans across calls; safe to share between threads.
pub struct RustFftEngine {
    planner: Mutex<FftPlanner<f64>>,
}

impl RustFftEngine {
    pub fn new() -> Self {
        RustFftEngine {
            planner: Mutex::new(FftPlanner::new()),
        }
    }
}

impl Default for RustFftEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for RustFftEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("RustFftEngine")
    }
}

impl SpectralEngine for RustFftEngine {
    fn process(&self, buffer: &mut [Complex64], direction: Direction) {
        if buffer.len() <= 1 {
            return;
        }
        let fft = {
            let mut planner = self.planner.lock().unwrap_or_else(|e| e.into_inner());
            match direction {
                Direction::Forward => planner.plan_fft_forward(buffer.len()),
                Direction::Inverse => planner.plan_fft_inverse(buffer.len()),
            }
        };
        fft.process(buffer);
    }
}
