//! Equilibrium Poisson–Boltzmann solver for a metal contact on intrinsic
//! silicon.
//!
//! Depth `x` runs from the metal interface (`x = 0`) to an ohmic back contact
//! at `x = L`, where the potential is pinned to zero. In units of the thermal
//! voltage the problem is
//!
//! ```text
//! u'' = sinh(u) / L_D²,   L_D = sqrt(ε·kT / (2q²·n_i))
//! ```
//!
//! with either a fixed surface potential or, when an oxide is present, the
//! series-capacitor condition `ε·φ'(0) = C_ox·(φ(0) − V_g)`. The equation is
//! discretized with finite volumes on a geometrically graded mesh and solved
//! by damped Newton iteration.

use alloc::vec::Vec;

// Unused when std's inherent float methods are in scope.
#[allow(unused_imports)]
use num_traits::Float;

use crate::consts::{
    thermal_voltage, ELEMENTARY_CHARGE, SIO2_RELATIVE_PERMITTIVITY, VACUUM_PERMITTIVITY,
};
use crate::idt::positive;
use crate::{Error, Result};

/// Back-contact field above this fraction of the surface field means the
/// screening layer does not fit in the domain.
pub const MAX_BACK_FIELD_RATIO: f64 = 1e-6;

/// Largest Newton update per iteration, in units of kT/q.
const MAX_NEWTON_STEP: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JunctionSpec {
    /// Metal work function (eV).
    pub metal_work_function: f64,
    /// Semiconductor electron affinity (eV).
    pub electron_affinity: f64,
    /// Band gap (eV).
    pub band_gap: f64,
    /// Intrinsic carrier density (m⁻³).
    pub intrinsic_density: f64,
    pub relative_permittivity: f64,
    /// Temperature (K).
    pub temperature: f64,
    /// Distance from the interface to the back contact (m).
    pub domain_length: f64,
    /// Bias (V). Positive values raise the interface potential and draw
    /// electrons toward the interface.
    pub bias_v: f64,
    /// Equivalent SiO₂ thickness of an interfacial oxide (m); 0 for none.
    pub oxide_eot: f64,
}

impl Default for JunctionSpec {
    /// Aluminum on intrinsic silicon at room temperature.
    fn default() -> Self {
        JunctionSpec {
            metal_work_function: 4.28,
            electron_affinity: 4.05,
            band_gap: 1.12,
            intrinsic_density: 1.0e16,
            relative_permittivity: 11.7,
            temperature: 300.0,
            domain_length: 1.5e-3,
            bias_v: 0.0,
            oxide_eot: 0.0,
        }
    }
}

impl JunctionSpec {
    pub fn validate(&self) -> Result<()> {
        positive("metal_work_function", self.metal_work_function)?;
        positive("electron_affinity", self.electron_affinity)?;
        positive("band_gap", self.band_gap)?;
        positive("intrinsic_density", self.intrinsic_density)?;
        positive("relative_permittivity", self.relative_permittivity)?;
        positive("temperature", self.temperature)?;
        positive("domain_length", self.domain_length)?;
        if !self.bias_v.is_finite() {
            return Err(Error::invalid("bias_v", "must be finite"));
        }
        if !(self.oxide_eot >= 0.0) || !self.oxide_eot.is_finite() {
            return Err(Error::invalid(
                "oxide_eot",
                "must be finite and non-negative",
            ));
        }
        Ok(())
    }

    /// Semiconductor work function with the Fermi level at midgap (eV).
    pub fn semiconductor_work_function(&self) -> f64 {
        self.electron_affinity + 0.5 * self.band_gap
    }

    /// Potential applied behind the oxide, or directly at the surface without
    /// one (V).
    pub fn drive_potential(&self) -> f64 {
        self.semiconductor_work_function() - self.metal_work_function + self.bias_v
    }

    pub fn permittivity(&self) -> f64 {
        self.relative_permittivity * VACUUM_PERMITTIVITY
    }

    pub fn thermal_voltage(&self) -> f64 {
        thermal_voltage(self.temperature)
    }

    pub fn debye_length(&self) -> f64 {
        (self.permittivity() * self.thermal_voltage()
            / (2.0 * ELEMENTARY_CHARGE * self.intrinsic_density))
            .sqrt()
    }

    /// Oxide capacitance per area (F/m²); `None` without an oxide.
    pub fn oxide_capacitance(&self) -> Option<f64> {
        (self.oxide_eot > 0.0)
            .then(|| SIO2_RELATIVE_PERMITTIVITY * VACUUM_PERMITTIVITY / self.oxide_eot)
    }
}

/// Mesh and iteration controls. `None` steps are derived from the spec.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeshOptions {
    pub first_step: Option<f64>,
    /// Ratio of successive steps.
    pub growth: f64,
    pub max_step: Option<f64>,
    pub max_iterations: usize,
    /// Converged when the largest update falls below this (kT/q).
    pub tolerance: f64,
}

impl Default for MeshOptions {
    fn default() -> Self {
        MeshOptions {
            first_step: None,
            growth: 1.04,
            max_step: None,
            max_iterations: 200,
            tolerance: 1e-12,
        }
    }
}

impl MeshOptions {
    /// Roughly half the spacing everywhere.
    pub fn refined(&self) -> MeshOptions {
        MeshOptions {
            first_step: self.first_step.map(|h| h / 2.0),
            growth: self.growth.sqrt(),
            max_step: self.max_step.map(|h| h / 2.0),
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.growth >= 1.0 && self.growth < 2.0) {
            return Err(Error::invalid("growth", "must lie in [1, 2)"));
        }
        if let Some(h) = self.first_step {
            positive("first_step", h)?;
        }
        if let Some(h) = self.max_step {
            positive("max_step", h)?;
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid("max_iterations", "must be at least 1"));
        }
        positive("tolerance", self.tolerance)
    }
}

/// Potential and carrier densities versus depth.
#[derive(Debug, Clone, PartialEq)]
pub struct JunctionProfile {
    pub spec: JunctionSpec,
    /// Depth (m).
    pub x: Vec<f64>,
    /// Electrostatic potential relative to the back contact (V).
    pub phi: Vec<f64>,
    /// Electron density (m⁻³).
    pub n_e: Vec<f64>,
    /// Hole density (m⁻³).
    pub n_h: Vec<f64>,
    pub iterations: usize,
}

impl JunctionProfile {
    pub fn surface_potential(&self) -> f64 {
        self.phi[0]
    }

    /// `n_e − n_h` at the interface (m⁻³).
    pub fn interface_excess(&self) -> f64 {
        self.n_e[0] - self.n_h[0]
    }

    fn charge_density(&self, i: usize) -> f64 {
        ELEMENTARY_CHARGE * (self.n_h[i] - self.n_e[i])
    }

    /// `ε·φ'(0)` from the surface control volume (C/m²).
    pub fn surface_displacement(&self) -> f64 {
        let h = self.x[1] - self.x[0];
        let eps = self.spec.permittivity();
        eps * (self.phi[1] - self.phi[0]) / h + 0.5 * h * self.charge_density(0)
    }

    /// `ε·φ'(L)` from the back control volume (C/m²).
    pub fn back_displacement(&self) -> f64 {
        let m = self.x.len() - 1;
        let h = self.x[m] - self.x[m - 1];
        let eps = self.spec.permittivity();
        eps * (self.phi[m] - self.phi[m - 1]) / h - 0.5 * h * self.charge_density(m)
    }

    /// Relative mismatch between the integrated charge and the net
    /// displacement through the domain boundaries.
    pub fn gauss_residual(&self) -> f64 {
        let sigma = sheet_charge(self);
        let flux = self.surface_displacement() - self.back_displacement();
        let scale = sigma.abs().max(flux.abs());
        if scale == 0.0 {
            0.0
        } else {
            (sigma - flux).abs() / scale
        }
    }
}

/// `∫ q(n_h − n_e) dx` (C/m²), trapezoidal on the solver mesh.
///
/// Gauss's law makes this equal to `ε·φ'(0) − ε·φ'(L)`; with the field gone at
/// the back contact, an accumulation layer (φ decreasing into the bulk) gives
/// a negative value.
pub fn sheet_charge(profile: &JunctionProfile) -> f64 {
    let n = profile.x.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 {
                profile.x[i] - profile.x[i - 1]
            } else {
                0.0
            };
            let right = if i + 1 < n {
                profile.x[i + 1] - profile.x[i]
            } else {
                0.0
            };
            0.5 * (left + right) * profile.charge_density(i)
        })
        .sum()
}

/// Surface potential of the semi-infinite problem (kT/q units).
///
/// Without oxide this is the drive itself; with one it solves
/// `C_ox·(u_s − u_g) + (2ε/L_D)·sinh(u_s/2) = 0` by bisection.
pub fn semi_infinite_surface_potential(spec: &JunctionSpec) -> f64 {
    let vt = spec.thermal_voltage();
    let ug = spec.drive_potential() / vt;
    let Some(cox) = spec.oxide_capacitance() else {
        return ug;
    };
    let k = 2.0 * spec.permittivity() / (spec.debye_length() * cox);
    let g = |u: f64| (u - ug) + k * (0.5 * u).sinh();
    let (mut lo, mut hi) = if ug >= 0.0 { (0.0, ug) } else { (ug, 0.0) };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact semi-infinite solution `tanh(u/4) = tanh(u_s/4)·exp(−x/L_D)`,
/// evaluated without cancellation for large `u_s`.
pub fn semi_infinite_potential(u_s: f64, x: f64, debye_length: f64) -> f64 {
    if u_s == 0.0 {
        return 0.0;
    }
    let a = u_s.abs();
    let s = x / debye_length;
    // t = T·e^{-s} with T = tanh(a/4) = 1 − δ.
    let delta = 2.0 / ((0.5 * a).exp() + 1.0);
    let decay = (-s).exp();
    let t = (1.0 - delta) * decay;
    let one_minus_t = -(-s).exp_m1() + delta * decay;
    let u = 2.0 * ((1.0 + t) / one_minus_t).ln();
    u.copysign(u_s)
}

fn build_mesh(spec: &JunctionSpec, u_s: f64, opts: &MeshOptions) -> Vec<f64> {
    let ld = spec.debye_length();
    let a = u_s.abs();
    let layer = if a > 1e-3 {
        (ld / (2.0 * (0.5 * a).sinh())).min(ld)
    } else {
        ld
    };
    let h0 = opts.first_step.unwrap_or((1e-10).min(layer / 20.0));
    let h_max = opts.max_step.unwrap_or(ld / 25.0).max(h0);
    let length = spec.domain_length;
    let mut x = alloc::vec![0.0];
    let mut h = h0;
    let mut pos = 0.0;
    while pos + h < length {
        pos += h;
        x.push(pos);
        h = (h * opts.growth).min(h_max);
    }
    // Merge a sliver at the end into the previous cell.
    if x.len() > 2 && length - pos < 0.5 * (pos - x[x.len() - 2]) {
        x.pop();
    }
    x.push(length);
    x
}

/// Solves a tridiagonal system in place (Thomas algorithm); `d` becomes the solution.
fn solve_tridiagonal(lower: &[f64], diag: &mut [f64], upper: &[f64], d: &mut [f64]) {
    let n = diag.len();
    for i in 1..n {
        let w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        d[i] -= w * d[i - 1];
    }
    d[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        d[i] = (d[i] - upper[i] * d[i + 1]) / diag[i];
    }
}

pub fn solve_equilibrium(spec: &JunctionSpec) -> Result<JunctionProfile> {
    solve_equilibrium_with(spec, &MeshOptions::default())
}

pub fn solve_equilibrium_with(spec: &JunctionSpec, opts: &MeshOptions) -> Result<JunctionProfile> {
    spec.validate()?;
    opts.validate()?;
    let vt = spec.thermal_voltage();
    let ld = spec.debye_length();
    let inv_ld2 = 1.0 / (ld * ld);
    let ug = spec.drive_potential() / vt;
    // Robin coefficient C_ox/ε (1/m), or Dirichlet when absent.
    let kappa = spec.oxide_capacitance().map(|c| c / spec.permittivity());
    let us_guess = semi_infinite_surface_potential(spec);

    let x = build_mesh(spec, us_guess, opts);
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut u: Vec<f64> = x
        .iter()
        .map(|&xi| semi_infinite_potential(us_guess, xi, ld))
        .collect();
    if kappa.is_none() {
        u[0] = ug;
    }
    u[n - 1] = 0.0;

    let mut lower = alloc::vec![0.0; n];
    let mut diag = alloc::vec![0.0; n];
    let mut upper = alloc::vec![0.0; n];
    let mut rhs = alloc::vec![0.0; n];
    let mut iterations = 0;
    let mut last_update = f64::INFINITY;
    while iterations < opts.max_iterations {
        iterations += 1;
        for i in 0..n {
            lower[i] = 0.0;
            upper[i] = 0.0;
            if i == n - 1 {
                diag[i] = 1.0;
                rhs[i] = 0.0;
                continue;
            }
            if i == 0 {
                match kappa {
                    None => {
                        diag[0] = 1.0;
                        rhs[0] = 0.0;
                    }
                    Some(k) => {
                        let vol = 0.5 * h[0];
                        let r =
                            (u[1] - u[0]) / h[0] - k * (u[0] - ug) - vol * u[0].sinh() * inv_ld2;
                        diag[0] = -1.0 / h[0] - k - vol * u[0].cosh() * inv_ld2;
                        upper[0] = 1.0 / h[0];
                        rhs[0] = -r;
                    }
                }
                continue;
            }
            let vol = 0.5 * (h[i - 1] + h[i]);
            let r = (u[i + 1] - u[i]) / h[i]
                - (u[i] - u[i - 1]) / h[i - 1]
                - vol * u[i].sinh() * inv_ld2;
            lower[i] = 1.0 / h[i - 1];
            upper[i] = 1.0 / h[i];
            diag[i] = -1.0 / h[i - 1] - 1.0 / h[i] - vol * u[i].cosh() * inv_ld2;
            rhs[i] = -r;
        }
        solve_tridiagonal(&lower, &mut diag, &upper, &mut rhs);
        let biggest = rhs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if !biggest.is_finite() {
            return Err(Error::NotConverged {
                iterations,
                last_update: biggest,
            });
        }
        let scale = if biggest > MAX_NEWTON_STEP {
            MAX_NEWTON_STEP / biggest
        } else {
            1.0
        };
        for (ui, d) in u.iter_mut().zip(&rhs) {
            *ui += scale * d;
        }
        last_update = biggest;
        if biggest <= opts.tolerance * (1.0 + u[0].abs()) {
            break;
        }
    }
    if !(last_update <= opts.tolerance * (1.0 + u[0].abs())) {
        return Err(Error::NotConverged {
            iterations,
            last_update,
        });
    }

    let ni = spec.intrinsic_density;
    let profile = JunctionProfile {
        spec: *spec,
        phi: u.iter().map(|&v| v * vt).collect(),
        n_e: u.iter().map(|&v| ni * v.exp()).collect(),
        n_h: u.iter().map(|&v| ni * (-v).exp()).collect(),
        x,
        iterations,
    };
    let surface = profile.surface_displacement();
    if surface != 0.0 {
        let ratio = (profile.back_displacement() / surface).abs();
        if ratio > MAX_BACK_FIELD_RATIO {
            return Err(Error::DomainTooShort { ratio });
        }
    }
    Ok(profile)
}

/// One profile per bias.
pub fn bias_sweep(spec: &JunctionSpec, biases: &[f64]) -> Result<Vec<JunctionProfile>> {
    bias_sweep_with(spec, biases, &MeshOptions::default())
}

pub fn bias_sweep_with(
    spec: &JunctionSpec,
    biases: &[f64],
    opts: &MeshOptions,
) -> Result<Vec<JunctionProfile>> {
    if biases.is_empty() {
        return Err(Error::EmptyInput("bias list"));
    }
    biases
        .iter()
        .map(|&b| solve_equilibrium_with(&JunctionSpec { bias_v: b, ..*spec }, opts))
        .collect()
}
