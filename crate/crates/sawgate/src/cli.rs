//! Command-line front end. `run` is the whole program minus `process::exit`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use sawgate_core::analysis::{self, SweepAnalysis};
use sawgate_core::delayline::{add_noise, synth_sweep};
use sawgate_core::fit;
use sawgate_core::idt;
use sawgate_core::junction;
use sawgate_core::qubit::{self, QubitModel};
use sawgate_core::{amplitude_to_db, FrequencySweep};

use crate::config::RunConfig;
use crate::error::AppError;
use crate::fft::RustFftEngine;
use crate::io::{self, num, Table};
use crate::touchstone;

#[derive(Debug, Parser)]
#[command(
    name = "sawgate",
    version,
    about = "SAW delay-line synthesis, time gating and coupling extraction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize delay-line sweeps, one per configured distance.
    Simulate(Common),
    /// Locate arrivals, gate the acoustic path and read the resonance.
    Gate(Common),
    /// Fit SAW velocity to transit time against distance.
    FitVelocity(Common),
    /// Fit the resonance amplitude decay against distance.
    FitLoss(Common),
    /// Coupling coefficient from a resonance amplitude or a distance series.
    ExtractK2(Common),
    /// Quality factor of a transmon limited by piezoelectric loss.
    QubitQ(Common),
    /// Equilibrium potential and carrier profiles at a metal/silicon interface.
    ChargeProfile(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Run configuration (`key = value` lines).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Simulate(c)
            | Command::Gate(c)
            | Command::FitVelocity(c)
            | Command::FitLoss(c)
            | Command::ExtractK2(c)
            | Command::QubitQ(c)
            | Command::ChargeProfile(c) => c,
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    1
                }
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig, AppError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let bytes = io::read_file(path)?;
            let text = String::from_utf8(bytes)
                .map_err(|_| AppError::Validation(format!("{}: not UTF-8", path.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    for s in &common.set {
        cfg.apply_override(s)?;
    }
    Ok(cfg)
}

fn execute(command: &Command, out: &mut dyn Write) -> Result<(), AppError> {
    let cfg = load_config(command.common())?;
    let dir = cfg.output_dir.clone();
    std::fs::create_dir_all(&dir).map_err(|source| AppError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut ctx = Ctx { cfg, dir, out };
    match command {
        Command::Simulate(_) => ctx.simulate(),
        Command::Gate(_) => ctx.gate(),
        Command::FitVelocity(_) => ctx.fit_velocity(),
        Command::FitLoss(_) => ctx.fit_loss(),
        Command::ExtractK2(_) => ctx.extract_k2(),
        Command::QubitQ(_) => ctx.qubit_q(),
        Command::ChargeProfile(_) => ctx.charge_profile(),
    }
}

/// Beyond this surface potential Boltzmann statistics overstate the carrier densities.
const NONDEGENERATE_LIMIT_V: f64 = 0.4;

struct Ctx<'a> {
    cfg: RunConfig,
    dir: PathBuf,
    out: &'a mut dyn Write,
}

macro_rules! say {
    ($ctx:expr, $($arg:tt)*) => {
        writeln!($ctx.out, $($arg)*).map_err(|source| AppError::Io { path: PathBuf::from("<stdout>"), source })?
    };
}

impl Ctx<'_> {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn synthesize(&self) -> Result<Vec<FrequencySweep>, AppError> {
        let grid = self.cfg.grid()?;
        if self.cfg.distances.is_empty() {
            return Err(AppError::Validation(
                "distances: at least one distance is required".into(),
            ));
        }
        self.cfg
            .distances
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut s = synth_sweep(&self.cfg.scenario(d)?, &grid)?;
                if let Some(db) = self.cfg.noise_db {
                    s = add_noise(&s, db, self.cfg.seed.wrapping_add(i as u64))?;
                }
                s.meta.label = format!("simulated d={d:e} m");
                Ok(s)
            })
            .collect()
    }

    /// Sweeps named by `inputs`, or synthesized from the scenario keys when there are none.
    fn sweeps(&self) -> Result<Vec<FrequencySweep>, AppError> {
        if self.cfg.inputs.is_empty() {
            return self.synthesize();
        }
        self.cfg
            .inputs
            .iter()
            .enumerate()
            .map(|(i, path)| {
                let bytes = io::read_file(path)?;
                let mut s = touchstone::parse_touchstone_sweep(&bytes).map_err(|source| {
                    AppError::Touchstone {
                        path: path.clone(),
                        source,
                    }
                })?;
                if s.meta.distance.is_none() {
                    s.meta.distance = self.cfg.distances.get(i).copied();
                }
                Ok(s)
            })
            .collect()
    }

    fn analyze(&self, sweeps: &[FrequencySweep]) -> Result<Vec<(f64, SweepAnalysis)>, AppError> {
        let engine = RustFftEngine::new();
        let opts = self.cfg.analysis();
        sweeps
            .iter()
            .map(|s| {
                let d = s.meta.distance.ok_or_else(|| {
                    AppError::Validation(format!(
                        "sweep {:?} has no distance; set `distances`",
                        s.meta.label
                    ))
                })?;
                Ok((d, analysis::analyze_sweep(s, &opts, &engine)?))
            })
            .collect()
    }

    fn simulate(&mut self) -> Result<(), AppError> {
        let sweeps = self.synthesize()?;
        for (i, s) in sweeps.iter().enumerate() {
            let s2p = self.path(&format!("sweep_{i:02}.s2p"));
            io::write_atomic(&s2p, touchstone::write_touchstone(s).as_bytes())?;
            io::sweep_table(s)?.save(&self.path(&format!("sweep_{i:02}.csv")))?;
            say!(
                self,
                "{}  d = {:.1} um  {} points",
                s2p.display(),
                s.meta.distance.unwrap_or(0.0) * 1e6,
                s.len()
            );
        }
        Ok(())
    }

    fn gate(&mut self) -> Result<(), AppError> {
        let sweeps = self.sweeps()?;
        let results = self.analyze(&sweeps)?;
        let mut table = Table::new(&[
            "distance_m",
            "t_c_s",
            "t_s_s",
            "delta_t_s",
            "f_res_hz",
            "s21_res",
            "s21_res_db",
        ])?;
        for (i, (d, a)) in results.iter().enumerate() {
            let r = &a.resonance;
            table.row([
                num(*d),
                num(a.arrivals.t_crosstalk),
                num(a.arrivals.t_acoustic),
                num(a.arrivals.delta_t()),
                num(r.frequency),
                num(r.amplitude),
                num(amplitude_to_db(r.amplitude)),
            ])?;
            io::write_atomic(
                &self.path(&format!("gated_{i:02}.s2p")),
                touchstone::write_touchstone(&a.gated).as_bytes(),
            )?;
            io::sweep_table(&a.gated)?.save(&self.path(&format!("gated_{i:02}.csv")))?;
            say!(
                self,
                "d = {:.1} um  t_c = {:.3} ns  t_s = {:.3} ns  |S21| = {:.4e} ({:.2} dB) at {:.6} GHz",
                d * 1e6,
                a.arrivals.t_crosstalk * 1e9,
                a.arrivals.t_acoustic * 1e9,
                r.amplitude,
                amplitude_to_db(r.amplitude),
                r.frequency * 1e-9
            );
        }
        table.save(&self.path("gate.csv"))
    }

    fn fit_velocity(&mut self) -> Result<(), AppError> {
        let results = self.analyze(&self.sweeps()?)?;
        let pairs: Vec<(f64, f64)> = results
            .iter()
            .map(|(d, a)| (*d, a.arrivals.delta_t()))
            .collect();
        let fit = fit::fit_velocity(&pairs)?;
        say!(
            self,
            "v = {:.1} m/s (std error {:.2})",
            fit.params[0].value,
            fit.std_error("v").unwrap_or(f64::NAN)
        );
        save_fit(&fit, &self.path("fit_velocity.csv"))?;
        let mut points = Table::new(&["distance_m", "delta_t_s"])?;
        for (d, t) in &pairs {
            points.row([num(*d), num(*t)])?;
        }
        points.save(&self.path("velocity_points.csv"))
    }

    fn fit_loss(&mut self) -> Result<(), AppError> {
        let results = self.analyze(&self.sweeps()?)?;
        let points: Vec<(f64, f64)> = results
            .iter()
            .map(|(d, a)| (*d, a.resonance.amplitude))
            .collect();
        let fit = fit::fit_decay(&points)?;
        say!(self, "A = {:.4e}", fit.amplitude);
        say!(self, "l = {:.4e} m", fit.decay_length);
        if fit.attenuation_insignificant {
            say!(
                self,
                "note: attenuation is within two standard errors of zero"
            );
        }
        let mut t = Table::new(&[
            "amplitude",
            "decay_length_m",
            "slope_per_m",
            "slope_std_per_m",
            "insignificant",
        ])?;
        t.row([
            num(fit.amplitude),
            num(fit.decay_length),
            num(fit.slope),
            num(fit.slope_std),
            fit.attenuation_insignificant.to_string(),
        ])?;
        t.save(&self.path("fit_loss.csv"))?;
        let mut p = Table::new(&["distance_m", "s21_res"])?;
        for (d, a) in &points {
            p.row([num(*d), num(*a)])?;
        }
        p.save(&self.path("loss_points.csv"))
    }

    fn extract_k2(&mut self) -> Result<(), AppError> {
        let design = self.cfg.design()?;
        let (k2, s21, loss) = match self.cfg.s21_resonance {
            Some(s21) => (
                idt::extract_k2(&design, s21, self.cfg.prop_loss)?,
                s21,
                self.cfg.prop_loss,
            ),
            None => {
                let sweeps = self.sweeps()?;
                let a = analysis::analyze_series(
                    &sweeps,
                    &design,
                    &self.cfg.analysis(),
                    &RustFftEngine::new(),
                )?;
                (a.k2, a.decay.amplitude, 1.0)
            }
        };
        say!(self, "K2 = {k2:.3e}");
        let mut t = Table::new(&["k2", "s21_res", "prop_loss", "preset"])?;
        t.row([
            num(k2),
            num(s21),
            num(loss),
            self.cfg.preset.name.to_string(),
        ])?;
        t.save(&self.path("extract_k2.csv"))
    }

    fn qubit_q(&mut self) -> Result<(), AppError> {
        if let Some(path) = self.cfg.admittance_table.clone() {
            return self.qubit_q_table(&path);
        }
        let design = self.cfg.design()?;
        let f_p = self.cfg.qubit_f.unwrap_or(design.f0);
        let model = QubitModel::idt_geometry(design, self.cfg.k2, f_p)?;
        let q = qubit::q_factor(&model, f_p)?;
        let f_q = qubit::qubit_frequency(&model);
        let t1 = qubit::t1(&model, f_q)?;
        let (f_min, q_min) = qubit::min_q_main_lobe(&design, self.cfg.k2, design.cg)?;
        say!(self, "Q = {q:.4e} at {:.6} GHz", f_p * 1e-9);
        say!(
            self,
            "f_q = {:.6} GHz (E_C/h = {:.3} MHz)",
            f_q * 1e-9,
            model.charging_frequency() * 1e-6
        );
        say!(self, "T1 = {:.4e} s", t1);
        say!(self, "Q_min = {q_min:.4e} at {:.6} GHz", f_min * 1e-9);
        let mut s = Table::new(&[
            "f_p_hz",
            "q",
            "f_q_hz",
            "t1_s",
            "charging_hz",
            "f_min_hz",
            "q_min",
        ])?;
        s.row([
            num(f_p),
            num(q),
            num(f_q),
            num(t1),
            num(model.charging_frequency()),
            num(f_min),
            num(q_min),
        ])?;
        s.save(&self.path("qubit_q.csv"))?;

        let n = f64::from(design.n_periods);
        let (lo, hi) = (design.f0 * (1.0 - 2.0 / n), design.f0 * (1.0 + 2.0 / n));
        let steps = 400;
        let mut c = Table::new(&["f_hz", "ga_s", "q", "t1_s"])?;
        for k in 0..=steps {
            let f = lo + (hi - lo) * k as f64 / steps as f64;
            c.row([
                num(f),
                num(model.conductance(f)?),
                num(qubit::q_factor(&model, f)?),
                num(qubit::t1(&model, f)?),
            ])?;
        }
        c.save(&self.path("qubit_curve.csv"))
    }

    fn qubit_q_table(&mut self, path: &Path) -> Result<(), AppError> {
        let table = io::parse_admittance_table(&io::read_file(path)?)?;
        let cg = self.cfg.qubit_cg.ok_or_else(|| {
            AppError::Validation("qubit_cg: required with admittance_table".into())
        })?;
        let f = self.cfg.qubit_f.unwrap_or(table.range().0);
        let q = qubit::q_from_table(&table, cg, f)?;
        let ga = table.conductance(f)?;
        let t1 = if ga == 0.0 { f64::INFINITY } else { cg / ga };
        say!(self, "Q = {q:.4e} at {:.6} GHz", f * 1e-9);
        say!(self, "T1 = {t1:.4e} s");
        let mut s = Table::new(&["f_hz", "q", "t1_s", "cg_f"])?;
        s.row([num(f), num(q), num(t1), num(cg)])?;
        s.save(&self.path("qubit_q.csv"))?;
        let mut c = Table::new(&["f_hz", "ga_s", "q", "t1_s"])?;
        for &(f, ga) in table.rows() {
            let q = qubit::q_from_table(&table, cg, f)?;
            c.row([
                num(f),
                num(ga),
                num(q),
                num(if ga == 0.0 { f64::INFINITY } else { cg / ga }),
            ])?;
        }
        c.save(&self.path("qubit_curve.csv"))
    }

    fn charge_profile(&mut self) -> Result<(), AppError> {
        let spec = self.cfg.junction();
        let profiles = junction::bias_sweep(&spec, &self.cfg.biases)?;
        let mut summary = Table::new(&[
            "bias_v",
            "phi_s_v",
            "interface_excess_m3",
            "sheet_charge_c_m2",
            "gauss_residual",
        ])?;
        for (i, p) in profiles.iter().enumerate() {
            io::profile_table(p)?.save(&self.path(&format!("profile_{i:02}.csv")))?;
            let sigma = junction::sheet_charge(p);
            summary.row([
                num(p.spec.bias_v),
                num(p.surface_potential()),
                num(p.interface_excess()),
                num(sigma),
                num(p.gauss_residual()),
            ])?;
            say!(
                self,
                "bias {:+.3} V  phi_s = {:+.4e} V  n_e - n_h = {:+.4e} m^-3  sigma = {:+.4e} C/m^2",
                p.spec.bias_v,
                p.surface_potential(),
                p.interface_excess(),
                sigma
            );
            if p.surface_potential().abs() > NONDEGENERATE_LIMIT_V {
                say!(self, "  note: |phi_s| > {NONDEGENERATE_LIMIT_V} V, carrier statistics are no longer non-degenerate");
            }
        }
        summary.save(&self.path("charge_profile.csv"))
    }
}

fn save_fit(fit: &fit::FitResult, path: &Path) -> Result<(), AppError> {
    let mut t = Table::new(&["param", "unit", "value", "std_error"])?;
    for p in &fit.params {
        t.row([
            p.name.to_string(),
            p.unit.to_string(),
            num(p.value),
            num(fit.std_error(p.name).unwrap_or(f64::NAN)),
        ])?;
    }
    t.save(path)
}
