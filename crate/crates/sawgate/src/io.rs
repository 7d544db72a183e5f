//! Atomic file output and CSV tables.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sawgate_core::junction::JunctionProfile;
use sawgate_core::qubit::AdmittanceTable;
use sawgate_core::{amplitude_to_db, FrequencySweep};

use crate::error::AppError;

/// Writes via a temporary file in the target directory and a rename, so
/// readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), AppError> {
    let io = |source| AppError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn read_file(path: &Path) -> Result<Vec<u8>, AppError> {
    fs::read(path).map_err(|source| AppError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// In-memory CSV table with a header row and LF line endings.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Result<Self, AppError> {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), AppError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, AppError> {
        self.writer
            .into_inner()
            .map_err(|e| AppError::Csv(csv::Error::from(e.into_error())))
    }

    pub fn save(self, path: &Path) -> Result<(), AppError> {
        let bytes = self.into_bytes()?;
        write_atomic(path, &bytes)
    }
}

/// Shortest round-trip formatting used for every number in output files.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

pub fn sweep_table(sweep: &FrequencySweep) -> Result<Table, AppError> {
    let mut t = Table::new(&["f_hz", "s21_re", "s21_im", "s21_db"])?;
    for (f, p) in sweep.frequencies().zip(&sweep.points) {
        t.row([num(f), num(p.re), num(p.im), num(amplitude_to_db(p.norm()))])?;
    }
    Ok(t)
}

pub fn profile_table(profile: &JunctionProfile) -> Result<Table, AppError> {
    let mut t = Table::new(&["x_m", "phi_v", "ne_m3", "nh_m3"])?;
    for i in 0..profile.x.len() {
        t.row([
            num(profile.x[i]),
            num(profile.phi[i]),
            num(profile.n_e[i]),
            num(profile.n_h[i]),
        ])?;
    }
    Ok(t)
}

/// Reads an admittance table with header `f_hz,ga_siemens`.
pub fn parse_admittance_table(bytes: &[u8]) -> Result<AdmittanceTable, AppError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let header = reader.headers()?.clone();
    if header.len() != 2 || &header[0] != "f_hz" || &header[1] != "ga_siemens" {
        return Err(AppError::Validation(format!(
            "admittance table header must be `f_hz,ga_siemens`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        let field = |k: usize| -> Result<f64, AppError> {
            rec.get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| {
                    AppError::Validation(format!("admittance table row {}: bad number", i + 2))
                })
        };
        rows.push((field(0)?, field(1)?));
    }
    Ok(AdmittanceTable::new(rows)?)
}
