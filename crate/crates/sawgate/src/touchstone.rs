//! Two-port Touchstone v1 reader and writer.
//!
//! Accepted grammar (one item per line, leading/trailing blanks ignored):
//!
//! ```text
//! file     = { comment | blank } option { comment | blank | data }
//! comment  = "!" text
//! option   = "#" { unit | "S" | format | "R" number }     (case-insensitive, each at most once)
//! unit     = "HZ" | "KHZ" | "MHZ" | "GHZ"                 (default GHZ)
//! format   = "RI" | "MA" | "DB"                           (default MA)
//! data     = f  s11 s11  s21 s21  s12 s12  s22 s22  [ "!" text ]
//! ```
//!
//! Every data line carries exactly nine finite numbers; frequencies must be
//! strictly increasing. Angles are in degrees. The reference impedance
//! defaults to 50 Ω. Only the S parameter kind is supported.
//!
//! Comment lines of the form `! key=value` with key `label`, `distance_m`,
//! `temperature_k`, `bias_v` or `f_step_hz` carry sweep metadata; other
//! comment lines are kept verbatim.

use std::fmt;

use sawgate_core::{Complex64, FrequencySweep, SweepMeta};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FrequencyUnit {
    pub fn multiplier(self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    RealImag,
    MagAngle,
    DbAngle,
}

impl DataFormat {
    fn decode(self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::RealImag => Complex64::new(a, b),
            DataFormat::MagAngle => Complex64::from_polar(a, b.to_radians()),
            DataFormat::DbAngle => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    NotUtf8,
    MissingOptionLine,
    DuplicateOptionLine,
    BadOption(String),
    UnsupportedParameter(String),
    BadImpedance(String),
    BadNumber(String),
    NonFinite,
    WrongValueCount(usize),
    NonIncreasingFrequency,
    NonUniformGrid,
    NoData,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::NotUtf8 => write!(f, "input is not valid UTF-8"),
            ParseErrorKind::MissingOptionLine => write!(f, "data before the '#' option line"),
            ParseErrorKind::DuplicateOptionLine => write!(f, "more than one '#' option line"),
            ParseErrorKind::BadOption(t) => write!(f, "malformed option line: {t}"),
            ParseErrorKind::UnsupportedParameter(t) => {
                write!(f, "parameter kind {t} not supported (only S)")
            }
            ParseErrorKind::BadImpedance(t) => write!(f, "bad reference impedance: {t}"),
            ParseErrorKind::BadNumber(t) => write!(f, "not a number: {t:?}"),
            ParseErrorKind::NonFinite => write!(f, "value is not finite"),
            ParseErrorKind::WrongValueCount(n) => write!(
                f,
                "expected 9 values for a 2-port record, found {n} (wrong port count?)"
            ),
            ParseErrorKind::NonIncreasingFrequency => {
                write!(f, "frequencies must strictly increase")
            }
            ParseErrorKind::NonUniformGrid => write!(f, "frequency grid is not uniform"),
            ParseErrorKind::NoData => write!(f, "no data lines and no f_step_hz metadata"),
        }
    }
}

/// Parse failure at a 1-based line number (0 when not tied to a line).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parsed two-port file.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneRecord {
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    /// Reference impedance (Ω).
    pub z0: f64,
    /// Frequencies in Hz.
    pub frequencies: Vec<f64>,
    /// `[S11, S21, S12, S22]` per frequency.
    pub samples: Vec<[Complex64; 4]>,
    /// Source line of each sample.
    pub lines: Vec<usize>,
    pub meta: SweepMeta,
    /// Step recorded in the metadata, if any.
    pub f_step_hint: Option<f64>,
}

impl TouchstoneRecord {
    /// S21 on the uniform grid implied by the frequencies.
    ///
    /// Errors not tied to a source line carry line 0.
    pub fn to_sweep(&self) -> Result<FrequencySweep, ParseError> {
        let n = self.frequencies.len();
        let (start, step) = match n {
            0 | 1 => {
                let step = self.f_step_hint.ok_or(err(0, ParseErrorKind::NoData))?;
                (self.frequencies.first().copied().unwrap_or(0.0), step)
            }
            _ => {
                let f0 = self.frequencies[0];
                let fitted = (self.frequencies[n - 1] - f0) / (n - 1) as f64;
                // The recorded step is exact; prefer it when the data agree.
                match self.f_step_hint {
                    Some(h) if (h - fitted).abs() <= 1e-9 * fitted => (f0, h),
                    _ => (f0, fitted),
                }
            }
        };
        for (i, &f) in self.frequencies.iter().enumerate() {
            if (f - (start + i as f64 * step)).abs() > 1e-6 * step {
                return Err(err(self.lines[i], ParseErrorKind::NonUniformGrid));
            }
        }
        let points = self.samples.iter().map(|s| s[1]).collect();
        FrequencySweep::new(start, step, points, self.meta.clone())
            .map_err(|_| err(0, ParseErrorKind::NonFinite))
    }
}

fn parse_number(token: &str, line: usize) -> Result<f64, ParseError> {
    let v: f64 = token.parse().map_err(|_| {
        err(
            line,
            ParseErrorKind::BadNumber(token.chars().take(40).collect()),
        )
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(err(line, ParseErrorKind::NonFinite))
    }
}

struct Options {
    unit: FrequencyUnit,
    format: DataFormat,
    z0: f64,
}

fn parse_option_line(body: &str, line: usize) -> Result<Options, ParseError> {
    let mut unit = None;
    let mut format = None;
    let mut param = false;
    let mut z0 = None;
    let mut tokens = body.split_whitespace();
    let dup = |t: &str| err(line, ParseErrorKind::BadOption(format!("{t} given twice")));
    while let Some(tok) = tokens.next() {
        let upper = tok.to_ascii_uppercase();
        match upper.as_str() {
            "HZ" | "KHZ" | "MHZ" | "GHZ" => {
                if unit.is_some() {
                    return Err(dup(tok));
                }
                unit = Some(match upper.as_str() {
                    "HZ" => FrequencyUnit::Hz,
                    "KHZ" => FrequencyUnit::KHz,
                    "MHZ" => FrequencyUnit::MHz,
                    _ => FrequencyUnit::GHz,
                });
            }
            "RI" | "MA" | "DB" => {
                if format.is_some() {
                    return Err(dup(tok));
                }
                format = Some(match upper.as_str() {
                    "RI" => DataFormat::RealImag,
                    "MA" => DataFormat::MagAngle,
                    _ => DataFormat::DbAngle,
                });
            }
            "S" => {
                if param {
                    return Err(dup(tok));
                }
                param = true;
            }
            "Y" | "Z" | "H" | "G" => {
                return Err(err(line, ParseErrorKind::UnsupportedParameter(upper)));
            }
            "R" => {
                if z0.is_some() {
                    return Err(dup(tok));
                }
                let v = tokens.next().ok_or_else(|| {
                    err(
                        line,
                        ParseErrorKind::BadImpedance("missing value after R".into()),
                    )
                })?;
                let r = parse_number(v, line)?;
                if r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
                    return Err(err(line, ParseErrorKind::BadImpedance(v.into())));
                }
                z0 = Some(r);
            }
            _ => {
                return Err(err(
                    line,
                    ParseErrorKind::BadOption(format!(
                        "unknown token {:?}",
                        tok.chars().take(20).collect::<String>()
                    )),
                ))
            }
        }
    }
    Ok(Options {
        unit: unit.unwrap_or(FrequencyUnit::GHz),
        format: format.unwrap_or(DataFormat::MagAngle),
        z0: z0.unwrap_or(50.0),
    })
}

/// Applies a `key=value` comment to `meta`; returns false if it is an ordinary comment.
fn apply_meta(text: &str, meta: &mut SweepMeta, f_step: &mut Option<f64>) -> bool {
    let Some((key, value)) = text.split_once('=') else {
        return false;
    };
    let number = || value.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    match key.trim() {
        "label" => meta.label = value.to_string(),
        "distance_m" => match number() {
            Some(v) => meta.distance = Some(v),
            None => return false,
        },
        "temperature_k" => match number() {
            Some(v) => meta.temperature = Some(v),
            None => return false,
        },
        "bias_v" => match number() {
            Some(v) => meta.bias = Some(v),
            None => return false,
        },
        "f_step_hz" => match number().filter(|v| *v > 0.0) {
            Some(v) => *f_step = Some(v),
            None => return false,
        },
        _ => return false,
    }
    true
}

pub fn parse_touchstone(bytes: &[u8]) -> Result<TouchstoneRecord, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()]
            .iter()
            .filter(|&&b| b == b'\n')
            .count()
            + 1;
        err(line, ParseErrorKind::NotUtf8)
    })?;
    let mut options: Option<Options> = None;
    let mut meta = SweepMeta::default();
    let mut f_step = None;
    let mut frequencies = Vec::new();
    let mut samples = Vec::new();
    let mut lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if let Some(comment) = line.strip_prefix('!') {
            let comment = comment.strip_prefix(' ').unwrap_or(comment);
            if !apply_meta(comment, &mut meta, &mut f_step) {
                meta.comments.push(comment.to_string());
            }
            continue;
        }
        let body = line.split('!').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(opt) = body.strip_prefix('#') {
            if options.is_some() {
                return Err(err(line_no, ParseErrorKind::DuplicateOptionLine));
            }
            options = Some(parse_option_line(opt, line_no)?);
            continue;
        }
        let opts = options
            .as_ref()
            .ok_or(err(line_no, ParseErrorKind::MissingOptionLine))?;
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 9 {
            return Err(err(line_no, ParseErrorKind::WrongValueCount(tokens.len())));
        }
        let mut v = [0.0; 9];
        for (slot, tok) in v.iter_mut().zip(&tokens) {
            *slot = parse_number(tok, line_no)?;
        }
        let f = v[0] * opts.unit.multiplier();
        if !f.is_finite() {
            return Err(err(line_no, ParseErrorKind::NonFinite));
        }
        if let Some(&prev) = frequencies.last() {
            if f <= prev {
                return Err(err(line_no, ParseErrorKind::NonIncreasingFrequency));
            }
        }
        let mut s = [Complex64::new(0.0, 0.0); 4];
        for (k, slot) in s.iter_mut().enumerate() {
            let c = opts.format.decode(v[1 + 2 * k], v[2 + 2 * k]);
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(err(line_no, ParseErrorKind::NonFinite));
            }
            *slot = c;
        }
        frequencies.push(f);
        samples.push(s);
        lines.push(line_no);
    }
    // A file without an option line is reported at end of input.
    let opts = options.ok_or(err(
        text.lines().count() + 1,
        ParseErrorKind::MissingOptionLine,
    ))?;
    Ok(TouchstoneRecord {
        unit: opts.unit,
        format: opts.format,
        z0: opts.z0,
        frequencies,
        samples,
        lines,
        meta,
        f_step_hint: f_step,
    })
}

/// Parses a file straight to its S21 sweep.
pub fn parse_touchstone_sweep(bytes: &[u8]) -> Result<FrequencySweep, ParseError> {
    parse_touchstone(bytes)?.to_sweep()
}

/// Serializes `sweep` as a reciprocal, matched two-port (S12 = S21,
/// S11 = S22 = 0) in Hz, real/imaginary, 50 Ω.
///
/// Numbers use the shortest representation that parses back to the same
/// `f64`, so a write/parse round trip is exact.
pub fn write_touchstone(sweep: &FrequencySweep) -> String {
    let mut out = String::new();
    let meta = &sweep.meta;
    if !meta.label.is_empty() {
        out.push_str(&format!(
            "! label={}\n",
            meta.label.replace(['\n', '\r'], " ")
        ));
    }
    if let Some(d) = meta.distance {
        out.push_str(&format!("! distance_m={d:e}\n"));
    }
    if let Some(t) = meta.temperature {
        out.push_str(&format!("! temperature_k={t:e}\n"));
    }
    if let Some(b) = meta.bias {
        out.push_str(&format!("! bias_v={b:e}\n"));
    }
    out.push_str(&format!("! f_step_hz={:e}\n", sweep.f_step));
    for c in &meta.comments {
        out.push_str(&format!("! {}\n", c.replace(['\n', '\r'], " ")));
    }
    out.push_str("# HZ S RI R 50\n");
    for (f, s) in sweep.frequencies().zip(&sweep.points) {
        out.push_str(&format!(
            "{f:e} 0e0 0e0 {re:e} {im:e} {re:e} {im:e} 0e0 0e0\n",
            re = s.re,
            im = s.im
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let text = "# HZ S RI R 50\n1e9 0 0 1e-5 0 1e-5 0 0 0\n2e9 0 0 0 2e-5 0 2e-5 0 0\n";
        let s = parse_touchstone_sweep(text.as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.f_start, 1e9);
        assert_eq!(s.f_step, 1e9);
        assert_eq!(s.points[1], Complex64::new(0.0, 2e-5));
    }

    #[test]
    fn db_angle_and_units() {
        let text = "! measured\n# ghz db s\n4.583 -300 0 -99 0 -99 0 -300 0\n";
        let r = parse_touchstone(text.as_bytes()).unwrap();
        assert_eq!(r.frequencies, vec![4.583e9]);
        assert!((r.samples[0][1].norm() - 1.1220e-5).abs() < 1e-9);
        assert_eq!(r.z0, 50.0);
        assert_eq!(r.meta.comments, vec!["measured".to_string()]);
    }

    #[test]
    fn magnitude_angle() {
        let text = "# MHz S MA R 75\n100 0 0 0.5 90 0.5 90 0 0 ! inline\n";
        let r = parse_touchstone(text.as_bytes()).unwrap();
        assert_eq!(r.z0, 75.0);
        assert!((r.samples[0][1] - Complex64::new(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases: [(&str, usize); 9] = [
            ("1 2 3 4 5 6 7 8 9\n", 1),
            ("# HZ S RI\n# HZ S RI\n", 2),
            ("! c\n# HZ X RI\n", 2),
            ("# HZ Z RI\n", 1),
            ("# HZ S RI R -5\n", 1),
            ("# HZ S RI\n1 0 0\n", 2),
            ("# HZ S RI\n2 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n", 3),
            ("# HZ S RI\n1 0 0 0 0 0 0 0 abc\n", 2),
            ("# HZ S RI\n1 0 0 0 0 0 0 0 inf\n", 2),
        ];
        for (text, line) in cases {
            let e = parse_touchstone_sweep(text.as_bytes()).unwrap_err();
            assert_eq!(e.line, line, "{text:?}: {e}");
        }
        let e = parse_touchstone_sweep(
            b"# HZ S RI\n1 0 0 0 0 0 0 0 0\n2 0 0 0 0 0 0 0 0\n4 0 0 0 0 0 0 0 0\n",
        )
        .unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NonUniformGrid);
        assert_eq!(
            parse_touchstone(b"\xff\xfe").unwrap_err().kind,
            ParseErrorKind::NotUtf8
        );
        assert_eq!(
            parse_touchstone(b"").unwrap_err().kind,
            ParseErrorKind::MissingOptionLine
        );
    }

    #[test]
    fn empty_sweep_writes_header_only() {
        let s = FrequencySweep::new(1e9, 1e6, Vec::new(), SweepMeta::default()).unwrap();
        let text = write_touchstone(&s);
        assert_eq!(text, "! f_step_hz=1e6\n# HZ S RI R 50\n");
        assert_eq!(parse_touchstone_sweep(text.as_bytes()).unwrap().len(), 0);
    }

    #[test]
    fn writer_is_deterministic_and_reciprocal() {
        let pts = vec![
            Complex64::new(1.5e-5, -2.25e-6),
            Complex64::new(-3e-7, 1e-300),
        ];
        let meta = SweepMeta {
            distance: Some(1.323e-3),
            temperature: Some(0.02),
            bias: Some(-1.5),
            label: "run a".into(),
            comments: vec!["first".into(), "a=b".into()],
        };
        let s = FrequencySweep::new(4.583e9, 7.5e5, pts, meta).unwrap();
        let a = write_touchstone(&s);
        assert_eq!(a, write_touchstone(&s));
        let r = parse_touchstone(a.as_bytes()).unwrap();
        for x in &r.samples {
            assert_eq!(x[1], x[2]);
            assert_eq!(x[0], Complex64::new(0.0, 0.0));
            assert_eq!(x[3], Complex64::new(0.0, 0.0));
        }
        let back = r.to_sweep().unwrap();
        assert_eq!(back.points, s.points);
        assert_eq!(back.meta, s.meta);
    }
}
