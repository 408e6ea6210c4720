//! Touchstone v1 reader and writer, two-port S-parameters only.
//!
//! Grammar handled:
//!
//! ```text
//! ! comment                       (full-line comments kept, in order)
//! # <unit> S <format> R <ohms>    (option line; tokens in any order, case-insensitive)
//! f  S11a S11b  S21a S21b  S12a S12b  S22a S22b   [! inline comment, dropped]
//! ```
//!
//! `unit` ∈ {Hz, kHz, MHz, GHz}, `format` ∈ {RI, MA, DB}; angles are in
//! degrees. A missing option line means `# GHz S MA R 50`. Only the first
//! option line is honoured.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::network::{NetworkError, SParameterTrace};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TouchstoneError {
    #[error("line {line}: malformed option line: {reason}")]
    MalformedOptionLine { line: usize, reason: String },
    #[error("line {line}: frequency does not increase")]
    NonMonotonicFrequency { line: usize },
    #[error("line {line}: expected 9 values for a 2-port row, found {found}")]
    BadRowArity { line: usize, found: usize },
    #[error("line {line}: cannot parse `{token}` as a number")]
    BadNumber { line: usize, token: String },
    #[error("no data rows")]
    Empty,
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FrequencyUnit {
    Hz,
    KHz,
    MHz,
    #[default]
    GHz,
}

impl FrequencyUnit {
    pub fn scale(&self) -> f64 {
        match self {
            FrequencyUnit::Hz => 1.0,
            FrequencyUnit::KHz => 1e3,
            FrequencyUnit::MHz => 1e6,
            FrequencyUnit::GHz => 1e9,
        }
    }

    fn parse(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "hz" => Some(FrequencyUnit::Hz),
            "khz" => Some(FrequencyUnit::KHz),
            "mhz" => Some(FrequencyUnit::MHz),
            "ghz" => Some(FrequencyUnit::GHz),
            _ => None,
        }
    }
}

impl fmt::Display for FrequencyUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrequencyUnit::Hz => "Hz",
            FrequencyUnit::KHz => "kHz",
            FrequencyUnit::MHz => "MHz",
            FrequencyUnit::GHz => "GHz",
        })
    }
}

/// How each complex value is written as a pair of numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DataFormat {
    /// Real, imaginary.
    RI,
    /// Linear magnitude, angle in degrees.
    #[default]
    MA,
    /// 20·log10 magnitude, angle in degrees.
    DB,
}

impl DataFormat {
    fn parse(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "ri" => Some(DataFormat::RI),
            "ma" => Some(DataFormat::MA),
            "db" => Some(DataFormat::DB),
            _ => None,
        }
    }

    pub fn decode(&self, a: f64, b: f64) -> Complex64 {
        match self {
            DataFormat::RI => Complex64::new(a, b),
            DataFormat::MA => Complex64::from_polar(a, b.to_radians()),
            DataFormat::DB => Complex64::from_polar(10f64.powf(a / 20.0), b.to_radians()),
        }
    }

    pub fn encode(&self, z: Complex64) -> (f64, f64) {
        match self {
            DataFormat::RI => (z.re, z.im),
            DataFormat::MA => (z.norm(), z.arg().to_degrees()),
            DataFormat::DB => (20.0 * z.norm().log10(), z.arg().to_degrees()),
        }
    }
}

impl fmt::Display for DataFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataFormat::RI => "RI",
            DataFormat::MA => "MA",
            DataFormat::DB => "DB",
        })
    }
}

impl FromStr for DataFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s).ok_or_else(|| format!("unknown data format `{s}` (expected RI, MA or DB)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionLine {
    pub unit: FrequencyUnit,
    pub format: DataFormat,
    pub resistance: f64,
}

impl Default for OptionLine {
    fn default() -> Self {
        Self { unit: FrequencyUnit::GHz, format: DataFormat::MA, resistance: 50.0 }
    }
}

impl fmt::Display for OptionLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "# {} S {} R {}", self.unit, self.format, self.resistance)
    }
}

fn parse_option_line(body: &str, line: usize) -> Result<OptionLine, TouchstoneError> {
    let bad = |reason: String| TouchstoneError::MalformedOptionLine { line, reason };
    let mut opts = OptionLine::default();
    let mut tokens = body.split_whitespace();
    while let Some(tok) = tokens.next() {
        if let Some(unit) = FrequencyUnit::parse(tok) {
            opts.unit = unit;
        } else if let Some(format) = DataFormat::parse(tok) {
            opts.format = format;
        } else {
            match tok.to_ascii_lowercase().as_str() {
                "s" => {}
                "y" | "z" | "h" | "g" => {
                    return Err(bad(format!("parameter type `{tok}` is not supported, only S")))
                }
                "r" => {
                    let value = tokens.next().ok_or_else(|| bad("`R` without a value".into()))?;
                    let r: f64 = value
                        .parse()
                        .map_err(|_| bad(format!("cannot parse reference resistance `{value}`")))?;
                    if !(r > 0.0 && r.is_finite()) {
                        return Err(bad(format!("reference resistance must be positive, got {r}")));
                    }
                    opts.resistance = r;
                }
                _ => return Err(bad(format!("unexpected token `{tok}`"))),
            }
        }
    }
    Ok(opts)
}

/// Parsed `.s2p` file.
#[derive(Debug, Clone, PartialEq)]
pub struct TouchstoneDocument {
    pub options: OptionLine,
    /// Full-line comments without the leading `!`.
    pub comments: Vec<String>,
    /// Raw data rows as written (frequency in file units, value pairs in file format).
    pub rows: Vec<[f64; 9]>,
    pub trace: SParameterTrace,
}

pub fn parse_touchstone(text: &str) -> Result<TouchstoneDocument, TouchstoneError> {
    let mut options: Option<OptionLine> = None;
    let mut comments = Vec::new();
    let mut rows: Vec<[f64; 9]> = Vec::new();
    let mut last_freq: Option<f64> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('!') {
            comments.push(comment.trim_start().to_string());
            continue;
        }
        let content = trimmed.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(body) = content.strip_prefix('#') {
            let parsed = parse_option_line(body, line_no)?;
            if !rows.is_empty() {
                return Err(TouchstoneError::MalformedOptionLine {
                    line: line_no,
                    reason: "option line after data".into(),
                });
            }
            options.get_or_insert(parsed);
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 9 {
            return Err(TouchstoneError::BadRowArity { line: line_no, found: tokens.len() });
        }
        let mut row = [0.0; 9];
        for (slot, tok) in row.iter_mut().zip(&tokens) {
            *slot = tok
                .parse()
                .map_err(|_| TouchstoneError::BadNumber { line: line_no, token: tok.to_string() })?;
        }
        if last_freq.is_some_and(|prev| row[0] <= prev) {
            return Err(TouchstoneError::NonMonotonicFrequency { line: line_no });
        }
        last_freq = Some(row[0]);
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(TouchstoneError::Empty);
    }
    let options = options.unwrap_or_default();
    let scale = options.unit.scale();
    let fmt = options.format;
    let n = rows.len();
    let (mut freqs, mut s11, mut s21, mut s12, mut s22) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for r in &rows {
        freqs.push(r[0] * scale);
        s11.push(fmt.decode(r[1], r[2]));
        s21.push(fmt.decode(r[3], r[4]));
        s12.push(fmt.decode(r[5], r[6]));
        s22.push(fmt.decode(r[7], r[8]));
    }
    let trace = SParameterTrace::new(freqs, s11, s21, s12, s22, options.resistance)?;
    Ok(TouchstoneDocument { options, comments, rows, trace })
}

/// Fixed-point with 9 decimals for |x| >= 1, otherwise 9-decimal scientific,
/// so every value carries at least 10 significant digits.
fn number(x: f64) -> String {
    if x == 0.0 {
        "0.000000000".to_string()
    } else if x.abs() >= 1.0 && x.abs() < 1e9 {
        format!("{x:.9}")
    } else {
        format!("{x:.9e}")
    }
}

/// Writes `trace` with frequencies in GHz. `comments` go at the file head.
pub fn write_touchstone(trace: &SParameterTrace, format: DataFormat, comments: &[String]) -> String {
    let options = OptionLine { unit: FrequencyUnit::GHz, format, resistance: trace.z0() };
    let mut out = String::new();
    for c in comments {
        out.push_str("! ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str(&options.to_string());
    out.push('\n');
    for i in 0..trace.len() {
        let mut fields = vec![number(trace.freqs()[i] / options.unit.scale())];
        for z in [trace.s11()[i], trace.s21()[i], trace.s12()[i], trace.s22()[i]] {
            let (a, b) = format.encode(z);
            fields.push(number(a));
            fields.push(number(b));
        }
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}
