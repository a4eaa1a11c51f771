//! Reader and writer for Fresnel-style whitespace-separated measurement files.
//!
//! Each data row carries a transmitter index, a receiver index, the frequency
//! in GHz and the real/imaginary parts of the total and incident fields. The
//! column positions are configurable through [`FresnelSchema`].

use std::collections::HashSet;
use std::fmt::Write as _;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::forward::{MsrMatrix, Provenance};
use crate::scene::{IncidentSet, Point, SensorArray};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelRecord {
    /// 1-based transmitter index.
    pub transmitter: usize,
    /// 1-based receiver index.
    pub receiver: usize,
    pub frequency_ghz: f64,
    pub total: Complex,
    pub incident: Complex,
}

impl FresnelRecord {
    pub fn scattered(&self) -> Complex {
        self.total - self.incident
    }
}

/// 0-based column of each field in a data row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FresnelSchema {
    pub tx: usize,
    pub rx: usize,
    pub freq: usize,
    pub tot_re: usize,
    pub tot_im: usize,
    pub inc_re: usize,
    pub inc_im: usize,
}

impl Default for FresnelSchema {
    fn default() -> Self {
        FresnelSchema { tx: 0, rx: 1, freq: 2, tot_re: 3, tot_im: 4, inc_re: 5, inc_im: 6 }
    }
}

impl FresnelSchema {
    fn columns(&self) -> [(&'static str, usize); 7] {
        [
            ("tx", self.tx),
            ("rx", self.rx),
            ("freq", self.freq),
            ("tot_re", self.tot_re),
            ("tot_im", self.tot_im),
            ("inc_re", self.inc_re),
            ("inc_im", self.inc_im),
        ]
    }

    fn width(&self) -> usize {
        self.columns().iter().map(|c| c.1).max().unwrap_or(0) + 1
    }
}

/// `tx=1,rx=2,freq=3,tot_re=4,tot_im=5,inc_re=6,inc_im=7` with 1-based
/// columns. Omitted keys keep their default position.
impl std::str::FromStr for FresnelSchema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut schema = FresnelSchema::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, value) =
                item.split_once('=').ok_or_else(|| Error::config(format!("schema item `{item}` is not key=column")))?;
            let col: usize = value
                .trim()
                .parse()
                .map_err(|_| Error::config(format!("schema column `{value}` is not an integer")))?;
            if col == 0 {
                return Err(Error::config("schema columns are 1-based"));
            }
            let slot = match key.trim() {
                "tx" => &mut schema.tx,
                "rx" => &mut schema.rx,
                "freq" => &mut schema.freq,
                "tot_re" => &mut schema.tot_re,
                "tot_im" => &mut schema.tot_im,
                "inc_re" => &mut schema.inc_re,
                "inc_im" => &mut schema.inc_im,
                other => return Err(Error::config(format!("unknown schema key `{other}`"))),
            };
            *slot = col - 1;
        }
        let cols = schema.columns();
        let distinct: HashSet<usize> = cols.iter().map(|c| c.1).collect();
        if distinct.len() != cols.len() {
            return Err(Error::config("schema maps two fields to the same column"));
        }
        Ok(schema)
    }
}

impl std::fmt::Display for FresnelSchema {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.columns().iter().map(|(k, c)| format!("{k}={}", c + 1)).collect();
        f.write_str(&parts.join(","))
    }
}

/// Records kept after the frequency filter, plus what was dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseReport {
    pub records: Vec<FresnelRecord>,
    /// 1-based line numbers of header or comment lines.
    pub skipped_lines: Vec<usize>,
    /// Data rows at other frequencies.
    pub other_frequency: usize,
}

fn is_numeric_token(tok: &str) -> bool {
    tok.chars().next().is_some_and(|c| c.is_ascii_digit() || matches!(c, '-' | '+' | '.'))
}

fn parse_index(tok: &str, line: usize, name: &str) -> Result<usize> {
    let v: f64 = tok.parse().map_err(|_| Error::Parse { line, message: format!("{name} `{tok}` is not a number") })?;
    if v < 1.0 || v.fract() != 0.0 || v > u32::MAX as f64 {
        return Err(Error::Parse { line, message: format!("{name} `{tok}` is not a positive integer") });
    }
    Ok(v as usize)
}

fn parse_real(tok: &str, line: usize, name: &str) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| Error::Parse { line, message: format!("{name} `{tok}` is not a number") })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, message: format!("{name} `{tok}` is not finite") });
    }
    Ok(v)
}

/// Parses every data row and keeps those at `frequency_ghz` (relative
/// tolerance 1e-6).
pub fn parse_fresnel(text: &str, schema: &FresnelSchema, frequency_ghz: f64) -> Result<ParseReport> {
    if !(frequency_ghz > 0.0) {
        return Err(Error::config(format!("selected frequency must be positive, got {frequency_ghz}")));
    }
    let tol = 1e-6 * frequency_ghz;
    let width = schema.width();
    let mut report = ParseReport { records: Vec::new(), skipped_lines: Vec::new(), other_frequency: 0 };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        let Some(first) = toks.first() else { continue };
        if !is_numeric_token(first) {
            report.skipped_lines.push(line);
            continue;
        }
        if toks.len() < width {
            return Err(Error::Parse {
                line,
                message: format!("expected at least {width} columns, found {}", toks.len()),
            });
        }
        let frequency = parse_real(toks[schema.freq], line, "frequency")?;
        if !(frequency > 0.0) {
            return Err(Error::Parse { line, message: format!("frequency {frequency} is not positive") });
        }
        let record = FresnelRecord {
            transmitter: parse_index(toks[schema.tx], line, "transmitter")?,
            receiver: parse_index(toks[schema.rx], line, "receiver")?,
            frequency_ghz: frequency,
            total: Complex::new(
                parse_real(toks[schema.tot_re], line, "Re total")?,
                parse_real(toks[schema.tot_im], line, "Im total")?,
            ),
            incident: Complex::new(
                parse_real(toks[schema.inc_re], line, "Re incident")?,
                parse_real(toks[schema.inc_im], line, "Im incident")?,
            ),
        };
        if (frequency - frequency_ghz).abs() <= tol {
            report.records.push(record);
        } else {
            report.other_frequency += 1;
        }
    }
    if report.records.is_empty() {
        return Err(Error::EmptySelection(format!("no rows at {frequency_ghz} GHz")));
    }
    Ok(report)
}

/// One row per record in the default column order, shortest round-trip floats.
pub fn write_fresnel(records: &[FresnelRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(
            out,
            "{} {} {} {} {} {} {}",
            r.transmitter, r.receiver, r.frequency_ghz, r.total.re, r.total.im, r.incident.re, r.incident.im
        );
    }
    out
}

/// Source and receiver placement on two concentric circles.
#[derive(Debug, Clone, PartialEq)]
pub struct FresnelGeometry {
    pub source_radius: f64,
    pub source_angles_deg: Vec<f64>,
    pub receiver_radius: f64,
    pub receiver_angles_deg: Vec<f64>,
}

fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    (0..count).map(|i| start + (end - start) * i as f64 / (count - 1) as f64).collect()
}

impl Default for FresnelGeometry {
    /// 36 sources at 0.72 m evenly spread over 10°..=350°, 49 receivers at
    /// 0.76 m evenly spread over 5°..=355°.
    fn default() -> Self {
        FresnelGeometry {
            source_radius: 0.72,
            source_angles_deg: linspace(10.0, 350.0, 36),
            receiver_radius: 0.76,
            receiver_angles_deg: linspace(5.0, 355.0, 49),
        }
    }
}

impl FresnelGeometry {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("source", self.source_radius), ("receiver", self.receiver_radius)] {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::config(format!("{name} radius must be positive, got {r}")));
            }
        }
        for (name, angles) in [("source", &self.source_angles_deg), ("receiver", &self.receiver_angles_deg)] {
            if angles.is_empty() {
                return Err(Error::config(format!("{name} angle list is empty")));
            }
            if angles.iter().any(|a| !(0.0..360.0).contains(a)) {
                return Err(Error::config(format!("{name} angles must lie in [0, 360)")));
            }
            if angles.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::config(format!("{name} angles must be strictly increasing")));
            }
        }
        Ok(())
    }

    pub fn receivers(&self) -> Result<SensorArray> {
        SensorArray::explicit(
            self.receiver_angles_deg.iter().map(|a| Point::from_polar(self.receiver_radius, a.to_radians())).collect(),
        )
    }

    /// Plane-wave directions pointing from each source towards the origin.
    pub fn incidents(&self) -> Result<IncidentSet> {
        IncidentSet::explicit(
            self.source_angles_deg
                .iter()
                .map(|a| Point::from_polar(1.0, a.to_radians() + std::f64::consts::PI))
                .collect(),
        )
    }

    pub fn source_positions(&self) -> Vec<Point> {
        self.source_angles_deg.iter().map(|a| Point::from_polar(self.source_radius, a.to_radians())).collect()
    }
}

/// Scattered-field MSR indexed (receiver, transmitter); pairs without a
/// record are masked.
pub fn to_msr(records: &[FresnelRecord], geometry: &FresnelGeometry) -> Result<MsrMatrix> {
    geometry.validate()?;
    let first = records.first().ok_or_else(|| Error::EmptySelection("no Fresnel records".into()))?;
    let (n, l) = (geometry.receiver_angles_deg.len(), geometry.source_angles_deg.len());
    let mut values = Array2::zeros((n, l));
    let mut mask = Array2::from_elem((n, l), false);
    for r in records {
        if (r.frequency_ghz - first.frequency_ghz).abs() > 1e-6 * first.frequency_ghz {
            return Err(Error::DataIntegrity(format!(
                "records mix frequencies {} and {} GHz",
                first.frequency_ghz, r.frequency_ghz
            )));
        }
        if r.transmitter == 0 || r.transmitter > l || r.receiver == 0 || r.receiver > n {
            return Err(Error::DataIntegrity(format!(
                "pair (tx {}, rx {}) outside the {l} x {n} geometry",
                r.transmitter, r.receiver
            )));
        }
        let (i, j) = (r.receiver - 1, r.transmitter - 1);
        if mask[[i, j]] {
            return Err(Error::DataIntegrity(format!("duplicate pair (tx {}, rx {})", r.transmitter, r.receiver)));
        }
        mask[[i, j]] = true;
        values[[i, j]] = r.scattered();
    }
    MsrMatrix::new(values, mask, geometry.receivers()?, geometry.incidents()?, Provenance::External)
}
