//! Plain-text CSV form of an [`MsrMatrix`].
//!
//! ```text
//! # dsmap msr
//! N,<sensors>
//! L,<incidences>
//! provenance,<asymptotic|mie|external>
//! sensor_layout,circle,<radius>,<start_angle>,<count>   (or: sensor_layout,explicit)
//! sensor,<n>,<x>,<y>          one row per receiver
//! direction,<l>,<dx>,<dy>     one row per incidence
//! n,l,re,im,mask
//! <n>,<l>,<re>,<im>,<0|1>     one row per entry, row-major
//! ```
//!
//! Floats are written in shortest round-trip form, so reading back an
//! exported file reproduces the matrix bit for bit.

use std::fmt::Write as _;

use ndarray::Array2;

use super::{MsrMatrix, Provenance};
use crate::error::{Error, Result};
use crate::scene::{IncidentSet, Point, SensorArray, SensorLayout};
use crate::Complex;

const MAGIC: &str = "# dsmap msr";

pub fn write_msr_csv(msr: &MsrMatrix) -> String {
    let mut out = String::new();
    let (n, l) = (msr.n_sensors(), msr.n_incidents());
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "N,{n}");
    let _ = writeln!(out, "L,{l}");
    let _ = writeln!(out, "provenance,{}", msr.provenance().as_str());
    match msr.sensors().layout {
        SensorLayout::Circle { radius, start_angle, count } => {
            let _ = writeln!(out, "sensor_layout,circle,{radius},{start_angle},{count}");
        }
        SensorLayout::Explicit => {
            let _ = writeln!(out, "sensor_layout,explicit");
        }
    }
    for (i, p) in msr.sensors().positions.iter().enumerate() {
        let _ = writeln!(out, "sensor,{i},{},{}", p.x, p.y);
    }
    for (j, d) in msr.incidents().directions.iter().enumerate() {
        let _ = writeln!(out, "direction,{j},{},{}", d.x, d.y);
    }
    out.push_str("n,l,re,im,mask\n");
    for i in 0..n {
        for j in 0..l {
            let v = msr.values()[[i, j]];
            let m = u8::from(msr.mask()[[i, j]]);
            let _ = writeln!(out, "{i},{j},{},{},{m}", v.re, v.im);
        }
    }
    out
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn field<T: std::str::FromStr>(parts: &[&str], idx: usize, line: usize) -> Result<T> {
    let raw = parts.get(idx).ok_or_else(|| parse_err(line, format!("missing field {}", idx + 1)))?;
    raw.trim().parse().map_err(|_| parse_err(line, format!("cannot parse `{raw}`")))
}

pub fn read_msr_csv(text: &str) -> Result<MsrMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, s)| (i + 1, s));
    match lines.next() {
        Some((_, first)) if first.trim() == MAGIC => {}
        _ => return Err(parse_err(1, "missing `# dsmap msr` header")),
    }
    let mut n: Option<usize> = None;
    let mut l: Option<usize> = None;
    let mut provenance = Provenance::External;
    let mut layout = SensorLayout::Explicit;
    let mut sensors: Vec<Option<Point>> = Vec::new();
    let mut directions: Vec<Option<Point>> = Vec::new();
    let mut values: Option<Array2<Complex>> = None;
    let mut mask: Option<Array2<bool>> = None;
    let mut seen: Option<Array2<bool>> = None;

    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        match parts[0] {
            "N" => {
                let v: usize = field(&parts, 1, no)?;
                n = Some(v);
                sensors = vec![None; v];
            }
            "L" => {
                let v: usize = field(&parts, 1, no)?;
                l = Some(v);
                directions = vec![None; v];
            }
            "provenance" => {
                provenance = parts
                    .get(1)
                    .ok_or_else(|| parse_err(no, "missing provenance"))?
                    .parse()
                    .map_err(|_| parse_err(no, "unknown provenance"))?;
            }
            "sensor_layout" => {
                layout = match parts.get(1).copied() {
                    Some("circle") => SensorLayout::Circle {
                        radius: field(&parts, 2, no)?,
                        start_angle: field(&parts, 3, no)?,
                        count: field(&parts, 4, no)?,
                    },
                    Some("explicit") => SensorLayout::Explicit,
                    _ => return Err(parse_err(no, "unknown sensor layout")),
                };
            }
            "sensor" | "direction" => {
                let idx: usize = field(&parts, 1, no)?;
                let p = Point::new(field(&parts, 2, no)?, field(&parts, 3, no)?);
                let slot = if parts[0] == "sensor" { &mut sensors } else { &mut directions };
                let cell = slot
                    .get_mut(idx)
                    .ok_or_else(|| parse_err(no, format!("index {idx} out of range (N/L must come first)")))?;
                *cell = Some(p);
            }
            "n" => {
                let (nn, ll) = match (n, l) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(parse_err(no, "data header before N and L")),
                };
                values = Some(Array2::zeros((nn, ll)));
                mask = Some(Array2::from_elem((nn, ll), false));
                seen = Some(Array2::from_elem((nn, ll), false));
            }
            _ => {
                let (vals, msk, sn) = match (values.as_mut(), mask.as_mut(), seen.as_mut()) {
                    (Some(v), Some(m), Some(s)) => (v, m, s),
                    _ => return Err(parse_err(no, format!("unexpected row `{}`", parts[0]))),
                };
                let i: usize = field(&parts, 0, no)?;
                let j: usize = field(&parts, 1, no)?;
                if i >= vals.nrows() || j >= vals.ncols() {
                    return Err(parse_err(no, format!("entry ({i}, {j}) out of range")));
                }
                if sn[[i, j]] {
                    return Err(parse_err(no, format!("duplicate entry ({i}, {j})")));
                }
                sn[[i, j]] = true;
                vals[[i, j]] = Complex::new(field(&parts, 2, no)?, field(&parts, 3, no)?);
                msk[[i, j]] = match parts.get(4).map(|s| s.trim()) {
                    Some("1") => true,
                    Some("0") => false,
                    _ => return Err(parse_err(no, "mask must be 0 or 1")),
                };
            }
        }
    }

    let values = values.ok_or_else(|| parse_err(0, "no data section"))?;
    let mask = mask.expect("set together with values");
    let positions = sensors
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| parse_err(0, format!("sensor {i} missing"))))
        .collect::<Result<Vec<_>>>()?;
    let dirs = directions
        .into_iter()
        .enumerate()
        .map(|(j, p)| p.ok_or_else(|| parse_err(0, format!("direction {j} missing"))))
        .collect::<Result<Vec<_>>>()?;
    let mut sensors = SensorArray::explicit(positions)?;
    sensors.layout = layout;
    let incidents = IncidentSet::explicit(dirs)?;
    MsrMatrix::new(values, mask, sensors, incidents, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{make_circle_array, make_direction_set};

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = "# dsmap msr\nN,1\nL,1\nsensor,0,1,0\ndirection,0,1,0\nn,l,re,im,mask\n0,0,abc,0,1\n";
        match read_msr_csv(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
        assert!(read_msr_csv("N,1\n").is_err());
    }

    #[test]
    fn export_import_preserves_mask_and_layout() {
        let sensors = make_circle_array(3.0, 3, 0.1).unwrap();
        let dirs = make_direction_set(2, 1.0).unwrap();
        let values = Array2::from_shape_fn((3, 2), |(i, j)| Complex::new(i as f64 / 3.0, -(j as f64) * 0.1));
        let mut mask = Array2::from_elem((3, 2), true);
        mask[[2, 1]] = false;
        let k = MsrMatrix::new(values, mask, sensors, dirs, Provenance::Mie).unwrap();
        let text = write_msr_csv(&k);
        let back = read_msr_csv(&text).unwrap();
        assert_eq!(back, k);
        assert_eq!(write_msr_csv(&back), text);
    }
}
