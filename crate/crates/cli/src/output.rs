//! File writers for maps and reports.

use std::path::Path;

use anyhow::Context;

use dsmap_core::{Error, IndicatorMap};

/// 16-bit binary PGM of a map with values in `[0, 1]`, row 0 at the top.
pub fn encode_pgm(map: &IndicatorMap) -> dsmap_core::Result<Vec<u8>> {
    if let Some(v) = map.values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Domain(format!("{} map value {v} lies outside [0, 1]", map.algorithm)));
    }
    let (rows, cols) = map.values.dim();
    let mut out = format!("P5\n{cols} {rows}\n65535\n").into_bytes();
    out.reserve(2 * rows * cols);
    for &v in map.values.iter() {
        let level = (65535.0 * v).round() as u16;
        out.extend_from_slice(&level.to_be_bytes());
    }
    Ok(out)
}

pub fn write_pgm(map: &IndicatorMap, path: &Path) -> anyhow::Result<()> {
    let bytes = encode_pgm(map).with_context(|| format!("encoding {}", path.display()))?;
    write_file(path, &bytes)
}

pub fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use dsmap_core::{make_grid, Algorithm, Point};
    use ndarray::Array2;

    fn map(values: Vec<f64>, n: usize) -> IndicatorMap {
        let grid = make_grid(Point::ORIGIN, n as f64, 1.0).unwrap();
        IndicatorMap::new(grid, Array2::from_shape_vec((n, n), values).unwrap(), Algorithm::Dsm).unwrap()
    }

    fn pixels(bytes: &[u8], header: usize) -> Vec<u16> {
        bytes[header..].chunks(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
    }

    #[test]
    fn single_pixel_extremes() {
        let one = encode_pgm(&map(vec![1.0], 1)).unwrap();
        assert_eq!(&one[..15], b"P5\n1 1\n65535\n\xff\xff");
        assert_eq!(pixels(&encode_pgm(&map(vec![0.0], 1)).unwrap(), 13), vec![0]);
    }

    #[test]
    fn rounding_of_thirds() {
        let bytes = encode_pgm(&map(vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0], 2)).unwrap();
        assert!(bytes.starts_with(b"P5\n2 2\n65535\n"));
        assert_eq!(pixels(&bytes, 13), vec![0, 21845, 43690, 65535]);
    }

    #[test]
    fn out_of_range_is_rejected() {
        assert!(encode_pgm(&map(vec![1.5], 1)).is_err());
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("missing").join("x.pgm");
        let e = write_pgm(&map(vec![0.5], 1), &path).unwrap_err();
        assert!(format!("{e:#}").contains("missing"));
    }
}
