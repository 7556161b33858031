//! Binary portable pixmap (`P6`) images of `|f|` on a grid.

use std::fs;
use std::path::Path;

use polyan_core::harmonic::GridField;

use crate::error::CliError;

/// One gray pixel per entry of the row-major `width × height` grid, linear
/// over `[min, max]` of the present entries. Missing entries are black, and
/// a constant grid maps to 0.
pub fn encode_grid(width: usize, height: usize, cells: &[Option<f64>]) -> Result<Vec<u8>, CliError> {
    if cells.len() != width * height {
        return Err(CliError::Format(format!("{} cells for a {width}×{height} image", cells.len())));
    }
    let present = cells.iter().flatten();
    let lo = present.clone().copied().fold(f64::INFINITY, f64::min);
    let hi = present.copied().fold(f64::NEG_INFINITY, f64::max);
    if lo > hi {
        return Err(CliError::Format("heatmap of an empty field".into()));
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.reserve(3 * cells.len());
    for c in cells {
        let g = match c {
            Some(v) if hi > lo => (255.0 * (v - lo) / (hi - lo)).round() as u8,
            _ => 0,
        };
        out.extend_from_slice(&[g, g, g]);
    }
    Ok(out)
}

/// `|f|` with one pixel per lattice node in storage order.
pub fn encode(field: &GridField) -> Result<Vec<u8>, CliError> {
    let lat = field.lattice();
    let cells: Vec<Option<f64>> = (0..lat.len()).map(|i| field.at(i).map(|v| v.norm())).collect();
    encode_grid(lat.nx, lat.ny, &cells)
}

pub fn emit_heatmap(field: &GridField, path: &Path) -> Result<(), CliError> {
    let bytes = encode(field)?;
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use polyan_core::harmonic::Domain2D;

    use super::*;

    fn pixels(bytes: &[u8]) -> (&[u8], Vec<u8>) {
        // header is three newline-terminated lines
        let mut cut = 0;
        for _ in 0..3 {
            cut += bytes[cut..].iter().position(|&b| b == b'\n').unwrap() + 1;
        }
        let body = &bytes[cut..];
        assert!(body.chunks(3).all(|p| p[0] == p[1] && p[1] == p[2]));
        (&bytes[..cut], body.chunks(3).map(|p| p[0]).collect())
    }

    #[test]
    fn two_by_two_ramp() {
        let cells: Vec<Option<f64>> = (0..4).map(|k| Some(k as f64)).collect();
        let bytes = encode_grid(2, 2, &cells).unwrap();
        let (header, px) = pixels(&bytes);
        assert_eq!(header, b"P6\n2 2\n255\n");
        assert_eq!(px, vec![0, 85, 170, 255]);
    }

    #[test]
    fn constant_field_is_uniform() {
        let d = Domain2D::disc(Complex64::new(0.0, 0.0), 1.0, 0.25).unwrap();
        let f = GridField::from_fn(&d, |_| Complex64::new(2.0, 0.0));
        let bytes = encode(&f).unwrap();
        let (_, px) = pixels(&bytes);
        assert!(px.iter().all(|&p| p == px[0]));
    }

    #[test]
    fn modulus_brightens_outwards() {
        let d = Domain2D::disc(Complex64::new(0.0, 0.0), 1.0, 1.0 / 16.0).unwrap();
        let f = GridField::from_fn(&d, |z| z);
        let bytes = encode(&f).unwrap();
        let (_, px) = pixels(&bytes);
        let lat = f.lattice();
        // along the positive real axis from the center
        let mid = lat.ny / 2;
        let row: Vec<u8> = (lat.nx / 2..lat.nx).filter_map(|i| f.get(i, mid).map(|_| px[lat.index(i, mid)])).collect();
        assert!(row.len() > 5 && row.windows(2).all(|w| w[0] <= w[1]) && row[0] < *row.last().unwrap());
    }
}
