use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::harmonic::{GridField, Lattice};

/// Safety factor applied to the calibrated truncation ratio.
const SAFETY: f64 = 8.0;

/// One central-difference step `((u_E − u_W) + i(u_N − u_S))/(4h)`. A node
/// stays defined only if its four neighbours were.
pub(crate) fn dbar_step(lat: &Lattice, v: &[Complex64], def: &[bool]) -> (Vec<Complex64>, Vec<bool>) {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = alloc::vec![zero; v.len()];
    let mut odef = alloc::vec![false; v.len()];
    let s = 1.0 / (4.0 * lat.h);
    for idx in 0..v.len() {
        if !def[idx] {
            continue;
        }
        let nb = |d: usize| lat.neighbor(idx, d).filter(|&n| def[n]);
        if let (Some(e), Some(w), Some(n), Some(so)) = (nb(0), nb(1), nb(2), nb(3)) {
            let dx = v[e] - v[w];
            let dy = v[n] - v[so];
            out[idx] = Complex64::new(dx.re - dy.im, dx.im + dy.re) * s;
            odef[idx] = true;
        }
    }
    (out, odef)
}

pub(crate) fn dbar_steps(lat: &Lattice, v: &[Complex64], def: &[bool], m: u32) -> (Vec<Complex64>, Vec<bool>) {
    let mut cur = (v.to_vec(), def.to_vec());
    for _ in 0..m {
        cur = dbar_step(lat, &cur.0, &cur.1);
    }
    cur
}

/// `m`-fold central-difference `∂/∂z̄`. Each application drops the nodes
/// missing a neighbour, so a band of `m` nodes along the edge is lost.
pub fn numeric_dbar(field: &GridField, m: u32) -> Result<GridField> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    dbar_power(field, m)
}

/// Like [`numeric_dbar`] but `m = 0` returns the field.
pub(crate) fn dbar_power(field: &GridField, m: u32) -> Result<GridField> {
    let (values, defined) = dbar_steps(field.lattice(), field.values(), field.defined(), m);
    if !defined.iter().any(|&d| d) {
        return Err(Error::GridTooSmall);
    }
    GridField::new(field.domain().clone(), values, defined)
}

/// Truncation constant `K` of the one-step operator on the nodes `mask`:
/// `SAFETY · max |D G| / (h² max|G|)` over holomorphic `G((z − c)/R)` with
/// `G ∈ {e^w, w⁴, 1/(w − 3)}`, `c` and `R` the centroid and radius of the
/// masked nodes. Returns 0 when the mask is too thin to difference.
pub fn calibrate(lat: &Lattice, mask: &[bool]) -> f64 {
    let pts: Vec<Complex64> = (0..lat.len()).filter(|&i| mask[i]).map(|i| lat.point_of(i)).collect();
    if pts.is_empty() {
        return 0.0;
    }
    let c = pts.iter().sum::<Complex64>() / pts.len() as f64;
    let r = pts.iter().map(|p| (p - c).norm()).fold(lat.h, f64::max);
    let gs: [fn(Complex64) -> Complex64; 3] = [|w| w.exp(), |w| w.powu(4), |w| 1.0 / (w - 3.0)];
    let mut k: f64 = 0.0;
    for g in gs {
        let v: Vec<Complex64> = (0..lat.len())
            .map(|i| if mask[i] { g((lat.point_of(i) - c) / r) } else { Complex64::new(0.0, 0.0) })
            .collect();
        let gmax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let (d, ddef) = dbar_step(lat, &v, mask);
        let dmax = d.iter().zip(&ddef).filter(|(_, &ok)| ok).map(|(z, _)| z.norm()).fold(0.0, f64::max);
        if gmax > 0.0 {
            k = k.max(dmax / (lat.h * lat.h * gmax));
        }
    }
    SAFETY * k
}

/// Roundoff floor of `m` difference steps on data of size `scale`.
pub(crate) fn roundoff_floor(h: f64, m: u32, scale: f64) -> f64 {
    1e4 * f64::EPSILON * scale / h.powi(m as i32)
}
