use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::domain::Domain2D;
use crate::error::{Error, Result};
use crate::linalg::real_lstsq;
use crate::polycore::CPoly;

/// Sequence of holomorphic polynomials whose real parts approach the
/// boundary data.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyApprox {
    pub polys: Vec<CPoly>,
    /// `max_{∂Ω}|Re P_j − u|` for each `P_j`, strictly decreasing.
    pub errors: Vec<f64>,
    /// Degree of the last polynomial.
    pub degree: usize,
}

fn binomial_row(k: usize) -> Vec<f64> {
    let mut row = alloc::vec![1.0; k + 1];
    for m in 1..k {
        row[m] = row[m - 1] * (k - m + 1) as f64 / m as f64;
    }
    row
}

/// `Σ a_k ((z − c)/R)^k` expanded in powers of `z`, up to an imaginary
/// constant.
fn expand(a: &[Complex64], c: Complex64, r: f64) -> CPoly {
    let mut coeffs = alloc::vec![Complex64::new(0.0, 0.0); a.len()];
    for (k, ak) in a.iter().enumerate() {
        let bin = binomial_row(k);
        let scale = ak / r.powi(k as i32);
        for (m, b) in bin.iter().enumerate() {
            coeffs[m] += scale * b * (-c).powu((k - m) as u32);
        }
    }
    // the imaginary constant does not affect Re P; fix it to zero
    coeffs[0].im = 0.0;
    CPoly::univariate(&coeffs)
}

/// Real-part least squares of `u` (one real value per boundary attachment)
/// by holomorphic polynomials of degree `0, 1, …, cap` in `(z − c)/R`,
/// with `c` the centroid of the attachment points and `R` their radius
/// about it. A polynomial is kept when its boundary error strictly
/// improves; the search stops once the error is below `target`.
pub fn holo_poly_approx(dom: &Domain2D, u: &[f64], cap: usize, target: f64) -> Result<PolyApprox> {
    let att = dom.attachments();
    if u.len() != att.len() {
        return Err(Error::DimensionMismatch { expected: att.len(), found: u.len() });
    }
    if att.is_empty() {
        return Err(Error::GridTooSmall);
    }
    let pts: Vec<Complex64> = att.iter().map(|a| a.point).collect();
    let mut c: Complex64 = pts.iter().sum::<Complex64>() / pts.len() as f64;
    let r = pts.iter().map(|p| (p - c).norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if c.norm() < 1e-12 * r {
        c = Complex64::new(0.0, 0.0);
    }
    let w: Vec<Complex64> = pts.iter().map(|p| (p - c) / r).collect();

    let mut out = PolyApprox { polys: Vec::new(), errors: Vec::new(), degree: 0 };
    let mut best = f64::INFINITY;
    for d in 0..=cap {
        // columns: Re a_0, then (Re a_k, Im a_k) for k ≥ 1
        let ncols = 2 * d + 1;
        if pts.len() < ncols {
            break;
        }
        let mut mat = Vec::with_capacity(pts.len() * ncols);
        for wk in &w {
            let mut pw = Complex64::new(1.0, 0.0);
            mat.push(1.0);
            for _ in 1..=d {
                pw *= wk;
                mat.push(pw.re);
                mat.push(-pw.im);
            }
        }
        let x = real_lstsq(&mat, pts.len(), ncols, u, 1e-13);
        let mut a = alloc::vec![Complex64::new(x[0], 0.0)];
        for k in 1..=d {
            a.push(Complex64::new(x[2 * k - 1], x[2 * k]));
        }
        let p = expand(&a, c, r);
        let err = pts.iter().zip(u).map(|(z, uv)| (p.eval(&[*z]).re - uv).abs()).fold(0.0, f64::max);
        if err < best {
            best = err;
            out.polys.push(p);
            out.errors.push(err);
            out.degree = d;
        }
        if best < target {
            return Ok(out);
        }
    }
    Err(Error::TargetUnreachable { degree: cap, achieved: best })
}
