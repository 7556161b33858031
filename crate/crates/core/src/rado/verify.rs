use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::dbar::{calibrate, dbar_power, roundoff_floor};
use crate::error::{Error, Result};
use crate::harmonic::{holo_poly_approx, solve_dirichlet, Domain2D, GridField, Lattice};
use crate::tol;

/// Samples of a function claimed to be `q`-analytic off its zero set.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    field: GridField,
    q: u32,
    zero_threshold: f64,
    zero_mask: Vec<bool>,
}

impl SampledFunction {
    /// Zero set threshold `1e-8·max|f|`.
    pub fn new(field: GridField, q: u32) -> Result<Self> {
        Self::with_threshold(field, q, tol::ZERO_SET)
    }

    /// `threshold` is relative to `max|f|`.
    pub fn with_threshold(field: GridField, q: u32, threshold: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("q must be at least 1".into()));
        }
        if !(threshold.is_finite() && threshold >= 0.0) {
            return Err(Error::InvalidArgument("zero threshold must be finite and nonnegative".into()));
        }
        let cut = threshold * field.max_abs();
        let zero_mask = field
            .values()
            .iter()
            .zip(field.defined())
            .map(|(v, &d)| d && (v.norm() < cut || v.norm() == 0.0))
            .collect();
        Ok(SampledFunction { field, q, zero_threshold: threshold, zero_mask })
    }

    pub fn from_fn(dom: &Domain2D, q: u32, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(GridField::from_fn(dom, f), q)
    }

    pub fn field(&self) -> &GridField {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn zero_threshold(&self) -> f64 {
        self.zero_threshold
    }

    /// `|f| < threshold·max|f|`, per lattice node.
    pub fn zero_mask(&self) -> &[bool] {
        &self.zero_mask
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadoVerdict {
    Extends,
    Fails,
    Inconclusive,
}

impl RadoVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            RadoVerdict::Extends => "extends",
            RadoVerdict::Fails => "fails",
            RadoVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadoReport {
    /// `max|∂̄^q f|` off the band around the zero set.
    pub dbar_residual: f64,
    /// `max|∂̄^q f|` on that band.
    pub band_residual: f64,
    /// Calibrated truncation constant `K`.
    pub k: f64,
    /// `K·h²·max|f|` plus a roundoff floor.
    pub scheme_bound: f64,
    pub zero_nodes: usize,
    pub zero_set_interior_empty: bool,
    /// `max|∂̄^{q−1} f|` on the interior of the zero set (0 if empty).
    pub zero_set_u: f64,
    /// Distance between `u = ∂̄^{q−1} f` and the discrete harmonic function
    /// with its boundary values; `None` when that check could not run.
    pub harmonic_defect: Option<f64>,
    /// Polynomial approximants of `Re u` satisfy `Re(P_j − u) < e_j` inside.
    pub max_principle_ok: Option<bool>,
    pub coefficients: Vec<GridField>,
    /// Largest off-band `|∂̄ a_j|`.
    pub coefficient_residual: f64,
    pub reproduction_error: f64,
    pub verdict: RadoVerdict,
    pub remark: String,
}

const REMARK_EXTENDS: &str =
    "f is q-analytic across its zero set, so the maximum modulus property holds on the whole domain.";
const REMARK_FAILS: &str = "the q-th z-bar derivative does not vanish near the zero set, so f does not extend.";
const REMARK_INCONCLUSIVE: &str = "the residual is small but a pipeline check did not pass.";

/// Nodes within two lattice steps of the zero set or of a sign change of `f`.
fn zero_band(f: &GridField, zmask: &[bool]) -> Vec<bool> {
    let lat = f.lattice();
    let seed: Vec<bool> = (0..lat.len())
        .map(|i| {
            let Some(v) = f.at(i) else { return false };
            zmask[i]
                || (0..4).any(|d| lat.neighbor(i, d).and_then(|n| f.at(n)).is_some_and(|w| v.norm() <= (w - v).norm()))
        })
        .collect();
    dilate(lat, &seed, 2)
}

fn dilate(lat: &Lattice, seed: &[bool], r: i64) -> Vec<bool> {
    let mut out = alloc::vec![false; seed.len()];
    for (idx, _) in seed.iter().enumerate().filter(|(_, &s)| s) {
        let (i, j) = lat.coords(idx);
        for dj in -r..=r {
            for di in -r..=r {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a >= 0 && b >= 0 && (a as usize) < lat.nx && (b as usize) < lat.ny {
                    out[lat.index(a as usize, b as usize)] = true;
                }
            }
        }
    }
    out
}

/// Maxima of `|v|` over defined nodes (off band, on band).
fn split_max(f: &GridField, band: &[bool]) -> (f64, f64) {
    f.iter().fold(
        (0.0, 0.0),
        |(off, on), (i, v)| {
            if band[i] {
                (off, f64::max(on, v.norm()))
            } else {
                (f64::max(off, v.norm()), on)
            }
        },
    )
}

/// Largest first difference to a defined neighbour (off band, on band).
fn first_differences(f: &GridField, band: &[bool]) -> (f64, f64) {
    let lat = f.lattice();
    let mut off: f64 = 0.0;
    let mut on: f64 = 0.0;
    for (i, v) in f.iter() {
        let s =
            (0..4).filter_map(|d| lat.neighbor(i, d).and_then(|n| f.at(n))).map(|w| (w - v).norm()).fold(0.0, f64::max);
        if band[i] {
            on = on.max(s);
        } else {
            off = off.max(s);
        }
    }
    (off, on)
}

fn factorial(j: u32) -> f64 {
    (1..=j).map(f64::from).product()
}

/// Coefficients `a_0, …, a_{q−1}` of `f = Σ a_j z̄^j`:
/// `a_j = ∂̄^j g / j!` from the top down, with `g` reduced by each term.
pub fn extract_coefficients(f: &SampledFunction) -> Result<Vec<GridField>> {
    let mut g = f.field.clone();
    let mut out = Vec::with_capacity(f.q as usize);
    for j in (0..f.q).rev() {
        let fj = factorial(j);
        let a = dbar_power(&g, j)?.map(|v| v / fj);
        let lat = *g.lattice();
        let mut vals = g.values().to_vec();
        for (idx, v) in vals.iter_mut().enumerate() {
            if a.defined()[idx] {
                *v -= a.values()[idx] * lat.point_of(idx).conj().powu(j);
            } else {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        g = GridField::new(g.domain().clone(), vals, a.defined().to_vec())?;
        out.push(a);
    }
    out.reverse();
    Ok(out)
}

/// Harmonicity of `u` against the discrete Dirichlet solution on its own
/// support, and the one-sided bound of the polynomial approximants of
/// `Re u`.
fn harmonic_checks(u: &GridField, tol: f64) -> (Option<f64>, Option<bool>) {
    let Ok(dom) = Domain2D::from_mask(*u.lattice(), u.defined()) else { return (None, None) };
    if dom.interior().is_empty() {
        return (None, None);
    }
    let g: Option<Vec<Complex64>> = dom.attachments().iter().map(|a| u.at_point(a.point)).collect();
    let Some(g) = g else { return (None, None) };
    let Ok(sol) = solve_dirichlet(&dom, &g) else { return (None, None) };
    let defect = dom.interior().iter().map(|&i| (sol.values()[i] - u.values()[i]).norm()).fold(0.0, f64::max);

    let re: Vec<f64> = g.iter().map(|z| z.re).collect();
    let ineq = holo_poly_approx(&dom, &re, 12, tol).ok().map(|approx| {
        approx.polys.iter().zip(&approx.errors).all(|(p, e)| {
            dom.interior().iter().all(|&i| {
                let z = u.lattice().point_of(i);
                (p.eval(&[z]).re - u.values()[i].re).abs() < e + tol
            })
        })
    });
    (Some(defect), ineq)
}

/// Numerical Radó pipeline: checks that `∂̄^q f` vanishes off and across the
/// zero set, that `u = ∂̄^{q−1} f` is harmonic with its own boundary values,
/// and recovers the coefficients.
///
/// The smoothness test runs first: a value jump of `∂̄^k f`, `k < q − 1`,
/// across the zero set band raises `NotCqSmooth`. A jump of `∂̄^{q−1} f`
/// itself shows up as an `O(1/h)` residual on the band and gives `Fails`.
pub fn rado_verify(f: &SampledFunction) -> Result<RadoReport> {
    let field = &f.field;
    let lat = *field.lattice();
    let h = lat.h;
    let q = f.q;
    let scale = field.max_abs();
    let k = calibrate(&lat, field.defined());
    let bound = k * h * h * scale + roundoff_floor(h, q, scale);
    let band = zero_band(field, &f.zero_mask);

    for m in 0..q - 1 {
        let fm = dbar_power(field, m)?;
        let (off, on) = first_differences(&fm, &band);
        let limit = tol::SMOOTHNESS_FACTOR * (off + bound);
        if on > limit {
            return Err(Error::NotCqSmooth { jump: on, bound: limit });
        }
    }

    let w = dbar_power(field, q)?;
    let (dbar_residual, band_residual) = split_max(&w, &band);

    let mut report = RadoReport {
        dbar_residual,
        band_residual,
        k,
        scheme_bound: bound,
        zero_nodes: f.zero_mask.iter().filter(|&&z| z).count(),
        zero_set_interior_empty: true,
        zero_set_u: 0.0,
        harmonic_defect: None,
        max_principle_ok: None,
        coefficients: Vec::new(),
        coefficient_residual: 0.0,
        reproduction_error: 0.0,
        verdict: RadoVerdict::Fails,
        remark: String::from(REMARK_FAILS),
    };
    if dbar_residual > bound || band_residual > tol::INTERFACE_FACTOR * bound {
        return Ok(report);
    }

    let u = dbar_power(field, q - 1)?;
    let zmask = &f.zero_mask;
    let zero_interior: Vec<usize> =
        (0..lat.len()).filter(|&i| zmask[i] && (0..4).all(|d| lat.neighbor(i, d).is_some_and(|n| zmask[n]))).collect();
    report.zero_set_interior_empty = zero_interior.is_empty();
    report.zero_set_u = zero_interior.iter().filter_map(|&i| u.at(i)).map(|v| v.norm()).fold(0.0, f64::max);

    let umax = u.max_abs();
    let harm_tol = k * h * h * umax + roundoff_floor(h, q - 1, scale);
    (report.harmonic_defect, report.max_principle_ok) = harmonic_checks(&u, harm_tol);

    let coeffs = extract_coefficients(f)?;
    let mut residual: f64 = 0.0;
    for a in &coeffs {
        if let Ok(da) = dbar_power(a, 1) {
            residual = residual.max(split_max(&da, &band).0);
        }
    }
    report.coefficient_residual = residual;
    let mut repro: f64 = 0.0;
    for (idx, fv) in field.iter() {
        let terms: Option<Vec<Complex64>> = coeffs.iter().map(|a| a.at(idx)).collect();
        let Some(terms) = terms else { continue };
        let zb = lat.point_of(idx).conj();
        let mut s = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for t in terms {
            s += t * pw;
            pw *= zb;
        }
        repro = repro.max((s - fv).norm());
    }
    report.reproduction_error = repro;
    report.coefficients = coeffs;

    let ok = report.zero_set_interior_empty
        && report.harmonic_defect.is_none_or(|d| d <= harm_tol)
        && report.max_principle_ok != Some(false)
        && repro <= 10.0 * h * h * scale.max(f64::MIN_POSITIVE);
    if ok {
        report.verdict = RadoVerdict::Extends;
        report.remark = String::from(REMARK_EXTENDS);
    } else {
        report.verdict = RadoVerdict::Inconclusive;
        report.remark = String::from(REMARK_INCONCLUSIVE);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc(r: f64, h: f64) -> Domain2D {
        Domain2D::disc(c(0.0, 0.0), r, h).unwrap()
    }

    fn patch(z: Complex64) -> Complex64 {
        let s = z.norm_sqr();
        c(if s <= 1.0 { 1.0 - s } else { s - 1.0 }, 0.0)
    }

    fn max_err(f: &GridField, g: impl Fn(Complex64) -> Complex64) -> f64 {
        f.iter().map(|(i, v)| (v - g(f.lattice().point_of(i))).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn z_zbar_extends() {
        let d = disc(1.0, 1.0 / 32.0);
        let f = SampledFunction::from_fn(&d, 2, |z| z * z.conj()).unwrap();
        assert_eq!(f.zero_mask().iter().filter(|&&z| z).count(), 1);
        let r = rado_verify(&f).unwrap();
        assert_eq!(r.verdict, RadoVerdict::Extends, "{r:?}");
        assert!(r.dbar_residual <= r.scheme_bound);
        assert!(r.zero_set_interior_empty);
        assert!(r.harmonic_defect.unwrap() < 1e-10);
        assert_eq!(r.max_principle_ok, Some(true));
    }

    #[test]
    fn patch_fails_on_unit_circle() {
        let d = disc(2.0, 1.0 / 32.0);
        let f = SampledFunction::from_fn(&d, 2, patch).unwrap();
        let r = rado_verify(&f).unwrap();
        assert_eq!(r.verdict, RadoVerdict::Fails);
        assert!(r.dbar_residual <= r.scheme_bound);
        assert!(r.band_residual >= 100.0 * r.scheme_bound);
        // the defect sits on |z| = 1
        let w = dbar_power(f.field(), 2).unwrap();
        let (i, _) = w.iter().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
        assert!((w.lattice().point_of(i).norm() - 1.0).abs() < 3.0 / 32.0);
    }

    #[test]
    fn holomorphic_extends() {
        let d = disc(1.0, 1.0 / 32.0);
        let f = SampledFunction::from_fn(&d, 1, |z| z).unwrap();
        let r = rado_verify(&f).unwrap();
        assert_eq!(r.verdict, RadoVerdict::Extends, "{r:?}");
        assert_eq!(r.coefficients.len(), 1);
    }

    #[test]
    fn jump_is_not_smooth() {
        // ±(1 + z z̄) is 2-analytic on each side, but f jumps across x = 0
        let d = disc(1.0, 1.0 / 32.0);
        let step = |x: f64| if x == 0.0 { 0.0 } else { x.signum() };
        let f = SampledFunction::from_fn(&d, 2, |z| (1.0 + z * z.conj()) * step(z.re)).unwrap();
        assert!(matches!(rado_verify(&f), Err(Error::NotCqSmooth { .. })));
    }

    #[test]
    fn kink_fails() {
        let d = disc(1.0, 1.0 / 32.0);
        let f = SampledFunction::from_fn(&d, 2, |z| c(z.re.abs(), 0.0)).unwrap();
        assert_eq!(rado_verify(&f).unwrap().verdict, RadoVerdict::Fails);
    }

    #[test]
    fn coefficients_of_examples() {
        let d = disc(1.0, 1.0 / 32.0);
        let h2 = 10.0 / 1024.0;
        let f = SampledFunction::from_fn(&d, 2, |z| z * z.conj()).unwrap();
        let a = extract_coefficients(&f).unwrap();
        assert!(max_err(&a[1], |z| z) < h2);
        assert!(max_err(&a[0], |_| c(0.0, 0.0)) < h2);

        let f = SampledFunction::from_fn(&d, 2, |z| 1.0 - z * z.conj()).unwrap();
        let a = extract_coefficients(&f).unwrap();
        assert!(max_err(&a[1], |z| -z) < h2);
        assert!(max_err(&a[0], |_| c(1.0, 0.0)) < h2);

        let f = SampledFunction::from_fn(&d, 3, |z| z.conj() * z.conj() + z).unwrap();
        let a = extract_coefficients(&f).unwrap();
        assert!(max_err(&a[2], |_| c(1.0, 0.0)) < h2);
        assert!(max_err(&a[1], |_| c(0.0, 0.0)) < h2);
        assert!(max_err(&a[0], |z| z) < h2);
    }

    #[test]
    fn flat_zero_set_is_inconclusive() {
        // f vanishes on a disc: interior(Z) is not empty
        let d = disc(1.0, 1.0 / 16.0);
        let f = SampledFunction::from_fn(&d, 1, |_| c(0.0, 0.0)).unwrap();
        let r = rado_verify(&f).unwrap();
        assert!(!r.zero_set_interior_empty);
        assert_eq!(r.verdict, RadoVerdict::Inconclusive);
    }

    #[test]
    fn rejects_bad_arguments() {
        let d = disc(1.0, 1.0 / 8.0);
        assert!(SampledFunction::from_fn(&d, 0, |z| z).is_err());
        assert!(SampledFunction::with_threshold(GridField::from_fn(&d, |z| z), 1, f64::NAN).is_err());
    }
}
