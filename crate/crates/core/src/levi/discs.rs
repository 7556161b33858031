use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::surface::{GraphHypersurface, LeviData};
use crate::error::{Error, Result};

/// Sign samples per ray when checking that a disc is star-shaped.
const RAY_SAMPLES: usize = 24;
const BISECTIONS: usize = 60;
const MAX_HALVINGS: usize = 20;

/// Sampling counts: disc parameters `x`, `y`, each real axis of the
/// frozen `w_k`, and boundary angles per disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscCounts {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub boundary: usize,
}

impl Default for DiscCounts {
    fn default() -> Self {
        DiscCounts { x: 11, y: 20, w: 3, boundary: 64 }
    }
}

/// The set `{ζ : h̃(ζ, w_rest, x) < y}` in the rotated frame, star-shaped
/// about `ζ = 0`, with boundary radius `radii[k]` at angle `angles[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Disc {
    pub x: f64,
    pub y: f64,
    pub w_rest: Vec<Complex64>,
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
    /// `max |y − h̃|` over the boundary samples.
    pub attachment_defect: f64,
}

#[derive(Debug, Clone)]
pub struct DiscFamily {
    pub surface: GraphHypersurface,
    pub levi: LeviData,
    pub eps: f64,
    pub delta: f64,
    /// Number of times `ε` and `δ` were halved.
    pub halvings: usize,
    pub attachment_tol: f64,
    pub third_bound: f64,
    pub discs: Vec<Disc>,
    /// Certified box `{|w_k| < δ/2, |x| < δ/2, c₁ < y − h̃ < c₂}` (rotated).
    pub c1: f64,
    pub c2: f64,
    pub coverage_tested: usize,
}

impl DiscFamily {
    /// Original coordinates of the rotated point `(ζ, w_rest, x + iy)`.
    pub fn to_ambient(&self, zeta: Complex64, w_rest: &[Complex64], x: f64, y: f64) -> Vec<Complex64> {
        to_ambient(&self.levi, zeta, w_rest, x, y)
    }

    /// Boundary points of `d` in original coordinates.
    pub fn boundary_points(&self, d: &Disc) -> Vec<Vec<Complex64>> {
        d.angles
            .iter()
            .zip(&d.radii)
            .map(|(&t, &r)| self.to_ambient(Complex64::from_polar(r, t), &d.w_rest, d.x, d.y))
            .collect()
    }

    /// Interior points at radial fractions `k/levels`, `k = 0, …, levels − 1`.
    pub fn interior_points(&self, d: &Disc, levels: usize) -> Vec<Vec<Complex64>> {
        let mut out = alloc::vec![self.to_ambient(Complex64::new(0.0, 0.0), &d.w_rest, d.x, d.y)];
        for k in 1..levels {
            let s = k as f64 / levels as f64;
            for (&t, &r) in d.angles.iter().zip(&d.radii) {
                out.push(self.to_ambient(Complex64::from_polar(s * r, t), &d.w_rest, d.x, d.y));
            }
        }
        out
    }

    /// Rotated-frame slice coordinates `ζ` matching [`Self::interior_points`].
    pub fn interior_zetas(&self, d: &Disc, levels: usize) -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0)];
        for k in 1..levels {
            let s = k as f64 / levels as f64;
            for (&t, &r) in d.angles.iter().zip(&d.radii) {
                out.push(Complex64::from_polar(s * r, t));
            }
        }
        out
    }
}

fn to_ambient(levi: &LeviData, zeta: Complex64, w_rest: &[Complex64], x: f64, y: f64) -> Vec<Complex64> {
    let mut w = alloc::vec![zeta];
    w.extend_from_slice(w_rest);
    let mut z = levi.u.mul_vec(&w);
    z.push(Complex64::new(x, y));
    z
}

/// `h̃(w, x) = h(U w, x)`.
fn h_rot(m: &GraphHypersurface, levi: &LeviData, w: &[Complex64], x: f64) -> f64 {
    m.eval(&levi.u.mul_vec(w), x)
}

struct Ctx<'a> {
    m: &'a GraphHypersurface,
    levi: &'a LeviData,
    r_zeta: f64,
}

impl Ctx<'_> {
    fn g(&self, zeta: Complex64, w_rest: &[Complex64], x: f64, y: f64) -> f64 {
        let mut w = alloc::vec![zeta];
        w.extend_from_slice(w_rest);
        h_rot(self.m, self.levi, &w, x) - y
    }

    /// Boundary radius at angle `t`: the single sign change of `h̃ − y`
    /// along the ray, or `None` if the ray does not cross exactly once.
    fn ray(&self, t: f64, w_rest: &[Complex64], x: f64, y: f64) -> Option<f64> {
        let dir = Complex64::from_polar(1.0, t);
        let g = |r: f64| self.g(dir * r, w_rest, x, y);
        if g(0.0) >= 0.0 {
            return None;
        }
        let mut crossing = None;
        let mut prev = 0.0;
        let mut neg = true;
        for k in 1..=RAY_SAMPLES {
            let r = self.r_zeta * k as f64 / RAY_SAMPLES as f64;
            let now_neg = g(r) < 0.0;
            if now_neg != neg {
                if crossing.is_some() || now_neg {
                    return None;
                }
                crossing = Some((prev, r));
            }
            neg = now_neg;
            prev = r;
        }
        let (mut lo, mut hi) = crossing?;
        for _ in 0..BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    fn disc(&self, w_rest: &[Complex64], x: f64, y: f64, count: usize) -> Disc {
        let angles: Vec<f64> = (0..count).map(|k| TAU * k as f64 / count as f64).collect();
        let mut radii = Vec::with_capacity(count);
        let mut defect: f64 = 0.0;
        for &t in &angles {
            match self.ray(t, w_rest, x, y) {
                Some(r) => {
                    defect = defect.max(self.g(Complex64::from_polar(r, t), w_rest, x, y).abs());
                    radii.push(r);
                }
                None => {
                    defect = f64::INFINITY;
                    radii.push(0.0);
                }
            }
        }
        Disc { x, y, w_rest: w_rest.to_vec(), angles, radii, attachment_defect: defect }
    }
}

fn grid(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => alloc::vec![0.5 * (lo + hi)],
        _ => (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect(),
    }
}

/// All `w_rest ∈ ([lo, hi] + i[lo, hi])^m` on a `count`-point grid per axis.
fn complex_grid(m: usize, count: usize, lo: f64, hi: f64) -> Vec<Vec<Complex64>> {
    let axis = grid(count, lo, hi);
    let pts: Vec<Complex64> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| Complex64::new(a, b))).collect();
    let mut out = alloc::vec![Vec::new()];
    for _ in 0..m {
        out = out
            .iter()
            .flat_map(|v| {
                pts.iter().map(move |p| {
                    let mut w = v.clone();
                    w.push(*p);
                    w
                })
            })
            .collect();
    }
    out
}

/// Family of discs attached to `M` filling the side `{y > h}`, built in the
/// frame where the Levi form is diagonal with `λ₁ > 0` first. `ε` and `δ`
/// are halved (at most 20 times) until the third-order remainder is
/// dominated, every disc is attached and star-shaped, and the box `V⁺`
/// is covered.
pub fn build_disc_family(
    m: &GraphHypersurface,
    levi: &LeviData,
    eps: f64,
    delta: f64,
    counts: DiscCounts,
) -> Result<DiscFamily> {
    if !(eps > 0.0 && delta > 0.0 && eps.is_finite() && delta.is_finite()) {
        return Err(Error::Precondition(String::from("ε and δ must be positive")));
    }
    if counts.x == 0 || counts.y == 0 || counts.boundary < 3 || (m.dim() > 2 && counts.w == 0) {
        return Err(Error::Precondition(String::from("counts too small")));
    }
    if levi.lambda.len() != m.dim() - 1 {
        return Err(Error::DimensionMismatch { expected: m.dim() - 1, found: levi.lambda.len() });
    }
    let lambda1 = levi.lambda[0];
    if lambda1.is_nan() || lambda1 <= crate::tol::SYMBOLIC_ZERO {
        return Err(Error::NoPositiveEigenvalue);
    }
    let (mut eps, mut delta) = (eps, delta);
    let mut last = Error::Precondition(String::from("no admissible ε, δ"));
    for halvings in 0..=MAX_HALVINGS {
        match try_build(m, levi, eps, delta, counts) {
            Ok(mut fam) => {
                fam.halvings = halvings;
                return Ok(fam);
            }
            Err(e @ (Error::AttachmentFailure { .. } | Error::CoverageFailure { .. } | Error::Precondition(_))) => {
                last = e
            }
            Err(e) => return Err(e),
        }
        eps *= 0.5;
        delta *= 0.5;
    }
    Err(last)
}

fn try_build(m: &GraphHypersurface, levi: &LeviData, eps: f64, delta: f64, counts: DiscCounts) -> Result<DiscFamily> {
    let lambda1 = levi.lambda[0];
    let extra = m.dim() - 2;
    let r_zeta = 2.0 * (eps / lambda1).sqrt();
    let w_extent = (r_zeta * r_zeta + 2.0 * extra as f64 * delta * delta).sqrt();
    if w_extent > m.radius() || delta > m.radius() {
        return Err(Error::Precondition(String::from("family leaves the box of M")));
    }
    let third = m.third_derivative_bound(w_extent.max(delta));
    if third * (w_extent + delta) > 0.5 * lambda1 {
        return Err(Error::Precondition(String::from("third-order terms not dominated")));
    }
    let attachment_tol = if m.is_quadric() { 1e-6 * delta } else { 10.0 * third * delta.powi(3) };
    let ctx = Ctx { m, levi, r_zeta };

    let mut discs = Vec::new();
    let mut worst = (0, 0.0);
    for w_rest in complex_grid(extra, counts.w, -delta, delta) {
        for &x in &grid(counts.x, -delta, delta) {
            for k in 0..counts.y {
                let y = -eps + 2.0 * eps * (k + 1) as f64 / (counts.y + 1) as f64;
                if ctx.g(Complex64::new(0.0, 0.0), &w_rest, x, y) >= 0.0 {
                    continue;
                }
                let d = ctx.disc(&w_rest, x, y, counts.boundary);
                if d.attachment_defect > worst.1 || d.attachment_defect.is_infinite() {
                    worst = (discs.len(), d.attachment_defect);
                }
                discs.push(d);
            }
        }
    }
    if worst.1 > attachment_tol {
        return Err(Error::AttachmentFailure { disc: worst.0, defect: worst.1 });
    }
    if discs.is_empty() {
        return Err(Error::CoverageFailure { uncovered: 1, tested: 1 });
    }

    // V⁺ test points in the rotated frame
    let half = 0.5 * delta;
    let zetas: Vec<Complex64> = complex_grid(1, 5, -0.9 * half, 0.9 * half).into_iter().map(|v| v[0]).collect();
    let rests = complex_grid(extra, 3, -0.9 * half, 0.9 * half);
    let xs = grid(5, -0.9 * half, 0.9 * half);
    let mut hmax = f64::NEG_INFINITY;
    for w_rest in &rests {
        for &x in &xs {
            for &z in &zetas {
                hmax = hmax.max(ctx.g(z, w_rest, x, 0.0));
            }
        }
    }
    let c2 = 0.5 * (eps - hmax);
    if c2.is_nan() || c2 <= 0.0 {
        return Err(Error::CoverageFailure { uncovered: 1, tested: 1 });
    }
    let c1 = 0.25 * c2;
    let mut tested = 0;
    let mut uncovered = 0;
    for w_rest in &rests {
        for &x in &xs {
            for &z in &zetas {
                for s in [0.05, 0.5, 0.95] {
                    tested += 1;
                    let y = ctx.g(z, w_rest, x, 0.0) + c1 + s * (c2 - c1);
                    let covered = y.abs() < eps
                        && ctx.ray(z.arg(), w_rest, x, y).is_some_and(|r| {
                            z.norm() < r
                                && ctx.g(Complex64::from_polar(r, z.arg()), w_rest, x, y).abs() <= attachment_tol
                        });
                    if !covered {
                        uncovered += 1;
                    }
                }
            }
        }
    }
    if uncovered > 0 {
        return Err(Error::CoverageFailure { uncovered, tested });
    }
    Ok(DiscFamily {
        surface: m.clone(),
        levi: levi.clone(),
        eps,
        delta,
        halvings: 0,
        attachment_tol,
        third_bound: third,
        discs,
        c1,
        c2,
        coverage_tested: tested,
    })
}
