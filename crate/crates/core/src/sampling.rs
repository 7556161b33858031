//! Condensation geometry of finite point sets, polyanalytic least squares
//! and the finite-sample uniqueness test.
//!
//! Limiting directions are discretized by shells: with `R = max|z_k − p|`,
//! shell `s` holds the points with `R/2^{s+1} < |z_k − p| ≤ R/2^s`. A line
//! direction survives when every one of the first `shells` shells has a
//! point whose line angle lies within the angular resolution of it.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{lstsq, CMatrix};
use crate::polycore::{CPoly, MultiIndex, PolyAnalytic, RationalHolo};
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    base: Complex64,
    points: Vec<Complex64>,
    values: Option<Vec<Complex64>>,
}

impl PointSet {
    pub fn new(base: Complex64, points: Vec<Complex64>, values: Option<Vec<Complex64>>) -> Result<Self> {
        if points.contains(&base) {
            return Err(Error::InvalidArgument("sample coincides with the base point".into()));
        }
        if let Some(v) = &values {
            if v.len() != points.len() {
                return Err(Error::DimensionMismatch { expected: points.len(), found: v.len() });
            }
        }
        Ok(PointSet { base, points, values })
    }

    pub fn base(&self) -> Complex64 {
        self.base
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn values(&self) -> Option<&[Complex64]> {
        self.values.as_deref()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Rotates points and base point about the origin by `e^{iφ}`.
    pub fn rotated(&self, phi: f64) -> PointSet {
        let r = Complex64::from_polar(1.0, phi);
        PointSet {
            base: self.base * r,
            points: self.points.iter().map(|z| z * r).collect(),
            values: self.values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Line angle in `[0, π)`.
    pub angle: f64,
    /// Points of the examined shells within the resolution of `angle`.
    pub count: usize,
    /// Smallest `|z_k − p|` among those points.
    pub min_radius: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionReport {
    pub clusters: Vec<Cluster>,
    /// Point counts of the examined shells, outermost first.
    pub shell_counts: Vec<usize>,
}

impl DirectionReport {
    pub fn angles(&self) -> Vec<f64> {
        self.clusters.iter().map(|c| c.angle).collect()
    }

    pub fn order(&self) -> usize {
        self.clusters.len()
    }
}

/// `x` reduced to `[0, π)`.
fn wrap_pi(x: f64) -> f64 {
    num_traits::Euclid::rem_euclid(&x, &PI)
}

/// Line angle of `w` in `[0, π)`.
fn line_angle(w: Complex64) -> f64 {
    let a = wrap_pi(w.arg());
    if a >= PI {
        0.0
    } else {
        a
    }
}

/// Distance between two line angles (mod π).
fn line_distance(a: f64, b: f64) -> f64 {
    let d = wrap_pi(a - b);
    d.min(PI - d)
}

/// Sorted disjoint closed intervals in `[0, π]`.
type ArcSet = Vec<(f64, f64)>;

fn arcs_around(angles: &[f64], res: f64) -> ArcSet {
    let mut raw: Vec<(f64, f64)> = Vec::with_capacity(2 * angles.len());
    for &a in angles {
        let (lo, hi) = (a - res, a + res);
        if lo < 0.0 {
            raw.push((0.0, hi));
            raw.push((lo + PI, PI));
        } else if hi > PI {
            raw.push((lo, PI));
            raw.push((0.0, hi - PI));
        } else {
            raw.push((lo, hi));
        }
    }
    raw.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: ArcSet = Vec::new();
    for (lo, hi) in raw {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

fn intersect(a: &ArcSet, b: &ArcSet) -> ArcSet {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = a[i].0.max(b[j].0);
        let hi = a[i].1.min(b[j].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Reported directions of the admissible set: each connected component on
/// the circle `ℝ/πℤ` of length `L` contributes `max(1, ⌊L/(2·res)⌋)`
/// evenly spaced angles, so a single line yields one angle and an arc of
/// directions yields one angle per `2·res` window.
fn component_directions(set: &ArcSet, res: f64) -> Vec<f64> {
    if set.is_empty() {
        return Vec::new();
    }
    let mut comps: Vec<(f64, f64)> = set.clone();
    let wraps = comps.len() > 1 && comps[0].0 <= 0.0 && comps[comps.len() - 1].1 >= PI;
    if wraps {
        let last = comps.pop().unwrap();
        comps[0] = (last.0 - PI, comps[0].1);
    }
    let mut out = Vec::new();
    for &(lo, hi) in &comps {
        let len = hi - lo;
        if len >= PI {
            let k = ((PI / (2.0 * res)).floor() as usize).max(1);
            out.extend((0..k).map(|i| i as f64 * PI / k as f64));
            continue;
        }
        let k = (((len / (2.0 * res)) + 1e-9).floor() as usize).max(1);
        let step = len / k as f64;
        out.extend((0..k).map(|i| wrap_pi(lo + (i as f64 + 0.5) * step)));
    }
    out
}

/// Limiting line directions of `E` at its base point.
pub fn limiting_directions(e: &PointSet, shells: usize, angular_resolution: f64) -> Result<DirectionReport> {
    if !(angular_resolution > 0.0 && angular_resolution <= PI / 8.0) {
        return Err(Error::InvalidArgument("angular resolution must lie in (0, π/8]".into()));
    }
    if shells == 0 {
        return Err(Error::InvalidArgument("at least one shell is required".into()));
    }
    let needed = 2 * shells;
    if e.len() < needed {
        return Err(Error::InsufficientSamples { needed, found: e.len() });
    }
    let rel: Vec<(f64, f64)> = e
        .points
        .iter()
        .map(|z| {
            let w = z - e.base;
            (w.norm(), line_angle(w))
        })
        .collect();
    let r_max = rel.iter().map(|r| r.0).fold(0.0, f64::max);

    let mut shell_angles: Vec<Vec<(f64, f64)>> = alloc::vec![Vec::new(); shells];
    for &(r, a) in &rel {
        // shell index s with R/2^{s+1} < r ≤ R/2^s
        let mut s = 0;
        let mut upper = r_max;
        while s < shells && r <= 0.5 * upper {
            upper *= 0.5;
            s += 1;
        }
        if s < shells {
            shell_angles[s].push((r, a));
        }
    }
    let shell_counts: Vec<usize> = shell_angles.iter().map(|s| s.len()).collect();
    if let Some(empty) = shell_counts.iter().position(|&c| c == 0) {
        let populated = empty;
        return Err(Error::InsufficientSamples { needed: shells, found: populated });
    }

    let mut admissible: ArcSet = alloc::vec![(0.0, PI)];
    for shell in &shell_angles {
        let angles: Vec<f64> = shell.iter().map(|p| p.1).collect();
        admissible = intersect(&admissible, &arcs_around(&angles, angular_resolution));
        if admissible.is_empty() {
            break;
        }
    }

    let mut centers = component_directions(&admissible, angular_resolution);
    centers.sort_by(f64::total_cmp);
    // merge clusters closer than the resolution (conservative order)
    let mut merged: Vec<Vec<f64>> = Vec::new();
    for c in centers {
        match merged.last_mut() {
            Some(group) if line_distance(*group.last().unwrap(), c) <= angular_resolution => group.push(c),
            _ => merged.push(alloc::vec![c]),
        }
    }
    if merged.len() > 1 {
        let first = merged[0][0];
        let last = *merged.last().unwrap().last().unwrap();
        if line_distance(first, last) <= angular_resolution {
            let tail = merged.pop().unwrap();
            merged[0].splice(0..0, tail.into_iter().map(|a| a - PI));
        }
    }

    let clusters = merged
        .into_iter()
        .map(|group| {
            let angle = wrap_pi(group.iter().sum::<f64>() / group.len() as f64);
            let members = shell_angles.iter().flatten().filter(|p| line_distance(p.1, angle) <= angular_resolution);
            let (count, min_radius) = members.fold((0, f64::INFINITY), |(n, m), p| (n + 1, m.min(p.0)));
            Cluster { angle, count, min_radius }
        })
        .collect();
    Ok(DirectionReport { clusters, shell_counts })
}

/// Whether `E` has a condensation point of order at least `q` at its base
/// point, under the default shell parameters.
pub fn condensation_order(e: &PointSet, q: usize) -> Result<bool> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let rep = limiting_directions(e, tol::SHELLS, tol::ANGULAR_RESOLUTION)?;
    Ok(rep.order() >= q)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    pub function: PolyAnalytic,
    /// `‖Ax − b‖ / ‖b‖` (absolute when `b = 0`).
    pub residual: f64,
    /// 2-norm condition number of the design matrix.
    pub condition: f64,
}

/// Least-squares fit of `Σ_{j<q} a_j(z) z̄^j` with `deg a_j ≤ d`.
pub fn fit_polyanalytic(samples: &PointSet, q: u32, d: u32) -> Result<Fit> {
    let values = samples.values().ok_or_else(|| Error::Precondition("samples carry no values".into()))?;
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let unknowns = (q * (d + 1)) as usize;
    if samples.len() < unknowns {
        return Err(Error::InsufficientSamples { needed: unknowns, found: samples.len() });
    }
    let mut a = CMatrix::zeros(samples.len(), unknowns);
    for (r, z) in samples.points().iter().enumerate() {
        let zb = z.conj();
        let mut zbj = Complex64::new(1.0, 0.0);
        for j in 0..q {
            let mut zm = Complex64::new(1.0, 0.0);
            for m in 0..=d {
                a[(r, (j * (d + 1) + m) as usize)] = zm * zbj;
                zm *= z;
            }
            zbj *= zb;
        }
    }
    let (x, dec) = lstsq(&a, values);
    let rank = dec.rank(tol::RANK);
    if rank < unknowns {
        return Err(Error::RankDeficient { rank, unknowns, condition: f64::INFINITY });
    }
    let fitted = a.mul_vec(&x);
    let err: f64 = fitted.iter().zip(values).map(|(u, v)| (u - v).norm_sqr()).sum::<f64>().sqrt();
    let bn: f64 = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let residual = if bn > 0.0 { err / bn } else { err };

    let coeffs = (0..q).map(|j| {
        let poly = CPoly::univariate(&x[(j * (d + 1)) as usize..((j + 1) * (d + 1)) as usize]);
        (MultiIndex::new(alloc::vec![j]), RationalHolo::from_poly(poly))
    });
    let function = PolyAnalytic::new(MultiIndex::new(alloc::vec![q]), coeffs)?;
    Ok(Fit { function, residual, condition: dec.condition() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Inconclusive,
    Distinct,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Distinct => "distinct",
        }
    }
}

/// Decides `f ≡ g` from agreement on `E` plus condensation of order `q`.
/// Points where either function is singular are skipped.
pub fn uniqueness_test(f: &PolyAnalytic, g: &PolyAnalytic, e: &PointSet, q: usize) -> Verdict {
    let mut scale: f64 = 1.0;
    let mut diff: f64 = 0.0;
    for z in e.points() {
        let (Ok(fz), Ok(gz)) = (f.eval(&[*z]), g.eval(&[*z])) else { continue };
        scale = scale.max(fz.norm()).max(gz.norm());
        diff = diff.max((fz - gz).norm());
    }
    if diff >= tol::AGREEMENT * scale {
        return Verdict::Distinct;
    }
    let condensed = condensation_order(e, q).unwrap_or(false);
    if condensed && f.symbolic_eq(g) {
        Verdict::Equal
    } else {
        Verdict::Inconclusive
    }
}

/// Points `r·e^{iθ}` with `r = 2^{−m}`, `m = 0..levels`, on each line,
/// taking both rays.
pub fn lines_through(base: Complex64, angles: &[f64], levels: u32) -> PointSet {
    let mut pts = Vec::new();
    for &theta in angles {
        let dir = Complex64::from_polar(1.0, theta);
        for m in 0..levels {
            let r = 0.5f64.powi(m as i32);
            pts.push(base + dir * r);
            pts.push(base - dir * (0.75 * r));
        }
    }
    PointSet { base, points: pts, values: None }
}
