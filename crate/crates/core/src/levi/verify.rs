use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::discs::DiscFamily;
use super::surface::GraphHypersurface;
use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix};
use crate::modulus::{balk_decompose, BalkForm};
use crate::polycore::{CPoly, MWitness, MultiIndex, PolyAnalytic, RationalHolo};
use crate::tol;

/// Smallest admissible `|denominator|` on the sampled closure.
const SINGULAR_CLOSURE: f64 = 1e-6;
/// Largest `Q` degree tried by the trace fit.
const TRACE_FIT_DEGREE: usize = 4;
/// Relative singular value below which the trace fit has a kernel.
const TRACE_FIT_RANK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BmmpReport {
    pub discs: usize,
    pub max_interior: f64,
    pub max_boundary: f64,
    /// Largest per-disc `max(0, max_interior − max_boundary)`.
    pub defect: f64,
    /// Largest per-disc sampling bound `½·max adjacent Δ|f| + 1e-12·scale`.
    pub sampling_bound: f64,
    /// Every disc's defect is within its own sampling bound.
    pub within_bound: bool,
    /// Same check for `|1/f|` against the smallest boundary modulus, when
    /// `f` does not vanish on the samples.
    pub reciprocal_defect: Option<f64>,
    pub reciprocal_within_bound: Option<bool>,
    pub min_denominator: f64,
}

fn eval_all(f: &MWitness, pts: &[Vec<Complex64>], min_den: &mut f64) -> Result<Vec<f64>> {
    pts.iter()
        .map(|p| {
            *min_den = min_den.min(f.den_modulus(p));
            if *min_den < SINGULAR_CLOSURE {
                return Err(Error::SingularOnClosure { min_denominator: *min_den });
            }
            Ok(f.eval(p)?.norm())
        })
        .collect()
}

fn max_adjacent_step(v: &[f64]) -> f64 {
    (0..v.len()).map(|k| (v[(k + 1) % v.len()] - v[k]).abs()).fold(0.0, f64::max)
}

/// Samples `|f|` on every disc of the family (boundary and `levels` radial
/// rings of the interior) and compares interior and boundary maxima.
pub fn bmmp_verify(f: &MWitness, fam: &DiscFamily, levels: usize) -> Result<BmmpReport> {
    if f.dim() != fam.surface.dim() {
        return Err(Error::DimensionMismatch { expected: fam.surface.dim(), found: f.dim() });
    }
    let levels = levels.max(2);
    let mut min_den = f64::INFINITY;
    let mut rep = BmmpReport {
        discs: fam.discs.len(),
        max_interior: 0.0,
        max_boundary: 0.0,
        defect: 0.0,
        sampling_bound: 0.0,
        within_bound: true,
        reciprocal_defect: Some(0.0),
        reciprocal_within_bound: Some(true),
        min_denominator: f64::INFINITY,
    };
    for d in &fam.discs {
        let b = eval_all(f, &fam.boundary_points(d), &mut min_den)?;
        let i = eval_all(f, &fam.interior_points(d, levels), &mut min_den)?;
        let bmax = b.iter().copied().fold(0.0, f64::max);
        let imax = i.iter().copied().fold(0.0, f64::max);
        let scale = bmax.max(imax).max(1.0);
        let defect = (imax - bmax).max(0.0);
        let bound = 0.5 * max_adjacent_step(&b) + 1e-12 * scale;
        rep.max_interior = rep.max_interior.max(imax);
        rep.max_boundary = rep.max_boundary.max(bmax);
        rep.defect = rep.defect.max(defect);
        rep.sampling_bound = rep.sampling_bound.max(bound);
        rep.within_bound &= defect <= bound;

        let bmin = b.iter().copied().fold(f64::INFINITY, f64::min);
        let imin = i.iter().copied().fold(f64::INFINITY, f64::min);
        if bmin.min(imin) > 1e-12 * scale && rep.reciprocal_defect.is_some() {
            let rb: Vec<f64> = b.iter().map(|v| 1.0 / v).collect();
            let rdefect = (1.0 / imin - 1.0 / bmin).max(0.0);
            let rbound = 0.5 * max_adjacent_step(&rb) + 1e-12 * (1.0 / bmin.min(imin)).max(1.0);
            rep.reciprocal_defect = rep.reciprocal_defect.map(|r| r.max(rdefect));
            rep.reciprocal_within_bound = rep.reciprocal_within_bound.map(|ok| ok && rdefect <= rbound);
        } else {
            rep.reciprocal_defect = None;
            rep.reciprocal_within_bound = None;
        }
    }
    rep.min_denominator = min_den;
    Ok(rep)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVerdict {
    NonConstantTrace,
    BalkForm,
    NoBalkForm,
}

impl TraceVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceVerdict::NonConstantTrace => "non_constant_trace",
            TraceVerdict::BalkForm => "balk_form",
            TraceVerdict::NoBalkForm => "no_balk_form",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceReport {
    pub trace_mean: f64,
    pub trace_std: f64,
    pub samples: usize,
    pub verdict: TraceVerdict,
    /// Balk form fitted on a disc slice, in the slice variable scaled to
    /// the disc radius.
    pub balk: Option<BalkForm>,
    pub lambda_abs: Option<f64>,
    pub q_degree: Option<u32>,
    /// `max|f − λQ̄/Q|` over the slice samples.
    pub mismatch: Option<f64>,
}

/// Kernel of `f_k·Σ q_m t_k^m − Σ r_m t̄_k^m = 0` for the smallest degree
/// that has one, as `(q, r)`.
fn rational_fit(t: &[Complex64], v: &[Complex64]) -> Option<(Vec<Complex64>, Vec<Complex64>)> {
    for d in 0..=TRACE_FIT_DEGREE {
        let cols = 2 * (d + 1);
        if t.len() < cols + 2 {
            break;
        }
        let mut a = CMatrix::zeros(t.len(), cols);
        for (k, (&tk, &vk)) in t.iter().zip(v).enumerate() {
            let mut p = Complex64::new(1.0, 0.0);
            for m in 0..=d {
                a[(k, m)] = vk * p;
                a[(k, d + 1 + m)] = -p.conj();
                p *= tk;
            }
        }
        let s = svd(&a);
        let null = s.null_space(TRACE_FIT_RANK);
        if let Some(x) = null.first() {
            return Some((x[..=d].to_vec(), x[d + 1..].to_vec()));
        }
    }
    None
}

/// Modulus of `f` on the attached disc boundaries; when it is constant,
/// fits a Balk form `λ·Q̄/Q` to `f` on the widest disc of the family
/// (a complex line on the extension side) and checks it.
pub fn constant_modulus_trace(f: &MWitness, m: &GraphHypersurface, fam: &DiscFamily) -> Result<TraceReport> {
    if f.dim() != m.dim() || fam.surface.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: f.dim() });
    }
    let mut min_den = f64::INFINITY;
    let mut trace = Vec::new();
    for d in &fam.discs {
        trace.extend(eval_all(f, &fam.boundary_points(d), &mut min_den)?);
    }
    if trace.is_empty() {
        return Err(Error::CoverageFailure { uncovered: 1, tested: 1 });
    }
    let count = trace.len() as f64;
    let mean = trace.iter().sum::<f64>() / count;
    let std = (trace.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / count).sqrt();
    let mut rep = TraceReport {
        trace_mean: mean,
        trace_std: std,
        samples: trace.len(),
        verdict: TraceVerdict::NonConstantTrace,
        balk: None,
        lambda_abs: None,
        q_degree: None,
        mismatch: None,
    };
    if std > tol::TRACE_CONSTANT * mean.max(f64::MIN_POSITIVE) {
        return Ok(rep);
    }

    let widest = fam
        .discs
        .iter()
        .max_by(|a, b| a.radii.iter().sum::<f64>().total_cmp(&b.radii.iter().sum::<f64>()))
        .expect("nonempty family");
    let radius = widest.radii.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let pts = fam.interior_points(widest, 6);
    let t: Vec<Complex64> = fam.interior_zetas(widest, 6).iter().map(|z| z / radius).collect();
    let mut v = Vec::with_capacity(pts.len());
    for p in &pts {
        min_den = min_den.min(f.den_modulus(p));
        if min_den < SINGULAR_CLOSURE {
            return Err(Error::SingularOnClosure { min_denominator: min_den });
        }
        v.push(f.eval(p)?);
    }
    rep.verdict = TraceVerdict::NoBalkForm;
    let Some((q, r)) = rational_fit(&t, &v) else { return Ok(rep) };
    let qpoly = CPoly::univariate(&q);
    let coeffs: Vec<(MultiIndex, RationalHolo)> = r
        .iter()
        .enumerate()
        .map(|(j, rj)| {
            RationalHolo::new(CPoly::constant(1, *rj), qpoly.clone())
                .map(|a| (MultiIndex::new(alloc::vec![j as u32]), a))
        })
        .collect::<Result<_>>()?;
    let Ok(fit) = PolyAnalytic::new(MultiIndex::new(alloc::vec![r.len() as u32]), coeffs) else { return Ok(rep) };
    let Ok(form) = balk_decompose(&fit) else { return Ok(rep) };
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut mismatch: f64 = 0.0;
    for (tk, vk) in t.iter().zip(&v) {
        match form.eval(&[*tk]) {
            Ok(g) => mismatch = mismatch.max((g - vk).norm()),
            Err(_) => mismatch = f64::INFINITY,
        }
    }
    rep.mismatch = Some(mismatch);
    if mismatch <= tol::BALK_MATCH * scale {
        rep.verdict = TraceVerdict::BalkForm;
        rep.lambda_abs = Some(form.lambda.norm());
        rep.q_degree = Some(form.q.total_degree());
        rep.balk = Some(form);
    }
    Ok(rep)
}
