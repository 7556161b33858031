use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use super::dbar::{calibrate, dbar_steps, roundoff_floor};
use crate::error::{Error, Result};
use crate::harmonic::Lattice;
use crate::polycore::{MultiIndex, PolyAnalytic};

/// Product of one square lattice per variable, each masked to a closed disc.
/// Samples are stored row-major over the per-variable node lists, the last
/// variable fastest.
#[derive(Debug, Clone)]
pub struct Polydisc {
    lattices: Vec<Lattice>,
    masks: Vec<Vec<bool>>,
    nodes: Vec<Vec<usize>>,
    strides: Vec<usize>,
    len: usize,
}

impl Polydisc {
    /// `per_side × per_side` lattice over the bounding square of each disc.
    pub fn new(centers: &[Complex64], radii: &[f64], per_side: usize) -> Result<Self> {
        if centers.is_empty() || centers.len() != radii.len() {
            return Err(Error::DimensionMismatch { expected: centers.len(), found: radii.len() });
        }
        if per_side < 3 {
            return Err(Error::GridTooSmall);
        }
        if radii.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::InvalidArgument("radii must be positive".into()));
        }
        let mut lattices = Vec::new();
        let mut masks = Vec::new();
        let mut nodes = Vec::new();
        for (&c, &r) in centers.iter().zip(radii) {
            let h = 2.0 * r / (per_side - 1) as f64;
            let lat = Lattice::new(c.re - r, c.im - r, h, per_side, per_side);
            let mask: Vec<bool> = (0..lat.len()).map(|i| (lat.point_of(i) - c).norm() <= r * (1.0 + 1e-12)).collect();
            nodes.push((0..lat.len()).filter(|&i| mask[i]).collect::<Vec<_>>());
            lattices.push(lat);
            masks.push(mask);
        }
        let n = nodes.len();
        let mut strides = alloc::vec![1; n];
        for j in (0..n - 1).rev() {
            strides[j] = strides[j + 1] * nodes[j + 1].len();
        }
        let len = strides[0] * nodes[0].len();
        Ok(Polydisc { lattices, masks, nodes, strides, len })
    }

    pub fn dim(&self) -> usize {
        self.nodes.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn lattice(&self, j: usize) -> &Lattice {
        &self.lattices[j]
    }

    /// Number of sample points of variable `j`.
    pub fn count(&self, j: usize) -> usize {
        self.nodes[j].len()
    }

    /// The `k`-th sample point of variable `j`.
    pub fn point(&self, j: usize, k: usize) -> Complex64 {
        self.lattices[j].point_of(self.nodes[j][k])
    }

    /// Point of the flat sample index `idx`.
    pub fn point_at(&self, idx: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|j| self.point(j, (idx / self.strides[j]) % self.count(j))).collect()
    }
}

/// Samples of a function on a [`Polydisc`].
#[derive(Debug, Clone)]
pub struct PolyGrid {
    disc: Polydisc,
    values: Vec<Complex64>,
}

impl PolyGrid {
    pub fn from_values(disc: Polydisc, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != disc.len() {
            return Err(Error::DimensionMismatch { expected: disc.len(), found: values.len() });
        }
        if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidArgument("non-finite sample".into()));
        }
        Ok(PolyGrid { disc, values })
    }

    pub fn from_fn(disc: Polydisc, f: impl Fn(&[Complex64]) -> Complex64) -> Result<Self> {
        let values = (0..disc.len()).map(|i| f(&disc.point_at(i))).collect();
        Self::from_values(disc, values)
    }

    /// Samples `f`; polynomial coefficients are expanded into separable
    /// power tables, rational ones are evaluated pointwise.
    pub fn from_polyanalytic(disc: Polydisc, f: &PolyAnalytic) -> Result<Self> {
        if f.dim() != disc.dim() {
            return Err(Error::DimensionMismatch { expected: disc.dim(), found: f.dim() });
        }
        if !f.has_polynomial_coeffs() {
            let mut values = Vec::with_capacity(disc.len());
            for i in 0..disc.len() {
                values.push(f.eval(&disc.point_at(i))?);
            }
            return Self::from_values(disc, values);
        }
        let n = disc.dim();
        let mut terms = Vec::new();
        for (beta, a) in f.coeffs() {
            let d0 = a.den().coeff(&MultiIndex::zeros(n));
            for (gamma, c) in a.num().terms() {
                let exps = (0..n).map(|j| (gamma.get(j), beta.get(j))).collect();
                terms.push((c / d0, exps));
            }
        }
        let values = separable(&disc, &terms, 0);
        Self::from_values(disc, values)
    }

    pub fn disc(&self) -> &Polydisc {
        &self.disc
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

type Term = (Complex64, Vec<(u32, u32)>);

/// `Σ c·Π_{j ≥ var} z_j^p z̄_j^r` over the trailing variables.
fn separable(disc: &Polydisc, terms: &[Term], var: usize) -> Vec<Complex64> {
    if var == disc.dim() {
        return alloc::vec![terms.iter().map(|t| t.0).sum()];
    }
    let rest = if var + 1 < disc.dim() { disc.strides[var] } else { 1 };
    let count = disc.count(var);
    let mut groups: BTreeMap<(u32, u32), Vec<Term>> = BTreeMap::new();
    for t in terms {
        groups.entry(t.1[var]).or_default().push(t.clone());
    }
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); count * rest];
    for ((p, r), group) in groups {
        let sub = separable(disc, &group, var + 1);
        for k in 0..count {
            let z = disc.point(var, k);
            let a = z.powu(p) * z.conj().powu(r);
            for (o, s) in out[k * rest..(k + 1) * rest].iter_mut().zip(&sub) {
                *o += a * s;
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HartogsVerdict {
    JointlyPolyanalytic,
    Inconclusive,
}

impl HartogsVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            HartogsVerdict::JointlyPolyanalytic => "jointly-polyanalytic",
            HartogsVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone)]
pub struct HartogsReport {
    pub verdict: HartogsVerdict,
    /// Calibrated truncation constant of each variable's lattice.
    pub k: Vec<f64>,
    /// Largest `|(∂̄_j)^{α_j} f|` over all slices, per variable.
    pub slice_residuals: Vec<f64>,
    pub slice_bounds: Vec<f64>,
    /// Largest `|Π_j (∂̄_j)^{α_j} f|`.
    pub mixed_residual: f64,
    pub mixed_bound: f64,
}

/// Calls `visit(slice, base)` for each slice along variable `j`.
fn for_each_slice(disc: &Polydisc, j: usize, mut visit: impl FnMut(usize, usize)) {
    let stride = disc.strides[j];
    let block = stride * disc.count(j);
    let mut slice = 0;
    for outer in 0..disc.len() / block {
        for inner in 0..stride {
            visit(slice, outer * block + inner);
            slice += 1;
        }
    }
}

/// `(∂̄_j)^m` on the slice at `base`; returns the lattice values and mask.
fn slice_dbar(disc: &Polydisc, src: &[Complex64], j: usize, base: usize, m: u32) -> (Vec<Complex64>, Vec<bool>) {
    let lat = &disc.lattices[j];
    let mut buf = alloc::vec![Complex64::new(0.0, 0.0); lat.len()];
    for (k, &node) in disc.nodes[j].iter().enumerate() {
        buf[node] = src[base + k * disc.strides[j]];
    }
    dbar_steps(lat, &buf, &disc.masks[j], m)
}

/// Checks separate and joint `α`-analyticity on the grid. Each slice along
/// variable `j` must satisfy `|(∂̄_j)^{α_j} f| ≤ K_j h_j² max|f|` (plus a
/// roundoff floor); the first violation is returned as `SliceViolation`.
/// The mixed operator is then applied variable by variable.
pub fn hartogs_assemble(f: &PolyGrid, alpha: &MultiIndex) -> Result<HartogsReport> {
    let disc = &f.disc;
    let n = disc.dim();
    if alpha.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, found: alpha.dim() });
    }
    if alpha.entries().contains(&0) {
        return Err(Error::InvalidArgument("every α_j must be at least 1".into()));
    }
    let scale = f.max_abs();
    let k: Vec<f64> = (0..n).map(|j| calibrate(&disc.lattices[j], &disc.masks[j])).collect();
    let bounds: Vec<f64> = (0..n)
        .map(|j| {
            let h = disc.lattices[j].h;
            k[j] * h * h * scale + roundoff_floor(h, alpha.get(j), scale)
        })
        .collect();

    let mut slice_residuals = alloc::vec![0.0; n];
    for j in 0..n {
        let mut violation = None;
        for_each_slice(disc, j, |slice, base| {
            if violation.is_some() {
                return;
            }
            let (v, def) = slice_dbar(disc, &f.values, j, base, alpha.get(j));
            let r = v.iter().zip(&def).filter(|(_, &d)| d).map(|(z, _)| z.norm()).fold(0.0, f64::max);
            if !def.iter().any(|&d| d) {
                violation = Some(Err(Error::GridTooSmall));
            } else if r > bounds[j] {
                violation = Some(Err(Error::SliceViolation { variable: j, slice, residual: r }));
            }
            slice_residuals[j] = f64::max(slice_residuals[j], r);
        });
        if let Some(e) = violation {
            return e;
        }
    }

    let mut work = f.values.clone();
    let mut valid: Vec<Vec<bool>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut keep = alloc::vec![false; disc.count(j)];
        for_each_slice(disc, j, |_, base| {
            let (v, def) = slice_dbar(disc, &work, j, base, alpha.get(j));
            for (kk, &node) in disc.nodes[j].iter().enumerate() {
                work[base + kk * disc.strides[j]] = v[node];
                keep[kk] = def[node];
            }
        });
        valid.push(keep);
    }
    let mixed_residual = (0..disc.len())
        .filter(|&i| (0..n).all(|j| valid[j][(i / disc.strides[j]) % disc.count(j)]))
        .map(|i| work[i].norm())
        .fold(0.0, f64::max);
    let hpow: f64 = (0..n).map(|j| disc.lattices[j].h.powi(alpha.get(j) as i32)).product();
    let mixed_bound = bounds.iter().sum::<f64>() + 1e4 * f64::EPSILON * scale / hpow;
    let verdict =
        if mixed_residual <= mixed_bound { HartogsVerdict::JointlyPolyanalytic } else { HartogsVerdict::Inconclusive };
    Ok(HartogsReport { verdict, k, slice_residuals, slice_bounds: bounds, mixed_residual, mixed_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{CPoly, RationalHolo};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(per_side: usize) -> Polydisc {
        Polydisc::new(&[c(0.0, 0.0); 2], &[1.0, 1.0], per_side).unwrap()
    }

    #[test]
    fn polydisc_layout() {
        let d = unit(9);
        assert_eq!(d.len(), d.count(0) * d.count(1));
        // the disc inscribed in a 9×9 lattice with h = 1/4 has 49 nodes
        assert_eq!(d.count(0), 49);
        let p = d.point_at(d.count(1) + 2);
        assert_eq!(p, alloc::vec![d.point(0, 1), d.point(1, 2)]);
    }

    #[test]
    fn separable_sampling_matches_eval() {
        let z1 = RationalHolo::from_poly(CPoly::var(2, 0));
        let f = PolyAnalytic::term(MultiIndex::new(alloc::vec![1, 2]), z1)
            .add(&PolyAnalytic::constant(2, c(0.5, -1.0)))
            .unwrap();
        let d = unit(7);
        let g = PolyGrid::from_polyanalytic(d.clone(), &f).unwrap();
        let h = PolyGrid::from_fn(d, |z| f.eval(z).unwrap()).unwrap();
        for (a, b) in g.values().iter().zip(h.values()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn monomial_orders_are_joint() {
        // z̄₁ z₂ + z̄₂², α = (2, 3)
        let d = unit(24);
        let g = PolyGrid::from_fn(d, |z| z[0].conj() * z[1] + z[1].conj() * z[1].conj()).unwrap();
        let r = hartogs_assemble(&g, &MultiIndex::new(alloc::vec![2, 3])).unwrap();
        assert_eq!(r.verdict, HartogsVerdict::JointlyPolyanalytic);
    }

    #[test]
    fn order_too_low_is_a_slice_violation() {
        let d = unit(24);
        let g = PolyGrid::from_fn(d, |z| z[0].conj() * z[0].conj()).unwrap();
        match hartogs_assemble(&g, &MultiIndex::new(alloc::vec![2, 1])) {
            Err(Error::SliceViolation { variable: 0, residual, .. }) => assert!((residual - 2.0).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exponential_times_zbar() {
        let d = unit(24);
        let g = PolyGrid::from_fn(d, |z| z[0].exp() * z[1].conj()).unwrap();
        let r = hartogs_assemble(&g, &MultiIndex::new(alloc::vec![1, 2])).unwrap();
        assert_eq!(r.verdict, HartogsVerdict::JointlyPolyanalytic);
        assert!(r.slice_residuals[0] > 0.0 && r.slice_residuals[0] <= r.slice_bounds[0]);
    }

    #[test]
    fn bad_alpha() {
        let g = PolyGrid::from_fn(unit(5), |z| z[0]).unwrap();
        assert!(hartogs_assemble(&g, &MultiIndex::new(alloc::vec![1])).is_err());
        assert!(hartogs_assemble(&g, &MultiIndex::new(alloc::vec![0, 1])).is_err());
    }
}
