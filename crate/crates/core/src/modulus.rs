//! Constant-modulus detection and recovery of the form `f = λ·conj(Q)/Q`.
//!
//! Detection clears denominators: with `f = N/D`, where `N` is polyanalytic
//! with polynomial coefficients and `D` a holomorphic polynomial, `|f| ≡ C`
//! iff `N·N̄ − C²·D·D̄` vanishes identically as a polynomial in `(z, z̄)`.
//!
//! Recovery solves, for the unknown coefficients of `Q` and `p_β = λ·conj(q_β)`,
//! the linear identities `num_β·Q − p_β·den_β ≡ 0` (one per z̄-power β); the
//! conjugation relation then fixes `λ`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix};
use crate::polycore::{CPoly, MultiIndex, PolyAnalytic, RationalHolo};
use crate::tol;

/// `λ·conj(Q(z))/Q(z)` with `Q` monic under graded-lex order.
#[derive(Debug, Clone, PartialEq)]
pub struct BalkForm {
    pub lambda: Complex64,
    pub q: CPoly,
}

impl BalkForm {
    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let qz = self.q.eval(z);
        if qz.norm() < tol::EVAL_SINGULAR {
            return Err(Error::SingularPoint);
        }
        Ok(self.lambda * qz.conj() / qz)
    }

    /// Exact polyanalytic representation with coefficients `λ·conj(q_β)/Q`.
    pub fn to_polyanalytic(&self) -> PolyAnalytic {
        let n = self.dim();
        let order = MultiIndex::new((0..n).map(|j| self.q.degree_in(j) + 1).collect());
        let coeffs: Vec<(MultiIndex, RationalHolo)> = self
            .q
            .terms()
            .map(|(m, c)| {
                let num = CPoly::constant(n, self.lambda * c.conj());
                (m.clone(), RationalHolo::new(num, self.q.clone()).expect("Q is nonzero"))
            })
            .collect();
        PolyAnalytic::new(order, coeffs).expect("powers below order")
    }

    /// Zeros of a univariate `Q` inside the box `[lo.re, hi.re] × [lo.im, hi.im]`.
    /// They are reported, not interpreted.
    pub fn zeros_in_box(&self, lo: Complex64, hi: Complex64) -> Vec<Complex64> {
        if self.dim() != 1 {
            return Vec::new();
        }
        let deg = self.q.degree_in(0) as usize;
        let coeffs: Vec<Complex64> = (0..=deg).map(|k| self.q.coeff(&MultiIndex::new(alloc::vec![k as u32]))).collect();
        univariate_roots(&coeffs)
            .into_iter()
            .filter(|r| r.re >= lo.re && r.re <= hi.re && r.im >= lo.im && r.im <= hi.im)
            .collect()
    }
}

/// Durand–Kerner iteration for the roots of `Σ c_k z^k`.
fn univariate_roots(c: &[Complex64]) -> Vec<Complex64> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let eval = |z: Complex64| monic.iter().rev().fold(Complex64::zero(), |acc, &k| acc * z + k);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    den *= roots[i] - roots[j];
                }
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// Polynomial in `(z, z̄)`: keys are (z-powers, z̄-powers).
type BiPoly = BTreeMap<(MultiIndex, MultiIndex), Complex64>;

fn bipoly_from(f_terms: &[(MultiIndex, CPoly)]) -> BiPoly {
    let mut out = BiPoly::new();
    for (beta, p) in f_terms {
        for (m, c) in p.terms() {
            *out.entry((m.clone(), beta.clone())).or_insert_with(Complex64::zero) += c;
        }
    }
    out
}

fn bipoly_conj(p: &BiPoly) -> BiPoly {
    p.iter().map(|((a, b), c)| ((b.clone(), a.clone()), c.conj())).collect()
}

fn bipoly_mul(p: &BiPoly, q: &BiPoly) -> BiPoly {
    let mut out = BiPoly::new();
    for ((a1, b1), c1) in p {
        for ((a2, b2), c2) in q {
            *out.entry((a1.add(a2), b1.add(b2))).or_insert_with(Complex64::zero) += c1 * c2;
        }
    }
    out
}

fn bipoly_max(p: &BiPoly) -> f64 {
    p.values().map(|c| c.norm()).fold(0.0, f64::max)
}

/// `|f|²` as a polyanalytic function (`conj(f)·f`).
pub fn modulus_squared(f: &PolyAnalytic) -> Result<PolyAnalytic> {
    f.conj_mul(f)
}

/// Clears denominators: returns `(N terms, D)` with `f = N/D`.
fn clear_denominators(f: &PolyAnalytic) -> (Vec<(MultiIndex, CPoly)>, CPoly) {
    let n = f.dim();
    let mut dens: Vec<CPoly> = Vec::new();
    for (_, a) in f.coeffs() {
        if !a.is_polynomial() && !dens.iter().any(|d| d == a.den()) {
            dens.push(a.den().clone());
        }
    }
    let mut common = CPoly::one(n);
    for d in &dens {
        common = common.mul(d);
    }
    let terms = f
        .coeffs()
        .map(|(beta, a)| {
            let mut num = a.num().clone();
            if a.is_polynomial() {
                let c0 = a.den().coeff(&MultiIndex::zeros(n));
                num = num.scale(c0.inv()).mul(&common);
            } else {
                for d in dens.iter().filter(|d| *d != a.den()) {
                    num = num.mul(d);
                }
            }
            (beta.clone(), num)
        })
        .collect();
    (terms, common)
}

/// Decides whether `|f|` is constant off the singular set and returns the
/// constant. `tol` bounds the relative size of `N·N̄ − C²·D·D̄`.
pub fn is_constant_modulus(f: &PolyAnalytic, tol: f64) -> Result<Option<f64>> {
    if f.is_zero() {
        return Ok(Some(0.0));
    }
    let n = f.dim();
    let (nterms, den) = clear_denominators(f);
    if den.is_zero() {
        return Err(Error::SingularEverywhere);
    }
    let nb = bipoly_from(&nterms);
    let db = bipoly_from(&[(MultiIndex::zeros(n), den)]);
    let nn = bipoly_mul(&nb, &bipoly_conj(&nb));
    let dd = bipoly_mul(&db, &bipoly_conj(&db));

    // C² by least squares over coefficients; exact when |f| is constant.
    let mut num = 0.0;
    let mut norm = 0.0;
    for (k, c) in &dd {
        norm += c.norm_sqr();
        if let Some(v) = nn.get(k) {
            num += (v * c.conj()).re;
        }
    }
    if norm == 0.0 {
        return Err(Error::SingularEverywhere);
    }
    let c2 = num / norm;
    if c2 <= 0.0 {
        return Ok(None);
    }
    let mut resid = nn.clone();
    for (k, c) in &dd {
        *resid.entry(k.clone()).or_insert_with(Complex64::zero) -= c * c2;
    }
    let scale = bipoly_max(&nn).max(c2 * bipoly_max(&dd));
    if bipoly_max(&resid) <= tol * scale {
        Ok(Some(c2.sqrt()))
    } else {
        Ok(None)
    }
}

/// Recovers `(λ, Q)` with `f = λ·conj(Q)/Q`, `Q` monic and `deg_{z_j} Q < α_j`.
pub fn balk_decompose(f: &PolyAnalytic) -> Result<BalkForm> {
    let n = f.dim();
    if f.is_zero() {
        return Ok(BalkForm { lambda: Complex64::zero(), q: CPoly::one(n) });
    }
    let alpha = f.exact_order();
    let qidx = MultiIndex::box_below(&alpha);
    let nq = qidx.len();
    let betas = qidx.clone();
    let ncols = 2 * nq;

    // One block of rows per β: coefficients of num_β·Q − p_β·den_β.
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let zero = RationalHolo::zero(n);
    for (bi, beta) in betas.iter().enumerate() {
        let a = f.coeff(beta).unwrap_or(&zero);
        let mut block: BTreeMap<MultiIndex, Vec<Complex64>> = BTreeMap::new();
        for (gi, gamma) in qidx.iter().enumerate() {
            for (m, c) in a.num().terms() {
                let row = block.entry(m.add(gamma)).or_insert_with(|| alloc::vec![Complex64::zero(); ncols]);
                row[gi] += c;
            }
        }
        for (m, c) in a.den().terms() {
            let row = block.entry(m.clone()).or_insert_with(|| alloc::vec![Complex64::zero(); ncols]);
            row[nq + bi] -= c;
        }
        rows.extend(block.into_values());
    }
    let mut mat = CMatrix::zeros(rows.len(), ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            mat[(r, c)] = *v;
        }
    }
    let dec = svd(&mat);
    let mut kernel = dec.null_space(1e-9);
    if kernel.is_empty() {
        return Err(Error::NoSolution);
    }
    let v = reduce_kernel(&mut kernel, nq);

    // Monic normalization at the graded-lex leading coefficient of Q.
    let qmax = v[..nq].iter().map(|x| x.norm()).fold(0.0, f64::max);
    if qmax == 0.0 {
        return Err(Error::NoSolution);
    }
    let lead_pos = (0..nq).rev().find(|&i| v[i].norm() > 1e-10 * qmax).ok_or(Error::NoSolution)?;
    let lead = v[lead_pos];
    let q: Vec<Complex64> = v[..nq].iter().map(|x| x / lead).collect();
    let p: Vec<Complex64> = v[nq..].iter().map(|x| x / lead).collect();

    let qq: f64 = q.iter().map(|x| x.norm_sqr()).sum();
    let lambda: Complex64 = p.iter().zip(&q).map(|(pi, qi)| pi * qi).sum::<Complex64>() / qq;
    let mismatch = p.iter().zip(&q).map(|(pi, qi)| (pi - lambda * qi.conj()).norm()).fold(0.0, f64::max);
    let pscale = p.iter().map(|x| x.norm()).fold(0.0, f64::max).max(lambda.norm());
    if mismatch > 1e-7 * pscale.max(1e-300) {
        return Err(Error::NoSolution);
    }
    let qpoly = CPoly::from_terms(n, qidx.into_iter().zip(q).filter(|(_, c)| c.norm() > 1e-13));
    Ok(BalkForm { lambda, q: qpoly })
}

/// Picks, from a kernel basis, the vector whose `Q`-part has the smallest
/// graded-lex leading monomial (coordinates `0..nq` are in increasing
/// graded-lex order).
fn reduce_kernel(kernel: &mut Vec<Vec<Complex64>>, nq: usize) -> Vec<Complex64> {
    let mut coord = nq;
    while kernel.len() > 1 && coord > 0 {
        coord -= 1;
        let scale = kernel.iter().flat_map(|v| v[..nq].iter()).map(|x| x.norm()).fold(0.0, f64::max);
        let (pi, pv) = kernel.iter().enumerate().map(|(i, v)| (i, v[coord].norm())).fold((0, 0.0), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        });
        if pv <= 1e-10 * scale {
            continue;
        }
        let pivot = kernel.remove(pi);
        for v in kernel.iter_mut() {
            let r = v[coord] / pivot[coord];
            for (x, y) in v.iter_mut().zip(&pivot) {
                *x -= r * y;
            }
            v[coord] = Complex64::zero();
        }
    }
    kernel.swap_remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn zbar_minus_one_over_z_minus_one(scale: Complex64) -> PolyAnalytic {
        let q = CPoly::var(1, 0).sub(&CPoly::one(1));
        BalkForm { lambda: scale, q }.to_polyanalytic()
    }

    #[test]
    fn modulus_squared_examples() {
        let zb = PolyAnalytic::zbar(1, 0);
        let want = PolyAnalytic::term(MultiIndex::new(vec![1]), RationalHolo::from_poly(CPoly::var(1, 0)));
        assert!(modulus_squared(&zb).unwrap().symbolic_eq(&want));
        let k = PolyAnalytic::constant(1, c(3.0, 4.0));
        assert!(modulus_squared(&k).unwrap().symbolic_eq(&PolyAnalytic::constant(1, c(25.0, 0.0))));
        let f = PolyAnalytic::constant(1, c(1.0, 0.0))
            .sub(&PolyAnalytic::term(MultiIndex::new(vec![1]), RationalHolo::from_poly(CPoly::var(1, 0))))
            .unwrap();
        let sq = modulus_squared(&f).unwrap();
        assert!(sq.symbolic_eq(&f.mul(&f).unwrap()));
    }

    #[test]
    fn constant_modulus_examples() {
        let f = zbar_minus_one_over_z_minus_one(c(1.0, 0.0));
        let cm = is_constant_modulus(&f, tol::CONSTANT_MODULUS).unwrap().unwrap();
        assert!((cm - 1.0).abs() < 1e-12);
        let g = zbar_minus_one_over_z_minus_one(c(0.0, 2.0));
        assert!((is_constant_modulus(&g, tol::CONSTANT_MODULUS).unwrap().unwrap() - 2.0).abs() < 1e-12);
        let h = PolyAnalytic::constant(1, c(1.0, 0.0))
            .sub(&PolyAnalytic::term(MultiIndex::new(vec![1]), RationalHolo::from_poly(CPoly::var(1, 0))))
            .unwrap();
        assert_eq!(is_constant_modulus(&h, tol::CONSTANT_MODULUS).unwrap(), None);
        assert_eq!(is_constant_modulus(&PolyAnalytic::zero(1), 1e-10).unwrap(), Some(0.0));
    }

    #[test]
    fn balk_examples() {
        let f = zbar_minus_one_over_z_minus_one(c(1.0, 0.0));
        let b = balk_decompose(&f).unwrap();
        assert!((b.lambda - c(1.0, 0.0)).norm() < 1e-12);
        assert!(b.q.distance(&CPoly::var(1, 0).sub(&CPoly::one(1))) < 1e-12);

        // z̄1 z̄2 / (z1 z2)
        let q2 = CPoly::monomial(2, MultiIndex::new(vec![1, 1]), c(1.0, 0.0));
        let g = PolyAnalytic::term(MultiIndex::new(vec![1, 1]), RationalHolo::new(CPoly::one(2), q2.clone()).unwrap())
            .with_order(MultiIndex::new(vec![2, 2]))
            .unwrap();
        let b = balk_decompose(&g).unwrap();
        assert!((b.lambda - c(1.0, 0.0)).norm() < 1e-12);
        assert!(b.q.distance(&q2) < 1e-12);

        let k = PolyAnalytic::constant(1, c(0.6, -0.8)).with_order(MultiIndex::new(vec![3])).unwrap();
        let b = balk_decompose(&k).unwrap();
        assert!((b.lambda - c(0.6, -0.8)).norm() < 1e-12);
        assert_eq!(b.q.total_degree(), 0);

        let z = balk_decompose(&PolyAnalytic::zero(1)).unwrap();
        assert_eq!(z.lambda, c(0.0, 0.0));
    }

    #[test]
    fn non_balk_has_no_solution() {
        let f = PolyAnalytic::constant(1, c(1.0, 0.0))
            .sub(&PolyAnalytic::term(MultiIndex::new(vec![1]), RationalHolo::from_poly(CPoly::var(1, 0))))
            .unwrap();
        assert_eq!(balk_decompose(&f), Err(Error::NoSolution));
    }

    #[test]
    fn zeros_reported_in_box() {
        let q = CPoly::var(1, 0).sub(&CPoly::constant(1, c(0.5, 0.25)));
        let b = BalkForm { lambda: c(1.0, 0.0), q };
        let zs = b.zeros_in_box(c(-1.0, -1.0), c(1.0, 1.0));
        assert_eq!(zs.len(), 1);
        assert!((zs[0] - c(0.5, 0.25)).norm() < 1e-12);
        assert!(b.zeros_in_box(c(2.0, 2.0), c(3.0, 3.0)).is_empty());
    }
}
