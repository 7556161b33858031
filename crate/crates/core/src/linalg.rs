//! Small dense complex linear algebra: one-sided Jacobi SVD, Hermitian
//! Jacobi eigensolver and a banded LU for the Dirichlet systems.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;
use num_traits::Zero;

use crate::tol;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        CMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut t = CMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].conj();
            }
        }
        t
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum()).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

/// Thin singular value decomposition `A = U·diag(s)·Vᴴ`, singular values in
/// descending order.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `m × n`; columns belonging to zero singular values are zero.
    pub u: CMatrix,
    pub s: Vec<f64>,
    /// `n × n` unitary.
    pub v: CMatrix,
}

/// One-sided (Hestenes) Jacobi SVD. Accurate for the small, possibly
/// ill-conditioned systems used throughout the crate.
pub fn svd(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows, a.cols);
    // Column-major working copies.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|c| a.column(c)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|c| {
            let mut e = vec![Complex64::zero(); n];
            e[c] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = f64::EPSILON;
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = cols[p].iter().zip(&cols[q]).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // q-column is rotated into phase with p before the real rotation.
                let rot = |x: &mut Vec<Vec<Complex64>>| {
                    let (lo, hi) = x.split_at_mut(q);
                    for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let yq = *xq * phase.conj();
                        let np = *xp * c - yq * s;
                        let nq = *xp * s + yq * c;
                        *xp = np;
                        *xq = nq;
                    }
                };
                rot(&mut cols);
                rot(&mut v);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(core::cmp::Ordering::Equal));

    let mut u = CMatrix::zeros(m, n);
    let mut vm = CMatrix::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &i) in order.iter().enumerate() {
        let sigma = norms[i];
        s.push(sigma);
        if sigma > 0.0 {
            for r in 0..m {
                u[(r, k)] = cols[i][r] / sigma;
            }
        }
        for r in 0..n {
            vm[(r, k)] = v[i][r];
        }
    }
    Svd { u, s, v: vm }
}

impl Svd {
    fn cutoff(&self, rel: f64) -> f64 {
        self.s.first().copied().unwrap_or(0.0) * rel
    }

    /// Number of singular values above `rel·σ_max`.
    pub fn rank(&self, rel: f64) -> usize {
        let cut = self.cutoff(rel);
        self.s.iter().filter(|&&x| x > cut).count()
    }

    /// 2-norm condition number `σ_max/σ_min` (infinite if `σ_min = 0`).
    pub fn condition(&self) -> f64 {
        match (self.s.first(), self.s.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            (Some(_), Some(_)) => f64::INFINITY,
            _ => 1.0,
        }
    }

    /// Orthonormal basis of the numerical null space.
    pub fn null_space(&self, rel: f64) -> Vec<Vec<Complex64>> {
        let cut = self.cutoff(rel);
        (0..self.s.len()).filter(|&k| self.s[k] <= cut).map(|k| self.v.column(k)).collect()
    }

    /// Minimum-norm least-squares solution with singular values below
    /// `rel·σ_max` truncated.
    pub fn solve(&self, b: &[Complex64], rel: f64) -> Vec<Complex64> {
        let n = self.v.rows();
        let cut = self.cutoff(rel);
        let mut x = vec![Complex64::zero(); n];
        for k in 0..self.s.len() {
            if self.s[k] <= cut || self.s[k] == 0.0 {
                continue;
            }
            let coef: Complex64 =
                (0..self.u.rows()).map(|r| self.u[(r, k)].conj() * b[r]).sum::<Complex64>() / self.s[k];
            for (r, xr) in x.iter_mut().enumerate() {
                *xr += self.v[(r, k)] * coef;
            }
        }
        x
    }
}

/// Least squares `min ‖A x − b‖` via SVD. Returns `(x, svd)`.
pub fn lstsq(a: &CMatrix, b: &[Complex64]) -> (Vec<Complex64>, Svd) {
    let d = svd(a);
    let x = d.solve(b, tol::RANK);
    (x, d)
}

/// Real least squares `min ‖A x − b‖` by Householder QR, `A` row-major
/// `m × n` with `m ≥ n`. Columns whose reflected diagonal falls below
/// `rel·max|R_kk|` get a zero coefficient.
pub fn real_lstsq(a: &[f64], m: usize, n: usize, b: &[f64], rel: f64) -> Vec<f64> {
    assert_eq!(a.len(), m * n);
    assert_eq!(b.len(), m);
    assert!(m >= n);
    // column-major copy for cache-friendly reflections
    let mut q: Vec<Vec<f64>> = (0..n).map(|c| (0..m).map(|r| a[r * n + c]).collect()).collect();
    let mut rhs = b.to_vec();
    let mut diag = alloc::vec![0.0; n];
    for k in 0..n {
        let norm = q[k][k..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if q[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = q[k][k..].to_vec();
        v[0] -= alpha;
        let vn = v.iter().map(|x| x * x).sum::<f64>();
        diag[k] = alpha;
        if vn == 0.0 {
            continue;
        }
        for col in q.iter_mut().skip(k) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vn;
            for (c, vi) in col[k..].iter_mut().zip(&v) {
                *c -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&rhs[k..]).map(|(x, y)| x * y).sum();
        let f = 2.0 * dot / vn;
        for (c, vi) in rhs[k..].iter_mut().zip(&v) {
            *c -= f * vi;
        }
    }
    let dmax = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let mut x = alloc::vec![0.0; n];
    for k in (0..n).rev() {
        if diag[k].abs() <= rel * dmax || dmax == 0.0 {
            continue;
        }
        let mut acc = rhs[k];
        for j in k + 1..n {
            acc -= q[j][k] * x[j];
        }
        x[k] = acc / q[k][k];
    }
    x
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns eigenvalues in descending order and the unitary `U`
/// whose columns are the matching eigenvectors, so `Uᴴ·A·U = diag(λ)`.
pub fn hermitian_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows;
    assert_eq!(n, a.cols);
    let mut m = a.clone();
    let mut u = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                let bn = b.norm();
                if bn <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * bn);
                let t = if theta == 0.0 { 1.0 } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph = b / bn;
                // G = diag(1, conj(ph)) · [[c, s], [-s, c]]
                let g = [[Complex64::new(c, 0.0), Complex64::new(s, 0.0)], [-ph.conj() * s, ph.conj() * c]];
                // m <- m·G
                for r in 0..n {
                    let (xp, xq) = (m[(r, p)], m[(r, q)]);
                    m[(r, p)] = xp * g[0][0] + xq * g[1][0];
                    m[(r, q)] = xp * g[0][1] + xq * g[1][1];
                    let (yp, yq) = (u[(r, p)], u[(r, q)]);
                    u[(r, p)] = yp * g[0][0] + yq * g[1][0];
                    u[(r, q)] = yp * g[0][1] + yq * g[1][1];
                }
                // m <- Gᴴ·m
                for cidx in 0..n {
                    let (xp, xq) = (m[(p, cidx)], m[(q, cidx)]);
                    m[(p, cidx)] = g[0][0].conj() * xp + g[1][0].conj() * xq;
                    m[(q, cidx)] = g[0][1].conj() * xp + g[1][1].conj() * xq;
                }
                m[(p, q)] = Complex64::zero();
                m[(q, p)] = Complex64::zero();
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.partial_cmp(&m[(i, i)].re).unwrap_or(core::cmp::Ordering::Equal));
    let vals = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut us = CMatrix::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        for r in 0..n {
            us[(r, k)] = u[(r, i)];
        }
    }
    (vals, us)
}

/// Real banded matrix with `lower`/`upper` bandwidths, factorized in place
/// without pivoting. Only used for diagonally dominant M-matrices.
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    lower: usize,
    upper: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandLu {
    pub fn new(n: usize, lower: usize, upper: usize) -> Self {
        let width = lower + upper + 1;
        BandLu { n, lower, upper, width, data: vec![0.0; n * width] }
    }

    /// Storage footprint in `f64`s, used to choose between direct and
    /// iterative solves.
    pub fn footprint(n: usize, lower: usize, upper: usize) -> usize {
        n.saturating_mul(lower + upper + 1)
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.lower - i)
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(j + self.lower >= i && j <= i + self.upper);
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    /// Doolittle elimination inside the band. Returns `false` on a zero pivot.
    pub fn factorize(&mut self) -> bool {
        let n = self.n;
        for k in 0..n {
            let pivot = self.data[self.slot(k, k)];
            if pivot == 0.0 {
                return false;
            }
            let i_end = (k + self.lower + 1).min(n);
            let j_end = (k + self.upper + 1).min(n);
            for i in (k + 1)..i_end {
                let sik = self.slot(i, k);
                let l = self.data[sik] / pivot;
                if l == 0.0 {
                    continue;
                }
                self.data[sik] = l;
                let base_k = self.slot(k, k);
                let base_i = self.slot(i, k);
                for off in 1..(j_end - k) {
                    let ukj = self.data[base_k + off];
                    if ukj != 0.0 {
                        self.data[base_i + off] -= l * ukj;
                    }
                }
            }
        }
        true
    }

    pub fn solve(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let start = i.saturating_sub(self.lower);
            let mut acc = b[i];
            for j in start..i {
                acc -= self.data[self.slot(i, j)] * b[j];
            }
            b[i] = acc;
        }
        for i in (0..n).rev() {
            let end = (i + self.upper + 1).min(n);
            let mut acc = b[i];
            for j in (i + 1)..end {
                acc -= self.data[self.slot(i, j)] * b[j];
            }
            b[i] = acc / self.data[self.slot(i, i)];
        }
    }
}
