use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // needed without std
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::tol;

/// One term `c·w^a·w̄^b·x^k` of the graph function.
#[derive(Debug, Clone, PartialEq)]
pub struct HTerm {
    pub coeff: Complex64,
    pub w: Vec<u32>,
    pub wbar: Vec<u32>,
    pub x: u32,
}

impl HTerm {
    pub fn degree(&self) -> u32 {
        self.w.iter().chain(&self.wbar).sum::<u32>() + self.x
    }

    fn eval(&self, w: &[Complex64], x: f64) -> Complex64 {
        let mut v = self.coeff * x.powi(self.x as i32);
        for (j, wj) in w.iter().enumerate() {
            v *= wj.powu(self.w[j]) * wj.conj().powu(self.wbar[j]);
        }
        v
    }
}

/// Real hypersurface `M = {Im z_n = h(w, Re z_n)}` in `ℂⁿ`, `w ∈ ℂ^{n−1}`,
/// with `h = Re Σ c·w^a·w̄^b·x^k`, valid on the box `|w_j|, |x| ≤ radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphHypersurface {
    n: usize,
    terms: Vec<HTerm>,
    radius: f64,
}

impl GraphHypersurface {
    /// Checks `n ≥ 2`, term shapes, `h(0) = 0` and `dh(0) = 0`.
    pub fn new(n: usize, terms: Vec<HTerm>, radius: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("ambient dimension must be at least 2".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidArgument("box radius must be positive".into()));
        }
        for t in &terms {
            if t.w.len() != n - 1 || t.wbar.len() != n - 1 {
                return Err(Error::DimensionMismatch { expected: n - 1, found: t.w.len().min(t.wbar.len()) });
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite coefficient".into()));
            }
        }
        let s = GraphHypersurface { n, terms, radius };
        let z = alloc::vec![Complex64::new(0.0, 0.0); n - 1];
        if s.eval(&z, 0.0).abs() > tol::SYMBOLIC_ZERO {
            return Err(Error::Precondition(String::from("h(0) must vanish")));
        }
        let linear = s.terms.iter().filter(|t| t.degree() == 1).any(|t| {
            let x_only = t.x == 1;
            if x_only {
                t.coeff.re.abs() > tol::SYMBOLIC_ZERO
            } else {
                t.coeff.norm() > tol::SYMBOLIC_ZERO
            }
        });
        if linear {
            return Err(Error::Precondition(String::from("dh(0) must vanish")));
        }
        Ok(s)
    }

    /// `h = Σ λ_j |w_j|²`.
    pub fn quadric(lambdas: &[f64], radius: f64) -> Result<Self> {
        let m = lambdas.len();
        let terms = lambdas
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                let mut e = alloc::vec![0; m];
                e[j] = 1;
                HTerm { coeff: Complex64::new(l, 0.0), w: e.clone(), wbar: e, x: 0 }
            })
            .collect();
        Self::new(m + 1, terms, radius)
    }

    /// `h = Σ S_jk w_j w̄_k` for a Hermitian `S`.
    pub fn hermitian_quadric(s: &CMatrix, radius: f64) -> Result<Self> {
        let m = s.rows();
        let mut terms = Vec::new();
        for j in 0..m {
            for k in 0..m {
                let mut a = alloc::vec![0; m];
                let mut b = alloc::vec![0; m];
                a[j] = 1;
                b[k] = 1;
                terms.push(HTerm { coeff: s[(j, k)], w: a, wbar: b, x: 0 });
            }
        }
        Self::new(m + 1, terms, radius)
    }

    /// Named examples: `quadric` (`|w₁|²`), `neg_quadric`, `harmonic`
    /// (`Re w₁²`), `saddle` (`|w₁|² − |w₂|²` in `ℂ³`), `cubic`
    /// (`|w₁|² + x³`).
    pub fn builtin(name: &str, radius: f64) -> Option<Result<Self>> {
        let one = Complex64::new(1.0, 0.0);
        Some(match name {
            "quadric" => Self::quadric(&[1.0], radius),
            "neg_quadric" => Self::quadric(&[-1.0], radius),
            "saddle" => Self::quadric(&[1.0, -1.0], radius),
            "harmonic" => {
                Self::new(2, alloc::vec![HTerm { coeff: one, w: alloc::vec![2], wbar: alloc::vec![0], x: 0 }], radius)
            }
            "cubic" => Self::new(
                2,
                alloc::vec![
                    HTerm { coeff: one, w: alloc::vec![1], wbar: alloc::vec![1], x: 0 },
                    HTerm { coeff: one, w: alloc::vec![0], wbar: alloc::vec![0], x: 3 },
                ],
                radius,
            ),
            _ => return None,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[HTerm] {
        &self.terms
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn eval(&self, w: &[Complex64], x: f64) -> f64 {
        self.terms.iter().map(|t| t.eval(w, x).re).sum()
    }

    /// All terms have degree 2.
    pub fn is_quadric(&self) -> bool {
        self.terms.iter().all(|t| t.degree() == 2 || t.coeff.norm() == 0.0)
    }

    /// Bound on all third-order real partial derivatives of `h` on the
    /// box of radius `r`.
    pub fn third_derivative_bound(&self, r: f64) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.degree() >= 3)
            .map(|t| {
                let d = t.degree() as f64;
                t.coeff.norm() * d * (d - 1.0) * (d - 2.0) * r.powi(t.degree() as i32 - 3)
            })
            .sum()
    }

    /// `[∂²h(0)/∂w_j∂w̄_k]` read off the quadratic terms.
    pub fn levi_matrix(&self) -> CMatrix {
        let m = self.n - 1;
        let mut s = CMatrix::zeros(m, m);
        for t in self.terms.iter().filter(|t| t.x == 0 && t.degree() == 2) {
            let (Some(j), Some(k)) = (t.w.iter().position(|&e| e == 1), t.wbar.iter().position(|&e| e == 1)) else {
                continue;
            };
            // h = (T + T̄)/2: the term contributes c at (j, k) and c̄ at (k, j)
            s[(j, k)] += t.coeff * 0.5;
            s[(k, j)] += t.coeff.conj() * 0.5;
        }
        s
    }
}

/// Levi matrix `S`, unitary `U` and eigenvalues `λ₁ ≥ … ≥ λ_{n−1}` with
/// `Uᴴ S U = diag(λ)`.
#[derive(Debug, Clone)]
pub struct LeviData {
    pub s: CMatrix,
    pub u: CMatrix,
    pub lambda: Vec<f64>,
}

impl LeviData {
    /// `‖U Uᴴ − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let m = self.u.rows();
        self.u.mul(&self.u.adjoint()).sub(&CMatrix::identity(m)).max_abs()
    }

    /// `‖Uᴴ S U − diag(λ)‖_max`.
    pub fn diagonalization_defect(&self) -> f64 {
        let mut d = self.u.adjoint().mul(&self.s).mul(&self.u);
        for (j, l) in self.lambda.iter().enumerate() {
            d[(j, j)] -= Complex64::new(*l, 0.0);
        }
        d.max_abs()
    }
}

/// Levi form of `M` at the origin. `S` is symmetrized as `(S + Sᴴ)/2`
/// after checking the Hermitian defect.
pub fn levi_form(m: &GraphHypersurface) -> Result<LeviData> {
    let raw = m.levi_matrix();
    let defect = raw.sub(&raw.adjoint()).max_abs();
    if defect > tol::HERMITIAN_DEFECT * raw.max_abs().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let k = raw.rows();
    let mut s = raw.clone();
    for i in 0..k {
        for j in 0..k {
            s[(i, j)] = (raw[(i, j)] + raw[(j, i)].conj()) * 0.5;
        }
    }
    let (lambda, u) = hermitian_eigen(&s);
    Ok(LeviData { s, u, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn quadric_has_unit_eigenvalue() {
        let m = GraphHypersurface::builtin("quadric", 1.0).unwrap().unwrap();
        let l = levi_form(&m).unwrap();
        assert_eq!(l.lambda, alloc::vec![1.0]);
        assert!(l.unitarity_defect() < 1e-12);
    }

    #[test]
    fn harmonic_quadratic_is_levi_flat() {
        let m = GraphHypersurface::builtin("harmonic", 1.0).unwrap().unwrap();
        let l = levi_form(&m).unwrap();
        assert_eq!(l.lambda, alloc::vec![0.0]);
    }

    #[test]
    fn saddle_eigenvalues() {
        let m = GraphHypersurface::builtin("saddle", 1.0).unwrap().unwrap();
        let l = levi_form(&m).unwrap();
        assert!((l.lambda[0] - 1.0).abs() < 1e-14 && (l.lambda[1] + 1.0).abs() < 1e-14);
        assert!(l.diagonalization_defect() < 1e-10);
    }

    #[test]
    fn hermitian_quadric_round_trip() {
        let s = CMatrix::from_rows(2, 2, alloc::vec![c(2.0, 0.0), c(0.5, -1.0), c(0.5, 1.0), c(-1.0, 0.0)]);
        let m = GraphHypersurface::hermitian_quadric(&s, 1.0).unwrap();
        let l = levi_form(&m).unwrap();
        assert!(l.s.sub(&s).max_abs() < 1e-15);
        // h(w) = wᵀ S w̄ is real and equals the Hermitian form
        let w = [c(0.3, -0.2), c(-0.1, 0.4)];
        let direct: Complex64 =
            (0..2).flat_map(|j| (0..2).map(move |k| (j, k))).map(|(j, k)| s[(j, k)] * w[j] * w[k].conj()).sum();
        assert!((m.eval(&w, 0.0) - direct.re).abs() < 1e-15 && direct.im.abs() < 1e-15);
    }

    #[test]
    fn rejects_linear_and_constant_terms() {
        let t = |coeff, w: u32, wb: u32, x| HTerm { coeff, w: alloc::vec![w], wbar: alloc::vec![wb], x };
        assert!(GraphHypersurface::new(2, alloc::vec![t(c(1.0, 0.0), 1, 0, 0)], 1.0).is_err());
        assert!(GraphHypersurface::new(2, alloc::vec![t(c(1.0, 0.0), 0, 0, 0)], 1.0).is_err());
        assert!(GraphHypersurface::new(2, alloc::vec![t(c(1.0, 0.0), 0, 0, 1)], 1.0).is_err());
        // Re(i·x) = 0
        assert!(GraphHypersurface::new(2, alloc::vec![t(c(0.0, 1.0), 0, 0, 1)], 1.0).is_ok());
        assert!(GraphHypersurface::new(1, alloc::vec![], 1.0).is_err());
    }

    #[test]
    fn third_derivative_bound_of_cubic() {
        let m = GraphHypersurface::builtin("cubic", 0.5).unwrap().unwrap();
        // x³ has third derivative 6
        assert_eq!(m.third_derivative_bound(0.5), 6.0);
        assert!(!m.is_quadric());
    }
}
