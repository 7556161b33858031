use num_complex::Complex64;
use num_traits::Float;

use super::{CPoly, MultiIndex, PolyAnalytic, RationalHolo};
use crate::error::{Error, Result};
use crate::tol;

/// Holomorphic function `r(z)·exp(e(z))` with `r` rational and `e` a
/// polynomial (absent exponent means `e ≡ 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct HoloFn {
    pub rational: RationalHolo,
    pub exponent: Option<CPoly>,
}

impl HoloFn {
    pub fn rational(r: RationalHolo) -> Self {
        HoloFn { rational: r, exponent: None }
    }

    pub fn poly(p: CPoly) -> Self {
        Self::rational(RationalHolo::from_poly(p))
    }

    /// `exp(e(z))`.
    pub fn exp(e: CPoly) -> Self {
        let n = e.dim();
        HoloFn { rational: RationalHolo::constant(n, Complex64::new(1.0, 0.0)), exponent: Some(e) }
    }

    pub fn dim(&self) -> usize {
        self.rational.dim()
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let r = self.rational.eval(z)?;
        Ok(match &self.exponent {
            Some(e) => r * e.eval(z).exp(),
            None => r,
        })
    }

    /// Modulus of the denominator, for singular-set checks.
    pub fn den_modulus(&self, z: &[Complex64]) -> f64 {
        self.rational.den().eval(z).norm()
    }
}

/// Certified members of the bounded-maximum-modulus family: functions that,
/// together with their reciprocals off the zero set, obey the maximum
/// modulus principle on every complex line.
#[derive(Debug, Clone, PartialEq)]
pub enum MWitness {
    Holomorphic(HoloFn),
    /// `λ·conj(Q)/Q`.
    BalkQuotient {
        lambda: Complex64,
        q: CPoly,
    },
    /// `|P|² = conj(P)·P`.
    SquaredModulus(CPoly),
    /// `G·conj(H)` with `G` holomorphic and `H` a holomorphic polynomial.
    HoloAntiholoProduct {
        g: HoloFn,
        h: CPoly,
    },
}

impl MWitness {
    pub fn dim(&self) -> usize {
        match self {
            MWitness::Holomorphic(g) => g.dim(),
            MWitness::BalkQuotient { q, .. } => q.dim(),
            MWitness::SquaredModulus(p) => p.dim(),
            MWitness::HoloAntiholoProduct { g, .. } => g.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MWitness::Holomorphic(_) => "holomorphic",
            MWitness::BalkQuotient { .. } => "balk_quotient",
            MWitness::SquaredModulus(_) => "squared_modulus",
            MWitness::HoloAntiholoProduct { .. } => "holo_antiholo_product",
        }
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        match self {
            MWitness::Holomorphic(g) => g.eval(z),
            MWitness::BalkQuotient { lambda, q } => {
                let qz = q.eval(z);
                if qz.norm() < tol::EVAL_SINGULAR {
                    return Err(Error::SingularPoint);
                }
                Ok(lambda * qz.conj() / qz)
            }
            MWitness::SquaredModulus(p) => Ok(Complex64::new(p.eval(z).norm_sqr(), 0.0)),
            MWitness::HoloAntiholoProduct { g, h } => Ok(g.eval(z)? * h.eval(z).conj()),
        }
    }

    /// `|denominator|` at `z` (infinite for polynomial kinds).
    pub fn den_modulus(&self, z: &[Complex64]) -> f64 {
        match self {
            MWitness::Holomorphic(g) | MWitness::HoloAntiholoProduct { g, .. } => {
                if g.rational.is_polynomial() {
                    f64::infinity()
                } else {
                    g.den_modulus(z)
                }
            }
            MWitness::BalkQuotient { q, .. } => {
                if q.is_constant() {
                    f64::infinity()
                } else {
                    q.eval(z).norm()
                }
            }
            MWitness::SquaredModulus(_) => f64::infinity(),
        }
    }

    /// Polyanalytic order `α` of the witness.
    pub fn order(&self) -> MultiIndex {
        let n = self.dim();
        let from = |p: &CPoly| MultiIndex::new((0..n).map(|j| p.degree_in(j) + 1).collect());
        match self {
            MWitness::Holomorphic(_) => MultiIndex::ones(n),
            MWitness::BalkQuotient { q, .. } => from(q),
            MWitness::SquaredModulus(p) => from(p),
            MWitness::HoloAntiholoProduct { h, .. } => from(h),
        }
    }

    /// Exact representation, when the witness has no exponential factor.
    pub fn to_polyanalytic(&self) -> Option<PolyAnalytic> {
        let n = self.dim();
        match self {
            MWitness::Holomorphic(g) => match g.exponent {
                None => Some(PolyAnalytic::holomorphic(g.rational.clone())),
                Some(_) => None,
            },
            MWitness::BalkQuotient { lambda, q } => {
                let coeffs = q.terms().map(|(m, c)| {
                    let num = CPoly::constant(n, lambda * c.conj());
                    (m.clone(), RationalHolo::new(num, q.clone()).expect("Q nonzero"))
                });
                PolyAnalytic::new(self.order(), coeffs).ok()
            }
            MWitness::SquaredModulus(p) => {
                let f = PolyAnalytic::holomorphic(RationalHolo::from_poly(p.clone()));
                f.conj_mul(&f).ok()
            }
            MWitness::HoloAntiholoProduct { g, h } => {
                if g.exponent.is_some() {
                    return None;
                }
                let hf = PolyAnalytic::holomorphic(RationalHolo::from_poly(h.clone()));
                hf.conj_mul(&PolyAnalytic::holomorphic(g.rational.clone())).ok()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn witness_evaluations_match_exact_forms() {
        let q = CPoly::var(2, 0).sub(&CPoly::constant(2, c(3.0, 0.0)));
        let w = MWitness::BalkQuotient { lambda: c(0.0, 2.0), q };
        let pt = [c(0.2, 0.1), c(-0.3, 0.5)];
        assert!((w.eval(&pt).unwrap().norm() - 2.0).abs() < 1e-14);
        let exact = w.to_polyanalytic().unwrap();
        assert!((exact.eval(&pt).unwrap() - w.eval(&pt).unwrap()).norm() < 1e-14);
        assert_eq!(w.order(), MultiIndex::new(vec![2, 1]));

        let p = CPoly::var(2, 0).add(&CPoly::var(2, 1));
        let s = MWitness::SquaredModulus(p.clone());
        let exact = s.to_polyanalytic().unwrap();
        assert!((exact.eval(&pt).unwrap() - s.eval(&pt).unwrap()).norm() < 1e-14);

        let e = MWitness::Holomorphic(HoloFn::exp(CPoly::var(2, 0)));
        assert!((e.eval(&pt).unwrap() - pt[0].exp()).norm() < 1e-14);
        assert!(e.to_polyanalytic().is_none());
    }
}
