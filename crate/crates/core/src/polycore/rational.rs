use num_complex::Complex64;

use super::CPoly;
use crate::error::{Error, Result};
use crate::tol;

/// Quotient `num/den` of holomorphic polynomials.
///
/// The denominator is kept monic under the graded-lex order. No gcd
/// reduction is attempted; equality is decided by cross-multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalHolo {
    num: CPoly,
    den: CPoly,
}

impl RationalHolo {
    pub fn new(num: CPoly, den: CPoly) -> Result<Self> {
        if num.dim() != den.dim() {
            return Err(Error::DimensionMismatch { expected: num.dim(), found: den.dim() });
        }
        let (_, lead) = den.leading().ok_or(Error::ZeroDenominator)?;
        let inv = lead.inv();
        Ok(RationalHolo { num: num.scale(inv), den: den.scale(inv) })
    }

    pub fn from_poly(p: CPoly) -> Self {
        let n = p.dim();
        RationalHolo { num: p, den: CPoly::one(n) }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::from_poly(CPoly::constant(n, c))
    }

    pub fn zero(n: usize) -> Self {
        Self::from_poly(CPoly::zero(n))
    }

    pub fn dim(&self) -> usize {
        self.num.dim()
    }

    pub fn num(&self) -> &CPoly {
        &self.num
    }

    pub fn den(&self) -> &CPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Denominator is the constant 1.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Evaluates, rejecting points where `|den| < ε·(1 + |num|)`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        let d = self.den.eval(z);
        let n = self.num.eval(z);
        if d.norm() < tol::EVAL_SINGULAR * (1.0 + n.norm()) {
            return Err(Error::SingularPoint);
        }
        Ok(n / d)
    }

    pub fn add(&self, other: &RationalHolo) -> RationalHolo {
        if self.den == other.den {
            return RationalHolo { num: self.num.add(&other.num), den: self.den.clone() };
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RationalHolo { num, den }
    }

    pub fn neg(&self) -> RationalHolo {
        RationalHolo { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RationalHolo) -> RationalHolo {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalHolo) -> RationalHolo {
        if self.is_zero() || other.is_zero() {
            return RationalHolo::zero(self.dim());
        }
        let den = if self.is_polynomial() {
            other.den.clone()
        } else if other.is_polynomial() {
            self.den.clone()
        } else {
            self.den.mul(&other.den)
        };
        let num = self.num.mul(&other.num);
        // both dens are monic so the product is monic as well
        RationalHolo { num, den }
    }

    pub fn scale(&self, s: Complex64) -> RationalHolo {
        RationalHolo { num: self.num.scale(s), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &CPoly) -> RationalHolo {
        RationalHolo { num: self.num.mul(p), den: self.den.clone() }
    }

    /// `∂/∂z_j` by the quotient rule.
    pub fn derivative(&self, j: usize) -> RationalHolo {
        if self.is_polynomial() {
            return RationalHolo { num: self.num.derivative(j), den: self.den.clone() };
        }
        let num = self.num.derivative(j).mul(&self.den).sub(&self.num.mul(&self.den.derivative(j)));
        let den = self.den.mul(&self.den);
        RationalHolo { num, den }
    }

    /// Symbolic equality by cross-multiplication.
    pub fn equals(&self, other: &RationalHolo) -> bool {
        self.num.mul(&other.den).sub(&other.num.mul(&self.den)).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn normalizes_denominator_monic() {
        let n = CPoly::one(1);
        let d = CPoly::var(1, 0).scale(c(2.0, 0.0)); // 2z
        let r = RationalHolo::new(n, d).unwrap();
        assert_eq!(r.den().leading().unwrap().1, &c(1.0, 0.0));
        assert!((r.eval(&[c(1.0, 0.0)]).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert_eq!(RationalHolo::new(CPoly::one(1), CPoly::zero(1)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn quotient_rule() {
        // 1/(z-1) -> -1/(z-1)^2
        let zm1 = CPoly::var(1, 0).sub(&CPoly::one(1));
        let r = RationalHolo::new(CPoly::one(1), zm1.clone()).unwrap();
        let d = r.derivative(0);
        let want = RationalHolo::new(CPoly::constant(1, c(-1.0, 0.0)), zm1.mul(&zm1)).unwrap();
        assert!(d.equals(&want));
        assert_eq!(r.eval(&[c(1.0, 0.0)]), Err(Error::SingularPoint));
    }

    #[test]
    fn cross_multiplied_equality() {
        let z = CPoly::var(1, 0);
        let a = RationalHolo::new(z.clone(), z.clone()).unwrap();
        assert!(a.equals(&RationalHolo::constant(1, c(1.0, 0.0))));
        let sum = a.add(&RationalHolo::constant(1, c(-1.0, 0.0)));
        assert!(sum.is_zero());
    }
}
