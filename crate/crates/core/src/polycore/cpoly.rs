use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;

use super::MultiIndex;
use crate::tol;

/// Dense-by-map multivariate complex polynomial `Σ c_m z^m`.
///
/// Coefficients below [`tol::SYMBOLIC_ZERO`] relative to the largest one
/// are pruned after every arithmetic operation.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    n: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl CPoly {
    pub fn zero(n: usize) -> Self {
        CPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zeros(n), c);
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Complex64::new(1.0, 0.0))
    }

    /// The coordinate function `z_j` (0-based).
    pub fn var(n: usize, j: usize) -> Self {
        Self::monomial(n, MultiIndex::unit(n, j), Complex64::new(1.0, 0.0))
    }

    pub fn monomial(n: usize, m: MultiIndex, c: Complex64) -> Self {
        assert_eq!(m.dim(), n);
        let mut p = Self::zero(n);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds from `(powers, coefficient)` pairs, summing duplicates.
    pub fn from_terms<I>(n: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            assert_eq!(m.dim(), n);
            *p.terms.entry(m).or_insert_with(Complex64::zero) += c;
        }
        p.prune();
        p
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn univariate(coeffs: &[Complex64]) -> Self {
        Self::from_terms(1, coeffs.iter().enumerate().map(|(k, &c)| (MultiIndex::new(alloc::vec![k as u32]), c)))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Constant polynomial (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total() == 0)
    }

    /// Graded-lex leading monomial and coefficient.
    pub fn leading(&self) -> Option<(&MultiIndex, &Complex64)> {
        self.terms.iter().next_back()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degree in the variable `z_j`.
    pub fn degree_in(&self, j: usize) -> u32 {
        self.terms.keys().map(|m| m.get(j)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total()).max().unwrap_or(0)
    }

    fn prune(&mut self) {
        let scale = self.max_abs_coeff();
        let cut = scale * tol::SYMBOLIC_ZERO;
        self.terms.retain(|_, c| !c.is_zero() && c.norm() > cut);
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        assert_eq!(z.len(), self.n);
        // Horner would need a recursive layout; monomial powers are cached per variable.
        let mut powers: Vec<Vec<Complex64>> = Vec::with_capacity(self.n);
        for (j, zj) in z.iter().enumerate() {
            let d = self.degree_in(j) as usize;
            let mut row = Vec::with_capacity(d + 1);
            let mut acc = Complex64::new(1.0, 0.0);
            for _ in 0..=d {
                row.push(acc);
                acc *= zj;
            }
            powers.push(row);
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = *c;
                for (j, &p) in m.entries().iter().enumerate() {
                    t *= powers[j][p as usize];
                }
                t
            })
            .sum()
    }

    pub fn scale(&self, s: Complex64) -> CPoly {
        if s.is_zero() {
            return CPoly::zero(self.n);
        }
        CPoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect() }
    }

    pub fn neg(&self) -> CPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn add(&self, other: &CPoly) -> CPoly {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            *out.terms.entry(m.clone()).or_insert_with(Complex64::zero) += c;
        }
        out.prune_cancellation(self.max_abs_coeff().max(other.max_abs_coeff()));
        out
    }

    pub fn sub(&self, other: &CPoly) -> CPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CPoly) -> CPoly {
        assert_eq!(self.n, other.n);
        let mut out = CPoly::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *out.terms.entry(ma.add(mb)).or_insert_with(Complex64::zero) += ca * cb;
            }
        }
        let scale = self.max_abs_coeff() * other.max_abs_coeff();
        out.prune_cancellation(scale);
        out
    }

    /// Pruning relative to the operand scale, so exact cancellation to
    /// rounding noise is recognised as zero.
    fn prune_cancellation(&mut self, operand_scale: f64) {
        let cut = operand_scale.max(self.max_abs_coeff()) * tol::SYMBOLIC_ZERO;
        self.terms.retain(|_, c| !c.is_zero() && c.norm() > cut);
    }

    /// `∂/∂z_j`.
    pub fn derivative(&self, j: usize) -> CPoly {
        let terms = self.terms.iter().filter(|(m, _)| m.get(j) > 0).map(|(m, c)| {
            let p = m.get(j);
            (m.with(j, p - 1), c * p as f64)
        });
        CPoly::from_terms(self.n, terms)
    }

    /// Divides all coefficients by the leading one.
    pub fn monic(&self) -> Option<CPoly> {
        let (_, lead) = self.leading()?;
        let lead = *lead;
        Some(self.scale(lead.inv()))
    }

    /// Coefficient-wise relative distance `max|a−b| / max(1, max|a|, max|b|)`.
    pub fn distance(&self, other: &CPoly) -> f64 {
        let scale = 1f64.max(self.max_abs_coeff()).max(other.max_abs_coeff());
        let mut keys: Vec<&MultiIndex> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().map(|m| (self.coeff(m) - other.coeff(m)).norm()).fold(0.0, f64::max) / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn arithmetic_and_eval() {
        let z = CPoly::var(1, 0);
        let p = z.sub(&CPoly::one(1)); // z - 1
        let sq = p.mul(&p); // z^2 - 2z + 1
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.eval(&[c(3.0, 0.0)]), c(4.0, 0.0));
        assert!(p.sub(&p).is_zero());
        let d = sq.derivative(0);
        assert_eq!(d.eval(&[c(0.0, 1.0)]), c(-2.0, 2.0));
    }

    #[test]
    fn leading_is_graded_lex_max() {
        let p = CPoly::from_terms(
            2,
            [
                (MultiIndex::new(alloc::vec![2, 0]), c(3.0, 0.0)),
                (MultiIndex::new(alloc::vec![1, 1]), c(1.0, 0.0)),
                (MultiIndex::new(alloc::vec![0, 0]), c(5.0, 0.0)),
            ],
        );
        assert_eq!(p.leading().unwrap().0, &MultiIndex::new(alloc::vec![2, 0]));
        let m = p.monic().unwrap();
        assert_eq!(m.coeff(&MultiIndex::new(alloc::vec![2, 0])), c(1.0, 0.0));
    }

    #[test]
    fn cancellation_prunes_to_zero() {
        let a = CPoly::constant(1, c(0.1, 0.0)).add(&CPoly::constant(1, c(0.2, 0.0)));
        let b = CPoly::constant(1, c(0.3, 0.0));
        assert!(a.sub(&b).is_zero());
    }
}
