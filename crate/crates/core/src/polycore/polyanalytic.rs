use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{CPoly, MultiIndex, RationalHolo};
use crate::error::{Error, Result};

/// `f(z) = Σ_β a_β(z)·z̄^β` with `β < α` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyAnalytic {
    n: usize,
    order: MultiIndex,
    coeffs: BTreeMap<MultiIndex, RationalHolo>,
}

impl PolyAnalytic {
    /// Builds a function of (not necessarily exact) order `order`.
    /// Zero coefficients are dropped.
    pub fn new<I>(order: MultiIndex, coeffs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, RationalHolo)>,
    {
        let n = order.dim();
        if order.entries().contains(&0) {
            return Err(Error::InvalidArgument(format!("order {order} has a zero entry")));
        }
        let mut map: BTreeMap<MultiIndex, RationalHolo> = BTreeMap::new();
        for (beta, a) in coeffs {
            if beta.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: beta.dim() });
            }
            if a.dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: a.dim() });
            }
            if !beta.strictly_below(&order) {
                return Err(Error::InvalidArgument(format!("z̄-power {beta} not below order {order}")));
            }
            let merged = match map.remove(&beta) {
                Some(prev) => prev.add(&a),
                None => a,
            };
            map.insert(beta, merged);
        }
        map.retain(|_, a| !a.is_zero());
        Ok(PolyAnalytic { n, order, coeffs: map })
    }

    pub fn zero(n: usize) -> Self {
        PolyAnalytic { n, order: MultiIndex::ones(n), coeffs: BTreeMap::new() }
    }

    /// Holomorphic function (order `(1,…,1)`).
    pub fn holomorphic(a: RationalHolo) -> Self {
        let n = a.dim();
        Self::new(MultiIndex::ones(n), [(MultiIndex::zeros(n), a)]).expect("valid by construction")
    }

    pub fn constant(n: usize, c: Complex64) -> Self {
        Self::holomorphic(RationalHolo::constant(n, c))
    }

    /// `a(z)·z̄^β` with the smallest order containing `β`.
    pub fn term(beta: MultiIndex, a: RationalHolo) -> Self {
        let order = MultiIndex::new(beta.entries().iter().map(|b| b + 1).collect());
        Self::new(order, [(beta, a)]).expect("valid by construction")
    }

    /// `z̄_j`.
    pub fn zbar(n: usize, j: usize) -> Self {
        Self::term(MultiIndex::unit(n, j), RationalHolo::constant(n, Complex64::new(1.0, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &MultiIndex {
        &self.order
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&MultiIndex, &RationalHolo)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, beta: &MultiIndex) -> Option<&RationalHolo> {
        self.coeffs.get(beta)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|a| a.is_zero())
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.values().all(|a| a.is_polynomial())
    }

    /// Same function declared with a larger order.
    pub fn with_order(&self, order: MultiIndex) -> Result<Self> {
        Self::new(order, self.coeffs.iter().map(|(b, a)| (b.clone(), a.clone())))
    }

    /// `Σ a_β(z)·z̄^β`, failing on the singular set.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: z.len() });
        }
        let zc: Vec<Complex64> = z.iter().map(|w| w.conj()).collect();
        let mut acc = Complex64::new(0.0, 0.0);
        for (beta, a) in &self.coeffs {
            acc += a.eval(z)? * beta.monomial(&zc);
        }
        Ok(acc)
    }

    fn check_var(&self, j: usize) -> Result<()> {
        if j >= self.n {
            return Err(Error::InvalidArgument(format!("variable index {} out of range 1..={}", j + 1, self.n)));
        }
        Ok(())
    }

    /// `∂^m f / ∂z̄_j^m` (0-based `j`). The output order has
    /// `α'_j = max(α_j − m, 1)`.
    pub fn dbar(&self, j: usize, m: u32) -> Result<PolyAnalytic> {
        self.check_var(j)?;
        if m == 0 {
            return Err(Error::InvalidArgument("repetition count must be ≥ 1".into()));
        }
        let order = self.order.with(j, self.order.get(j).saturating_sub(m).max(1));
        let mut coeffs = BTreeMap::new();
        for (beta, a) in &self.coeffs {
            let p = beta.get(j);
            if p < m {
                continue;
            }
            let falling: f64 = ((p - m + 1)..=p).map(|k| k as f64).product();
            coeffs.insert(beta.with(j, p - m), a.scale(Complex64::new(falling, 0.0)));
        }
        coeffs.retain(|_, a: &mut RationalHolo| !a.is_zero());
        Ok(PolyAnalytic { n: self.n, order, coeffs })
    }

    /// `∂f/∂z_j`; z̄-powers are untouched.
    pub fn dz(&self, j: usize) -> Result<PolyAnalytic> {
        self.check_var(j)?;
        let mut coeffs = BTreeMap::new();
        for (beta, a) in &self.coeffs {
            let d = a.derivative(j);
            if !d.is_zero() {
                coeffs.insert(beta.clone(), d);
            }
        }
        Ok(PolyAnalytic { n: self.n, order: self.order.clone(), coeffs })
    }

    /// Per variable, the least `m` with `∂̄_j^m f ≡ 0`. The zero function
    /// has exact order `(0,…,0)` by convention.
    pub fn exact_order(&self) -> MultiIndex {
        let live: Vec<&MultiIndex> = self.coeffs.iter().filter(|(_, a)| !a.is_zero()).map(|(b, _)| b).collect();
        if live.is_empty() {
            return MultiIndex::zeros(self.n);
        }
        MultiIndex::new((0..self.n).map(|j| live.iter().map(|b| b.get(j)).max().unwrap_or(0) + 1).collect())
    }

    pub fn add(&self, other: &PolyAnalytic) -> Result<PolyAnalytic> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let order = self.order.join(&other.order);
        Self::new(order, self.coeffs.iter().chain(other.coeffs.iter()).map(|(b, a)| (b.clone(), a.clone())))
    }

    pub fn neg(&self) -> PolyAnalytic {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn sub(&self, other: &PolyAnalytic) -> Result<PolyAnalytic> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: Complex64) -> PolyAnalytic {
        let coeffs = self.coeffs.iter().map(|(b, a)| (b.clone(), a.scale(s))).filter(|(_, a)| !a.is_zero()).collect();
        PolyAnalytic { n: self.n, order: self.order.clone(), coeffs }
    }

    /// Product; the order is `α_f + α_g − 1`.
    pub fn mul(&self, other: &PolyAnalytic) -> Result<PolyAnalytic> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let order =
            MultiIndex::new(self.order.entries().iter().zip(other.order.entries()).map(|(a, b)| a + b - 1).collect());
        let mut terms = Vec::new();
        for (ba, aa) in &self.coeffs {
            for (bb, ab) in &other.coeffs {
                terms.push((ba.add(bb), aa.mul(ab)));
            }
        }
        Self::new(order, terms)
    }

    /// `conj(f)·g`, defined when every coefficient of `f` is a polynomial.
    pub fn conj_mul(&self, g: &PolyAnalytic) -> Result<PolyAnalytic> {
        if self.n != g.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: g.n });
        }
        if !self.has_polynomial_coeffs() {
            return Err(Error::NotRepresentable);
        }
        // conj(Σ_β Σ_m c_{β,m} z^m z̄^β) = Σ_m z̄^m · Σ_β conj(c_{β,m}) z^β
        let n = self.n;
        let mut regrouped: BTreeMap<MultiIndex, CPoly> = BTreeMap::new();
        for (beta, a) in &self.coeffs {
            // den is the constant 1 after normalization
            let den = a.den().coeff(&MultiIndex::zeros(n));
            for (m, c) in a.num().terms() {
                let piece = CPoly::monomial(n, beta.clone(), (c / den).conj());
                let slot = regrouped.entry(m.clone()).or_insert_with(|| CPoly::zero(n));
                *slot = slot.add(&piece);
            }
        }
        let maxdeg =
            MultiIndex::new((0..n).map(|j| regrouped.keys().map(|m| m.get(j)).max().unwrap_or(0) + 1).collect());
        let conj_f = Self::new(maxdeg, regrouped.into_iter().map(|(m, p)| (m, RationalHolo::from_poly(p))))?;
        conj_f.mul(g)
    }

    /// Symbolic equality via cross-multiplied coefficient comparison.
    pub fn symbolic_eq(&self, other: &PolyAnalytic) -> bool {
        match self.sub(other) {
            Ok(d) => d.is_zero(),
            Err(_) => false,
        }
    }
}
