//! Truncated power series in the radial variable ρ with field coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::field::FieldValue;
use crate::scalar::Coeff;

/// `Σ_{k=0}^{N} c_k ρ^k`, known modulo `O(ρ^{N+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct JetSeries<C: Coeff> {
    coeffs: Vec<FieldValue<C>>,
}

impl<C: Coeff> JetSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![FieldValue::zero(); order + 1] }
    }

    pub fn constant(c: C, order: usize) -> Self {
        Self::from_field(FieldValue::Const(c), order)
    }

    pub fn from_field(f: FieldValue<C>, order: usize) -> Self {
        Self::monomial(f, 0, order)
    }

    /// `f ρ^k`, truncated at `order`.
    pub fn monomial(f: FieldValue<C>, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = f;
        }
        s
    }

    /// Builds a series from its coefficients; truncation order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<FieldValue<C>>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_consts(cs: Vec<C>) -> Self {
        Self::from_coeffs(cs.into_iter().map(FieldValue::Const).collect())
    }

    /// Truncation order N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &FieldValue<C> {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[FieldValue<C>] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, k: usize, f: FieldValue<C>) {
        self.coeffs[k] = f;
    }

    pub fn into_coeffs(self) -> Vec<FieldValue<C>> {
        self.coeffs
    }

    /// Drops coefficients above `order` (no-op if already shorter).
    pub fn truncated(&self, order: usize) -> Self {
        let n = (order + 1).min(self.coeffs.len());
        Self { coeffs: self.coeffs[..n].to_vec() }
    }

    /// Raises the truncation order, declaring the new coefficients zero.
    pub fn extended(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(order + 1, FieldValue::zero());
        Self { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldValue::is_zero)
    }

    /// Cheap zero test: every coefficient is a constant zero.
    pub fn is_structurally_zero(&self) -> bool {
        self.coeffs.iter().all(FieldValue::is_const_zero)
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Largest coefficient modulus per order.
    pub fn coeff_norms(&self) -> Vec<f64> {
        self.coeffs.iter().map(FieldValue::max_norm).collect()
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, &FieldValue<C>) -> FieldValue<C>) -> Self {
        Self { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect() }
    }

    pub fn try_map_coeffs(&self, f: impl Fn(usize, &FieldValue<C>) -> Result<FieldValue<C>>) -> Result<Self> {
        Ok(Self { coeffs: self.coeffs.iter().enumerate().map(|(k, c)| f(k, c)).collect::<Result<_>>()? })
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().min(o.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k].try_add(&o.coeffs[k])).collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().min(o.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k].try_sub(&o.coeffs[k])).collect::<Result<_>>()?;
        Ok(Self { coeffs })
    }

    /// Cauchy product truncated at the smaller order.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![FieldValue::zero(); n];
        let a_nz: Vec<usize> = (0..n).filter(|&i| !self.coeffs[i].is_const_zero()).collect();
        let b_nz: Vec<usize> = (0..n).filter(|&j| !o.coeffs[j].is_const_zero()).collect();
        for &i in &a_nz {
            for &j in &b_nz {
                if i + j >= n {
                    break;
                }
                let p = self.coeffs[i].try_mul(&o.coeffs[j])?;
                out[i + j].add_assign(&p);
            }
        }
        Ok(Self { coeffs: out })
    }

    /// In-place `self += a * b` (truncated at the orders involved).
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        let n = self.coeffs.len().min(a.coeffs.len()).min(b.coeffs.len());
        self.coeffs.truncate(n);
        if a.is_structurally_zero() || b.is_structurally_zero() {
            return;
        }
        for i in 0..n {
            if a.coeffs[i].is_const_zero() {
                continue;
            }
            for j in 0..n - i {
                if b.coeffs[j].is_const_zero() {
                    continue;
                }
                self.coeffs[i + j].add_product(&a.coeffs[i], &b.coeffs[j]);
            }
        }
    }

    /// In-place `self += a`.
    pub fn add_assign(&mut self, a: &Self) {
        let n = self.coeffs.len().min(a.coeffs.len());
        self.coeffs.truncate(n);
        for (s, x) in self.coeffs.iter_mut().zip(&a.coeffs) {
            s.add_assign(x);
        }
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| c.neg())
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|_, c| c.conj())
    }

    pub fn real_part(&self) -> Self {
        self.map_coeffs(|_, c| c.real_part())
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.order());
        }
        self.map_coeffs(|_, v| v.scale(c))
    }

    pub fn scale_field(&self, f: &FieldValue<C>) -> Self {
        self.map_coeffs(|_, v| v * f)
    }

    /// Multiplication by ρ^p at fixed truncation order.
    pub fn shift(&self, p: usize) -> Self {
        let n = self.coeffs.len();
        let coeffs = (0..n).map(|k| if k >= p { self.coeffs[k - p].clone() } else { FieldValue::zero() }).collect();
        Self { coeffs }
    }

    /// ρ∂_ρ: the coefficient at ρ^k is multiplied by k.
    pub fn radial_derivative(&self) -> Self {
        self.map_coeffs(|k, c| if k == 0 { FieldValue::zero() } else { c.scale(&C::from_i64(k as i64)) })
    }

    /// (ρ∂_ρ + s) applied termwise.
    pub fn radial_shifted(&self, s: i64) -> Self {
        self.map_coeffs(|k, c| c.scale(&C::from_i64(k as i64 + s)))
    }

    /// Multiplicative inverse; the order-0 coefficient must be invertible at every node.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.coeffs.len();
        let b0 = self.coeffs[0].inv()?;
        let mut out: Vec<FieldValue<C>> = Vec::with_capacity(n);
        out.push(b0.clone());
        for k in 1..n {
            let mut acc = FieldValue::zero();
            for j in 1..=k {
                acc.add_product(&self.coeffs[j], &out[k - j]);
            }
            out.push((&acc * &b0).neg());
        }
        Ok(Self { coeffs: out })
    }

    /// Square root with positive leading coefficient, by Newton iteration
    /// `y ← y + (a − y²)/(2y)`; each pass doubles the number of correct orders.
    pub fn sqrt(&self) -> Result<Self> {
        let n = self.order();
        let y0 = self.coeffs[0].sqrt_positive()?;
        let mut y = Self::from_field(y0, n);
        let mut correct = 0usize;
        while correct < n {
            let defect = self.try_sub(&y.try_mul(&y)?)?;
            if defect.is_zero() {
                break;
            }
            let step = defect.try_mul(&y.scale(&C::from_i64(2)).inverse()?)?;
            y = y.try_add(&step)?;
            correct = 2 * correct + 1;
        }
        Ok(y)
    }
}

impl<C: Coeff> Add for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn add(self, o: Self) -> JetSeries<C> {
        self.try_add(o).expect("field shapes must agree")
    }
}

impl<C: Coeff> Sub for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn sub(self, o: Self) -> JetSeries<C> {
        self.try_sub(o).expect("field shapes must agree")
    }
}

impl<C: Coeff> Mul for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn mul(self, o: Self) -> JetSeries<C> {
        self.try_mul(o).expect("field shapes must agree")
    }
}

impl<C: Coeff> Neg for &JetSeries<C> {
    type Output = JetSeries<C>;
    fn neg(self) -> JetSeries<C> {
        JetSeries::neg(self)
    }
}

/// Cauchy product (shape-checked).
pub fn jet_mul<C: Coeff>(a: &JetSeries<C>, b: &JetSeries<C>) -> Result<JetSeries<C>> {
    a.try_mul(b)
}

/// Series inverse.
pub fn jet_inverse<C: Coeff>(a: &JetSeries<C>) -> Result<JetSeries<C>> {
    a.inverse()
}

/// Series square root with positive leading term.
pub fn jet_sqrt<C: Coeff>(a: &JetSeries<C>) -> Result<JetSeries<C>> {
    a.sqrt()
}

/// ρ∂_ρ.
pub fn radial_derivative<C: Coeff>(a: &JetSeries<C>) -> JetSeries<C> {
    a.radial_derivative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::scalar::ExactComplex;

    type E = ExactComplex;

    fn ints(v: &[i64]) -> JetSeries<E> {
        JetSeries::from_consts(v.iter().map(|&x| E::from_i64(x)).collect())
    }

    fn rats(v: &[(i64, i64)]) -> JetSeries<E> {
        JetSeries::from_consts(v.iter().map(|&(p, q)| E::ratio(p, q)).collect())
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(&ints(&[1, 1, 0]) * &ints(&[1, -1, 0]), ints(&[1, 0, -1]));
    }

    #[test]
    fn square_by_convolution() {
        assert_eq!(&ints(&[2, 1, 0, 0]) * &ints(&[2, 1, 0, 0]), ints(&[4, 4, 1, 0]));
    }

    #[test]
    fn zero_absorbs_and_truncation_is_minimum() {
        let a = ints(&[3, 1, 4, 1, 5]);
        let z = JetSeries::zero(4);
        assert_eq!(&a * &z, z);
        assert_eq!((&a * &ints(&[1, 1])).order(), 1);
        assert_eq!((&a + &z).order(), 4);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ints(&[4]).inverse().unwrap(), rats(&[(1, 4)]));
        assert_eq!(ints(&[1, 1, 0, 0, 0]).inverse().unwrap(), ints(&[1, -1, 1, -1, 1]));
        assert!(matches!(ints(&[0, 1]).inverse(), Err(Error::NotInvertible)));
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(ints(&[4]).sqrt().unwrap(), ints(&[2]));
        assert_eq!(ints(&[1, 2, 1, 0, 0]).sqrt().unwrap(), ints(&[1, 1, 0, 0, 0]));
        // (2 + ρ − ρ²/4 + ρ³/8 − 5ρ⁴/64)² = 4 + 4ρ + O(ρ⁵)
        let r = ints(&[4, 4, 0, 0, 0]).sqrt().unwrap();
        assert_eq!(r, rats(&[(2, 1), (1, 1), (-1, 4), (1, 8), (-5, 64)]));
        assert_eq!(&r * &r, ints(&[4, 4, 0, 0, 0]));
        assert!(ints(&[-4, 1]).sqrt().is_err());
        assert!(ints(&[2, 1]).sqrt().is_err());
    }

    #[test]
    fn radial_derivative_examples() {
        assert_eq!(ints(&[7, 0, 0]).radial_derivative(), ints(&[0, 0, 0]));
        assert_eq!(ints(&[0, 0, 0, 1]).radial_derivative(), ints(&[0, 0, 0, 3]));
        assert_eq!(ints(&[1, 2, 5]).radial_derivative(), ints(&[0, 2, 10]));
    }

    #[test]
    fn shift_keeps_truncation() {
        assert_eq!(ints(&[1, 2, 3]).shift(2), ints(&[0, 0, 1]));
    }
}
