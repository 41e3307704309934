//! Normal-form metric ansatz and its inverse.

use super::index::{Ix, BAR, INF, ONE, ZERO};
use super::tensor::Dense;
use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::series::JetSeries;

/// `g_∞∞ = 4`, `g_00 = 1 + φ_00`, `g_01 = φ_01`, `g_11 = φ_11`,
/// `g_11̄ = 1 + φ_11̄`, all other independent components zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricAnsatz<C: Coeff> {
    pub phi00: JetSeries<C>,
    pub phi11bar: JetSeries<C>,
    pub phi01: JetSeries<C>,
    pub phi11: JetSeries<C>,
}

impl<C: Coeff> MetricAnsatz<C> {
    pub fn zero(order: usize) -> Self {
        Self {
            phi00: JetSeries::zero(order),
            phi11bar: JetSeries::zero(order),
            phi01: JetSeries::zero(order),
            phi11: JetSeries::zero(order),
        }
    }

    pub fn order(&self) -> usize {
        self.phi00.order()
    }

    /// Checks the normal-form constraints: vanishing ρ⁰ terms and reality of
    /// `φ_00`, `φ_11̄`.
    pub fn validate(&self) -> Result<()> {
        for (name, s) in self.named() {
            if !s.coeff(0).is_zero() {
                return Err(Error::Invalid(format!("{name} must vanish at ρ = 0")));
            }
        }
        for (name, s) in [("phi00", &self.phi00), ("phi11bar", &self.phi11bar)] {
            if s.coeffs().iter().any(|c| c.imag_part().max_norm() > 0.0) {
                return Err(Error::Invalid(format!("{name} must be real")));
            }
        }
        Ok(())
    }

    pub fn named(&self) -> [(&'static str, &JetSeries<C>); 4] {
        [("g00", &self.phi00), ("g01", &self.phi01), ("g11", &self.phi11), ("g11bar", &self.phi11bar)]
    }

    /// Same ansatz at another truncation order.
    pub fn with_order(&self, order: usize) -> Self {
        let f = |s: &JetSeries<C>| s.extended(order).truncated(order);
        Self { phi00: f(&self.phi00), phi11bar: f(&self.phi11bar), phi01: f(&self.phi01), phi11: f(&self.phi11) }
    }

    /// Assembled metric `g_IJ`.
    pub fn metric(&self) -> Dense<C> {
        let n = self.order();
        let one = JetSeries::constant(C::one(), n);
        let mut g = Dense::zeros(2, n);
        g.set(&[INF, INF], JetSeries::constant(C::from_i64(4), n));
        g.set(&[ZERO, ZERO], &one + &self.phi00);
        let sym = |g: &mut Dense<C>, i: Ix, j: Ix, s: JetSeries<C>| {
            g.set(&[j, i], s.clone());
            g.set(&[i, j], s);
        };
        sym(&mut g, ZERO, ONE, self.phi01.clone());
        sym(&mut g, ZERO, BAR, self.phi01.conj());
        g.set(&[ONE, ONE], self.phi11.clone());
        g.set(&[BAR, BAR], self.phi11.conj());
        sym(&mut g, ONE, BAR, &one + &self.phi11bar);
        g
    }
}

/// Inverse metric `g^IJ` via the adjugate of the `(0, 1, 1̄)` block.
pub fn inverse_metric<C: Coeff>(g: &Dense<C>) -> Result<Dense<C>> {
    let n = g.order;
    let b = [ZERO, ONE, BAR];
    let m = |r: usize, c: usize| g.get(&[b[r], b[c]]);
    let cof = |r: usize, c: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
        &(m(r1, c1) * m(r2, c2)) - &(m(r1, c2) * m(r2, c1))
    };
    let mut det = JetSeries::zero(n);
    for c in 0..3 {
        det.add_product(m(0, c), &cof(0, c));
    }
    let inv_det = det.inverse()?;
    let mut out = Dense::zeros(2, n);
    out.set(&[INF, INF], g.get(&[INF, INF]).inverse()?);
    for r in 0..3 {
        for c in 0..3 {
            // (M^{-1})_{rc} = cof(c, r) / det.
            out.set(&[b[r], b[c]], &cof(c, r) * &inv_det);
        }
    }
    Ok(out)
}

/// `det g_IJ` over all four indices.
pub fn metric_determinant<C: Coeff>(g: &Dense<C>) -> JetSeries<C> {
    let b = [ZERO, ONE, BAR];
    let m = |r: usize, c: usize| g.get(&[b[r], b[c]]);
    let mut det = JetSeries::zero(g.order);
    for (c, (c1, c2)) in [(0, (1, 2)), (1, (2, 0)), (2, (0, 1))] {
        let minor = &(m(1, c1) * m(2, c2)) - &(m(1, c2) * m(2, c1));
        det.add_product(m(0, c), &minor);
    }
    &det * g.get(&[INF, INF])
}
