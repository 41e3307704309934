//! The Θ-frame `{Z_∞, Z_0, Z_1, Z_1̄} = {ρ∂_ρ, ρ²T, ρZ_1, ρZ_1̄}` over a
//! background: frame derivatives of series, the extended Tanaka–Webster
//! connection, its torsion and curvature.
//!
//! The extended connection is diagonal, `∇̄_I Z_J = γ(I, J) Z_J`, so
//! covariant derivatives reduce to a frame derivative minus a scalar
//! connection factor per word.

use super::index::{conj, Ix, ALL, BAR, INF, ONE, ZERO};
use super::tensor::Dense;
use crate::cr::Background;
use crate::error::Result;
use crate::field::FieldValue;
use crate::scalar::Coeff;
use crate::series::JetSeries;

/// Θ-frame calculus at a fixed truncation order.
#[derive(Clone, Debug)]
pub struct ThetaFrame<'a, C: Coeff> {
    pub bg: &'a Background<C>,
    pub order: usize,
    gamma: [[JetSeries<C>; 4]; 4],
    comm: Dense<C>,
}

impl<'a, C: Coeff> ThetaFrame<'a, C> {
    pub fn new(bg: &'a Background<C>, order: usize) -> Self {
        let n = order;
        let mono = |f: &FieldValue<C>, k: usize| JetSeries::monomial(f.clone(), k, n);
        let cst = |v: i64| JetSeries::constant(C::from_i64(v), n);
        let zero = || JetSeries::zero(n);
        let mut gamma: [[JetSeries<C>; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| zero()));
        gamma[INF] = [cst(1), cst(2), cst(1), cst(1)];
        gamma[ZERO][ONE] = mono(&bg.omega_t, 2);
        gamma[ZERO][BAR] = mono(&bg.omega_t.conj(), 2);
        gamma[ONE][ONE] = mono(&bg.omega_1, 1);
        gamma[ONE][BAR] = mono(&bg.omega_1bar.conj(), 1);
        gamma[BAR][ONE] = mono(&bg.omega_1bar, 1);
        gamma[BAR][BAR] = mono(&bg.omega_1.conj(), 1);

        // [Z_1, Z_1̄] = −iZ_0 + ρc Z_1 − ρc̄ Z_1̄ and [Z_0, Z_1] = ρ²(b Z_1 − A Z_1̄).
        let c = bg.omega_1bar.neg();
        let b = &bg.omega_t;
        let a = &bg.a11;
        let mut comm = Dense::zeros(3, n);
        let mut put = |i: Ix, j: Ix, k: Ix, s: JetSeries<C>| {
            comm.set(&[j, i, k], s.neg());
            comm.set(&[i, j, k], s);
        };
        put(INF, ZERO, ZERO, cst(2));
        put(INF, ONE, ONE, cst(1));
        put(INF, BAR, BAR, cst(1));
        put(ZERO, ONE, ONE, mono(b, 2));
        put(ZERO, ONE, BAR, mono(&a.neg(), 2));
        put(ZERO, BAR, BAR, mono(&b.conj(), 2));
        put(ZERO, BAR, ONE, mono(&a.conj().neg(), 2));
        put(ONE, BAR, ZERO, JetSeries::constant(C::imag_unit().neg(), n));
        put(ONE, BAR, ONE, mono(&c, 1));
        put(ONE, BAR, BAR, mono(&c.conj().neg(), 1));
        Self { bg, order, gamma, comm }
    }

    /// Connection coefficient `Γ̄_{IJ}{}^J`.
    pub fn gamma(&self, i: Ix, j: Ix) -> &JetSeries<C> {
        &self.gamma[i][j]
    }

    /// Structure function `C_{IJ}{}^K` of `[Z_I, Z_J] = C_{IJ}{}^K Z_K`.
    pub fn commutator(&self, i: Ix, j: Ix, k: Ix) -> &JetSeries<C> {
        self.comm.get(&[i, j, k])
    }

    /// `(Z_∞ s, Z_0 s, Z_1 s, Z_1̄ s)`.
    pub fn derivs(&self, s: &JetSeries<C>) -> Result<[JetSeries<C>; 4]> {
        let n = s.order();
        let mut out: [Vec<FieldValue<C>>; 3] = std::array::from_fn(|_| vec![FieldValue::zero(); n + 1]);
        if self.bg.frame.is_some() {
            for k in 0..n {
                let c = s.coeff(k);
                if c.is_const_zero() || c.geom().is_none() {
                    continue;
                }
                let [t, z1, z1b] = self.bg.derivs(c)?;
                if k + 2 <= n {
                    out[0][k + 2] = t;
                }
                out[1][k + 1] = z1;
                out[2][k + 1] = z1b;
            }
        }
        let [d0, d1, d1b] = out;
        Ok([s.radial_derivative(), JetSeries::from_coeffs(d0), JetSeries::from_coeffs(d1), JetSeries::from_coeffs(d1b)])
    }

    /// `Z_I s`.
    pub fn deriv(&self, i: Ix, s: &JetSeries<C>) -> Result<JetSeries<C>> {
        if i == INF {
            return Ok(s.radial_derivative());
        }
        Ok(self.derivs(s)?[i].clone())
    }

    /// `Σ_lower γ(I, w) − Σ_upper γ(I, w)`: what `∇̄_I` subtracts from `Z_I` on a component.
    pub fn connection_factor(&self, i: Ix, word: &[Ix], upper: &[bool]) -> JetSeries<C> {
        let mut acc = JetSeries::zero(self.order);
        for (s, &w) in word.iter().enumerate() {
            let g = &self.gamma[i][w];
            if g.is_structurally_zero() {
                continue;
            }
            if upper[s] {
                acc = &acc - g;
            } else {
                acc = &acc + g;
            }
        }
        acc
    }

    /// `∇̄` of a real tensor; the derivative index comes first in the result.
    pub fn cov_derivative(&self, t: &Dense<C>, upper: &[bool]) -> Result<Dense<C>> {
        let mut derivs: Vec<Option<[JetSeries<C>; 4]>> = vec![None; t.len()];
        let rank = t.rank;
        Dense::build(rank + 1, self.order, |w| {
            let (i, rest) = (w[0], &w[1..]);
            let code = super::index::encode(rest);
            let comp = t.at(code);
            if derivs[code].is_none() {
                derivs[code] = Some(self.derivs(comp)?);
            }
            let mut out = derivs[code].as_ref().expect("derivatives cached above")[i].clone();
            let f = self.connection_factor(i, rest, upper);
            if !f.is_structurally_zero() {
                out.add_product(&f.neg(), comp);
            }
            Ok(out)
        })
    }

    /// Extended torsion `T̄_{IJ}{}^K = Γ̄_{IJ}{}^K − Γ̄_{JI}{}^K − C_{IJ}{}^K`, stored as `[I, J, K]`.
    pub fn torsion(&self) -> Result<Dense<C>> {
        Dense::build(3, self.order, |w| {
            let (i, j, k) = (w[0], w[1], w[2]);
            let mut s = self.commutator(i, j, k).neg();
            if j == k {
                s = &s + &self.gamma[i][j];
            }
            if i == k {
                s = &s - &self.gamma[j][i];
            }
            Ok(s)
        })
    }

    /// Extended curvature `R̄_I{}^J{}_{KL}`, stored as `[I, J, K, L]`: only the
    /// `1 1` block (and its conjugate) is nonzero.
    pub fn curvature(&self) -> Result<Dense<C>> {
        let n = self.order;
        let bg = self.bg;
        let mut r = Dense::zeros(4, n);
        let scal = JetSeries::monomial(bg.scal.clone(), 2, n);
        let a1 = JetSeries::monomial(bg.a11_1bar.neg(), 3, n);
        let a1b = JetSeries::monomial(bg.a11_1bar.conj(), 3, n);
        for (k, l, s) in [(ONE, BAR, scal), (ZERO, ONE, a1), (ZERO, BAR, a1b)] {
            r.set(&[ONE, ONE, l, k], s.neg());
            r.set(&[BAR, BAR, conj(l), conj(k)], s.conj().neg());
            r.set(&[BAR, BAR, conj(k), conj(l)], s.conj());
            r.set(&[ONE, ONE, k, l], s);
        }
        Ok(r)
    }

    /// Independent evaluation of `R̄` from the connection and the commutators:
    /// `R̄_I{}^I{}_{KL} = Z_K γ(L, I) − Z_L γ(K, I) − C_{KL}{}^M γ(M, I)`.
    pub fn curvature_from_connection(&self) -> Result<Dense<C>> {
        let mut r = Dense::zeros(4, self.order);
        for i in ALL {
            for k in ALL {
                for l in ALL {
                    let mut s = &self.deriv(k, &self.gamma[l][i])? - &self.deriv(l, &self.gamma[k][i])?;
                    for m in ALL {
                        s.add_product(&self.commutator(k, l, m).neg(), &self.gamma[m][i]);
                    }
                    r.set(&[i, i, k, l], s);
                }
            }
        }
        Ok(r)
    }
}
