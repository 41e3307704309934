//! Exact curvature of a normal-form metric in the Θ-frame: difference tensor
//! to the extended connection, Riemann, Ricci, Einstein, Schouten, Weyl, the
//! volume form, and the anti-self-dual parts of Weyl and Cotton.

use super::frame::ThetaFrame;
use super::index::{Ix, ALL, BAR, INF, ONE, ZERO};
use super::metric::{inverse_metric, metric_determinant, MetricAnsatz};
use super::tensor::Dense;
use crate::cr::Background;
use crate::error::Result;
use crate::scalar::Coeff;
use crate::series::JetSeries;

/// Curvature data of one metric ansatz over one background.
#[derive(Clone, Debug)]
pub struct Geometry<'a, C: Coeff> {
    pub frame: ThetaFrame<'a, C>,
    pub order: usize,
    /// `g_IJ`.
    pub g: Dense<C>,
    /// `g^IJ`.
    pub ginv: Dense<C>,
    /// `T̄_{IJ}{}^K`.
    pub torsion: Dense<C>,
    /// `R̄_I{}^J{}_{KL}`.
    pub rbar: Dense<C>,
    /// `D_{IJ}{}^K`, with `∇ = ∇̄ + D` the Levi-Civita connection.
    pub d: Dense<C>,
    /// `R_I{}^J{}_{KL}`.
    pub riemann: Dense<C>,
    /// `Ric_IJ = R_J{}^K{}_{KI}`.
    pub ricci: Dense<C>,
    /// `E_IJ = Ric_IJ + (3/2) g_IJ`.
    pub einstein: Dense<C>,
}

fn sum<C: Coeff>(order: usize, terms: impl IntoIterator<Item = (JetSeries<C>, JetSeries<C>)>) -> JetSeries<C> {
    let mut acc = JetSeries::zero(order);
    for (a, b) in terms {
        acc.add_product(&a, &b);
    }
    acc
}

/// `(ε_{KL}{}^{PQ})_{P<Q}` for fixed `K ≠ L`.
type HodgeRow<C> = Vec<(Ix, Ix, JetSeries<C>)>;
type HodgeRows<C> = Vec<((Ix, Ix), HodgeRow<C>)>;

/// Metric, inverse metric and difference tensor: enough for the Levi-Civita
/// connection without the curvature stack.
#[derive(Clone, Debug)]
pub struct LeviCivita<'a, C: Coeff> {
    pub frame: ThetaFrame<'a, C>,
    pub order: usize,
    pub g: Dense<C>,
    pub ginv: Dense<C>,
    pub torsion: Dense<C>,
    /// `D_{IJ}{}^K`, with `∇ = ∇̄ + D`.
    pub d: Dense<C>,
}

impl<'a, C: Coeff> LeviCivita<'a, C> {
    pub fn new(bg: &'a Background<C>, ansatz: &MetricAnsatz<C>) -> Result<Self> {
        ansatz.validate()?;
        let n = ansatz.order();
        let frame = ThetaFrame::new(bg, n);
        let g = ansatz.metric();
        let ginv = inverse_metric(&g)?;
        let torsion = frame.torsion()?;

        // ∇̄_I g_JK as [I, J, K].
        let dg = frame.cov_derivative(&g, &[false, false])?;
        let t_low = Dense::build(3, n, |w| {
            Ok(sum(n, ALL.map(|m| (torsion.get(&[w[0], w[1], m]).clone(), g.get(&[m, w[2]]).clone()))))
        })?;
        let half = C::ratio(1, 2);
        let d_low = Dense::build(3, n, |w| {
            let (i, j, k) = (w[0], w[1], w[2]);
            let mut s = dg.get(&[i, j, k]) + dg.get(&[j, k, i]);
            s = &s - dg.get(&[k, i, j]);
            s = &s - t_low.get(&[i, j, k]);
            s = &s + t_low.get(&[j, k, i]);
            s = &s - t_low.get(&[k, i, j]);
            Ok(s.scale(&half))
        })?;
        let d = Dense::build(3, n, |w| {
            Ok(sum(n, ALL.map(|m| (d_low.get(&[w[0], w[1], m]).clone(), ginv.get(&[m, w[2]]).clone()))))
        })?;
        Ok(Self { frame, order: n, g, ginv, torsion, d })
    }
}

impl<'a, C: Coeff> Geometry<'a, C> {
    pub fn new(bg: &'a Background<C>, ansatz: &MetricAnsatz<C>) -> Result<Self> {
        let LeviCivita { frame, order: n, g, ginv, torsion, d } = LeviCivita::new(bg, ansatz)?;
        let rbar = frame.curvature()?;

        // ∇̄_K D_{LI}{}^J as [K, L, I, J].
        let dd = frame.cov_derivative(&d, &[false, false, true])?;
        let riemann = Dense::build_antisym(4, n, (2, 3), |w| {
            let (i, j, k, l) = (w[0], w[1], w[2], w[3]);
            let mut s = rbar.get(w) + dd.get(&[k, l, i, j]);
            s = &s - dd.get(&[l, k, i, j]);
            for m in ALL {
                s.add_product(d.get(&[k, m, j]), d.get(&[l, i, m]));
                s.add_product(&d.get(&[l, m, j]).neg(), d.get(&[k, i, m]));
                s.add_product(torsion.get(&[k, l, m]), d.get(&[m, i, j]));
            }
            Ok(s)
        })?;
        let ricci = Dense::build(2, n, |w| {
            let mut s = JetSeries::zero(n);
            for k in ALL {
                s.add_assign(riemann.get(&[w[1], k, k, w[0]]));
            }
            Ok(s)
        })?;
        let three_halves = C::ratio(3, 2);
        let einstein = Dense::build(2, n, |w| Ok(ricci.get(w) + &g.get(w).scale(&three_halves)))?;
        Ok(Self { frame, order: n, g, ginv, torsion, rbar, d, riemann, ricci, einstein })
    }

    /// Difference tensor with all indices lowered, `D_IJK`.
    pub fn difference_lowered(&self) -> Result<Dense<C>> {
        let n = self.order;
        Dense::build(3, n, |w| {
            Ok(sum(n, ALL.map(|m| (self.d.get(&[w[0], w[1], m]).clone(), self.g.get(&[m, w[2]]).clone()))))
        })
    }

    /// `R_IJKL = g_JM R_I{}^M{}_{KL}`.
    pub fn riemann_lowered(&self) -> Result<Dense<C>> {
        let n = self.order;
        Dense::build_antisym(4, n, (2, 3), |w| Ok(self.riemann_lowered_component(w)))
    }

    fn riemann_lowered_component(&self, w: &[Ix]) -> JetSeries<C> {
        let (i, j, k, l) = (w[0], w[1], w[2], w[3]);
        sum(self.order, ALL.map(|m| (self.g.get(&[j, m]).clone(), self.riemann.get(&[i, m, k, l]).clone())))
    }

    /// Scalar curvature `g^IJ Ric_IJ`.
    pub fn scalar_curvature(&self) -> JetSeries<C> {
        let mut s = JetSeries::zero(self.order);
        for i in ALL {
            for j in ALL {
                s.add_product(self.ginv.get(&[i, j]), self.ricci.get(&[i, j]));
            }
        }
        s
    }

    /// `P_IJ = ½ Ric_IJ − (scal/12) g_IJ`.
    pub fn schouten(&self) -> Result<Dense<C>> {
        let scal = self.scalar_curvature().scale(&C::ratio(-1, 12));
        let half = C::ratio(1, 2);
        Dense::build(2, self.order, |w| Ok(&self.ricci.get(w).scale(&half) + &(&scal * self.g.get(w))))
    }

    /// Weyl tensor `W_IJKL = R_IJKL + g_IK P_JL − g_JK P_IL + g_JL P_IK − g_IL P_JK`.
    pub fn weyl(&self) -> Result<Dense<C>> {
        let p = self.schouten()?;
        Dense::build_antisym(4, self.order, (2, 3), |w| Ok(self.weyl_component_with(&p, w)))
    }

    fn weyl_component_with(&self, p: &Dense<C>, w: &[Ix]) -> JetSeries<C> {
        let (i, j, k, l) = (w[0], w[1], w[2], w[3]);
        let g = |a: Ix, b: Ix| self.g.get(&[a, b]);
        let p = |a: Ix, b: Ix| p.get(&[a, b]);
        let mut s = self.riemann_lowered_component(w);
        s.add_product(g(i, k), p(j, l));
        s.add_product(&g(j, k).neg(), p(i, l));
        s.add_product(g(j, l), p(i, k));
        s.add_product(&g(i, l).neg(), p(j, k));
        s
    }

    /// `ε_{0 1 1̄ ∞} = i (−det g)^{1/2}`.
    pub fn volume_component(&self) -> Result<JetSeries<C>> {
        Ok(metric_determinant(&self.g).neg().sqrt()?.scale(&C::imag_unit()))
    }

    /// Totally antisymmetric volume form `ε_IJKL`.
    pub fn volume_form(&self) -> Result<Dense<C>> {
        let e = self.volume_component()?;
        let mut t = Dense::zeros(4, self.order);
        for code in 0..t.len() {
            let w = super::index::decode(code, 4);
            if let Some(sign) = permutation_sign(&w) {
                t.set(&w, if sign > 0 { e.clone() } else { e.neg() });
            }
        }
        Ok(t)
    }

    /// `ε_{KL}{}^{PQ}` for every pair `K < L`, listed over `P < Q`.
    fn hodge_rows(&self) -> Result<HodgeRows<C>> {
        let e = self.volume_component()?;
        let mut rows = Vec::new();
        for k in ALL {
            for l in ALL {
                if k >= l {
                    continue;
                }
                let rest: Vec<Ix> = ALL.into_iter().filter(|&x| x != k && x != l).collect();
                let (a, b) = (rest[0], rest[1]);
                let sign = permutation_sign(&[k, l, a, b]).expect("distinct indices");
                let e_klab = if sign > 0 { e.clone() } else { e.neg() };
                let mut row = Vec::new();
                for p in ALL {
                    for q in ALL {
                        if p >= q {
                            continue;
                        }
                        let gi = |x: Ix, y: Ix| self.ginv.get(&[x, y]);
                        let mut s = gi(p, a) * gi(q, b);
                        s = &s - &(gi(p, b) * gi(q, a));
                        if !s.is_structurally_zero() {
                            row.push((p, q, &e_klab * &s));
                        }
                    }
                }
                rows.push(((k, l), row));
            }
        }
        Ok(rows)
    }

    /// `½ ε_{KL}{}^{PQ} X_{..PQ}` applied to the last two slots of `x`.
    fn hodge_last_pair(&self, x: &Dense<C>) -> Result<Dense<C>> {
        let rows = self.hodge_rows()?;
        let rank = x.rank;
        Dense::build_antisym(rank, self.order, (rank - 2, rank - 1), |w| {
            let (k, l) = (w[rank - 2], w[rank - 1]);
            let row = &rows.iter().find(|(kl, _)| *kl == (k, l)).expect("rows cover K < L").1;
            let mut s = JetSeries::zero(self.order);
            let mut ww = w.to_vec();
            for (p, q, e) in row {
                ww[rank - 2] = *p;
                ww[rank - 1] = *q;
                s.add_product(e, x.get(&ww));
            }
            Ok(s)
        })
    }

    /// `W^-_IJKL = ½ (W_IJKL − ½ ε_{KL}{}^{PQ} W_IJPQ)`.
    pub fn weyl_asd(&self) -> Result<Dense<C>> {
        let w = self.weyl()?;
        let star = self.hodge_last_pair(&w)?;
        anti_self_dual_part(&w, &star)
    }

    /// One component of `W^-`, without assembling the full tensor.
    pub fn weyl_asd_component(&self, word: &[Ix]) -> Result<JetSeries<C>> {
        let (k, l) = (word[2], word[3]);
        if k == l {
            return Ok(JetSeries::zero(self.order));
        }
        let (kk, ll, flip) = if k < l { (k, l, false) } else { (l, k, true) };
        let p = self.schouten()?;
        let rows = self.hodge_rows()?;
        let row = &rows.iter().find(|(kl, _)| *kl == (kk, ll)).expect("rows cover K < L").1;
        let mut star = JetSeries::zero(self.order);
        for (pp, qq, e) in row {
            star.add_product(e, &self.weyl_component_with(&p, &[word[0], word[1], *pp, *qq]));
        }
        if flip {
            star = star.neg();
        }
        let w = self.weyl_component_with(&p, word);
        Ok((&w - &star).scale(&C::ratio(1, 2)))
    }

    /// Levi-Civita derivative of the Schouten tensor, `∇_K P_IJ` as `[K, I, J]`.
    fn schouten_derivative(&self) -> Result<Dense<C>> {
        let p = self.schouten()?;
        let dp = self.frame.cov_derivative(&p, &[false, false])?;
        let n = self.order;
        Dense::build(3, n, |w| {
            let (k, i, j) = (w[0], w[1], w[2]);
            let mut s = dp.get(w).clone();
            for m in ALL {
                s.add_product(&self.d.get(&[k, i, m]).neg(), p.get(&[m, j]));
                s.add_product(&self.d.get(&[k, j, m]).neg(), p.get(&[i, m]));
            }
            Ok(s)
        })
    }

    /// Cotton tensor `C_IJK = ∇_K P_IJ − ∇_J P_IK`.
    pub fn cotton(&self) -> Result<Dense<C>> {
        let dp = self.schouten_derivative()?;
        Dense::build_antisym(3, self.order, (1, 2), |w| {
            let (i, j, k) = (w[0], w[1], w[2]);
            Ok(dp.get(&[k, i, j]) - dp.get(&[j, i, k]))
        })
    }

    /// `C^-_IJK = ½ (C_IJK − ½ ε_{JK}{}^{PQ} C_IPQ)`.
    pub fn cotton_asd(&self) -> Result<Dense<C>> {
        let c = self.cotton()?;
        let star = self.hodge_last_pair(&c)?;
        anti_self_dual_part(&c, &star)
    }

    /// Applies `½ ε_{KL}{}^{PQ}` to the last slot pair of an arbitrary tensor.
    pub fn hodge(&self, x: &Dense<C>) -> Result<Dense<C>> {
        self.hodge_last_pair(x)
    }
}

fn anti_self_dual_part<C: Coeff>(x: &Dense<C>, star: &Dense<C>) -> Result<Dense<C>> {
    let half = C::ratio(1, 2);
    let rank = x.rank;
    Dense::build_antisym(rank, x.order, (rank - 2, rank - 1), |w| Ok((x.get(w) - star.get(w)).scale(&half)))
}

/// Sign of the permutation taking `(0, 1, 1̄, ∞)` to `w`, or `None` if `w`
/// repeats an index.
pub fn permutation_sign(w: &[Ix]) -> Option<i32> {
    let base = [ZERO, ONE, BAR, INF];
    let mut p: Vec<usize> = Vec::with_capacity(4);
    for &x in w {
        let pos = base.iter().position(|&b| b == x)?;
        if p.contains(&pos) {
            return None;
        }
        p.push(pos);
    }
    let mut sign = 1;
    for a in 0..4 {
        for b in (a + 1)..4 {
            if p[a] > p[b] {
                sign = -sign;
            }
        }
    }
    Some(sign)
}
