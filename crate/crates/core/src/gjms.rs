//! CR GJMS operators from the eigenvalue recursion of the Laplacian of a
//! solved metric.
//!
//! For `u = ρ^{2−k} F`, `F = Σ f^(j) ρ^j`, the equation `(Δ + k²/4 − 1)u = 0`
//! fixes `f^(1..2k−1)` from `f^(0) = f`; the order-`2k` coefficient cannot be
//! solved and becomes the log term, whose boundary value is the operator.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cr::Background;
use crate::error::{Error, Result};
use crate::field::FieldValue;
use crate::scalar::Coeff;
use crate::series::JetSeries;
use crate::solver::SolveResult;
use crate::theta::index::ALL;
use crate::theta::{LeviCivita, MetricAnsatz, INF};

/// One operator evaluation.
#[derive(Clone, Debug)]
pub struct GjmsRequest<'a, C: Coeff> {
    pub k: usize,
    pub f: FieldValue<C>,
    pub source: &'a SolveResult<C>,
    pub background: &'a Background<C>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GjmsOutput<C: Coeff> {
    pub k: usize,
    /// `P_{2k} f`.
    pub pf: FieldValue<C>,
    /// Boundary value of the log coefficient `G`.
    pub log_coefficient: FieldValue<C>,
    /// `f^(0..2k−1)`.
    pub recursion: Vec<FieldValue<C>>,
    /// Leading factors `−j(j−2k)/4` for `j = 0..=2k`; the last one vanishes.
    pub indicial_factors: Vec<C>,
}

impl<C: Coeff> GjmsOutput<C> {
    pub fn to_json(&self, lambda: &C) -> Value {
        json!({
            "k": self.k,
            "lambda": lambda.to_json(),
            "Pf": self.pf.to_json(),
            "G": self.log_coefficient.to_json(),
            "recursion": self.recursion.iter().map(FieldValue::to_json).collect::<Vec<_>>(),
            "indicial_factors": self.indicial_factors.iter().map(Coeff::to_json).collect::<Vec<_>>(),
        })
    }
}

/// `(−1)^{k+1} k!(k−1)!/2`, the factor turning `G|_M` into `P_{2k} f`.
pub fn normalization<C: Coeff>(k: usize) -> C {
    let mut num = C::one();
    for j in 1..=k {
        num = num.mul(&C::from_i64(j as i64));
    }
    for j in 1..k {
        num = num.mul(&C::from_i64(j as i64));
    }
    let half = num.mul(&C::ratio(1, 2));
    if k.is_multiple_of(2) {
        half.neg()
    } else {
        half
    }
}

/// Leading factor `−j(j−2k)/4` of the recursion at step `j`.
pub fn indicial_factor<C: Coeff>(k: usize, j: usize) -> C {
    let (j, k) = (j as i64, k as i64);
    C::ratio(-j * (j - 2 * k), 4)
}

/// `ρ^{−s}(Δ + k²/4 − 1)(ρ^s F)` with `Δ = −g^{IJ}∇_I∇_J`.
pub fn shifted_operator<C: Coeff>(lc: &LeviCivita<'_, C>, k: usize, s: i64, f: &JetSeries<C>) -> Result<JetSeries<C>> {
    let n = lc.order;
    let f = f.extended(n).truncated(n);
    // Ẑ_I F with the ρ^s weight folded into Z_∞.
    let first = |h: &JetSeries<C>| -> Result<[JetSeries<C>; 4]> {
        let mut d = lc.frame.derivs(h)?;
        d[INF] = h.radial_shifted(s);
        Ok(d)
    };
    let df = first(&f)?;
    let second: Vec<[JetSeries<C>; 4]> = df.iter().map(first).collect::<Result<_>>()?;
    let mut lap = JetSeries::zero(n);
    for i in ALL {
        for j in ALL {
            let gij = lc.ginv.get(&[i, j]);
            if gij.is_structurally_zero() {
                continue;
            }
            // ∇_I∇_J u = Ẑ_I Ẑ_J F − (Γ̄_{IJ}{}^K + D_{IJ}{}^K) Ẑ_K F.
            let mut hess = second[j][i].clone();
            hess.add_product(&lc.frame.gamma(i, j).neg(), &df[j]);
            for kk in ALL {
                hess.add_product(&lc.d.get(&[i, j, kk]).neg(), &df[kk]);
            }
            lap.add_product(&gij.neg(), &hess);
        }
    }
    let kk = k as i64;
    let shift = C::ratio(kk * kk - 4, 4);
    lap.add_assign(&f.scale(&shift));
    Ok(lap)
}

/// `(Δ + k²/4 − 1)(ρ^{2−k+j} field)` with the factor `ρ^{2−k+j}` stripped,
/// through order `order`.
pub fn laplacian_shifted_apply<C: Coeff>(
    bg: &Background<C>,
    ansatz: &MetricAnsatz<C>,
    k: usize,
    j: usize,
    field: &FieldValue<C>,
    order: usize,
) -> Result<JetSeries<C>> {
    if ansatz.order() < order {
        return Err(Error::Depth { need: order, have: ansatz.order() });
    }
    let lc = LeviCivita::new(bg, &ansatz.with_order(order))?;
    shifted_operator(&lc, k, 2 - k as i64 + j as i64, &JetSeries::from_field(field.clone(), order))
}

/// Runs the recursion and extracts `P_{2k} f`.
pub fn gjms_apply<C: Coeff>(req: &GjmsRequest<'_, C>) -> Result<GjmsOutput<C>> {
    let lc = prepare(req.source, req.background, req.k)?;
    apply_with(&lc, req.k, &req.f)
}

fn prepare<'a, C: Coeff>(source: &SolveResult<C>, bg: &'a Background<C>, k: usize) -> Result<LeviCivita<'a, C>> {
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    if source.background != bg.label {
        return Err(Error::Invalid(format!(
            "solve result belongs to background `{}`, not `{}`",
            source.background, bg.label
        )));
    }
    let need = 2 * k + 2;
    if source.order < need {
        return Err(Error::Depth { need, have: source.order });
    }
    LeviCivita::new(bg, &source.ansatz.with_order(2 * k))
}

fn apply_with<C: Coeff>(lc: &LeviCivita<'_, C>, k: usize, f: &FieldValue<C>) -> Result<GjmsOutput<C>> {
    let n = 2 * k;
    let s = 2 - k as i64;
    // Accumulated residual ρ^{−s}(Δ + k²/4 − 1)(ρ^s F) of the partial sum F.
    let mut residual = JetSeries::zero(n);
    let mut recursion = Vec::with_capacity(n);
    let mut current = f.clone();
    for j in 0..n {
        if j > 0 {
            // The coefficient vanishes only at j = 0 and j = 2k.
            let factor = indicial_factor::<C>(k, j);
            let inv = factor.inv().ok_or(Error::Singular(j))?;
            current = residual.coeff(j).scale(&inv.neg());
        }
        let term = JetSeries::monomial(current.clone(), j, n);
        residual.add_assign(&shifted_operator(lc, k, s, &term)?);
        recursion.push(current.clone());
    }
    // At j = 2k the residual is balanced by the log term:
    // (Δ + k²/4 − 1)(ρ^{k+2} log ρ G) = −(k/2) ρ^{k+2} G + O(ρ^{k+3}) + log terms.
    let g = residual.coeff(n).scale(&C::ratio(2, k as i64));
    let pf = g.scale(&normalization::<C>(k));
    let indicial_factors = (0..=n).map(|j| indicial_factor::<C>(k, j)).collect();
    Ok(GjmsOutput { k, pf, log_coefficient: g, recursion, indicial_factors })
}

/// `M_ij = ∫ conj(b_i) · P_{2k} b_j · θ∧dθ` on the background grid.
pub fn gjms_matrix<C: Coeff>(
    source: &SolveResult<C>,
    bg: &Background<C>,
    k: usize,
    basis: &[FieldValue<C>],
) -> Result<Vec<Vec<C>>> {
    let frame =
        bg.frame.as_ref().ok_or_else(|| Error::Invalid("the operator matrix needs a grid background".into()))?;
    let geom = frame.geom;
    let cell = C::from_c64(num_complex::Complex64::new(geom.cell_volume(), 0.0));
    let weight = frame.volume.scale(&cell);
    let lc = prepare(source, bg, k)?;
    let images: Vec<FieldValue<C>> =
        basis.par_iter().map(|b| apply_with(&lc, k, b).map(|o| o.pf)).collect::<Result<_>>()?;
    let weighted: Vec<FieldValue<C>> =
        basis.iter().map(|b| (&b.conj() * &weight).on_grid(geom)).collect::<Result<_>>()?;
    let mut m = vec![vec![C::zero(); basis.len()]; basis.len()];
    for (i, wi) in weighted.iter().enumerate() {
        for (j, pj) in images.iter().enumerate() {
            let pj = pj.on_grid(geom)?;
            let (a, b) = (wi.samples().expect("grid field"), pj.samples().expect("grid field"));
            m[i][j] = a.iter().zip(b).fold(C::zero(), |acc, (x, y)| acc.add(&x.mul(y)));
        }
    }
    Ok(m)
}

/// `‖M − M*‖ / ‖M‖` in the max norm.
pub fn hermitian_defect<C: Coeff>(m: &[Vec<C>]) -> f64 {
    let mut defect: f64 = 0.0;
    let mut size: f64 = 0.0;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            size = size.max(x.magnitude());
            defect = defect.max(x.sub(&m[j][i].conj()).magnitude());
        }
    }
    if size == 0.0 {
        0.0
    } else {
        defect / size
    }
}
