//! Indicial pencil of the singular Cauchy problem behind the formal solution,
//! its product-formula determinant, and an empirical growth probe for the
//! metric coefficients.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Coeff;
use crate::solver::SolveResult;

/// Integer polynomial, coefficients in increasing degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntPoly(pub Vec<i128>);

impl IntPoly {
    pub fn eval(&self, t: i128) -> i128 {
        self.0.iter().rev().fold(0, |acc, c| acc * t + c)
    }
}

/// The six indicial polynomials, evaluated at `t = k + 9`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndicialPencil {
    pub polys: [IntPoly; 6],
}

/// Offset between the pencil parameter `k` and the order `t` it is evaluated at.
pub const PENCIL_SHIFT: i64 = 9;

impl Default for IndicialPencil {
    fn default() -> Self {
        Self {
            polys: [
                IntPoly(vec![-4, -6, 1]),
                IntPoly(vec![8, -4]),
                IntPoly(vec![4, -1]),
                IntPoly(vec![-8, -6, 1]),
                IntPoly(vec![-5, -4, 1]),
                IntPoly(vec![0, -4, 1]),
            ],
        }
    }
}

impl IndicialPencil {
    /// `P(k)`: the block `(I₁ I₂; I₃ I₄)` followed by `I₅`, `I₆` on the diagonal.
    pub fn matrix(&self, k: i64) -> Result<[[i128; 4]; 4]> {
        if k < 0 {
            return Err(Error::Invalid(format!("pencil parameter must be non-negative, got {k}")));
        }
        let t = (k + PENCIL_SHIFT) as i128;
        let v: Vec<i128> = self.polys.iter().map(|p| p.eval(t)).collect();
        Ok([[v[0], v[1], 0, 0], [v[2], v[3], 0, 0], [0, 0, v[4], 0], [0, 0, 0, v[5]]])
    }
}

pub fn indicial_matrix(k: i64) -> Result<[[i128; 4]; 4]> {
    IndicialPencil::default().matrix(k)
}

/// Exact determinant by cofactor expansion.
pub fn determinant(m: &[[i128; 4]; 4]) -> i128 {
    fn minor(m: &[Vec<i128>]) -> i128 {
        if m.len() == 1 {
            return m[0][0];
        }
        let mut det = 0;
        for (c, &a) in m[0].iter().enumerate() {
            if a == 0 {
                continue;
            }
            let sub: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            det += sign * a * minor(&sub);
        }
        det
    }
    minor(&m.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

/// `(k+1)(k+3)(k+4)(k+5)(k+9)²(k+10)(k+11)`.
pub fn product_formula(k: i64) -> i128 {
    let k = k as i128;
    (k + 1) * (k + 3) * (k + 4) * (k + 5) * (k + 9) * (k + 9) * (k + 10) * (k + 11)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetEntry {
    pub k: i64,
    pub det: i128,
    pub product: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetReport {
    pub entries: Vec<DetEntry>,
    pub matches: usize,
    pub all_equal: bool,
    pub all_nonzero: bool,
}

/// Compares `det P(k)` with the product formula for `0 ≤ k ≤ kmax`.
pub fn det_product_check(kmax: i64) -> Result<DetReport> {
    if kmax < 0 {
        return Err(Error::Invalid(format!("kmax must be non-negative, got {kmax}")));
    }
    let entries: Vec<DetEntry> = (0..=kmax)
        .map(|k| Ok(DetEntry { k, det: determinant(&indicial_matrix(k)?), product: product_formula(k) }))
        .collect::<Result<_>>()?;
    let matches = entries.iter().filter(|e| e.det == e.product).count();
    Ok(DetReport {
        all_equal: matches == entries.len(),
        all_nonzero: entries.iter().all(|e| e.det != 0),
        matches,
        entries,
    })
}

/// First order used in the growth fit; lower orders are structurally constrained.
pub const GROWTH_FIT_START: usize = 6;

/// Geometric fit of the metric coefficient norms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthProbe {
    /// `max(‖φ^(j)‖_∞)` over the four metric components, per order.
    pub norms: Vec<f64>,
    /// The coefficients vanish identically or from some order on.
    pub terminating: bool,
    /// Fitted per-order growth factor `R` in `‖g^(j)‖ ≈ C·R^j`.
    pub ratio: Option<f64>,
    /// Fitted `log C`.
    pub offset: Option<f64>,
    /// RMS residual of the fit in log space.
    pub residual: Option<f64>,
    /// Orders that entered the fit.
    pub fitted_orders: Vec<usize>,
}

/// Least-squares fit of `log‖g^(j)‖` against `j` for `j ≥ 6`, skipping
/// vanishing orders. A series whose last two orders vanish is reported as
/// terminating.
pub fn growth_probe<C: Coeff>(result: &SolveResult<C>) -> Result<GrowthProbe> {
    let norms: Vec<f64> = (0..=result.order)
        .map(|j| result.ansatz.named().iter().map(|(_, s)| s.coeff(j).max_norm()).fold(0.0, f64::max))
        .collect();
    // Vanishing top two orders: the series stops (both parities are zero).
    let n = norms.len();
    if norms.iter().all(|&x| x == 0.0) || (n >= 2 && norms[n - 1] == 0.0 && norms[n - 2] == 0.0) {
        return Ok(GrowthProbe {
            norms,
            terminating: true,
            ratio: None,
            offset: None,
            residual: None,
            fitted_orders: vec![],
        });
    }
    let points: Vec<(usize, f64)> =
        norms.iter().enumerate().skip(GROWTH_FIT_START).filter(|(_, &x)| x > 0.0).map(|(j, &x)| (j, x.ln())).collect();
    if points.len() < 3 {
        return Err(Error::Invalid(format!(
            "growth fit needs three nonvanishing orders from {GROWTH_FIT_START}, found {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let offset = my - slope * mx;
    let rss: f64 = points.iter().map(|p| (p.1 - offset - slope * p.0 as f64).powi(2)).sum();
    Ok(GrowthProbe {
        norms,
        terminating: false,
        ratio: Some(slope.exp()),
        offset: Some(offset),
        residual: Some((rss / n).sqrt()),
        fitted_orders: points.iter().map(|p| p.0).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pencil_at_k_zero() {
        let m = indicial_matrix(0).unwrap();
        assert_eq!(m[0][..2], [23, -28]);
        assert_eq!(m[1][..2], [-5, 19]);
        assert_eq!((m[2][2], m[3][3]), (40, 45));
        assert_eq!(determinant(&m), 534_600);
        assert_eq!(product_formula(1), 3_168_000);
        assert!(indicial_matrix(-1).is_err());
    }

    #[test]
    fn cofactor_determinant_of_a_full_matrix() {
        let m = [[2, -1, 0, 3], [1, 4, -2, 0], [0, 5, 1, -1], [3, 0, 2, 1]];
        // Reference value from an independent computer-algebra evaluation.
        assert_eq!(determinant(&m), -103);
    }
}
