//! Post-solve reports: residual orders, parity of the coefficients, and the
//! polynomial dependence on λ across a sweep.

use serde::Serialize;

use super::{SolveResult, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::field::FieldValue;
use crate::scalar::{Coeff, Mode};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    /// First order at which `E` exceeds tolerance (`None`: vanishes through N).
    pub einstein_residual_order: Option<usize>,
    /// First order at which `W^-` exceeds tolerance.
    pub weyl_valuation: Option<usize>,
    /// Largest coefficient of wrong parity: odd orders of `g_00`, `g_11`,
    /// `g_11̄` and even orders of `g_01`.
    pub parity_defect: f64,
    pub parity_ok: bool,
    /// Largest relative residual recorded during the solve.
    pub max_relative_residual: f64,
}

fn tol_for<C: Coeff>() -> f64 {
    if C::MODE == Mode::Exact {
        0.0
    } else {
        DEFAULT_TOL
    }
}

/// Parity tolerance in float mode.
pub const PARITY_TOL: f64 = 1e-10;

pub fn verify<C: Coeff>(result: &SolveResult<C>) -> VerifyReport {
    let tol = tol_for::<C>();
    let scale = result.obstruction.scale(&result.lambda).max_norm().max(1.0);
    let first_above = |v: &[f64], s: f64| v.iter().position(|&x| x / s > tol);
    let a = &result.ansatz;
    let mut parity_defect: f64 = 0.0;
    for k in 0..=result.order {
        let odd = k % 2 == 1;
        let wrong: Vec<&FieldValue<C>> =
            if odd { vec![a.phi00.coeff(k), a.phi11.coeff(k), a.phi11bar.coeff(k)] } else { vec![a.phi01.coeff(k)] };
        for f in wrong {
            parity_defect = parity_defect.max(f.max_norm());
        }
    }
    let parity_tol = if C::MODE == Mode::Exact { 0.0 } else { PARITY_TOL };
    VerifyReport {
        einstein_residual_order: first_above(&result.einstein_orders, 1.0),
        weyl_valuation: first_above(&result.weyl_orders, scale),
        parity_defect,
        parity_ok: parity_defect <= parity_tol,
        max_relative_residual: result.max_relative_residual(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeEntry {
    pub component: String,
    pub order: usize,
    /// Degree of the interpolating polynomial in λ.
    pub degree: usize,
    /// Largest degree allowed.
    pub bound: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub lambdas: Vec<f64>,
    pub entries: Vec<DegreeEntry>,
    /// Every degree within its bound.
    pub ok: bool,
    /// Entries of `g_01`, `g_11` that depend on λ.
    pub lambda_dependent_mixed: Vec<DegreeEntry>,
    /// `g_01` and `g_11` do not depend on λ at any order.
    pub mixed_independent: bool,
}

/// Degree of the polynomial through `(x_i, f_i)`, read off the Newton divided
/// differences; float mode treats `‖δ_j‖·R^j ≤ tol·max‖f‖` as zero, with `R`
/// the largest `|x_i|`.
pub fn interpolation_degree<C: Coeff>(xs: &[C], fs: &[FieldValue<C>], tol: f64) -> Result<usize> {
    if xs.len() != fs.len() || xs.is_empty() {
        return Err(Error::Invalid("interpolation needs matching, nonempty samples".into()));
    }
    let fmax = fs.iter().map(FieldValue::max_norm).fold(0.0, f64::max);
    let radius = xs.iter().map(Coeff::magnitude).fold(1.0, f64::max);
    let mut table: Vec<FieldValue<C>> = fs.to_vec();
    let mut degree = 0;
    for j in 1..xs.len() {
        for i in (j..xs.len()).rev() {
            let dx = xs[i].sub(&xs[i - j]);
            let inv = dx.inv().ok_or_else(|| Error::Invalid("interpolation nodes must be distinct".into()))?;
            table[i] = (&table[i] - &table[i - 1]).scale(&inv);
        }
        let size = table[j].max_norm() * radius.powi(j as i32);
        let nonzero = match C::MODE {
            Mode::Exact => !table[j].is_zero(),
            Mode::Float => size > tol * fmax.max(f64::MIN_POSITIVE),
        };
        if nonzero {
            degree = j;
        }
    }
    Ok(degree)
}

/// λ-dependence across results that differ only in λ: every coefficient at
/// `ρ^k` must be a polynomial of degree ≤ ⌊k/6⌋. Whether `g_01` and `g_11`
/// are independent of λ is reported separately; horizontal derivatives and
/// torsion couple them to the λ-dependent part of `g_00`, `g_11̄` from order 7.
pub fn lambda_sweep<C: Coeff>(results: &[SolveResult<C>], max_order: usize, tol: f64) -> Result<SweepReport> {
    let first = results.first().ok_or_else(|| Error::Invalid("empty λ sweep".into()))?;
    let n = max_order.min(first.order);
    if results.iter().any(|r| r.order < n || r.background != first.background) {
        return Err(Error::Invalid("sweep results must share background and truncation".into()));
    }
    let xs: Vec<C> = results.iter().map(|r| r.lambda.clone()).collect();
    let mut entries = Vec::new();
    for k in 1..=n {
        for name in ["g00", "g11bar", "g01", "g11"] {
            let fs: Vec<FieldValue<C>> = results
                .iter()
                .map(|r| {
                    let s = r.ansatz.named().into_iter().find(|(nm, _)| *nm == name).expect("named series").1;
                    s.coeff(k).clone()
                })
                .collect();
            let degree = interpolation_degree(&xs, &fs, tol)?;
            entries.push(DegreeEntry { component: name.into(), order: k, degree, bound: k / 6 });
        }
    }
    let ok = entries.iter().all(|e| e.degree <= e.bound);
    let lambda_dependent_mixed: Vec<DegreeEntry> =
        entries.iter().filter(|e| (e.component == "g01" || e.component == "g11") && e.degree > 0).cloned().collect();
    Ok(SweepReport {
        lambdas: xs.iter().map(|x| x.to_c64().re).collect(),
        mixed_independent: lambda_dependent_mixed.is_empty(),
        lambda_dependent_mixed,
        entries,
        ok,
    })
}
