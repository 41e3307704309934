//! Order-by-order construction of the normal-form metric: starting from the
//! zero ansatz, the ρ^m coefficients are fixed so that `E = O(ρ^{m+1})`, with
//! the anti-self-dual Weyl tensor normalized at orders 4 and 6.
//!
//! Every step recomputes the full curvature of the current ansatz; equations
//! not used to solve a step are checked at the solved order.

pub mod variation;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::cr::Background;
use crate::error::{Error, Result};
use crate::field::FieldValue;
use crate::scalar::{Coeff, Mode, FLOAT_PIVOT_TOL};
use crate::theta::index::parse_word;
use crate::theta::{Geometry, MetricAnsatz};

pub use variation::{variation_matrix, VariationMatrix, VariationRow};
pub use verify::{lambda_sweep, verify, SweepReport, VerifyReport};

use VariationRow::*;

/// Independent Einstein components (the rest follow by symmetry and reality).
pub const EINSTEIN_WORDS: [&str; 7] = ["ii", "i0", "i1", "00", "01", "1b", "11"];

/// Default relative tolerance for float-mode checks.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct SolveConfig<C: Coeff> {
    /// Truncation order N (at least 9).
    pub order: usize,
    /// Real parameter λ of the normalization `η = λ𝒪`.
    pub lambda: C,
    /// Relative tolerance of float-mode checks (exact mode checks for zero).
    pub tol: f64,
    /// Fail on the first check above tolerance.
    pub strict: bool,
    /// Also check the Cotton-tensor relations at every step.
    pub bianchi: bool,
}

impl<C: Coeff> SolveConfig<C> {
    pub fn new(order: usize, lambda: C) -> Self {
        Self { order, lambda, tol: DEFAULT_TOL, strict: true, bianchi: false }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 9 {
            return Err(Error::Invalid(format!("truncation order must be at least 9, got {}", self.order)));
        }
        if !self.lambda.imag_part().is_zero() {
            return Err(Error::Invalid("lambda must be real".into()));
        }
        Ok(())
    }
}

/// How a residual entry arose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Equation used to solve the step.
    Imposed,
    /// Equation not used, checked at the solved order.
    Verified,
    /// Bianchi-type relation among the unsolved Einstein coefficients.
    Bianchi,
    /// Vanishing of the anti-self-dual Weyl tensor.
    Weyl,
    /// `η = λ𝒪`.
    Eta,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub order: usize,
    pub component: String,
    pub kind: CheckKind,
    /// Max-norm of the residual.
    pub max_norm: f64,
    /// `max_norm / max(1, scale)`.
    pub relative: f64,
}

/// Which equations determine the step at order `m`.
pub fn imposed_components(m: usize) -> &'static [&'static str] {
    match m {
        4 => &["00", "1b", "i1"],
        6 => &["ii", "i1", "11"],
        8 => &["ii", "00", "i1", "11"],
        _ => &["00", "1b", "i1", "11"],
    }
}

/// Solver state with the cursor at the next order to solve.
#[derive(Clone, Debug)]
pub struct SolveState<'a, C: Coeff> {
    pub bg: &'a Background<C>,
    pub config: SolveConfig<C>,
    pub ansatz: MetricAnsatz<C>,
    pub cursor: usize,
    pub residuals: Vec<ResidualEntry>,
    /// Size of `E^{(m)}` before solving step m, for relative checks.
    scales: Vec<f64>,
}

impl<'a, C: Coeff> SolveState<'a, C> {
    pub fn new(bg: &'a Background<C>, config: SolveConfig<C>) -> Result<Self> {
        config.validate()?;
        let n = config.order;
        Ok(Self {
            bg,
            ansatz: MetricAnsatz::zero(n),
            cursor: 1,
            residuals: Vec::new(),
            scales: vec![1.0; n + 1],
            config,
        })
    }

    fn tol(&self) -> f64 {
        if C::MODE == Mode::Exact {
            0.0
        } else {
            self.config.tol
        }
    }

    fn record(&mut self, order: usize, component: String, kind: CheckKind, max_norm: f64, scale: f64) -> Result<()> {
        let relative = max_norm / scale.max(1.0);
        let tol = self.tol();
        self.residuals.push(ResidualEntry { order, component: component.clone(), kind, max_norm, relative });
        if self.config.strict && relative > tol {
            return Err(Error::Verification { order, component, residual: relative, tol });
        }
        Ok(())
    }

    /// Checks every Einstein component at order `k`, which was solved earlier.
    fn check_einstein(&mut self, geo: &Geometry<'_, C>, k: usize) -> Result<()> {
        if k == 0 {
            return Ok(());
        }
        let scale = self.scales[k];
        for w in EINSTEIN_WORDS {
            let norm = coeff_of(geo, w, k).max_norm();
            let kind = if imposed_components(k).contains(&w) { CheckKind::Imposed } else { CheckKind::Verified };
            self.record(k, format!("E_{w}"), kind, norm, scale)?;
        }
        Ok(())
    }

    /// Bianchi relations among the order-m Einstein coefficients while `E = O(ρ^m)`.
    fn check_bianchi(&mut self, geo: &Geometry<'_, C>, m: usize) -> Result<()> {
        let e = |w: &str| coeff_of(geo, w, m);
        let mi = m as i64;
        let c = |n: i64| C::from_i64(n);
        let rel1 = &(&e("ii").scale(&c(mi - 8)) - &e("00").scale(&c(4 * (mi - 4)))) - &e("1b").scale(&c(8 * (mi - 2)));
        let rel2 = e("i0").scale(&c(mi - 6));
        let rel3 = &e("i1").scale(&c(mi - 5)) - &e("01").scale(&C::imag_unit().mul(&c(4)));
        let scale = self.scales[m];
        for (name, r) in [("(m-8)E_ii-4(m-4)E_00-8(m-2)E_1b", rel1), ("(m-6)E_i0", rel2), ("(m-5)E_i1-4iE_01", rel3)] {
            self.record(m, name.into(), CheckKind::Bianchi, r.max_norm(), scale)?;
        }
        if self.config.bianchi {
            let cm = geo.cotton_asd()?;
            let cw = |w: &str| cm.get(&parse_word(w).expect("static word")).coeff(m).clone();
            let r = |a: i64, b: i64| C::ratio(a, b);
            let rel4 = &cw("1i1") + &e("11").scale(&r(mi - 2, 4));
            let mut rhs5 = e("00").scale(&r(-5 * mi, 24));
            rhs5.add_assign(&e("ii").scale(&r(mi - 12, 96)));
            rhs5.add_assign(&e("1b").scale(&r(mi + 6, 12)));
            let rel5 = &cw("0i0") - &rhs5;
            let rel6 = &cw("ii0") + &e("i0").scale(&r(mi - 2, 4));
            for (name, x) in [("C-_1i1", rel4), ("C-_0i0", rel5), ("C-_ii0", rel6)] {
                self.record(m, name.into(), CheckKind::Bianchi, x.max_norm(), scale)?;
            }
        }
        Ok(())
    }

    /// Solves order `cursor` and advances.
    pub fn step(&mut self) -> Result<()> {
        let m = self.cursor;
        if m > self.config.order {
            return Err(Error::Invalid("solver already reached the truncation order".into()));
        }
        let bg = self.bg;
        let truncated = self.ansatz.with_order(m);
        let geo = Geometry::new(bg, &truncated)?;
        self.check_einstein(&geo, m - 1)?;
        self.scales[m] = EINSTEIN_WORDS.iter().map(|w| coeff_of(&geo, w, m).max_norm()).fold(1.0, f64::max);
        self.check_bianchi(&geo, m)?;

        let e = |w: &str| coeff_of(&geo, w, m);
        let vm = variation_matrix(m as i64);
        let (rows, rhs) = match m {
            6 => {
                let w = geo.weyl_asd_component(&parse_word("i0i0").expect("static word"))?.coeff(6).clone();
                let target = bg.obstruction.scale(&self.config.lambda);
                self.scales[m] = self.scales[m].max(w.max_norm()).max(target.max_norm());
                ((EInfInf, WInf0Inf0), [e("ii").neg(), &target - &w])
            }
            8 => ((EInfInf, E00), [e("ii").neg(), e("00").neg()]),
            _ => ((E00, E11Bar), [e("00").neg(), e("1b").neg()]),
        };
        let [psi00, psi11b] = solve2(vm.block::<C>(rows.0, rows.1), [rhs[0].real_part(), rhs[1].real_part()], m)?;
        let c01 = C::from_exact(&vm.row(EInf1)[2]);
        let psi01 = e("i1").neg().scale(&c01.inv().ok_or(Error::Singular(m))?);
        let psi11 = if m == 4 {
            let w = geo.weyl_asd_component(&parse_word("i1i1").expect("static word"))?.coeff(4).clone();
            let c = C::from_exact(&vm.row(WInf1Inf1)[3]);
            w.neg().scale(&c.inv().ok_or(Error::Singular(m))?)
        } else {
            let c = C::from_exact(&vm.row(E11)[3]);
            e("11").neg().scale(&c.inv().ok_or(Error::Singular(m))?)
        };
        self.ansatz.phi00.set_coeff(m, psi00);
        self.ansatz.phi11bar.set_coeff(m, psi11b);
        self.ansatz.phi01.set_coeff(m, psi01);
        self.ansatz.phi11.set_coeff(m, psi11);
        self.cursor += 1;
        Ok(())
    }

    /// Final checks at the truncation order and assembly of the result.
    pub fn finish(mut self) -> Result<SolveResult<C>> {
        let n = self.config.order;
        if self.cursor != n + 1 {
            return Err(Error::Invalid(format!("solver stopped at order {} of {n}", self.cursor - 1)));
        }
        let bg = self.bg;
        let geo = Geometry::new(bg, &self.ansatz)?;
        self.check_einstein(&geo, n)?;
        let wm = geo.weyl_asd()?;
        let lambda = self.config.lambda.clone();
        let target = bg.obstruction.scale(&lambda);
        let eta = wm.get(&parse_word("i0i0").expect("static word")).coeff(6).clone();
        let weyl_scale = target.max_norm();
        let mut weyl_orders = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let norm = wm.max_norm_at(k);
            weyl_orders.push(norm);
            if k < 6 || lambda.is_zero() {
                self.record(k, "W-".into(), CheckKind::Weyl, norm, weyl_scale)?;
            }
        }
        let eta_defect = (&eta - &target).max_norm();
        self.record(6, "eta-lambda*O".into(), CheckKind::Eta, eta_defect, weyl_scale)?;
        let einstein_orders = (0..=n).map(|k| geo.einstein.max_norm_at(k)).collect();
        Ok(SolveResult {
            lambda,
            order: n,
            mode: C::MODE,
            background: bg.label.clone(),
            background_spec: bg.spec.clone(),
            ansatz: self.ansatz,
            eta,
            obstruction: bg.obstruction.clone(),
            residuals: self.residuals,
            einstein_orders,
            weyl_orders,
        })
    }
}

fn coeff_of<C: Coeff>(geo: &Geometry<'_, C>, w: &str, k: usize) -> FieldValue<C> {
    geo.einstein.get(&parse_word(w).expect("static word")).coeff(k).clone()
}

/// Solves a constant 2×2 system with field right-hand sides.
fn solve2<C: Coeff>(a: [[C; 2]; 2], rhs: [FieldValue<C>; 2], m: usize) -> Result<[FieldValue<C>; 2]> {
    let det = a[0][0].mul(&a[1][1]).sub(&a[0][1].mul(&a[1][0]));
    let size = a.iter().flatten().map(Coeff::magnitude).fold(0.0, f64::max);
    let singular = match C::MODE {
        Mode::Exact => det.is_zero(),
        Mode::Float => det.magnitude() <= FLOAT_PIVOT_TOL * size * size,
    };
    if singular {
        return Err(Error::Singular(m));
    }
    let inv = det.inv().ok_or(Error::Singular(m))?;
    let x0 = &rhs[0].scale(&a[1][1]) - &rhs[1].scale(&a[0][1]);
    let x1 = &rhs[1].scale(&a[0][0]) - &rhs[0].scale(&a[1][0]);
    Ok([x0.scale(&inv), x1.scale(&inv)])
}

/// Output of a solve.
#[derive(Clone, Debug)]
pub struct SolveResult<C: Coeff> {
    pub lambda: C,
    pub order: usize,
    pub mode: Mode,
    pub background: String,
    pub background_spec: Option<serde_json::Value>,
    pub ansatz: MetricAnsatz<C>,
    /// Order-6 coefficient of `W^-_∞0∞0`.
    pub eta: FieldValue<C>,
    pub obstruction: FieldValue<C>,
    pub residuals: Vec<ResidualEntry>,
    /// Max-norm of `E` per order, after the final step.
    pub einstein_orders: Vec<f64>,
    /// Max-norm of `W^-` per order, after the final step.
    pub weyl_orders: Vec<f64>,
}

impl<C: Coeff> SolveResult<C> {
    /// Largest relative residual over all checks.
    pub fn max_relative_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.relative).fold(0.0, f64::max)
    }
}

/// Runs the full construction for one λ.
pub fn solve<C: Coeff>(bg: &Background<C>, config: SolveConfig<C>) -> Result<SolveResult<C>> {
    let mut state = SolveState::new(bg, config)?;
    while state.cursor <= state.config.order {
        state.step()?;
    }
    state.finish()
}

/// Runs a single step on a state (the cursor advances by one).
pub fn solve_step<C: Coeff>(state: &mut SolveState<'_, C>) -> Result<()> {
    state.step()
}

/// `η`: the order-6 coefficient of `W^-_∞0∞0`, provided `W^- = O(ρ⁶)` was verified.
pub fn eta_extract<C: Coeff>(result: &SolveResult<C>) -> Result<FieldValue<C>> {
    let tol = if C::MODE == Mode::Exact { 0.0 } else { DEFAULT_TOL };
    let scale = result.obstruction.scale(&result.lambda).max_norm().max(1.0);
    for (k, &w) in result.weyl_orders.iter().enumerate().take(6) {
        if w / scale > tol {
            return Err(Error::Verification { order: k, component: "W-".into(), residual: w / scale, tol });
        }
    }
    Ok(result.eta.clone())
}
