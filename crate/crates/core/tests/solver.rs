//! Order-by-order solver: closed-form oracles on homogeneous backgrounds,
//! normalization of the order-6 Weyl coefficient on a grid, λ-dependence,
//! parity and serialization.

mod common;

use std::sync::OnceLock;

use achsolve::cr::Background;
use achsolve::io::residuals_csv;
use achsolve::solver::{
    eta_extract, lambda_sweep, solve, solve_step, verify, CheckKind, SolveConfig, SolveResult, SolveState,
};
use achsolve::theta::{Geometry, MetricAnsatz};
use achsolve::{Coeff, Complex64, Error, FieldValue};
use common::*;

const GRID: &str = "heisenberg-deformed:0.02";

fn grid_background() -> &'static Background<Complex64> {
    static BG: OnceLock<Background<Complex64>> = OnceLock::new();
    BG.get_or_init(|| grid_bg(GRID))
}

/// Grid solves at N = 10 for λ = 0, 1, 2, shared across tests.
fn grid_results() -> &'static [SolveResult<Complex64>; 3] {
    static RESULTS: OnceLock<[SolveResult<Complex64>; 3]> = OnceLock::new();
    RESULTS.get_or_init(|| {
        let bg = grid_background();
        [0.0, 1.0, 2.0].map(|l| solve(bg, SolveConfig::new(10, Complex64::new(l, 0.0))).unwrap())
    })
}

fn exact_solve(bg: &Background<E>, n: usize, lambda: E) -> SolveResult<E> {
    solve(bg, SolveConfig::new(n, lambda)).unwrap()
}

#[test]
fn flat_background_gives_the_zero_ansatz() {
    let bg = Background::<E>::heisenberg().unwrap();
    let r = exact_solve(&bg, 14, q(1, 1));
    for (name, s) in r.ansatz.named() {
        assert!(s.is_zero(), "{name} nonzero");
    }
    assert!(r.einstein_orders.iter().chain(&r.weyl_orders).all(|&x| x == 0.0));
    assert!(eta_extract(&r).unwrap().is_zero());
}

#[test]
fn order_two_step_matches_the_hand_solved_system() {
    // At m = 2 the block reads (3/2)ψ_00 = 0, −¼ψ_00 + 2ψ_11̄ = −s, and
    // ½ψ_11 = −iA, so ψ_00 = 0, ψ_11̄ = −s/2, ψ_11 = −2iA.
    let s = q(2, 3);
    let a = qi((1, 4), (-1, 3));
    let bg = constant_bg(s.clone(), a.clone());
    let mut state = SolveState::new(&bg, SolveConfig::new(9, E::zero())).unwrap();
    solve_step(&mut state).unwrap();
    solve_step(&mut state).unwrap();
    assert_eq!(state.cursor, 3);
    let coeff = |x: &achsolve::JetSeries<E>| x.coeff(2).as_const().cloned().unwrap();
    assert_eq!(coeff(&state.ansatz.phi00), E::zero());
    assert_eq!(coeff(&state.ansatz.phi11bar), s.mul(&q(-1, 2)));
    assert_eq!(coeff(&state.ansatz.phi11), a.mul(&E::imag_unit()).mul(&q(-2, 1)));
    assert_eq!(coeff(&state.ansatz.phi01), E::zero());
    // Order 1 is untouched.
    assert!(state.ansatz.phi00.coeff(1).is_zero() && state.ansatz.phi01.coeff(1).is_zero());
}

#[test]
fn spherical_background_is_einstein_and_lambda_independent() {
    let bg = constant_bg(q(1, 1), E::zero());
    let r0 = exact_solve(&bg, 14, E::zero());
    let r7 = exact_solve(&bg, 14, q(7, 1));
    assert!(r0.einstein_orders.iter().all(|&x| x == 0.0));
    assert!(r0.weyl_orders.iter().all(|&x| x == 0.0));
    assert_eq!(r0.to_json()["coefficients"], r7.to_json()["coefficients"]);
    // Every check was recorded as an exact zero, the unused equations included.
    assert!(r0.residuals.iter().all(|e| e.max_norm == 0.0));
    assert!(r0.residuals.iter().any(|e| e.kind == CheckKind::Verified));
    assert!(r0.residuals.iter().any(|e| e.kind == CheckKind::Bianchi));
}

#[test]
fn exact_solves_are_deterministic() {
    let bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    let a = exact_solve(&bg, 10, q(1, 1)).to_json();
    let b = exact_solve(&bg, 10, q(1, 1)).to_json();
    assert_eq!(a, b);
}

#[test]
fn torsion_background_normalizes_the_weyl_coefficient() {
    let s = q(1, 2);
    let a = qi((1, 3), (1, 2));
    let bg = constant_bg(s, a);
    for lambda in [q(0, 1), q(1, 1), q(-3, 2)] {
        let r = exact_solve(&bg, 11, lambda.clone());
        let report = verify(&r);
        assert_eq!(report.einstein_residual_order, None);
        assert!(report.parity_ok, "parity defect {}", report.parity_defect);
        assert_eq!(r.weyl_orders[..6], [0.0; 6]);
        assert_eq!(eta_extract(&r).unwrap(), bg.obstruction.scale(&lambda));
        if lambda.is_zero() {
            assert_eq!(report.weyl_valuation, None, "W- must vanish to all orders at λ = 0");
        } else {
            assert_eq!(report.weyl_valuation, Some(6));
        }
    }
}

#[test]
fn exact_lambda_sweep_has_the_predicted_degrees() {
    let bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    let results: Vec<SolveResult<E>> =
        [0, 1, -1, 2, -2, 3, -3].iter().map(|&l| exact_solve(&bg, 13, q(l, 1))).collect();
    let report = lambda_sweep(&results, 13, 0.0).unwrap();
    assert!(report.ok, "{:?}", report.entries.iter().filter(|e| e.degree > e.bound).collect::<Vec<_>>());
    // The bound is attained: the ρ^12 coefficient of g_00 is quadratic in λ.
    let e12 = report.entries.iter().find(|e| e.component == "g00" && e.order == 12).unwrap();
    assert_eq!(e12.degree, 2);
    let e6 = report.entries.iter().find(|e| e.component == "g00" && e.order == 6).unwrap();
    assert_eq!(e6.degree, 1);
    // With torsion, g_11 picks up a λ-linear term at ρ⁸ through ρ²A·g_00;
    // g_01 stays λ-independent since constant data has no horizontal derivatives.
    assert!(!report.mixed_independent);
    let mixed: Vec<(&str, usize, usize)> =
        report.lambda_dependent_mixed.iter().map(|e| (e.component.as_str(), e.order, e.degree)).collect();
    assert_eq!(mixed, [("g11", 8, 1), ("g11", 10, 1), ("g11", 12, 1)]);
}

#[test]
fn mixed_components_are_lambda_independent_without_torsion() {
    // A = 0 forces 𝒪 = 0 on homogeneous data, so the whole metric is λ-independent.
    let bg = constant_bg(q(1, 1), E::zero());
    let results: Vec<SolveResult<E>> = [0, 1, 2].iter().map(|&l| exact_solve(&bg, 10, q(l, 1))).collect();
    let report = lambda_sweep(&results, 10, 0.0).unwrap();
    assert!(report.ok && report.mixed_independent);
    assert!(report.entries.iter().all(|e| e.degree == 0));
}

#[test]
fn grid_solve_closes_every_check() {
    for r in grid_results() {
        assert!(r.max_relative_residual() <= 1e-8, "max residual {:e}", r.max_relative_residual());
        let report = verify(r);
        assert_eq!(report.einstein_residual_order, None);
        assert!(report.parity_ok, "parity defect {:e}", report.parity_defect);
        assert!(r.residuals.iter().any(|e| e.kind == CheckKind::Bianchi));
    }
    // g_01 is odd in ρ and nonzero at order 7 on this background.
    let r = &grid_results()[1];
    assert!(r.ansatz.phi01.coeff(7).max_norm() > 1e-10);
    assert!(r.ansatz.phi01.coeff(6).max_norm() <= 1e-10);
}

#[test]
fn grid_eta_equals_lambda_times_the_obstruction() {
    let bg = grid_background();
    let [r0, r1, r2] = grid_results();
    let scale = bg.obstruction.max_norm();
    assert!(scale > 1e-5);
    assert!(eta_extract(r0).unwrap().max_norm() <= 1e-8);
    for (r, l) in [(r1, 1.0), (r2, 2.0)] {
        let eta = eta_extract(r).unwrap();
        let defect = (&eta - &bg.obstruction.scale(&Complex64::new(l, 0.0))).max_norm();
        assert!(defect <= 1e-8 * scale.max(1.0), "λ = {l}: defect {defect:e}");
    }
    // W^- = O(ρ⁶) for λ ≠ 0 and O(ρ^11) for λ = 0.
    assert_eq!(verify(r0).weyl_valuation, None);
    assert_eq!(verify(r1).weyl_valuation, Some(6));
}

#[test]
fn order_six_difference_solves_the_normalization_system() {
    let bg = grid_background();
    let [r0, r1, _] = grid_results();
    let d00 = r1.ansatz.phi00.coeff(6) - r0.ansatz.phi00.coeff(6);
    let d11 = r1.ansatz.phi11bar.coeff(6) - r0.ansatz.phi11bar.coeff(6);
    let c = |x: f64| Complex64::new(x, 0.0);
    let first = &d00.scale(&c(-6.0)) - &d11.scale(&c(24.0));
    let second = &d00.scale(&c(14.0 / 3.0)) - &d11.scale(&c(16.0 / 3.0));
    let scale = bg.obstruction.max_norm();
    assert!(first.max_norm() <= 1e-8 * scale.max(1.0));
    assert!((&second - &bg.obstruction).max_norm() <= 1e-8 * scale.max(1.0));
    // Below order 6 the two solutions agree.
    for k in 0..6 {
        assert!((r1.ansatz.phi00.coeff(k) - r0.ansatz.phi00.coeff(k)).max_norm() <= 1e-12);
    }
}

#[test]
fn eta_is_linear_in_lambda() {
    let bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    let e1 = exact_solve(&bg, 9, q(1, 1)).eta;
    let e5 = exact_solve(&bg, 9, q(5, 1)).eta;
    assert_eq!(e5, e1.scale(&q(5, 1)));
}

#[test]
fn results_round_trip_through_json() {
    let bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    let r = exact_solve(&bg, 10, q(2, 1));
    let text = serde_json::to_string(&r.to_json()).unwrap();
    let back = SolveResult::<E>::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.ansatz, r.ansatz);
    assert_eq!(back.eta, r.eta);
    assert_eq!(back.residuals, r.residuals);
    assert_eq!(back.to_json(), r.to_json());
    // Reading in the wrong mode is refused.
    assert!(matches!(SolveResult::<Complex64>::from_json(&r.to_json()), Err(Error::Invalid(_))));

    let g = &grid_results()[1];
    let back = SolveResult::<Complex64>::from_json(&g.to_json()).unwrap();
    assert_eq!(back.ansatz, g.ansatz);
}

#[test]
fn residual_table_exports_as_csv() {
    let bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    let r = exact_solve(&bg, 9, q(1, 1));
    let text = residuals_csv(&r.residuals).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.iter().collect::<Vec<_>>(), ["order", "component", "kind", "max_norm", "relative"]);
    assert_eq!(reader.records().count(), r.residuals.len());
}

#[test]
fn invalid_configurations_are_rejected() {
    let bg = Background::<E>::heisenberg().unwrap();
    assert!(matches!(solve(&bg, SolveConfig::new(8, E::zero())), Err(Error::Invalid(_))));
    assert!(matches!(solve(&bg, SolveConfig::new(10, E::imag_unit())), Err(Error::Invalid(_))));
    let mut state = SolveState::new(&bg, SolveConfig::new(9, E::zero())).unwrap();
    for _ in 0..9 {
        solve_step(&mut state).unwrap();
    }
    assert!(solve_step(&mut state).is_err());
    assert!(state.finish().is_ok());
}

#[test]
fn strict_mode_catches_an_inconsistent_background() {
    // Scalar curvature that does not match the connection: the unused
    // equations can no longer close.
    let mut bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    bg.scal = FieldValue::Const(q(1, 1));
    match solve(&bg, SolveConfig::new(9, E::zero())) {
        Err(Error::Verification { .. }) => {}
        other => panic!("expected a verification failure, got {:?}", other.map(|r| r.max_relative_residual())),
    }
    // Non-strict runs record the failure instead.
    let mut cfg = SolveConfig::new(9, E::zero());
    cfg.strict = false;
    let r = solve(&bg, cfg).unwrap();
    assert!(r.max_relative_residual() > 0.0);
}

#[test]
fn solved_metric_is_einstein_when_recomputed_independently() {
    // Re-evaluate the Einstein tensor from the stored coefficients alone.
    let bg = constant_bg(q(1, 2), qi((1, 3), (1, 2)));
    let r = exact_solve(&bg, 10, q(1, 1));
    let ansatz = MetricAnsatz { ..r.ansatz.clone() };
    let geo = Geometry::new(&bg, &ansatz).unwrap();
    for (word, s) in geo.einstein.iter() {
        assert!(s.is_zero(), "E at {word:?}");
    }
}
