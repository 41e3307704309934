//! Indicial pencil against the product formula and the solver's variation
//! rows, plus the coefficient growth probe.

mod common;

use achsolve::cr::BackgroundSpec;
use achsolve::indicial::{
    det_product_check, determinant, growth_probe, indicial_matrix, product_formula, IndicialPencil, PENCIL_SHIFT,
};
use achsolve::solver::{solve, variation_matrix, SolveConfig, VariationRow};
use achsolve::{Coeff, Complex64, Error, ExactComplex};
use common::*;
use proptest::prelude::*;

#[test]
fn determinant_matches_the_product_formula_through_200() {
    let report = det_product_check(200).unwrap();
    assert_eq!(report.entries.len(), 201);
    assert!(report.all_equal && report.all_nonzero);
    assert_eq!(report.matches, 201);
    assert_eq!(report.entries[0].det, 534_600);
    assert!(det_product_check(-1).is_err());
}

#[test]
fn pencil_rows_are_scaled_variation_rows() {
    let pencil = IndicialPencil::default();
    let minus8 = |r: VariationRow, m: i64| -> Vec<ExactComplex> {
        variation_matrix(m).row(r).iter().map(|c| c.mul(&ExactComplex::from_i64(-8))).collect()
    };
    let int = |n: i128| ExactComplex::from_i64(n as i64);
    for m in 1..=60i64 {
        let v: Vec<ExactComplex> = pencil.polys.iter().map(|p| int(p.eval(m as i128))).collect();
        let e00 = minus8(VariationRow::E00, m);
        let e1b = minus8(VariationRow::E11Bar, m);
        assert_eq!(e00[..2], [v[0].clone(), v[1].clone()], "E_00 at m = {m}");
        assert_eq!(e1b[..2], [v[2].clone(), v[3].clone()], "E_11̄ at m = {m}");
        assert_eq!(minus8(VariationRow::E01, m)[2], v[4], "E_01 at m = {m}");
        assert_eq!(minus8(VariationRow::E11, m)[3], v[5], "E_11 at m = {m}");
        // The block does not couple to the mixed components.
        assert!(e00[2..].iter().chain(&e1b[2..]).all(Coeff::is_zero));
        if m >= PENCIL_SHIFT {
            let p = indicial_matrix(m - PENCIL_SHIFT).unwrap();
            assert_eq!(
                [p[0][0], p[0][1], p[1][0], p[1][1], p[2][2], p[3][3]],
                [0, 1, 2, 3, 4, 5].map(|i| pencil.polys[i].eval(m as i128))
            );
        }
    }
}

proptest! {
    #[test]
    fn determinant_is_block_product_and_never_vanishes(k in 0i64..10_000) {
        let p = indicial_matrix(k).unwrap();
        let block = (p[0][0] * p[1][1] - p[0][1] * p[1][0]) * p[2][2] * p[3][3];
        prop_assert_eq!(determinant(&p), block);
        prop_assert_eq!(block, product_formula(k));
        prop_assert!(block != 0);
    }
}

#[test]
fn flat_series_terminates() {
    let bg = BackgroundSpec::parse("heisenberg").unwrap().build::<E>("heisenberg").unwrap();
    let r = solve(&bg, SolveConfig::new(12, q(1, 1))).unwrap();
    let probe = growth_probe(&r).unwrap();
    assert!(probe.terminating);
    assert!(probe.norms.iter().all(|&x| x == 0.0));
    assert_eq!(probe.ratio, None);
}

#[test]
fn spherical_series_terminates_after_order_two() {
    // Scal = 1, A = 0: the solved metric is polynomial in ρ.
    let bg = BackgroundSpec::parse("constant-scal:1").unwrap().build::<E>("s").unwrap();
    let r = solve(&bg, SolveConfig::new(12, E::zero())).unwrap();
    let probe = growth_probe(&r).unwrap();
    assert!(probe.terminating);
    assert!(probe.norms[2] > 0.0);
}

#[test]
fn torsion_background_has_a_finite_stable_ratio() {
    let bg = BackgroundSpec::parse("constant:1:1/2i").unwrap().build::<E>("t").unwrap();
    let ratios: Vec<f64> = [10, 12]
        .iter()
        .map(|&n| {
            let r = solve(&bg, SolveConfig::new(n, q(1, 1))).unwrap();
            let p = growth_probe(&r).unwrap();
            assert!(!p.terminating);
            assert!(p.fitted_orders.iter().all(|&j| j >= 6));
            p.ratio.unwrap()
        })
        .collect();
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0));
    assert!((ratios[1] / ratios[0] - 1.0).abs() <= 0.2, "{ratios:?}");
}

#[test]
fn grid_ratio_is_stable_and_grows_with_the_deformation() {
    let fit = |name: &str, n: usize| {
        let bg = BackgroundSpec::parse(name).unwrap().build::<Complex64>(name).unwrap();
        let r = solve(&bg, SolveConfig::new(n, Complex64::new(1.0, 0.0))).unwrap();
        growth_probe(&r).unwrap().ratio.unwrap()
    };
    let r10 = fit("heisenberg-deformed:0.02", 10);
    let r12 = fit("heisenberg-deformed:0.02", 12);
    assert!((r12 / r10 - 1.0).abs() <= 0.2, "{r10} vs {r12}");
    // A larger deformation grows the coefficients faster, so the fitted
    // radius 1/R shrinks.
    let doubled = fit("heisenberg-deformed:0.04", 10);
    assert!(doubled > r10, "{r10} vs {doubled}");
}

#[test]
fn short_series_cannot_be_fitted() {
    let bg = BackgroundSpec::parse("constant:1:1/2i").unwrap().build::<E>("t").unwrap();
    let r = solve(&bg, SolveConfig::new(9, q(1, 1))).unwrap();
    assert!(matches!(growth_probe(&r), Err(Error::Invalid(_))));
}
