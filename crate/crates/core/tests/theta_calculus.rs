//! Θ-frame calculus against independent oracles: the Koszul formula, the
//! structure-function curvature, and the closed-form tables for the
//! difference tensor, Einstein tensor, curvature and Weyl components.

mod common;

use achsolve::solver::{variation_matrix, VariationRow};
use achsolve::theta::index::{conj_word, ALL};
use achsolve::theta::{Geometry, LeviCivita, MetricAnsatz};
use achsolve::{Coeff, Complex64, FieldValue};
use common::*;
use proptest::prelude::*;

#[test]
fn koszul_oracle_matches_difference_tensor_exactly() {
    let bg = torsion_bg();
    let mut r = rng(11);
    let ansatz = random_exact_ansatz(5, 5, &mut r);
    let lc = LeviCivita::new(&bg, &ansatz).unwrap();
    let oracle = koszul_difference(&lc);
    for (word, s) in lc.d.iter() {
        assert_eq!(s, oracle.get(&word), "D at {word:?}");
    }
}

#[test]
fn koszul_oracle_matches_on_a_grid_background() {
    let bg = grid_bg("heisenberg-deformed:0.02");
    let mut r = rng(12);
    let ansatz = random_grid_ansatz(&bg, 4, 4, 0.05, &mut r);
    let lc = LeviCivita::new(&bg, &ansatz).unwrap();
    let oracle = koszul_difference(&lc);
    for (word, s) in lc.d.iter() {
        assert_series_close(s, oracle.get(&word), 1e-10, &format!("D at {word:?}"));
    }
}

#[test]
fn difference_tensor_antisymmetric_part_is_torsion() {
    let bg = torsion_bg();
    let mut r = rng(13);
    let lc = LeviCivita::new(&bg, &random_exact_ansatz(4, 4, &mut r)).unwrap();
    for i in ALL {
        for j in ALL {
            for k in ALL {
                let lhs = lc.d.get(&[i, j, k]) - lc.d.get(&[j, i, k]);
                assert_eq!(&lhs, lc.torsion.get(&[j, i, k]), "D_IJ^K - D_JI^K at {:?}", [i, j, k]);
            }
        }
    }
}

#[test]
fn extended_curvature_matches_structure_function_oracle() {
    let bg = torsion_bg();
    let frame = achsolve::theta::ThetaFrame::new(&bg, 6);
    let table = frame.curvature().unwrap();
    let oracle = frame.curvature_from_connection().unwrap();
    for (word, s) in table.iter() {
        assert_eq!(s, oracle.get(&word), "R̄ at {word:?}");
    }
    let grid = grid_bg("heisenberg-deformed:0.02");
    let frame = achsolve::theta::ThetaFrame::new(&grid, 4);
    let table = frame.curvature().unwrap();
    let oracle = frame.curvature_from_connection().unwrap();
    for (word, s) in table.iter() {
        assert_series_close(s, oracle.get(&word), 1e-10, &format!("R̄ at {word:?}"));
    }
}

#[test]
fn difference_tensor_table_holds_exactly_at_zero_perturbation() {
    let bg = torsion_bg();
    let a = qi((1, 3), (1, 2));
    let lc = LeviCivita::new(&bg, &MetricAnsatz::zero(6)).unwrap();
    for (word, k, v) in d_table_base(&a) {
        let s = lc.d.get(&w(word));
        for j in 0..=6 {
            let expected = if j == k { v.clone() } else { E::zero() };
            assert_eq!(at(s, j), expected, "D_{word} at order {j}");
        }
        // Undisplayed conjugate entries.
        let c = lc.d.get(&conj_word(&w(word)));
        assert_eq!(c, &s.conj(), "conjugate of D_{word}");
    }
}

#[test]
fn difference_tensor_table_holds_modulo_negligible_terms() {
    let bg = torsion_bg();
    let mut r = rng(21);
    for m in 1..=9usize {
        let base = random_exact_ansatz(m, m - 1, &mut r);
        let p = random_psi(&mut r);
        let pert = add_ansatz(&base, &pure_order(m, m, const_psi(&p)));
        let d0 = LeviCivita::new(&bg, &base).unwrap().d;
        let d1 = LeviCivita::new(&bg, &pert).unwrap().d;
        for (word, expected) in d_table_variation(m as i64, &p) {
            let delta = at(d1.get(&w(word)), m).sub(&at(d0.get(&w(word)), m));
            assert_eq!(delta, expected, "δD_{word} at m = {m}");
        }
    }
}

/// Einstein table at `φ = 0` on a constant background with torsion.
#[test]
fn einstein_tensor_at_zero_perturbation_matches_the_table() {
    let s = q(1, 2);
    let a = qi((1, 3), (1, 2));
    let bg = torsion_bg();
    let geo = Geometry::new(&bg, &MetricAnsatz::zero(6)).unwrap();
    let i = E::imag_unit();
    let a_1bar = bg.a11_1bar.as_const().cloned().unwrap();
    let a_0 =
        bg.tw_derivative(&bg.torsion_field(), achsolve::cr::CrIndex::Zero).unwrap().value.as_const().cloned().unwrap();
    let abs2 = a.mul(&a.conj());
    let expected: Vec<(&str, Vec<(usize, E)>)> = vec![
        ("ii", vec![]),
        ("i0", vec![]),
        ("i1", vec![]),
        ("00", vec![(4, abs2.mul(&q(-2, 1)))]),
        ("01", vec![(3, a_1bar)]),
        ("1b", vec![(2, s)]),
        ("11", vec![(2, i.mul(&a)), (4, a_0.neg())]),
    ];
    for (word, terms) in expected {
        let series = geo.einstein.get(&w(word));
        for k in 0..=6 {
            let v = terms.iter().find(|(o, _)| *o == k).map(|t| t.1.clone()).unwrap_or_else(E::zero);
            assert_eq!(at(series, k), v, "E_{word} at order {k}");
        }
    }
}

#[test]
fn curvature_variations_match_closed_forms() {
    // Includes an A ≠ 0 background, where E_00 carries the −2ρ⁴|A|² term.
    let backgrounds = [torsion_bg(), constant_bg(E::zero(), E::zero())];
    let mut r = rng(31);
    for bg in &backgrounds {
        for m in 1..=9usize {
            let base = random_exact_ansatz(m, m - 1, &mut r);
            let p = random_psi(&mut r);
            let pert = add_ansatz(&base, &pure_order(m, m, const_psi(&p)));
            let g0 = Geometry::new(bg, &base).unwrap();
            let g1 = Geometry::new(bg, &pert).unwrap();
            for (tensor, word, expected) in variation_table(m as i64, &p) {
                let delta = at(&component(&g1, tensor, word), m).sub(&at(&component(&g0, tensor, word), m));
                assert_eq!(delta, expected, "δ{tensor}_{word} at m = {m} on {}", bg.label);
            }
        }
    }
}

#[test]
fn solver_variation_matrix_agrees_with_the_engine() {
    let bg = torsion_bg();
    let mut r = rng(41);
    for m in 1..=9usize {
        let base = random_exact_ansatz(m, m - 1, &mut r);
        let p = random_psi(&mut r);
        let pert = add_ansatz(&base, &pure_order(m, m, const_psi(&p)));
        let g0 = Geometry::new(&bg, &base).unwrap();
        let g1 = Geometry::new(&bg, &pert).unwrap();
        let vm = variation_matrix(m as i64);
        for row in VariationRow::ALL {
            let tensor = if row.word().len() == 4 { "W-" } else { "E" };
            let delta = at(&component(&g1, tensor, row.word()), m).sub(&at(&component(&g0, tensor, row.word()), m));
            let c = vm.row(row);
            let predicted = (0..4).fold(E::zero(), |acc, j| acc.add(&c[j].mul(&p[j])));
            assert_eq!(delta, predicted, "{row:?} at m = {m}");
        }
    }
}

#[test]
fn curvature_components_at_zero_perturbation() {
    let bg = torsion_bg();
    let a = qi((1, 3), (1, 2));
    let geo = Geometry::new(&bg, &MetricAnsatz::zero(4)).unwrap();
    let rl = geo.riemann_lowered().unwrap();
    let i = E::imag_unit();
    for (word, k, v) in [
        ("i0i0", 0, q(4, 1)),
        ("i1i1", 0, E::zero()),
        ("01i0", 0, E::zero()),
        ("01i1", 2, a),
        ("0bi1", 0, i.mul(&q(-1, 2))),
        ("1bi1", 0, E::zero()),
        ("1bi0", 0, i.neg()),
    ] {
        assert_eq!(at(rl.get(&w(word)), k), v, "R_{word} at order {k}");
    }
}

#[test]
fn volume_form_and_hodge_star_identities() {
    let bg = torsion_bg();
    let mut r = rng(51);
    let geo = Geometry::new(&bg, &random_exact_ansatz(5, 5, &mut r)).unwrap();
    let eps = geo.volume_form().unwrap();
    // Flat value and antisymmetry.
    assert_eq!(at(eps.get(&w("01bi")), 0), qi((0, 1), (2, 1)));
    assert_eq!(eps.get(&w("10bi")), &eps.get(&w("01bi")).neg());
    // Anti-self-duality: ½ ε_KL^PQ W^-_IJPQ = −W^-_IJKL.
    let wm = geo.weyl_asd().unwrap();
    let star = geo.hodge(&wm).unwrap();
    for (word, s) in wm.iter() {
        assert_eq!(star.get(&word), &s.neg(), "⋆W^- at {word:?}");
    }
}

#[test]
fn flat_model_is_einstein_and_self_dual() {
    let bg = constant_bg(E::zero(), E::zero());
    let geo = Geometry::new(&bg, &MetricAnsatz::zero(8)).unwrap();
    for (word, s) in geo.einstein.iter() {
        assert!(s.is_zero(), "E_{word:?} nonzero");
    }
    let wm = geo.weyl_asd().unwrap();
    assert!(wm.iter().all(|(_, s)| s.is_zero()));
    // The self-dual half does not vanish, so the orientation is the right one.
    let full = geo.weyl().unwrap();
    assert!(full.iter().any(|(_, s)| !s.is_zero()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn einstein_variation_is_linear_in_the_perturbation(
        m in 1usize..=7,
        a in -20i64..20, b in -20i64..20, c in -20i64..20, d in -20i64..20,
    ) {
        let bg = torsion_bg();
        let p1 = [q(a, 3), q(b, 5), qi((c, 2), (d, 7)), qi((d, 3), (a, 4))];
        let p2 = [q(b, 2), q(c, 3), qi((a, 5), (b, 2)), qi((c, 7), (d, 3))];
        let sum: [E; 4] = std::array::from_fn(|j| p1[j].add(&p2[j]));
        let order = m;
        let e = |p: &[E; 4]| {
            Geometry::new(&bg, &pure_order(order, m, const_psi(p))).unwrap().einstein
        };
        let base = Geometry::new(&bg, &MetricAnsatz::zero(order)).unwrap().einstein;
        let (e1, e2, e12) = (e(&p1), e(&p2), e(&sum));
        for word in ["ii", "i1", "00", "01", "1b", "11"] {
            let x = w(word);
            let lhs = at(e12.get(&x), m).sub(&at(base.get(&x), m));
            let rhs = at(e1.get(&x), m).sub(&at(base.get(&x), m)).add(&at(e2.get(&x), m).sub(&at(base.get(&x), m)));
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn grid_perturbation_reproduces_the_exact_variation() {
    // The same ψ as constant fields on a grid background with float arithmetic.
    let bg = grid_bg("heisenberg-deformed:0.02");
    let m = 5usize;
    let p = [0.3, -0.2, 0.1, -0.4];
    let psi = [
        FieldValue::Const(Complex64::new(p[0], 0.0)),
        FieldValue::Const(Complex64::new(p[1], 0.0)),
        FieldValue::Const(Complex64::new(p[2], 0.05)),
        FieldValue::Const(Complex64::new(p[3], 0.2)),
    ];
    let g0 = Geometry::new(&bg, &MetricAnsatz::zero(m)).unwrap();
    let g1 = Geometry::new(&bg, &pure_order(m, m, psi)).unwrap();
    let delta = (g1.einstein.get(&w("1b")).coeff(m) - g0.einstein.get(&w("1b")).coeff(m)).max_norm();
    let mi = m as f64;
    let expected = ((mi - 4.0) / 8.0 * p[0] - (mi * mi - 6.0 * mi - 8.0) / 8.0 * p[1]).abs();
    assert!((delta - expected).abs() < 1e-10, "{delta} vs {expected}");
}
