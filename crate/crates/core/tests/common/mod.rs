//! Shared helpers and independent oracles for the integration tests.
#![allow(dead_code)]

use achsolve::cr::{Background, BackgroundSpec};
use achsolve::theta::index::{parse_word, ALL};
use achsolve::theta::{Dense, Geometry, Ix, LeviCivita, MetricAnsatz};
use achsolve::{Coeff, Complex64, ExactComplex, FieldValue, JetSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type E = ExactComplex;

pub fn w(s: &str) -> Vec<Ix> {
    parse_word(s).unwrap()
}

pub fn q(n: i64, d: i64) -> E {
    E::ratio(n, d)
}

pub fn qi(re: (i64, i64), im: (i64, i64)) -> E {
    E::from_ratios(re, im)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational(r: &mut ChaCha8Rng) -> E {
    q(r.gen_range(-9..=9), r.gen_range(1..=5))
}

pub fn random_complex_rational(r: &mut ChaCha8Rng) -> E {
    random_rational(r).add(&random_rational(r).mul(&E::imag_unit()))
}

/// Exact constant background `Scal = s`, `A_11 = a`.
pub fn constant_bg(s: E, a: E) -> Background<E> {
    Background::constant_labeled("test-constant", s, a).unwrap()
}

pub fn grid_bg(name: &str) -> Background<Complex64> {
    BackgroundSpec::parse(name).unwrap().build(name).unwrap()
}

/// Ansatz with only a `ρ^m` term, coefficients `(ψ_00, ψ_11̄, ψ_01, ψ_11)`.
pub fn pure_order<C: Coeff>(order: usize, m: usize, psi: [FieldValue<C>; 4]) -> MetricAnsatz<C> {
    let [a, b, c, d] = psi;
    MetricAnsatz {
        phi00: JetSeries::monomial(a, m, order),
        phi11bar: JetSeries::monomial(b, m, order),
        phi01: JetSeries::monomial(c, m, order),
        phi11: JetSeries::monomial(d, m, order),
    }
}

pub fn add_ansatz<C: Coeff>(x: &MetricAnsatz<C>, y: &MetricAnsatz<C>) -> MetricAnsatz<C> {
    MetricAnsatz {
        phi00: &x.phi00 + &y.phi00,
        phi11bar: &x.phi11bar + &y.phi11bar,
        phi01: &x.phi01 + &y.phi01,
        phi11: &x.phi11 + &y.phi11,
    }
}

/// Random exact constants for the four perturbation slots (`ψ_00`, `ψ_11̄` real).
pub fn random_psi(r: &mut ChaCha8Rng) -> [E; 4] {
    [random_rational(r), random_rational(r), random_complex_rational(r), random_complex_rational(r)]
}

pub fn const_psi(p: &[E; 4]) -> [FieldValue<E>; 4] {
    p.clone().map(FieldValue::Const)
}

/// Random exact ansatz with nonzero coefficients at orders `1..=top`.
pub fn random_exact_ansatz(order: usize, top: usize, r: &mut ChaCha8Rng) -> MetricAnsatz<E> {
    let mut a = MetricAnsatz::zero(order);
    for m in 1..=top.min(order) {
        let p = random_psi(r).map(|x| x.mul(&q(1, 4)));
        a = add_ansatz(&a, &pure_order(order, m, const_psi(&p)));
    }
    a
}

/// Random band-limited grid function (Fourier modes with `|k_a| ≤ kmax`).
pub fn random_grid_field(
    bg: &Background<Complex64>,
    kmax: i64,
    amp: f64,
    real: bool,
    r: &mut ChaCha8Rng,
) -> FieldValue<Complex64> {
    let geom = bg.geom().expect("grid background");
    let mut modes = Vec::new();
    for _ in 0..6 {
        let k = [r.gen_range(-kmax..=kmax), r.gen_range(-kmax..=kmax), r.gen_range(-kmax..=kmax)];
        let c = Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)) * amp;
        modes.push((k, c));
    }
    let data = (0..geom.len())
        .map(|n| {
            let x = geom.point(n);
            let v: Complex64 = modes
                .iter()
                .map(|(k, c)| {
                    let phase: f64 = (0..3).map(|a| k[a] as f64 * std::f64::consts::TAU * x[a] / geom.periods[a]).sum();
                    c * Complex64::from_polar(1.0, phase)
                })
                .sum();
            if real {
                Complex64::new(v.re, 0.0)
            } else {
                v
            }
        })
        .collect();
    FieldValue::grid(geom, data).unwrap()
}

/// Random grid ansatz with coefficients at orders `1..=top`.
pub fn random_grid_ansatz(
    bg: &Background<Complex64>,
    order: usize,
    top: usize,
    amp: f64,
    r: &mut ChaCha8Rng,
) -> MetricAnsatz<Complex64> {
    let mut a = MetricAnsatz::zero(order);
    for m in 1..=top.min(order) {
        let psi = [
            random_grid_field(bg, 1, amp, true, r),
            random_grid_field(bg, 1, amp, true, r),
            random_grid_field(bg, 1, amp, false, r),
            random_grid_field(bg, 1, amp, false, r),
        ];
        a = add_ansatz(&a, &pure_order(order, m, psi));
    }
    a
}

/// Levi-Civita connection coefficients from the Koszul formula in the frame,
/// minus the extended connection `Γ̄_{IJ}{}^K = δ_J^K γ(I, J)`:
/// `2Γ_{IJK} = Z_I g_JK + Z_J g_IK − Z_K g_IJ + C_IJ^L g_LK − C_IK^L g_LJ − C_JK^L g_LI`.
pub fn koszul_difference<C: Coeff>(lc: &LeviCivita<'_, C>) -> Dense<C> {
    let n = lc.order;
    let frame = &lc.frame;
    let g = &lc.g;
    let dg: Vec<Vec<[JetSeries<C>; 4]>> =
        ALL.iter().map(|&j| ALL.iter().map(|&k| frame.derivs(g.get(&[j, k])).unwrap()).collect()).collect();
    let cg = |i: Ix, j: Ix, k: Ix| {
        let mut s = JetSeries::zero(n);
        for l in ALL {
            s.add_product(frame.commutator(i, j, l), g.get(&[l, k]));
        }
        s
    };
    let half = C::ratio(1, 2);
    let mut low = Dense::zeros(3, n);
    for i in ALL {
        for j in ALL {
            for k in ALL {
                let mut s = dg[j][k][i].clone();
                s = &s + &dg[i][k][j];
                s = &s - &dg[i][j][k];
                s = &s + &cg(i, j, k);
                s = &s - &cg(i, k, j);
                s = &s - &cg(j, k, i);
                low.set(&[i, j, k], s.scale(&half));
            }
        }
    }
    let mut d = Dense::zeros(3, n);
    for i in ALL {
        for j in ALL {
            for k in ALL {
                let mut s = JetSeries::zero(n);
                for l in ALL {
                    s.add_product(low.get(&[i, j, l]), lc.ginv.get(&[l, k]));
                }
                if j == k {
                    s = &s - frame.gamma(i, j);
                }
                d.set(&[i, j, k], s);
            }
        }
    }
    d
}

pub fn assert_series_close(a: &JetSeries<Complex64>, b: &JetSeries<Complex64>, tol: f64, what: &str) {
    for k in 0..=a.order().min(b.order()) {
        let d = (a.coeff(k) - b.coeff(k)).max_norm();
        assert!(d <= tol, "{what}: order {k} differs by {d:e}");
    }
}

/// Exact order-k coefficient of a series with constant coefficients.
pub fn at(s: &JetSeries<E>, k: usize) -> E {
    s.coeff(k).as_const().cloned().unwrap_or_else(E::zero)
}

/// Reference background with torsion: `Scal = 1/2`, `A_11 = 1/3 + i/2`.
pub fn torsion_bg() -> Background<E> {
    constant_bg(q(1, 2), qi((1, 3), (1, 2)))
}

/// Displayed difference-tensor entries at `φ = 0`, as `(word, order, value)`.
pub fn d_table_base(a: &E) -> Vec<(&'static str, usize, E)> {
    let i = E::imag_unit();
    let zero = E::zero();
    vec![
        ("iii", 0, q(-1, 1)),
        ("i0i", 0, zero.clone()),
        ("i1i", 0, zero.clone()),
        ("00i", 0, q(1, 2)),
        ("01i", 0, zero.clone()),
        ("1bi", 0, q(1, 4)),
        ("11i", 0, zero.clone()),
        ("ii1", 0, zero.clone()),
        ("001", 0, zero.clone()),
        ("bb1", 0, zero.clone()),
        ("ib1", 0, zero.clone()),
        ("0b1", 0, zero.clone()),
        ("i01", 0, zero.clone()),
        ("011", 0, i.mul(&q(1, 2))),
        ("1b1", 0, zero.clone()),
        ("i11", 0, q(-1, 1)),
        ("b01", 2, a.conj()),
        ("111", 0, zero.clone()),
        ("ii0", 0, zero.clone()),
        ("000", 0, zero.clone()),
        ("1b0", 0, i.mul(&q(-1, 2))),
        ("110", 2, a.neg()),
        ("i00", 0, q(-2, 1)),
        ("i10", 0, zero.clone()),
        ("010", 0, zero),
    ]
}

/// Order-m change of the displayed entries under `φ ↦ φ + ψρ^m`.
pub fn d_table_variation(m: i64, p: &[E; 4]) -> Vec<(&'static str, E)> {
    let [p00, p1b, p01, p11] = p;
    let (p0b, pbb) = (p01.conj(), p11.conj());
    let i = E::imag_unit();
    let h = |n: i64, d: i64| q(n, d);
    vec![
        ("iii", E::zero()),
        ("i0i", E::zero()),
        ("i1i", E::zero()),
        ("00i", h(-(m - 4), 8).mul(p00)),
        ("01i", h(-(m - 3), 8).mul(p01)),
        ("1bi", h(-(m - 2), 8).mul(p1b)),
        ("11i", h(-(m - 2), 8).mul(p11)),
        ("ii1", E::zero()),
        ("001", E::zero()),
        ("bb1", E::zero()),
        ("ib1", h(m, 2).mul(&pbb)),
        ("0b1", i.mul(&h(1, 2)).mul(&pbb)),
        ("i01", h(m + 1, 2).mul(&p0b)),
        ("011", i.mul(&h(1, 2)).mul(&p00.sub(p1b))),
        ("1b1", i.mul(&h(1, 2)).mul(&p0b)),
        ("i11", h(m, 2).mul(p1b)),
        ("b01", i.mul(&h(1, 2)).mul(&pbb)),
        ("111", i.mul(p01)),
        ("ii0", E::zero()),
        ("000", E::zero()),
        ("1b0", E::zero()),
        ("110", E::zero()),
        ("i00", h(m, 2).mul(p00)),
        ("i10", h(m - 1, 2).mul(p01)),
        ("010", i.mul(&h(-1, 2)).mul(p01)),
    ]
}

/// Closed-form order-m variations of `E`, `W^-`, `W`, `P`, `ε` in `ψ`.
pub fn variation_table(m: i64, p: &[E; 4]) -> Vec<(&'static str, &'static str, E)> {
    let [p00, p1b, p01, p11] = p;
    let i = E::imag_unit();
    let f = |n: i64, d: i64| q(n, d);
    let lin = |a: E, x: &E, b: E, y: &E| a.mul(x).add(&b.mul(y));
    vec![
        ("E", "ii", lin(f(-m * (m - 4), 2), p00, f(-m * (m - 2), 1), p1b)),
        ("E", "i0", E::zero()),
        ("E", "i1", i.mul(&f(-(m + 1), 2)).mul(p01)),
        ("E", "00", lin(f(-(m * m - 6 * m - 4), 8), p00, f(m - 2, 2), p1b)),
        ("E", "01", f(-(m + 1) * (m - 5), 8).mul(p01)),
        ("E", "1b", lin(f(m - 4, 8), p00, f(-(m * m - 6 * m - 8), 8), p1b)),
        ("E", "11", f(-m * (m - 4), 8).mul(p11)),
        ("W-", "i1i1", f(m * m - 2 * m, 8).mul(p11)),
        ("W-", "i0i0", lin(f(m * m + 3 * m + 2, 12), p00, f(-(m * m + 4 * m + 4), 12), p1b)),
        ("W", "i1i1", f(m * m - 4, 4).mul(p11)),
        ("W", "i0i0", lin(f(m * m - 3 * m + 20, 6), p00, f(-(m * m - 2 * m + 16), 6), p1b)),
        ("P", "ii", lin(f(-(m * m - 3 * m - 1), 6), p00, f(-(2 * m * m - m + 2), 6), p1b)),
        ("P", "i0", E::zero()),
        ("P", "i1", i.mul(&f(-(m + 1), 4)).mul(p01)),
        ("P", "00", lin(f(-(m * m - 6 * m - 1), 24), p00, f(m * m + m - 14, 24), p1b)),
        ("P", "01", f(-(m * m - 4 * m - 1), 16).mul(p01)),
        ("P", "1b", lin(f(m * m - 3 * m - 10, 48), p00, f(-(m * m - 8 * m - 8), 48), p1b)),
        ("P", "11", f(-(m * m - 4 * m + 4), 16).mul(p11)),
        ("eps", "01bi", i.mul(p00).add(&i.mul(&f(2, 1)).mul(p1b))),
    ]
}

pub fn component(geo: &Geometry<'_, E>, tensor: &str, word: &str) -> JetSeries<E> {
    match tensor {
        "E" => geo.einstein.get(&w(word)).clone(),
        "W-" => geo.weyl_asd_component(&w(word)).unwrap(),
        "W" => geo.weyl().unwrap().get(&w(word)).clone(),
        "P" => geo.schouten().unwrap().get(&w(word)).clone(),
        "eps" => geo.volume_form().unwrap().get(&w(word)).clone(),
        other => panic!("unknown tensor {other}"),
    }
}
