//! The certified bounds checked against exact coefficients.

use std::sync::OnceLock;

use eqmf_core::extremal::{extremal, main_term_model};
use eqmf_core::modular::{delta, eisenstein, ModularFormSeries};
use eqmf_core::positivity::{bound_model, jenkins_rouse_constant, zeta_upper, BoundModel};
use eqmf_core::series::{divisor_count, sigma, QSeries, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn r(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `|a| <= c n^((w-1)/2) sigma_0(n)`, checked exactly by squaring.
fn within(a: &Rational, c: &Rational, w: u32, n: u64) -> bool {
    let s0 = r(divisor_count(n));
    a * a <= c * c * r(BigInt::from(n).pow(w - 1)) * &s0 * &s0
}

fn cusp_forms(prec: usize) -> Vec<ModularFormSeries> {
    let d = delta(prec);
    let e4 = eisenstein(4, prec).unwrap();
    let e6 = eisenstein(6, prec).unwrap();
    vec![d.clone(), d.mul(&e4), d.mul(&e6), d.mul(&e4).mul(&e4)]
}

fn sample() -> &'static Vec<(ModularFormSeries, Rational)> {
    static CELL: OnceLock<Vec<(ModularFormSeries, Rational)>> = OnceLock::new();
    CELL.get_or_init(|| {
        cusp_forms(2001)
            .into_iter()
            .map(|f| {
                let c = jenkins_rouse_constant(&f).unwrap().value().clone();
                (f, c)
            })
            .collect()
    })
}

#[test]
fn jenkins_rouse_holds_to_five_thousand() {
    let prec = 5001;
    for f in cusp_forms(prec) {
        assert!([12, 16, 18, 20].contains(&f.weight));
        let c = jenkins_rouse_constant(&f).unwrap();
        for n in 1..prec as u64 {
            assert!(within(f.series.coeff(n as usize), c.value(), f.weight, n), "weight {} at n = {n}", f.weight);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jenkins_rouse_random_pairs(idx in 0usize..4, n in 1u64..=2000) {
        let (f, c) = &sample()[idx];
        prop_assert!(within(f.series.coeff(n as usize), c, f.weight, n));
    }
}

#[test]
fn divisor_count_square_root_bound() {
    let limit = 1_000_000usize;
    let mut count = vec![0u32; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            count[m] += 1;
        }
    }
    for (n, &c) in count.iter().enumerate().skip(1) {
        assert!((c as u64).pow(2) <= 4 * n as u64, "sigma_0({n}) = {c}");
    }
}

const SAMPLE: [(u32, u32); 4] = [(12, 1), (16, 2), (18, 3), (24, 4)];

fn coefficients(w: u32, depth: u32, prec: usize) -> QSeries {
    extremal(w, depth, prec).unwrap().render()
}

#[test]
fn remainder_within_summed_constants() {
    for (w, depth) in SAMPLE {
        let model = main_term_model(w, depth).unwrap();
        let c = bound_model(w, depth).unwrap().total_constant();
        let g = coefficients(w, depth, 2001);
        for n in 1..=2000u64 {
            let rem = g.coeff(n as usize) - model.evaluate(n);
            assert!(within(&rem, c.value(), w, n), "g_{w}^({depth}) at n = {n}");
        }
    }
}

#[test]
fn lower_bound_below_actual_coefficients() {
    for (w, depth) in SAMPLE {
        let m = bound_model(w, depth).unwrap();
        let g = coefficients(w, depth, 2001);
        for n in 1..=2000u64 {
            assert!(&m.lower_bound_coefficient(n) <= g.coeff(n as usize), "g_{w}^({depth}) at n = {n}");
        }
    }
    let m = bound_model(12, 1).unwrap();
    let g = coefficients(12, 1, 51);
    assert!(&m.lower_bound_coefficient(50) <= g.coeff(50));
}

fn check_threshold(m: &BoundModel, w: u32, depth: u32) {
    let n0 = m.threshold().expect("threshold exists");
    assert!(m.lower_bound_coefficient(n0).is_positive(), "({w}, {depth})");
    assert!(m.normalized(n0).is_positive());
    if n0 > 1 {
        assert!(!m.normalized(n0 - 1).is_positive(), "N0 not minimal for ({w}, {depth})");
    }
    // spot-check monotonicity past N0
    for k in [1, 2, 10, 1000, 1 << 20] {
        assert!(m.normalized(n0 + k).is_positive());
    }
}

#[test]
fn thresholds_are_minimal_and_certified() {
    for (w, depth) in SAMPLE.iter().copied().chain([(6, 1), (4, 2), (6, 3), (12, 4), (40, 4), (60, 3)]) {
        check_threshold(&bound_model(w, depth).unwrap(), w, depth);
    }
    assert_eq!(bound_model(6, 1).unwrap().threshold(), Some(1));
    assert_eq!(bound_model(4, 2).unwrap().threshold(), Some(1));
}

#[test]
fn leading_prefactor_is_positive() {
    for depth in 1..=4 {
        for w in (4..=100).step_by(2) {
            if let Ok(m) = main_term_model(w, depth) {
                assert!(m.leading_prefactor().is_positive(), "({w}, {depth})");
            }
        }
    }
}

#[test]
fn exact_main_terms_at_low_weight() {
    let m = main_term_model(6, 1).unwrap();
    let m2 = main_term_model(4, 2).unwrap();
    for n in 1..50u64 {
        assert_eq!(m.evaluate(n), r(sigma(3, n).unwrap() * 720 * n));
        assert_eq!(m2.evaluate(n), r(sigma(1, n).unwrap() * 288 * n));
    }
}

#[test]
fn zeta_bounds_decrease() {
    let z2 = zeta_upper(2).unwrap();
    let mut prev = z2.clone();
    for s in 3..=200 {
        let z = zeta_upper(s).unwrap();
        assert!(z <= prev && z.value() > &r(1));
        prev = z;
    }
    // the bound is within 1e-4 of pi^2/6
    assert!(z2.value() - Rational::new(BigInt::from(164493407), BigInt::from(100000000)) < Rational::new(1.into(), 10000.into()));
    assert!(zeta_upper(1).is_err());
}

#[test]
fn thresholds_match_recorded_values() {
    let table = include_str!("data/n0.csv");
    let rows: Vec<(u32, u32, u64)> = table
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<u64> = l.split(',').map(|x| x.parse().unwrap()).collect();
            (f[0] as u32, f[1] as u32, f[2])
        })
        .collect();
    assert_eq!(rows.len(), 190);
    for (w, depth, n0) in rows {
        assert_eq!(bound_model(w, depth).unwrap().threshold(), Some(n0), "N0({w}, {depth})");
    }
}
