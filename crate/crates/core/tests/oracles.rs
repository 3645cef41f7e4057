//! Checks against values computed independently of the library's own pipelines:
//! brute-force divisor sums, tabulated tau(n), monomial counting, and a direct
//! linear-algebra construction of the extremal forms.

use eqmf_core::decomposition::decompose_extremal;
use eqmf_core::extremal::{eisenstein_vector, extremal, extremal_poly, is_supported, normalise_series};
use eqmf_core::modular::{delta, dim_m, dim_qm, eisenstein};
use eqmf_core::poly::QmPoly;
use eqmf_core::series::{bernoulli, sigma, QSeries, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn r(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn factorial(n: u64) -> Rational {
    (1..=n).fold(Rational::one(), |a, k| a * r(k as i64))
}

fn brute_sigma(alpha: u32, n: u64) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(alpha)).sum()
}

#[test]
fn divisor_sums_match_brute_force() {
    for alpha in 0..6 {
        for n in 1..300 {
            assert_eq!(sigma(alpha, n).unwrap(), brute_sigma(alpha, n), "sigma_{alpha}({n})");
        }
    }
}

#[test]
fn bernoulli_table() {
    let expected = [(0, q(1, 1)), (2, q(1, 6)), (4, q(-1, 30)), (6, q(1, 42)), (8, q(-1, 30)),
        (10, q(5, 66)), (12, q(-691, 2730)), (14, q(7, 6)), (16, q(-3617, 510))];
    for (k, b) in expected {
        assert_eq!(bernoulli(k).unwrap(), b, "B_{k}");
    }
    assert!(bernoulli(3).is_err());
}

#[test]
fn eisenstein_from_divisor_sums() {
    let prec = 80;
    for (w, c) in [(2u32, -24i64), (4, 240), (6, -504), (8, 480), (10, -264), (14, -24)] {
        let e = eisenstein(w, prec).unwrap().series;
        assert_eq!(e.coeff(0), &r(1));
        for n in 1..prec {
            assert_eq!(e.coeff(n), &Rational::from_integer(brute_sigma(w - 1, n as u64) * c), "E_{w} at {n}");
        }
    }
}

#[test]
fn ramanujan_tau_values() {
    // tau(1..=12) and tau(20), tau(30)
    let tau = [1i64, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944];
    let d = delta(31).series;
    assert!(d.coeff(0).is_zero());
    for (i, t) in tau.iter().enumerate() {
        assert_eq!(d.coeff(i + 1), &r(*t), "tau({})", i + 1);
    }
    assert_eq!(d.coeff(20), &r(-7109760));
    assert_eq!(d.coeff(30), &r(-29211840));
}

#[test]
fn dimension_matches_monomial_count() {
    // E2^a E4^b E6^c are algebraically independent, so QM_w^r is spanned freely
    // by the monomials with a <= r
    for w in 0..=200i64 {
        for depth in 1..=4u32 {
            let mut count = 0u64;
            for a in 0..=depth as i64 {
                for b in 0..=w / 4 {
                    let rest = w - 2 * a - 4 * b;
                    if rest >= 0 && rest % 6 == 0 {
                        count += 1;
                    }
                }
            }
            assert_eq!(dim_qm(w, depth).unwrap(), count, "dim QM_{w}^{depth}");
        }
        let m = (0..=w / 4).filter(|b| (w - 4 * b) >= 0 && (w - 4 * b) % 6 == 0).count() as u64;
        assert_eq!(dim_m(w), m, "dim M_{w}");
    }
}

/// Kernel of the map `QM_w^r -> C^(dim-1)` (first `dim - 1` coefficients) by
/// Gaussian elimination on the monomial basis.
fn extremal_by_linear_algebra(w: u32, depth: u32) -> QSeries {
    let mut basis = Vec::new();
    for a in 0..=depth {
        for b in 0..=w / 4 {
            let used = 2 * a + 4 * b;
            if used <= w && (w - used) % 6 == 0 {
                let c = (w - used) / 6;
                let p = power(&QmPoly::e2(), a).mul(&power(&QmPoly::e4(), b)).mul(&power(&QmPoly::e6(), c));
                basis.push(p);
            }
        }
    }
    let d = basis.len();
    let prec = d + 4;
    let cols: Vec<QSeries> = basis.iter().map(|p| p.expand(prec)).collect();
    // rows: coefficient index 0..d-1, columns: basis elements
    let mut m: Vec<Vec<Rational>> = (0..d - 1).map(|i| cols.iter().map(|c| c.coeff(i).clone()).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..d {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[i].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    assert_eq!(pivots.len(), d - 1, "kernel must be one-dimensional");
    let free = (0..d).find(|c| !pivots.contains(c)).unwrap();
    let mut x = vec![Rational::zero(); d];
    x[free] = Rational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = -m[i][free].clone();
    }
    let mut total = QSeries::zero(prec);
    for (xi, c) in x.iter().zip(&cols) {
        total = total.add_scaled(c, xi);
    }
    total
}

fn power(p: &QmPoly, k: u32) -> QmPoly {
    (0..k).fold(QmPoly::constant(Rational::one()), |acc, _| acc.mul(p))
}

#[test]
fn recursion_agrees_with_direct_kernel() {
    for depth in 1..=4 {
        for w in (2..=36).step_by(2) {
            if !is_supported(w, depth) {
                continue;
            }
            let direct = normalise_series(&extremal_by_linear_algebra(w, depth)).unwrap();
            let prec = direct.prec();
            let ours = normalise_series(&extremal_poly(w, depth).unwrap().expand(prec)).unwrap();
            assert_eq!(ours, direct, "g_{w}^({depth})");
        }
    }
}

#[test]
fn extremality_up_to_weight_sixty() {
    for depth in 1..=4 {
        for w in (2..=60).step_by(2) {
            if !is_supported(w, depth) {
                continue;
            }
            let dim = dim_qm(w as i64, depth).unwrap() as usize;
            let g = extremal(w, depth, dim + 2).unwrap().render();
            assert_eq!(g.order_of_vanishing(), Some(dim - 1), "g_{w}^({depth})");
            assert!(g.coeff(dim - 1).is_positive(), "leading coefficient of g_{w}^({depth})");
        }
    }
}

#[test]
fn low_weight_closed_forms() {
    let g = extremal(4, 2, 40).unwrap().render();
    for n in 1..40u64 {
        assert_eq!(g.coeff(n as usize), &Rational::from_integer(brute_sigma(1, n) * 288 * n));
    }
    let g = extremal(6, 1, 40).unwrap().render();
    for n in 1..40u64 {
        assert_eq!(g.coeff(n as usize), &Rational::from_integer(brute_sigma(3, n) * 720 * n));
    }
    let h = normalise_series(&extremal(6, 1, 3).unwrap().render()).unwrap();
    assert_eq!(h.coeff(2), &r(18));
    let h = normalise_series(&extremal(4, 2, 3).unwrap().render()).unwrap();
    assert_eq!(h.coeff(2), &r(6));
}

#[test]
fn depth_one_constant_closed_form() {
    for k in 1..=8u64 {
        let w = 6 * k as u32;
        let expected = factorial(k - 1) * if k % 2 == 0 { r(1) } else { r(-1) };
        assert_eq!(eisenstein_vector(w, 1).unwrap().coeffs, vec![expected], "C_{w}");
    }
}

#[test]
fn depth_one_derivative_closed_form() {
    // g_w^(1) = (-1)^(w/2-1) 12 (floor(w/6)-1)! / (w-2) D E_(w-2) modulo cusp forms
    for w in (6..=40u32).step_by(2) {
        let sign = if (w / 2 - 1) % 2 == 0 { r(1) } else { r(-1) };
        let expected = sign * r(12) * factorial((w / 6) as u64 - 1) / r(w as i64 - 2);
        let d = decompose_extremal(w, 1, 60).unwrap();
        assert_eq!(d.eisenstein_multiples(), vec![expected], "w = {w}");
    }
}

fn depth_two_tail(k: u64) -> Rational {
    (1..k).fold(q(1, 3), |acc, l| acc + q(4 * l as i64 - 1, 18 * l as i64 * (2 * l as i64 + 1)))
}

#[test]
fn depth_two_closed_forms() {
    for k in 1..=8u64 {
        let three = |e: i64| if e >= 0 { r(3i64.pow(e as u32)) } else { q(1, 3) };
        let a = r(2) * three(k as i64 - 1) * factorial(2 * k - 1);
        let b = -three(k as i64) * factorial(2 * k - 1) * depth_two_tail(k);
        assert_eq!(eisenstein_vector(4 * k as u32, 2).unwrap().coeffs, vec![a.clone(), b], "w = {}", 4 * k);
        let a2 = -a;
        let b2 = three(k as i64) * factorial(2 * k - 1) * (depth_two_tail(k) - q(1, 3 * (2 * k as i64 - 1)));
        assert_eq!(eisenstein_vector(4 * k as u32 + 2, 2).unwrap().coeffs, vec![a2, b2], "w = {}", 4 * k + 2);
    }
}

#[test]
fn initial_vectors() {
    assert_eq!(eisenstein_vector(6, 3).unwrap().coeffs, vec![r(-12), r(15), r(-5)]);
    assert_eq!(eisenstein_vector(12, 4).unwrap().coeffs, vec![r(34560), r(-93456), r(88000), r(-28875)]);
    assert_eq!(eisenstein_vector(4, 2).unwrap().coeffs, vec![r(2), r(-1)]);
}

#[test]
fn quotient_vector_matches_series_decomposition() {
    for depth in 1..=4 {
        for w in (2..=48).step_by(2) {
            if !is_supported(w, depth) || w < 2 * depth + 4 {
                continue;
            }
            let from_quotient = eisenstein_vector(w, depth).unwrap().derivative_multiples().unwrap();
            let dim = dim_qm(w as i64, depth).unwrap() as usize;
            let d = decompose_extremal(w, depth, dim + depth as usize + 2).unwrap();
            assert_eq!(from_quotient, d.eisenstein_multiples(), "g_{w}^({depth})");
        }
    }
}
