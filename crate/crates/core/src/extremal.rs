//! Extremal quasimodular forms of depth 1 to 4.
//!
//! The forms are generated by weight recursions built from Serre derivatives
//! and multiplication by `E_4`, `E_6`, `Delta`. The recursions are written once,
//! generically over [`Carrier`], and run on two carriers:
//!
//! * [`QmPoly`]: the exact form as a polynomial in `E_2, E_4, E_6`;
//! * [`FVector`]: its image in the Eisenstein quotient (quasimodular forms
//!   modulo those with cusp-form components), written in the `f`-basis.
//!
//! The second carrier gives the coefficient vectors `(a_w, b_w, c_w, d_w)`
//! and from them the asymptotic main term of the Fourier coefficients.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::modular::{dim_qm, QuasimodularForm};
use crate::poly::QmPoly;
use crate::series::{bernoulli, int, pochhammer, rat, sigma, QSeries, Rational};

/// What the weight recursions need from a representation of quasimodular forms.
pub trait Carrier: Clone {
    /// Serre derivative `d_k`.
    fn serre(&self, k: i64) -> Self;
    fn mul_e4(&self) -> Self;
    fn mul_e6(&self) -> Self;
    fn mul_delta(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    fn add(&self, other: &Self) -> Self;

    fn serre_power(&self, k: i64, times: u32) -> Self {
        let mut f = self.clone();
        for j in 0..times {
            f = f.serre(k + 2 * j as i64);
        }
        f
    }
}

impl Carrier for QmPoly {
    fn serre(&self, k: i64) -> Self {
        QmPoly::serre(self, k)
    }
    fn mul_e4(&self) -> Self {
        self.mul(&QmPoly::e4())
    }
    fn mul_e6(&self) -> Self {
        self.mul(&QmPoly::e6())
    }
    fn mul_delta(&self) -> Self {
        self.mul(&QmPoly::delta())
    }
    fn scale(&self, c: &Rational) -> Self {
        QmPoly::scale(self, c)
    }
    fn add(&self, other: &Self) -> Self {
        QmPoly::add(self, other)
    }
}

/// Element of the Eisenstein quotient `QE_w^r` in the basis `f_w^(0..=r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FVector {
    pub weight: u32,
    pub depth: u32,
    /// `coeffs[k]` multiplies `f_w^(k)`.
    pub coeffs: Vec<Rational>,
}

impl FVector {
    pub fn new(weight: u32, coeffs: Vec<Rational>) -> Self {
        let depth = coeffs.len() as u32 - 1;
        FVector { weight, depth, coeffs }
    }
}

/// Coefficients of `f_{w+2}^(k)` and `f_{w+2}^(k+1)` in `d_{w-r} f_w^(k)` modulo
/// cusp parts: `-(w-r)/12` and `-(r-k)/12`.
pub fn serre_on_f_symbol(w: u32, r: u32, k: u32) -> Result<[(u32, Rational); 2]> {
    if k > r {
        return Err(Error::Domain(format!("f-symbol index {k} exceeds depth {r}")));
    }
    if w < 2 * r + 2 {
        return Err(Error::Domain(format!("Serre action on f_{w}^({k}) needs w >= 2r + 2")));
    }
    Ok(serre_f_unchecked(w, r, k))
}

fn serre_f_unchecked(w: u32, r: u32, k: u32) -> [(u32, Rational); 2] {
    [
        (k, rat(-(w as i64 - r as i64), 12)),
        (k + 1, rat(-(r as i64 - k as i64), 12)),
    ]
}

impl Carrier for FVector {
    /// Only `d_{w-r}` preserves the quotient; any other index is a logic error.
    fn serre(&self, k: i64) -> Self {
        assert_eq!(
            k,
            self.weight as i64 - self.depth as i64,
            "the quotient only carries d_(w-r)"
        );
        let mut out = vec![Rational::zero(); self.coeffs.len()];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (idx, factor) in serre_f_unchecked(self.weight, self.depth, j as u32) {
                if factor.is_zero() {
                    continue;
                }
                out[idx as usize] += c * factor;
            }
        }
        FVector { weight: self.weight + 2, depth: self.depth, coeffs: out }
    }
    fn mul_e4(&self) -> Self {
        FVector { weight: self.weight + 4, ..self.clone() }
    }
    fn mul_e6(&self) -> Self {
        FVector { weight: self.weight + 6, ..self.clone() }
    }
    fn mul_delta(&self) -> Self {
        FVector {
            weight: self.weight + 12,
            depth: self.depth,
            coeffs: vec![Rational::zero(); self.coeffs.len()],
        }
    }
    fn scale(&self, c: &Rational) -> Self {
        FVector {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            ..self.clone()
        }
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!((self.weight, self.depth), (other.weight, other.depth));
        FVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            ..self.clone()
        }
    }
}

/// Horner evaluation of an integer polynomial given by descending coefficients.
fn poly_at(coeffs: &[i64], x: i64) -> BigInt {
    let x = BigInt::from(x);
    coeffs
        .iter()
        .fold(BigInt::zero(), |acc, &c| acc * &x + BigInt::from(c))
}

fn q(coeffs: &[i64], x: i64) -> Rational {
    Rational::from_integer(poly_at(coeffs, x))
}

// Polynomials of the depth-4 long step, highest degree first.
const P0: [i64; 15] = [
    53567, 4499628, 173318340, 4055616864, 64374205218, 732790207224, 6165100658404,
    38914973459904, 185044363180416, 659055640624128, 1729058937394176, 3237068849283072,
    4084118362128384, 3105388005949440, 1072718335180800,
];
const P1: [i64; 12] = [
    21257, 1465884, 45186990, 821051740, 9759703548, 79588527156, 453687847200,
    1804779218520, 4900200364800, 8628400143360, 8845395333120, 3990767616000,
];
const P2: [i64; 17] = [
    2662740, 224120550, 8648003840, 202621853220, 3217542322665, 36586266504480,
    306658234963680, 1919356528986240, 8970889439482816, 30866477857195008,
    75319919247624192, 118664936756305920, 83296021547483136, -82769401579438080,
    -258790551639293952, -245119018746249216, -86822757140004864,
];
const P3: [i64; 18] = [
    4272785, 351970350, 13234823080, 300533087760, 4592608729932, 49787752253076,
    392868254956864, 2274866661846720, 9597118952486912, 28789901067644544,
    58741997991303168, 79017091035181056, 100071999240486912, 278562611915587584,
    779359222970449920, 1260737947219525632, 1054463073573666816, 355736061701259264,
];
const P4: [i64; 18] = [
    517135, 40772970, 1455719580, 31076826800, 441034824168, 4375275488634,
    31084796008256, 160090786631040, 608772267089664, 1834128793979392, 5229385586024448,
    15775977503047680, 40287913631023104, 57115900062203904, -19258645489385472,
    -224285038806564864, -343616934723452928, -182090547421249536,
];
const P5: [i64; 14] = [
    531441, 36690686, 1133566168, 20680195920, 247548700336, 2043291298652, 11897624359104,
    49185666453888, 143692776009216, 293687697411072, 418695721574400, 426532499288064,
    316421756411904, 135523565862912,
];

/// Linear combination `sum c_i * t_i`.
fn combine<T: Carrier>(terms: Vec<(Rational, T)>) -> T {
    let mut iter = terms.into_iter();
    let (c, t) = iter.next().expect("at least one term");
    iter.fold(t.scale(&c), |acc, (c, t)| acc.add(&t.scale(&c)))
}

/// Depth 1, `w = 0 mod 6`.
fn depth1_step<T: Carrier>(g: &T, w: i64, step: u32) -> T {
    let d = g.serre(w - 1);
    match step {
        6 => combine(vec![(int(1), d.mul_e4()), (-rat(w + 1, 12), g.mul_e6())]),
        2 => d.scale(&rat(12, w - 1)),
        4 => g.mul_e4(),
        _ => unreachable!(),
    }
}

/// Depth 2, `w = 0 mod 4`.
fn depth2_step<T: Carrier>(g: &T, w: i64, step: u32) -> T {
    match step {
        4 => combine(vec![
            (int(w * (w + 1)), g.mul_e4()),
            (int(-36), g.serre_power(w - 2, 2)),
        ]),
        2 => g.serre(w - 2).scale(&rat(12, w - 2)),
        _ => unreachable!(),
    }
}

/// Depth 3, `w = 0 mod 6`.
fn depth3_step<T: Carrier>(g: &T, w: i64, step: u32) -> T {
    let k = w - 3;
    match step {
        6 => {
            let d1 = g.serre(k);
            let d3 = d1.serre_power(k + 2, 2);
            combine(vec![
                (int(48 * (7 * w * w + 42 * w + 60)), d3),
                (-q(&[15, 96, 151, -30, -116], w), d1.mul_e4()),
                (
                    -q(&[9, 45, 40, 24, 144], w) * int(w + 1) / int(6),
                    g.mul_e6(),
                ),
            ])
        }
        2 => g.serre(k),
        4 => combine(vec![
            (int((w + 1) * (3 * w + 1)), g.mul_e4()),
            (int(-48), g.serre_power(k, 2)),
        ]),
        _ => unreachable!(),
    }
}

/// Depth 4, `w = 0 mod 12`.
fn depth4_step<T: Carrier>(g: &T, w: i64, step: u32) -> T {
    let k = w - 4;
    let d1 = g.serre(k);
    let d2 = d1.serre(k + 2);
    let d3 = || d2.serre(k + 4);
    let d4 = || d2.serre_power(k + 4, 2);
    let w4 = int(w + 4).pow(4);
    match step {
        12 => combine(vec![
            (-q(&P0, w), d4().mul_e4()),
            (&w4 / int(12) * q(&P1, w), d3().mul_e6()),
            (q(&P2, w) / int(720), d2.mul_e4().mul_e4()),
            (q(&P3, w) / int(8640), d1.mul_e4().mul_e6()),
            (int(w + 1) * q(&P4, w) / int(25920), g.mul_e4().mul_e4().mul_e4()),
            (int(w + 1) * &w4 * q(&P5, w) / int(15), g.mul_delta()),
        ]),
        2 => d1,
        4 => combine(vec![
            (int((w + 1) * (2 * w + 1)), g.mul_e4()),
            (int(-18), d2),
        ]),
        6 => combine(vec![
            (q(&[17, 78, 90], w), d3()),
            (-q(&[191, 1008, 1504, 192, -576], w) / int(144), d1.mul_e4()),
            (
                -int(w + 1) * q(&[81, 376, 560, 528, 576], w) / int(432),
                g.mul_e6(),
            ),
        ]),
        8 => combine(vec![
            (
                -q(&[1313, 28678, 255122, 1183008, 3016512, 4012416, 2177280], w),
                d4(),
            ),
            (
                q(
                    &[
                        13423, 295800, 2645368, 12166080, 29311504, 29020416, -15653376,
                        -56692224, -33094656,
                    ],
                    w,
                ) / int(144),
                d2.mul_e4(),
            ),
            (
                q(
                    &[
                        6561, 136994, 1139536, 4759344, 10294016, 11541472, 14671104,
                        41398272, 63016704, 31974912,
                    ],
                    w,
                ) / int(432),
                d1.mul_e6(),
            ),
            (
                int(w + 1)
                    * q(
                        &[
                            2048, 38685, 287792, 1130616, 3110288, 8497968, 18484992,
                            14141952, -20570112, -30855168,
                        ],
                        w,
                    )
                    / int(2592),
                g.mul_e4().mul_e4(),
            ),
        ]),
        10 => combine(vec![
            (q(&[293, 4332, 22968, 51192, 40824], w), d3().mul_e4()),
            (-q(&[1, 15, 90, 270, 405, 243], w) * rat(4, 3), d2.mul_e6()),
            (
                -q(&[3311, 51234, 291550, 731040, 717696, -2592, -256608], w) / int(144),
                d1.mul_e4().mul_e4(),
            ),
            (
                -int(w + 1)
                    * q(&[1313, 19430, 104354, 251616, 310464, 300672, 248832], w)
                    / int(432),
                g.mul_e4().mul_e6(),
            ),
        ]),
        _ => unreachable!(),
    }
}

/// Base weight and period of the recursion for depth `r`.
fn schedule(r: u32) -> (u32, u32) {
    match r {
        1 => (6, 6),
        2 => (4, 4),
        3 => (6, 6),
        4 => (12, 12),
        _ => unreachable!(),
    }
}

/// Checks that `(w, r)` is in the range covered by the recursions.
pub fn check_supported(w: u32, r: u32) -> Result<()> {
    if !(1..=4).contains(&r) {
        return Err(Error::UnsupportedDepth(r));
    }
    let (base, _) = schedule(r);
    if w % 2 == 1 || w < base {
        return Err(Error::Domain(format!(
            "extremal forms of depth {r} are built for even w >= {base}, got w = {w}"
        )));
    }
    Ok(())
}

/// Whether `(w, r)` is a supported pair.
pub fn is_supported(w: u32, r: u32) -> bool {
    check_supported(w, r).is_ok()
}

/// Runs the recursion for `(w, r)` from the given base value.
fn run_recursion<T: Carrier>(w: u32, r: u32, base_value: T) -> Result<T> {
    check_supported(w, r)?;
    let (base, period) = schedule(r);
    let step = |g: &T, v: u32, s: u32| -> T {
        let v = v as i64;
        match r {
            1 => depth1_step(g, v, s),
            2 => depth2_step(g, v, s),
            3 => depth3_step(g, v, s),
            _ => depth4_step(g, v, s),
        }
    };
    let mut g = base_value;
    let mut v = base;
    while v + period <= w {
        g = step(&g, v, period);
        v += period;
    }
    if w > v {
        g = step(&g, v, w - v);
    }
    Ok(g)
}

fn base_poly(r: u32) -> QmPoly {
    match r {
        1 => QmPoly::from_terms(6, &[(1, 1, 1, 0), (-1, 0, 0, 1)]),
        2 => QmPoly::from_terms(4, &[(1, 0, 1, 0), (-1, 2, 0, 0)]),
        3 => QmPoly::from_terms(6, &[(5, 3, 0, 0), (-3, 1, 1, 0), (-2, 0, 0, 1)]),
        4 => QmPoly::from_terms(
            12,
            &[
                (13025, 0, 3, 0),
                (-12796, 0, 0, 2),
                (3852, 1, 1, 1),
                (-2706, 2, 2, 0),
                (27500, 3, 0, 1),
                (-28875, 4, 1, 0),
            ],
        ),
        _ => unreachable!(),
    }
}

fn base_fvector(r: u32) -> FVector {
    let (base, _) = schedule(r);
    let coeffs: &[i64] = match r {
        1 => &[0, -1],
        2 => &[0, 2, -1],
        3 => &[0, -12, 15, -5],
        4 => &[0, 34560, -93456, 88000, -28875],
        _ => unreachable!(),
    };
    FVector::new(base, coeffs.iter().map(|&c| int(c)).collect())
}

/// The un-normalised extremal form `g_w^(r)` as an exact polynomial in `E_2, E_4, E_6`.
pub fn extremal_poly(w: u32, r: u32) -> Result<QmPoly> {
    run_recursion(w, r, base_poly(r))
}

/// `g_w^(r)` expanded to `prec` coefficients, in components form.
///
/// Fails if `prec < dim QM_w^r`, or if the constructed form does not vanish to
/// exactly order `dim QM_w^r - 1`.
pub fn extremal(w: u32, r: u32, prec: usize) -> Result<QuasimodularForm> {
    check_supported(w, r)?;
    let dim = dim_qm(w as i64, r)? as usize;
    if prec < dim {
        return Err(Error::InsufficientPrecision { needed: dim, got: prec });
    }
    let poly = extremal_poly(w, r)?;
    let probe = poly.expand(dim);
    if probe.order_of_vanishing() != Some(dim - 1) {
        return Err(Error::Inconsistent(format!(
            "g_{w}^({r}) does not vanish to order {}",
            dim - 1
        )));
    }
    Ok(poly.to_quasimodular(r, prec))
}

/// Scales a form so that its first nonzero coefficient is 1.
pub fn normalise(g: &QuasimodularForm) -> Result<QuasimodularForm> {
    let lead = leading_coefficient(&g.render())?;
    Ok(g.scale(&lead.recip()))
}

/// Normalises a bare q-series.
pub fn normalise_series(s: &QSeries) -> Result<QSeries> {
    let lead = leading_coefficient(s)?;
    Ok(s.scale(&lead.recip()))
}

fn leading_coefficient(s: &QSeries) -> Result<Rational> {
    match s.order_of_vanishing() {
        Some(n) => Ok(s.coeff(n).clone()),
        None => Err(Error::Degenerate(format!(
            "form vanishes to its full precision {}",
            s.prec()
        ))),
    }
}

/// Coefficients `(a_w, b_w, c_w, d_w)` (truncated to length `r`) of the image of
/// `g_w^(r)` in the Eisenstein quotient, in the basis `f_w^(1..=r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinVector {
    pub weight: u32,
    pub depth: u32,
    pub coeffs: Vec<Rational>,
}

impl EisensteinVector {
    /// Multiples `c_l` of `D^l E_{w-2l}` for `l = 1..=r`, using
    /// `f_w^(l) = (-1)^l 12^l / (w-2l)_l * D^l E_{w-2l}` modulo cusp parts.
    ///
    /// Only defined when every `E_{w-2l}` has weight at least 4.
    pub fn derivative_multiples(&self) -> Result<Vec<Rational>> {
        let (w, r) = (self.weight as i64, self.depth as i64);
        if w < 2 * r + 4 {
            return Err(Error::Domain(format!(
                "basis change to D^l E_(w-2l) needs w >= 2r + 4, got w = {w}, r = {r}"
            )));
        }
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let l = i as i64 + 1;
                let sign = if l % 2 == 0 { int(1) } else { int(-1) };
                a * sign * int(12).pow(l as i32) / Rational::from_integer(pochhammer(w - 2 * l, l as u32))
            })
            .collect())
    }
}

/// Propagates the `f`-basis coefficients of the base form through the recursion.
pub fn eisenstein_vector(w: u32, r: u32) -> Result<EisensteinVector> {
    let v = run_recursion(w, r, base_fvector(r))?;
    debug_assert_eq!(v.weight, w);
    if !v.coeffs[0].is_zero() {
        return Err(Error::Inconsistent(format!(
            "quotient image of g_{w}^({r}) has nonzero constant part"
        )));
    }
    Ok(EisensteinVector { weight: w, depth: r, coeffs: v.coeffs[1..].to_vec() })
}

/// One Eisenstein contribution `prefactor * n^order * sigma_{eis_weight-1}(n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTerm {
    pub order: u32,
    pub eis_weight: u32,
    pub prefactor: Rational,
}

/// Exact Eisenstein part of the Fourier coefficients of `g_w^(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTermModel {
    pub weight: u32,
    pub depth: u32,
    pub terms: Vec<MainTerm>,
}

impl MainTermModel {
    /// From the multiples `c_l` of `D^l E_{w-2l}`, `l = 1..`; the `l`-th prefactor
    /// is `c_l * (-2m / B_m)` with `m = w - 2l` (`E_2` included at `m = 2`).
    pub fn from_multiples(weight: u32, depth: u32, multiples: &[Rational]) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, c) in multiples.iter().enumerate() {
            let order = i as u32 + 1;
            let m = weight as i64 - 2 * order as i64;
            if c.is_zero() {
                continue;
            }
            if m < 2 {
                return Err(Error::Inconsistent(format!(
                    "nonzero Eisenstein multiple at weight {m}"
                )));
            }
            let m = m as u32;
            let prefactor = c * (-int(2 * m as i64) / bernoulli(m)?);
            terms.push(MainTerm { order, eis_weight: m, prefactor });
        }
        Ok(MainTermModel { weight, depth, terms })
    }

    /// Prefactor of `n sigma_{w-3}(n)`; zero if absent.
    pub fn leading_prefactor(&self) -> Rational {
        self.terms
            .iter()
            .find(|t| t.order == 1)
            .map(|t| t.prefactor.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn evaluate(&self, n: u64) -> Rational {
        self.terms
            .iter()
            .map(|t| {
                let s = sigma(t.eis_weight - 1, n).expect("n >= 1");
                &t.prefactor * Rational::from_integer(BigInt::from(n).pow(t.order) * s)
            })
            .fold(Rational::zero(), |a, b| a + b)
    }
}

/// Main-term model of `g_w^(r)`; uses the quotient-space vector when the basis
/// change applies and the exact series decomposition otherwise (low weights).
pub fn main_term_model(w: u32, r: u32) -> Result<MainTermModel> {
    let ev = eisenstein_vector(w, r)?;
    let multiples = match ev.derivative_multiples() {
        Ok(m) => m,
        Err(_) => {
            let dim = dim_qm(w as i64, r)? as usize;
            let d = crate::decomposition::decompose_extremal(w, r, dim + r as usize + 2)?;
            d.entries.iter().skip(1).map(|e| e.eis_mult.clone()).collect()
        }
    };
    MainTermModel::from_multiples(w, r, &multiples)
}

/// Eisenstein contribution to the `n`-th coefficient of `g_w^(r)`.
pub fn main_term(w: u32, r: u32, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("main term is defined for n >= 1".into()));
    }
    Ok(main_term_model(w, r)?.evaluate(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{eisenstein, f_basis, SerreDerivative};

    #[test]
    fn extremal_base_cases() {
        let g = extremal(6, 1, 10).unwrap();
        let s = g.render();
        assert_eq!(s.order_of_vanishing(), Some(1));
        assert_eq!(s.coeff(1), &int(720));
        let de4 = eisenstein(4, 10).unwrap().series.derive().scale(&int(3));
        assert_eq!(s, de4);

        let s = extremal(4, 2, 10).unwrap().render();
        assert_eq!(&s.coeffs()[..3], &[int(0), int(288), int(1728)]);
        let de2 = eisenstein(2, 10).unwrap().series.derive().scale(&int(-12));
        assert_eq!(s, de2);
    }

    #[test]
    fn weight_twelve_depth_four() {
        let poly = extremal_poly(12, 4).unwrap();
        assert_eq!(poly.to_string(), "13025*E4^3 - 12796*E6^2 + 3852*E2*E4*E6 - 2706*E2^2*E4^2 + 27500*E2^3*E6 - 28875*E2^4*E4");
        let s = extremal(12, 4, 12).unwrap().render();
        assert_eq!(s.order_of_vanishing(), Some(5));
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(matches!(extremal(12, 4, 5), Err(Error::InsufficientPrecision { needed: 6, got: 5 })));
        assert!(extremal(4, 1, 10).is_err());
        assert!(extremal(7, 2, 10).is_err());
        assert!(extremal(10, 4, 10).is_err());
        assert!(matches!(extremal(20, 5, 10), Err(Error::UnsupportedDepth(5))));
    }

    #[test]
    fn normalisation() {
        let g = normalise(&extremal(6, 1, 5).unwrap()).unwrap().render();
        assert_eq!(g.coeff(1), &int(1));
        assert_eq!(g.coeff(2), &int(18));
        let h = normalise(&extremal(4, 2, 5).unwrap()).unwrap();
        assert_eq!(h.render().coeff(2), &int(6));
        assert_eq!(normalise(&h).unwrap(), h);
        let zero = QuasimodularForm::zero(8, 1, 4);
        assert!(matches!(normalise(&zero), Err(Error::Degenerate(_))));
    }

    #[test]
    fn serre_symbols() {
        let s = serre_on_f_symbol(6, 1, 1).unwrap();
        assert_eq!(s, [(1, rat(-5, 12)), (2, int(0))]);
        assert_eq!(serre_on_f_symbol(20, 3, 3).unwrap()[1].1, int(0));
        assert!(serre_on_f_symbol(20, 3, 4).is_err());
        assert!(serre_on_f_symbol(6, 3, 1).is_err());
    }

    #[test]
    fn serre_symbol_matches_series_modulo_cusp_forms() {
        // below weight 12 there are no cusp forms, so the quotient is exact there
        let p = 20;
        for (w, r, k) in [(8u32, 2u32, 1u32), (8, 3, 2), (6, 1, 1), (8, 2, 2), (10, 3, 1)] {
            let lhs = f_basis(w, k, p).unwrap().serre(w as i64 - r as i64).render();
            let [(k0, c0), (k1, c1)] = serre_on_f_symbol(w, r, k).unwrap();
            let mut rhs = f_basis(w + 2, k0, p).unwrap().render().scale(&c0);
            if !c1.is_zero() {
                rhs = rhs.add_scaled(&f_basis(w + 2, k1, p).unwrap().render(), &c1);
            }
            let diff = &lhs - &rhs;
            if w + 2 < 12 {
                assert!(diff.is_zero(), "w={w} r={r} k={k}");
            } else {
                // weight 12 picks up a multiple of Delta
                let c = diff.coeff(1).clone();
                assert_eq!(diff, crate::modular::delta(p).series.scale(&c), "w={w} r={r} k={k}");
            }
        }
    }

    #[test]
    fn eisenstein_vector_examples() {
        assert_eq!(eisenstein_vector(6, 1).unwrap().coeffs, vec![int(-1)]);
        assert_eq!(eisenstein_vector(4, 2).unwrap().coeffs, vec![int(2), int(-1)]);
        assert_eq!(
            eisenstein_vector(12, 4).unwrap().coeffs,
            vec![int(34560), int(-93456), int(88000), int(-28875)]
        );
    }

    #[test]
    fn main_term_low_weights_are_exact() {
        for n in 1..30u64 {
            let s = sigma(3, n).unwrap() * BigInt::from(720 * n);
            assert_eq!(main_term(6, 1, n).unwrap(), Rational::from_integer(s));
            let s = sigma(1, n).unwrap() * BigInt::from(288 * n);
            assert_eq!(main_term(4, 2, n).unwrap(), Rational::from_integer(s));
        }
        assert!(main_term(6, 1, 0).is_err());
    }

}
