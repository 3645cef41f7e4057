//! Certified positivity check for extremal forms: explicit cusp-form bounds,
//! a lower bound on the coefficients, the threshold beyond which it is
//! positive, and an exact scan of the coefficients below it.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decomposition::{decompose_extremal, DerivativeDecomposition};
use crate::error::{Error, Result};
use crate::extremal::{extremal_poly, check_supported, MainTermModel};
use crate::modular::{dim_qm, dim_s, ModularFormSeries};
use crate::series::{int, isqrt, rat, QSeries, Rational};

const FRAC_BITS: u32 = 128;

fn scale() -> BigInt {
    BigInt::one() << FRAC_BITS
}

fn round_down(x: &Rational) -> Rational {
    let s = scale();
    Rational::new((x * Rational::from_integer(s.clone())).floor().to_integer(), s)
}

fn round_up(x: &Rational) -> Rational {
    let s = scale();
    Rational::new((x * Rational::from_integer(s.clone())).ceil().to_integer(), s)
}

/// Closed interval with dyadic endpoints; every operation rounds outward.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    fn exact(x: Rational) -> Self {
        Interval { lo: round_down(&x), hi: round_up(&x) }
    }

    fn from_bounds(lo: &Rational, hi: &Rational) -> Self {
        Interval { lo: round_down(lo), hi: round_up(hi) }
    }

    fn add(&self, o: &Self) -> Self {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn mul(&self, o: &Self) -> Self {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap();
        let hi = p.iter().max().unwrap();
        Interval::from_bounds(lo, hi)
    }

    fn mul_exact(&self, c: &Rational) -> Self {
        self.mul(&Interval { lo: c.clone(), hi: c.clone() })
    }

    /// `1 / x` for an interval of positive numbers.
    fn recip(&self) -> Self {
        assert!(self.lo.is_positive(), "reciprocal of a non-positive interval");
        Interval::from_bounds(&self.hi.recip(), &self.lo.recip())
    }

    /// `sqrt(x)` for an interval of nonnegative numbers.
    fn sqrt(&self) -> Self {
        let s2 = Rational::from_integer(BigInt::one() << (2 * FRAC_BITS));
        let lo_n = (&self.lo * &s2).floor().to_integer();
        let hi_n = (&self.hi * &s2).ceil().to_integer();
        let lo = lo_n.sqrt();
        let mut hi = hi_n.sqrt();
        if &hi * &hi < hi_n {
            hi += 1;
        }
        Interval { lo: Rational::new(lo, scale()), hi: Rational::new(hi, scale()) }
    }
}

/// `e^x` for rational `x >= 0`: Taylor series on `x / 2^k` with a remainder
/// bound, then `k` squarings.
fn exp_interval(x: &Rational) -> Interval {
    assert!(!x.is_negative());
    let mut k = 0u32;
    let mut y = x.clone();
    while y > rat(1, 16) {
        y /= int(2);
        k += 1;
    }
    let terms = 40u32;
    let mut sum = Rational::zero();
    let mut term = Rational::one();
    for i in 0..terms {
        sum += &term;
        term = term * &y / int(i as i64 + 1);
    }
    // tail <= y^N / N! * 1 / (1 - y)
    let tail = &term * int(2);
    let mut iv = Interval::from_bounds(&sum, &(&sum + tail));
    for _ in 0..k {
        iv = iv.mul(&iv);
    }
    iv
}

/// `atanh(t) = sum t^(2i+1)/(2i+1)` for rational `0 <= t <= 1/3`.
fn atanh_interval(t: &Rational) -> Interval {
    let terms = 60u32;
    let t2 = t * t;
    let mut sum = Rational::zero();
    let mut pow = t.clone();
    for i in 0..terms {
        sum += &pow / int(2 * i as i64 + 1);
        pow *= &t2;
    }
    let tail = &pow / (int(2 * terms as i64 + 1) * (Rational::one() - &t2));
    Interval::from_bounds(&sum, &(&sum + tail))
}

/// `ln(n)` for an integer `n >= 1`, as `k ln 2 + ln(n / 2^k)`.
fn ln_interval(n: u64) -> Interval {
    assert!(n >= 1);
    let k = 63 - n.leading_zeros();
    let ln2 = atanh_interval(&rat(1, 3)).mul_exact(&int(2));
    let y = Rational::new(BigInt::from(n), BigInt::one() << k);
    let t = (&y - int(1)) / (&y + int(1));
    let rest = atanh_interval(&t).mul_exact(&int(2));
    ln2.mul_exact(&int(k as i64)).add(&rest)
}

/// Certified upper bound on a nonnegative real quantity, stored as a dyadic rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct UpperReal(Rational);

impl UpperReal {
    pub fn zero() -> Self {
        UpperReal(Rational::zero())
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn sum<'a>(xs: impl IntoIterator<Item = &'a UpperReal>) -> UpperReal {
        UpperReal(xs.into_iter().fold(Rational::zero(), |a, x| a + &x.0))
    }

    /// Decimal scientific notation with `digits` significant digits, rounded up.
    pub fn to_decimal_up(&self, digits: u32) -> String {
        let x = &self.0;
        if x.is_zero() {
            return "0".into();
        }
        let ten = BigInt::from(10);
        // e = floor(log10 x)
        let mut e: i64 = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
        let pow10 = |k: i64| -> Rational {
            if k >= 0 {
                Rational::from_integer(ten.pow(k as u32))
            } else {
                Rational::new(BigInt::one(), ten.pow((-k) as u32))
            }
        };
        while &pow10(e) > x {
            e -= 1;
        }
        while &pow10(e + 1) <= x {
            e += 1;
        }
        let shift = digits as i64 - 1 - e;
        let mut m = (x * pow10(shift)).ceil().to_integer();
        if m == ten.pow(digits) {
            m = ten.pow(digits - 1);
            e += 1;
        }
        let s = m.to_string();
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        if tail.is_empty() {
            format!("{head}e{e}")
        } else {
            format!("{head}.{tail}e{e}")
        }
    }

    fn from_interval(iv: &Interval) -> Self {
        UpperReal(iv.hi.clone())
    }
}

impl fmt::Display for UpperReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_up(12))
    }
}

/// Constant `C` with `|a(n)| <= C n^((w-1)/2) sigma_0(n)` for every coefficient of
/// the cusp form `alpha` of weight `w`, following Jenkins and Rouse.
pub fn jenkins_rouse_constant(alpha: &ModularFormSeries) -> Result<UpperReal> {
    if !alpha.series.coeff(0).is_zero() {
        return Err(Error::NotCuspForm(format!(
            "constant term {} in weight {}",
            alpha.series.coeff(0),
            alpha.weight
        )));
    }
    let w = alpha.weight;
    let l = dim_s(w as i64) as usize;
    if l == 0 {
        if !alpha.is_zero() {
            return Err(Error::Inconsistent(format!("nonzero cusp form of weight {w}")));
        }
        return Ok(UpperReal::zero());
    }
    if alpha.prec() <= l {
        return Err(Error::InsufficientPrecision { needed: l + 1, got: alpha.prec() });
    }
    let g: Vec<Rational> = (1..=l).map(|m| alpha.series.coeff(m).abs()).collect();
    if g.iter().all(|x| x.is_zero()) {
        return Ok(UpperReal::zero());
    }

    let mut sq = Rational::zero();
    for (i, gm) in g.iter().enumerate() {
        let m = BigInt::from(i as u64 + 1);
        sq += gm * gm / Rational::from_integer(m.pow(w - 1));
    }
    let first = Interval::exact(sq).sqrt().mul_exact(&int(11));

    // e^18.72 * 41.41^(w/2) * sqrt(w) / w^(w/2)
    let big = exp_interval(&rat(1872, 100))
        .mul_exact(&rat(4141, 100).pow((w / 2) as i32))
        .mul(&Interval::exact(int(w as i64)).sqrt())
        .mul_exact(&Rational::new(BigInt::one(), BigInt::from(w).pow(w / 2)));
    let decay = exp_interval(&rat(7288, 1000)).recip();
    let mut weighted = Interval::exact(Rational::zero());
    let mut pow = decay.clone();
    for gm in &g {
        weighted = weighted.add(&pow.mul_exact(gm));
        pow = pow.mul(&decay);
    }
    let total = first.add(&big.mul(&weighted));
    let c = ln_interval(w as u64).sqrt().mul(&total);
    Ok(UpperReal::from_interval(&c))
}

/// `zeta(s) <= sum_{k<=16} k^-s + (16.5)^(1-s) / (s-1)`.
///
/// The tail uses the midpoint estimate `k^-s <= int_{k-1/2}^{k+1/2} x^-s dx`,
/// valid since `x^-s` is convex.
pub fn zeta_upper(s: u32) -> Result<UpperReal> {
    if s < 2 {
        return Err(Error::Domain(format!("zeta bound needs s >= 2, got {s}")));
    }
    let k = 16u64;
    let mut sum = Rational::zero();
    for j in 1..=k {
        sum += Rational::new(BigInt::one(), BigInt::from(j).pow(s));
    }
    let tail = Rational::new(BigInt::from(2).pow(s - 1), BigInt::from(2 * k + 1).pow(s - 1))
        / int(s as i64 - 1);
    Ok(UpperReal(round_up(&(sum + tail))))
}

/// One Eisenstein term `prefactor * n^order * sigma_{m-1}(n)` together with the
/// upper bound used for `sigma_{m-1}(n) / n^(m-1)` when it enters negatively.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundTerm {
    pub order: u32,
    pub eis_weight: u32,
    pub prefactor: Rational,
    /// `zeta(m - 1)` bound; `None` at `m = 2`, where `sigma_1(n) <= n (1 + sqrt n)` is used.
    pub zeta: Option<UpperReal>,
}

/// Everything needed for the certified lower bound on the coefficients of `g_w^(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundModel {
    pub weight: u32,
    pub depth: u32,
    pub terms: Vec<BoundTerm>,
    /// Jenkins--Rouse constants of the cusp parts `alpha_{w-2l}`, `l = 0..=r`.
    pub constants: Vec<UpperReal>,
}

impl BoundModel {
    pub fn from_decomposition(d: &DerivativeDecomposition) -> Result<Self> {
        let main = MainTermModel::from_multiples(d.weight, d.depth, &d.eisenstein_multiples())?;
        if !d.entries[0].eis_mult.is_zero() {
            return Err(Error::Inconsistent("nonzero constant term in the decomposition".into()));
        }
        let terms = main
            .terms
            .into_iter()
            .map(|t| {
                let zeta = if t.eis_weight > 2 { Some(zeta_upper(t.eis_weight - 1)?) } else { None };
                Ok(BoundTerm { order: t.order, eis_weight: t.eis_weight, prefactor: t.prefactor, zeta })
            })
            .collect::<Result<Vec<_>>>()?;
        let constants = d
            .entries
            .iter()
            .map(|e| jenkins_rouse_constant(&e.cusp))
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundModel { weight: d.weight, depth: d.depth, terms, constants })
    }

    pub fn total_constant(&self) -> UpperReal {
        UpperReal::sum(&self.constants)
    }

    /// Coefficient of `n^(w-2)`: the `l = 1` prefactor.
    pub fn leading(&self) -> Rational {
        self.terms
            .iter()
            .find(|t| t.order == 1)
            .map(|t| t.prefactor.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Upper bound on `|P| sigma_{m-1}(n) n^l / n^(w-2)` for a negative term.
    fn negative_part(&self, t: &BoundTerm, n: u64) -> Rational {
        let nn = int(n);
        let l = t.order as i32;
        let base = t.prefactor.abs() * nn.pow(1 - l);
        match &t.zeta {
            Some(z) => base * z.value(),
            None => {
                // sigma_1(n) <= n (1 + ln n) <= n (1 + sqrt n); sqrt n >= isqrt n
                let s = int(isqrt(n) as i64);
                let extra = t.prefactor.abs() / s.pow(2 * l - 3);
                base + extra
            }
        }
    }

    fn cusp_part(&self, n: u64) -> Rational {
        let c = self.total_constant();
        if c.is_zero() {
            return Rational::zero();
        }
        let e = (self.weight as i32 - 4) / 2;
        int(2) * c.value() / int(n).pow(e)
    }

    /// `A - sum_{negative l >= 2} B_l(n) - 2 C n^(-(w-4)/2)`: each subtracted term is
    /// nonincreasing in `n`, so positivity is monotone.
    pub fn normalized(&self, n: u64) -> Rational {
        let mut v = self.leading();
        for t in self.terms.iter().filter(|t| t.order >= 2 && t.prefactor.is_negative()) {
            v -= self.negative_part(t, n);
        }
        v - self.cusp_part(n)
    }

    /// Certified lower bound on the `n`-th coefficient of `g_w^(r)`.
    pub fn lower_bound_coefficient(&self, n: u64) -> Rational {
        let nn = int(n);
        let mut v = self.normalized(n);
        for t in self.terms.iter().filter(|t| t.order >= 2 && t.prefactor.is_positive()) {
            v += &t.prefactor * nn.pow(1 - t.order as i32);
        }
        v * nn.pow(self.weight as i32 - 2)
    }

    /// Least `N0` with `normalized(n) > 0` for all `n >= N0`; `None` if there is
    /// none below `2^63`.
    pub fn threshold(&self) -> Option<u64> {
        let ok = |n: u64| self.normalized(n).is_positive();
        if ok(1) {
            return Some(1);
        }
        let (mut lo, mut hi) = (1u64, 2u64);
        while !ok(hi) {
            if hi >= 1 << 62 {
                return None;
            }
            lo = hi;
            hi *= 2;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    }
}

/// Bound model of `g_w^(r)`.
pub fn bound_model(w: u32, r: u32) -> Result<BoundModel> {
    check_supported(w, r)?;
    let dim = dim_qm(w as i64, r)? as usize;
    let d = decompose_extremal(w, r, dim + r as usize + 2)?;
    BoundModel::from_decomposition(&d)
}

pub fn lower_bound_coefficient(w: u32, r: u32, n: u64) -> Result<Rational> {
    if n == 0 {
        return Err(Error::Domain("lower bound is defined for n >= 1".into()));
    }
    Ok(bound_model(w, r)?.lower_bound_coefficient(n))
}

pub fn threshold_n0(w: u32, r: u32) -> Result<Option<u64>> {
    Ok(bound_model(w, r)?.threshold())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Violated,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "verified",
            Status::Violated => "violated",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Jenkins--Rouse constant of `alpha_{w-2l}`, rendered as an upper bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub order: u32,
    pub weight: u32,
    pub upper: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub weight: u32,
    pub depth: u32,
    pub n0: Option<u64>,
    pub constants: Vec<ConstantEntry>,
    pub scanned_up_to: u64,
    /// `(n, a(n))` for every nonpositive coefficient past the leading one.
    pub violations: Vec<(u64, String)>,
    pub status: Status,
    pub wall_time_ms: u64,
}

impl PositivityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

/// Runs the full check for `g_w^(r)`. Coefficients are scanned up to
/// `max(N0 - 1, dim)`, capped at `prec_cap - 1` if given.
pub fn verify_positivity(w: u32, r: u32, prec_cap: Option<usize>) -> Result<PositivityReport> {
    verify_positivity_with(w, r, prec_cap, |prec| Ok(extremal_poly(w, r)?.expand(prec)))
}

/// As [`verify_positivity`], with the q-expansion of `g_w^(r)` to a given
/// precision supplied by the caller (e.g. from a cache).
pub fn verify_positivity_with(
    w: u32,
    r: u32,
    prec_cap: Option<usize>,
    expand: impl FnOnce(usize) -> Result<QSeries>,
) -> Result<PositivityReport> {
    let start = Instant::now();
    check_supported(w, r)?;
    let model = bound_model(w, r)?;
    let n0 = model.threshold();
    let dim = dim_qm(w as i64, r)? as usize;
    let wanted = n0.map(|n| (n as usize).max(dim + 1)).unwrap_or(dim + 1);
    let prec = prec_cap.map_or(wanted, |c| c.min(wanted)).max(1);

    let series = expand(prec)?;
    if series.prec() < prec {
        return Err(Error::InsufficientPrecision { needed: prec, got: series.prec() });
    }
    let lead_at = dim - 1;
    let mut violations = Vec::new();
    for (n, a) in series.coeffs().iter().enumerate().skip(lead_at) {
        if !a.is_positive() {
            violations.push((n as u64, a.to_string()));
        }
    }
    if lead_at < prec && !series.coeff(lead_at).is_positive() {
        return Err(Error::Inconsistent(format!("leading coefficient of g_{w}^({r}) is not positive")));
    }
    let scanned_up_to = prec as u64 - 1;
    let status = if !violations.is_empty() {
        Status::Violated
    } else if n0.is_some_and(|n| scanned_up_to + 1 >= n) {
        Status::Verified
    } else {
        Status::Inconclusive
    };
    let constants = model
        .constants
        .iter()
        .enumerate()
        .map(|(l, c)| ConstantEntry {
            order: l as u32,
            weight: w - 2 * l as u32,
            upper: c.to_decimal_up(12),
        })
        .collect();
    Ok(PositivityReport {
        weight: w,
        depth: r,
        n0,
        constants,
        scanned_up_to,
        violations,
        status,
        wall_time_ms: start.elapsed().as_millis().to_u64().unwrap_or(u64::MAX),
    })
}
