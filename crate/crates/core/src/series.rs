//! Truncated power series in `q` with exact rational coefficients, plus the
//! elementary arithmetic functions (divisor sums, Bernoulli numbers) that the
//! classical q-expansions are built from.
//!
//! A [`QSeries`] of precision `N` knows the coefficients of `q^0 .. q^{N-1}`.
//! Binary operations truncate to the smaller precision of their operands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Below this output length the convolution runs on the calling thread.
const PAR_MUL_THRESHOLD: usize = 256;

pub(crate) fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub(crate) fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// Truncated formal power series `sum_{n < prec} coeffs[n] q^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from its leading coefficients, padding with zeros up to `prec`.
    pub fn new(mut coeffs: Vec<Rational>, prec: usize) -> Result<Self> {
        if prec == 0 {
            return Err(Error::InvalidPrecision("precision must be at least 1".into()));
        }
        if coeffs.len() > prec {
            return Err(Error::InvalidPrecision(format!(
                "{} coefficients given for precision {prec}",
                coeffs.len()
            )));
        }
        coeffs.resize(prec, Rational::zero());
        Ok(QSeries { coeffs })
    }

    /// Builds a series from integer coefficients; the precision is the slice length.
    pub fn from_integers<T: Clone + Into<BigInt>>(coeffs: &[T]) -> Result<Self> {
        let coeffs = coeffs.iter().cloned().map(|c| int(c)).collect::<Vec<_>>();
        let prec = coeffs.len();
        QSeries::new(coeffs, prec)
    }

    pub(crate) fn from_vec(coeffs: Vec<Rational>) -> Self {
        debug_assert!(!coeffs.is_empty());
        QSeries { coeffs }
    }

    pub fn zero(prec: usize) -> Self {
        QSeries::from_vec(vec![Rational::zero(); prec.max(1)])
    }

    pub fn one(prec: usize) -> Self {
        Self::constant(Rational::one(), prec)
    }

    pub fn constant(c: Rational, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        s.coeffs[0] = c;
        s
    }

    /// `c q^n`, or the zero series if `n >= prec`.
    pub fn monomial(n: usize, c: Rational, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if n < s.prec() {
            s.coeffs[n] = c;
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `q^n`. Panics if `n` is beyond the known precision.
    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, prec: usize) -> QSeries {
        let prec = prec.clamp(1, self.prec());
        QSeries::from_vec(self.coeffs[..prec].to_vec())
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient, or `None` if the series is zero
    /// to its precision.
    pub fn order_of_vanishing(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn scale(&self, c: &Rational) -> QSeries {
        if c.is_zero() {
            return QSeries::zero(self.prec());
        }
        QSeries::from_vec(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `self + c * other`, truncated to the common precision.
    pub fn add_scaled(&self, other: &QSeries, c: &Rational) -> QSeries {
        let prec = self.prec().min(other.prec());
        if c.is_zero() {
            return self.truncate(prec);
        }
        QSeries::from_vec(
            self.coeffs[..prec]
                .iter()
                .zip(&other.coeffs[..prec])
                .map(|(a, b)| a + b * c)
                .collect(),
        )
    }

    /// The derivation `D = q d/dq`: the coefficient of `q^n` is multiplied by `n`.
    pub fn derive(&self) -> QSeries {
        QSeries::from_vec(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a * BigInt::from(n))
                .collect(),
        )
    }

    /// `D^k` applied to the series.
    pub fn derive_n(&self, k: u32) -> QSeries {
        QSeries::from_vec(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, a)| a * BigInt::from(n).pow(k))
                .collect(),
        )
    }

    /// Truncated Cauchy product.
    ///
    /// Denominators are cleared once per operand, the integer sequences are
    /// convolved, and the common denominator is restored at the end.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let prec = self.prec().min(other.prec());
        let (fa, da) = clear_denominators(&self.coeffs[..prec]);
        let (fb, db) = clear_denominators(&other.coeffs[..prec]);
        let conv = convolve(&fa, &fb, prec);
        let den = da * db;
        let coeffs = if den.is_one() {
            conv.into_iter().map(Rational::from_integer).collect()
        } else {
            conv.into_iter()
                .map(|c| Rational::new(c, den.clone()))
                .collect()
        };
        QSeries::from_vec(coeffs)
    }

    /// `self^k` by repeated squaring. `f^0` is the constant 1.
    pub fn pow(&self, mut k: u32) -> QSeries {
        let mut result = QSeries::one(self.prec());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = QSeries::mul(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = QSeries::mul(&base, &base);
            }
        }
        result
    }

    /// Divides every coefficient by `c`.
    pub fn div_scalar(&self, c: &Rational) -> Result<QSeries> {
        if c.is_zero() {
            return Err(Error::Domain("division of a series by zero".into()));
        }
        Ok(self.scale(&c.recip()))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

fn clear_denominators(coeffs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = if den.is_one() {
        coeffs.iter().map(|c| c.numer().clone()).collect()
    } else {
        coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect()
    };
    (ints, den)
}

/// First `len` terms of the convolution of two integer sequences.
pub(crate) fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    // Leading zeros are common (cusp forms, extremal forms); skip them.
    let a_start = a.iter().position(|x| !x.is_zero()).unwrap_or(a.len());
    let b_start = b.iter().position(|x| !x.is_zero()).unwrap_or(b.len());
    let term = |n: usize| -> BigInt {
        let mut acc = BigInt::zero();
        if n < a_start + b_start {
            return acc;
        }
        let hi = (n - b_start).min(a.len() - 1);
        for i in a_start..=hi {
            let j = n - i;
            if j >= b.len() {
                continue;
            }
            if !b[j].is_zero() && !a[i].is_zero() {
                acc += &a[i] * &b[j];
            }
        }
        acc
    };
    if len < PAR_MUL_THRESHOLD {
        (0..len).map(term).collect()
    } else {
        (0..len).into_par_iter().map(term).collect()
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries{{prec: {}, coeffs: [", self.prec())?;
        for (i, c) in self.coeffs.iter().take(8).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        if self.prec() > 8 {
            write!(f, ", ...")?;
        }
        write!(f, "]}}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match n {
                0 => write!(f, "{a}")?,
                1 if a.is_one() => write!(f, "q")?,
                1 => write!(f, "{a}*q")?,
                _ if a.is_one() => write!(f, "q^{n}")?,
                _ => write!(f, "{a}*q^{n}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&QSeries> for &QSeries {
            type Output = QSeries;
            fn $method(self, rhs: &QSeries) -> QSeries {
                let f: fn(&QSeries, &QSeries) -> QSeries = $body;
                f(self, rhs)
            }
        }
        impl $tr<QSeries> for QSeries {
            type Output = QSeries;
            fn $method(self, rhs: QSeries) -> QSeries {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_scaled(b, &Rational::one()));
forward_binop!(Sub, sub, |a, b| a.add_scaled(b, &-Rational::one()));
forward_binop!(Mul, mul, |a, b| QSeries::mul(a, b));

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries::from_vec(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

/// Divisor sum `sigma_alpha(n) = sum_{d | n} d^alpha`.
pub fn sigma(alpha: u32, n: u64) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::Domain("sigma(n) is undefined for n = 0".into()));
    }
    let mut result = BigInt::one();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            result *= sigma_prime_power(alpha, p, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        result *= sigma_prime_power(alpha, m, 1);
    }
    Ok(result)
}

fn sigma_prime_power(alpha: u32, p: u64, e: u32) -> BigInt {
    let pa = BigInt::from(p).pow(alpha);
    let mut term = BigInt::one();
    let mut total = BigInt::one();
    for _ in 0..e {
        term *= &pa;
        total += &term;
    }
    total
}

/// Table of `sigma_alpha(n)` for `n < len`, with entry 0 set to zero.
pub fn sigma_table(alpha: u32, len: usize) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); len];
    for d in 1..len {
        let dp = BigInt::from(d).pow(alpha);
        for m in (d..len).step_by(d) {
            table[m] += &dp;
        }
    }
    table
}

/// Number of divisors of `n` (`sigma_0`). `n` must be positive.
pub fn divisor_count(n: u64) -> u64 {
    assert!(n > 0);
    let mut count = 1;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if m > 1 {
        count *= 2;
    }
    count
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Rising factorial `x (x+1) ... (x+k-1)`.
pub fn pochhammer(x: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(x + i))
}

fn bernoulli_memo() -> &'static Mutex<Vec<Rational>> {
    static MEMO: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_k` for even `k` (with `B_1 = -1/2` convention internally).
///
/// Values are produced by `sum_{j <= m} C(m+1, j) B_j = 0` and memoized.
pub fn bernoulli(k: u32) -> Result<Rational> {
    if k % 2 == 1 {
        return Err(Error::Domain(format!("Bernoulli number requested for odd index {k}")));
    }
    let mut memo = bernoulli_memo().lock().unwrap_or_else(|e| e.into_inner());
    let k = k as usize;
    while memo.len() <= k {
        let m = memo.len();
        let mut acc = Rational::zero();
        for (j, b) in memo.iter().enumerate() {
            if !b.is_zero() {
                acc += b * binomial(m as u64 + 1, j as u64);
            }
        }
        let bm = -acc / int(m as u64 + 1);
        memo.push(bm);
    }
    Ok(memo[k].clone())
}

/// Integer square root, rounded down.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Approximate decimal value, for display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
