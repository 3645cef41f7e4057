//! Classical level-one forms as q-expansions: Eisenstein series, the
//! discriminant, Serre derivatives, the alternating `f`-basis and the
//! dimension formulas for modular and quasimodular spaces.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{bernoulli, binomial, int, rat, sigma_table, QSeries, Rational};

/// A q-series tagged with its weight.
///
/// `E_2` is stored as a weight-2 `ModularFormSeries` even though it is only
/// quasimodular; every computation here happens on q-expansions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularFormSeries {
    pub weight: u32,
    pub series: QSeries,
}

impl ModularFormSeries {
    pub fn new(weight: u32, series: QSeries) -> Self {
        ModularFormSeries { weight, series }
    }

    pub fn zero(weight: u32, prec: usize) -> Self {
        Self::new(weight, QSeries::zero(prec))
    }

    pub fn prec(&self) -> usize {
        self.series.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.series.is_zero()
    }

    pub fn is_cusp(&self) -> bool {
        self.series.coeff(0).is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.weight, self.series.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.weight, other.weight, "adding forms of different weight");
        Self::new(self.weight, &self.series + &other.series)
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        assert_eq!(self.weight, other.weight, "adding forms of different weight");
        Self::new(self.weight, self.series.add_scaled(&other.series, c))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.weight + other.weight, &self.series * &other.series)
    }

    pub fn truncate(&self, prec: usize) -> Self {
        Self::new(self.weight, self.series.truncate(prec))
    }
}

/// A quasimodular form `sum_l components[l] * E_2^l`, where `components[l]`
/// has weight `weight - 2l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasimodularForm {
    pub weight: u32,
    pub components: Vec<ModularFormSeries>,
}

impl QuasimodularForm {
    pub fn new(weight: u32, components: Vec<ModularFormSeries>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("a quasimodular form needs at least one component".into()));
        }
        for (l, c) in components.iter().enumerate() {
            let expected = weight as i64 - 2 * l as i64;
            if c.weight as i64 != expected {
                return Err(Error::Inconsistent(format!(
                    "component {l} has weight {} but weight {expected} is required",
                    c.weight
                )));
            }
        }
        Ok(QuasimodularForm { weight, components })
    }

    /// A modular form viewed as a depth-0 quasimodular form.
    pub fn from_modular(f: ModularFormSeries) -> Self {
        QuasimodularForm { weight: f.weight, components: vec![f] }
    }

    pub fn zero(weight: u32, depth: u32, prec: usize) -> Self {
        let components = (0..=depth)
            .map(|l| ModularFormSeries::zero(weight.saturating_sub(2 * l), prec))
            .collect();
        QuasimodularForm { weight, components }
    }

    pub fn depth(&self) -> u32 {
        self.components.len() as u32 - 1
    }

    pub fn prec(&self) -> usize {
        self.components.iter().map(|c| c.prec()).min().unwrap_or(1)
    }

    /// The q-expansion `sum_l components[l] E_2^l`.
    pub fn render(&self) -> QSeries {
        let prec = self.prec();
        let e2 = eisenstein_series(2, prec);
        let mut acc = self.components.last().unwrap().series.truncate(prec);
        for c in self.components.iter().rev().skip(1) {
            acc = if acc.is_zero() { c.series.truncate(prec) } else { &(&acc * &e2) + &c.series };
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuasimodularForm {
            weight: self.weight,
            components: self.components.iter().map(|f| f.scale(c)).collect(),
        }
    }

    /// `self + c * other`; the depth of the result is the larger of the two.
    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        assert_eq!(self.weight, other.weight, "adding forms of different weight");
        let prec = self.prec().min(other.prec());
        let depth = self.components.len().max(other.components.len());
        let components = (0..depth)
            .map(|l| {
                let w = self.weight.saturating_sub(2 * l as u32);
                let zero = ModularFormSeries::zero(w, prec);
                let a = self.components.get(l).unwrap_or(&zero);
                let b = other.components.get(l).unwrap_or(&zero);
                ModularFormSeries::new(w, a.series.add_scaled(&b.series, c))
            })
            .collect();
        QuasimodularForm { weight: self.weight, components }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Rational::one())
    }

    /// Multiplies every component by a modular form.
    pub fn mul_modular(&self, f: &ModularFormSeries) -> Self {
        QuasimodularForm {
            weight: self.weight + f.weight,
            components: self.components.iter().map(|c| c.mul(f)).collect(),
        }
    }

    /// The derivation `D`, returned in components form (depth grows by one
    /// unless the top coefficient cancels).
    pub fn derive(&self) -> Self {
        self.serre(0)
    }

    /// Drops trailing components that vanish to precision.
    pub fn trimmed(mut self) -> Self {
        while self.components.len() > 1 && self.components.last().unwrap().is_zero() {
            self.components.pop();
        }
        self
    }
}

/// Ramanujan–Serre derivative `f -> D f - (k/12) E_2 f`.
pub trait SerreDerivative: Sized {
    fn serre(&self, k: i64) -> Self;

    /// Iterated derivative: `d_k^{j+1} f = d_{k+2j}(d_k^j f)`, `d_k^0 f = f`.
    fn serre_power(&self, k: i64, times: u32) -> Self
    where
        Self: Clone,
    {
        let mut f = self.clone();
        for j in 0..times {
            f = f.serre(k + 2 * j as i64);
        }
        f
    }
}

impl SerreDerivative for ModularFormSeries {
    fn serre(&self, k: i64) -> Self {
        let prec = self.prec();
        let mut out = self.series.derive();
        if k != 0 && !self.series.is_zero() {
            let e2 = eisenstein_series(2, prec);
            out = out.add_scaled(&(&e2 * &self.series), &-rat(k, 12));
        }
        ModularFormSeries::new(self.weight + 2, out)
    }
}

impl SerreDerivative for QuasimodularForm {
    /// Uses `D(E_2^l F) = E_2^l d_m F + (m+l)/12 E_2^{l+1} F - l/12 E_4 E_2^{l-1} F`
    /// with `m` the weight of `F`.
    fn serre(&self, k: i64) -> Self {
        let w = self.weight as i64;
        let r = self.components.len();
        let prec = self.prec();
        let e4 = ModularFormSeries::new(4, eisenstein_series(4, prec));
        let top_coeff = rat(w - (r as i64 - 1) - k, 12);
        let new_len = if top_coeff.is_zero() { r } else { r + 1 };
        let mut out: Vec<ModularFormSeries> = (0..new_len)
            .map(|l| ModularFormSeries::zero((w + 2 - 2 * l as i64).max(0) as u32, prec))
            .collect();
        for (l, f) in self.components.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let f = f.truncate(prec);
            let m = w - 2 * l as i64;
            out[l] = out[l].add(&f.serre(m));
            let up = rat(w - l as i64 - k, 12);
            if l + 1 < new_len {
                out[l + 1] = out[l + 1].add_scaled(&f, &up);
            }
            if l >= 1 {
                out[l - 1] = out[l - 1].add_scaled(&e4.mul(&f), &rat(-(l as i64), 12));
            }
        }
        QuasimodularForm { weight: self.weight + 2, components: out }
    }
}

fn eisenstein_cache() -> &'static RwLock<HashMap<u32, QSeries>> {
    static CACHE: OnceLock<RwLock<HashMap<u32, QSeries>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `E_w` as a bare series. Panics on odd weight; see [`eisenstein`].
pub(crate) fn eisenstein_series(w: u32, prec: usize) -> QSeries {
    assert!(w % 2 == 0, "odd Eisenstein weight {w}");
    let prec = prec.max(1);
    if w == 0 {
        return QSeries::one(prec);
    }
    if let Some(s) = eisenstein_cache().read().unwrap().get(&w) {
        if s.prec() >= prec {
            return s.truncate(prec);
        }
    }
    let factor = -int(2 * w as i64) / bernoulli(w).expect("even index");
    let sig = sigma_table(w - 1, prec);
    let mut coeffs = Vec::with_capacity(prec);
    coeffs.push(Rational::one());
    coeffs.extend(sig.into_iter().skip(1).map(|s| &factor * s));
    let series = QSeries::from_vec(coeffs);
    let mut cache = eisenstein_cache().write().unwrap();
    let entry = cache.entry(w).or_insert_with(|| series.clone());
    if entry.prec() < prec {
        *entry = series.clone();
    }
    series
}

/// Normalised Eisenstein series `E_w = 1 - (2w/B_w) sum sigma_{w-1}(n) q^n`;
/// `E_0 = 1`, and `E_2` comes from the same (convergent) q-series.
pub fn eisenstein(w: u32, prec: usize) -> Result<ModularFormSeries> {
    if w % 2 == 1 {
        return Err(Error::Domain(format!("Eisenstein series of odd weight {w}")));
    }
    Ok(ModularFormSeries::new(w, eisenstein_series(w, prec)))
}

/// The discriminant `Delta = q prod (1 - q^n)^24`, weight 12.
///
/// Built from Jacobi's identity `prod (1-q^n)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}`,
/// independently of `E_4` and `E_6`.
pub fn delta(prec: usize) -> ModularFormSeries {
    let prec = prec.max(1);
    let mut jacobi = vec![BigInt::zero(); prec];
    let mut k = 0usize;
    while k * (k + 1) / 2 < prec {
        let v = BigInt::from(2 * k + 1);
        jacobi[k * (k + 1) / 2] = if k % 2 == 0 { v } else { -v };
        k += 1;
    }
    let cube = QSeries::from_vec(jacobi.into_iter().map(Rational::from_integer).collect());
    let eta24 = cube.pow(8);
    let mut coeffs = vec![Rational::zero(); prec];
    coeffs[1..].clone_from_slice(&eta24.coeffs()[..prec - 1]);
    ModularFormSeries::new(12, QSeries::from_vec(coeffs))
}

/// `dim M_w` for the full modular group; zero for odd or negative weight.
pub fn dim_m(w: i64) -> u64 {
    if w < 0 || w % 2 != 0 {
        return 0;
    }
    let base = (w / 12) as u64;
    if w % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// `dim S_w = max(dim M_w - 1, 0)`.
pub fn dim_s(w: i64) -> u64 {
    dim_m(w).saturating_sub(1)
}

/// `dim QM_w^r` for `1 <= r <= 4`.
pub fn dim_qm(w: i64, r: u32) -> Result<u64> {
    if !(1..=4).contains(&r) {
        return Err(Error::UnsupportedDepth(r));
    }
    if w < 0 || w % 2 != 0 {
        return Ok(0);
    }
    Ok(match r {
        1 => (w / 6) as u64 + 1,
        2 => (w / 4) as u64 + 1,
        3 => (w / 3) as u64 + 1,
        _ => {
            let base = (5 * w / 12) as u64;
            if w % 12 == 10 {
                base
            } else {
                base + 1
            }
        }
    })
}

/// `f_w^(k) = sum_{l=0}^k (-1)^l C(k,l) E_{w-2l} E_2^l`, with `E_0 = 1` and the
/// term with `w - 2l = 2` left out.
pub fn f_basis(w: u32, k: u32, prec: usize) -> Result<QuasimodularForm> {
    if w % 2 == 1 {
        return Err(Error::Domain(format!("f-basis needs even weight, got {w}")));
    }
    if k > 4 {
        return Err(Error::UnsupportedDepth(k));
    }
    if w < 2 * k {
        return Err(Error::Domain(format!("f-basis f_{w}^({k}) needs w >= 2k")));
    }
    let components = (0..=k)
        .map(|l| {
            let m = w - 2 * l;
            if m == 2 {
                return ModularFormSeries::zero(2, prec);
            }
            let c = Rational::from_integer(binomial(k as u64, l as u64));
            let c = if l % 2 == 1 { -c } else { c };
            ModularFormSeries::new(m, eisenstein_series(m, prec).scale(&c))
        })
        .collect();
    QuasimodularForm::new(w, components)
}

/// `D^k E_w = -(2w/B_w) sum n^k sigma_{w-1}(n) q^n` for `k >= 1`.
pub fn d_eisenstein(w: u32, k: u32, prec: usize) -> Result<QSeries> {
    if w < 2 || w % 2 == 1 {
        return Err(Error::Domain(format!("D^k E_w needs even w >= 2, got {w}")));
    }
    if k == 0 {
        return Err(Error::Domain("d_eisenstein needs k >= 1".into()));
    }
    let factor = -int(2 * w as i64) / bernoulli(w)?;
    let sig = sigma_table(w - 1, prec.max(1));
    let coeffs = sig
        .into_iter()
        .enumerate()
        .map(|(n, s)| &factor * (s * BigInt::from(n).pow(k)))
        .collect();
    Ok(QSeries::from_vec(coeffs))
}
