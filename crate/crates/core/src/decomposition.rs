//! Rewriting a quasimodular form as a sum of derivatives of modular forms,
//! `g = sum_l D^l h_l`, and splitting each `h_l` into an Eisenstein multiple
//! plus a cusp form:
//!
//! `g = sum_l D^l (c_l E_{w-2l} + alpha_{w-2l})`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::extremal::{check_supported, extremal};
use crate::modular::{dim_qm, eisenstein_series, ModularFormSeries, QuasimodularForm};
use crate::series::{int, pochhammer, QSeries, Rational};

/// Eisenstein multiple and cusp part attached to one derivative order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionEntry {
    pub eis_mult: Rational,
    pub cusp: ModularFormSeries,
}

/// `g = sum_l D^l (entries[l].eis_mult * E_{w-2l} + entries[l].cusp)`.
///
/// At weight 2 the Eisenstein slot holds `E_2` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivativeDecomposition {
    pub weight: u32,
    pub depth: u32,
    pub entries: Vec<DecompositionEntry>,
}

impl DerivativeDecomposition {
    /// Eisenstein multiples `c_1 .. c_r`.
    pub fn eisenstein_multiples(&self) -> Vec<Rational> {
        self.entries.iter().skip(1).map(|e| e.eis_mult.clone()).collect()
    }
}

/// `D^k` of a modular form of weight `m`, in components form.
fn derive_power(h: &ModularFormSeries, k: u32) -> QuasimodularForm {
    let mut f = QuasimodularForm::from_modular(h.clone());
    for _ in 0..k {
        f = f.derive();
    }
    f
}

/// `D^k E_2` in components form.
fn derive_power_e2(k: u32, prec: usize) -> QuasimodularForm {
    let mut f = QuasimodularForm {
        weight: 2,
        components: vec![
            ModularFormSeries::zero(2, prec),
            ModularFormSeries::new(0, QSeries::one(prec)),
        ],
    };
    for _ in 0..k {
        f = f.derive();
    }
    f
}

fn component(g: &QuasimodularForm, l: usize, prec: usize) -> ModularFormSeries {
    g.components
        .get(l)
        .cloned()
        .unwrap_or_else(|| ModularFormSeries::zero(g.weight.saturating_sub(2 * l as u32), prec))
}

/// Finds `h_0 .. h_r` with `g = sum_l D^l h_l`, peeling from the top power of `E_2`.
///
/// The `E_2^l` component of `D^l h` is `(m)_l / 12^l * h` for `h` of weight `m`,
/// which determines `h_l`. When `w - 2l = 2` the slot is filled by a multiple
/// of `E_2` (whose `l`-th derivative reaches `E_2^{l+1}`); the weight-0 slot is
/// always zero.
pub fn to_derivative_basis(g: &QuasimodularForm) -> Result<Vec<ModularFormSeries>> {
    let w = g.weight;
    let r = g.depth();
    let prec = g.prec();
    if w < 2 * r && !g.components[(w / 2 + 1) as usize..].iter().all(|c| c.is_zero()) {
        return Err(Error::Inconsistent(format!(
            "components of negative weight in a form of weight {w}"
        )));
    }
    let mut residual = g.clone();
    let top = r.min(w / 2);
    let mut hs: Vec<ModularFormSeries> = (0..=r)
        .map(|l| ModularFormSeries::zero(w.saturating_sub(2 * l), prec))
        .collect();
    for l in (0..=top).rev() {
        let m = w - 2 * l;
        let gl = component(&residual, l as usize, prec);
        if l == 0 {
            hs[0] = gl;
            residual = residual.sub(&QuasimodularForm::from_modular(hs[0].clone()));
            continue;
        }
        match m {
            0 => {
                if gl.series.coeffs()[1..].iter().any(|c| !c.is_zero()) {
                    return Err(Error::Inconsistent(format!(
                        "weight-0 component of E_2^{l} is not constant"
                    )));
                }
                let c0 = gl.series.coeff(0).clone();
                if c0.is_zero() {
                    continue;
                }
                // top coefficient of D^j E_2 is j!/12^j on E_2^{j+1}
                let j = l - 1;
                let fact: BigInt = (1..=j as u64).map(BigInt::from).product();
                let c = c0 * int(12).pow(j as i32) / Rational::from_integer(fact);
                hs[j as usize] =
                    ModularFormSeries::new(2, eisenstein_series(2, prec).scale(&c));
                residual = residual.add_scaled(&derive_power_e2(j, prec), &-c);
            }
            2 => {
                if !gl.is_zero() {
                    return Err(Error::Inconsistent(format!(
                        "nonzero weight-2 coefficient of E_2^{l}"
                    )));
                }
            }
            _ => {
                let scale = int(12).pow(l as i32)
                    / Rational::from_integer(pochhammer(m as i64, l));
                let h = gl.scale(&scale);
                residual = residual.sub(&derive_power(&h, l));
                hs[l as usize] = h;
            }
        }
    }
    if residual.components.iter().any(|c| !c.is_zero()) {
        return Err(Error::Inconsistent(format!(
            "form of weight {w} is not a sum of derivatives of modular forms"
        )));
    }
    Ok(hs)
}

/// Splits a modular form into `c * E_k + alpha` with `alpha` a cusp form.
pub fn split_cusp(h: &ModularFormSeries) -> Result<(Rational, ModularFormSeries)> {
    if h.weight < 4 {
        if h.is_zero() {
            return Ok((Rational::zero(), h.clone()));
        }
        return Err(Error::UnsupportedWeight(format!(
            "no Eisenstein projection at weight {}",
            h.weight
        )));
    }
    let c = h.series.coeff(0).clone();
    let alpha = h.series.add_scaled(&eisenstein_series(h.weight, h.prec()), &-&c);
    Ok((c, ModularFormSeries::new(h.weight, alpha)))
}

/// Decomposes any quasimodular form given in components form.
pub fn decompose(g: &QuasimodularForm) -> Result<DerivativeDecomposition> {
    let hs = to_derivative_basis(g)?;
    let prec = g.prec();
    let entries = hs
        .iter()
        .map(|h| {
            if h.weight == 2 {
                // the slot holds c * E_2
                let c = h.series.coeff(0).clone();
                let rest = h.series.add_scaled(&eisenstein_series(2, prec), &-&c);
                if !rest.is_zero() {
                    return Err(Error::Inconsistent("weight-2 slot is not a multiple of E_2".into()));
                }
                Ok(DecompositionEntry { eis_mult: c, cusp: ModularFormSeries::zero(2, prec) })
            } else {
                let (c, cusp) = split_cusp(h)?;
                Ok(DecompositionEntry { eis_mult: c, cusp })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DerivativeDecomposition { weight: g.weight, depth: g.depth(), entries })
}

/// Decomposition of the extremal form `g_w^(r)`.
pub fn decompose_extremal(w: u32, r: u32, prec: usize) -> Result<DerivativeDecomposition> {
    check_supported(w, r)?;
    let needed = dim_qm(w as i64, r)? as usize + r as usize + 2;
    if prec < needed {
        return Err(Error::InsufficientPrecision { needed, got: prec });
    }
    decompose(&extremal(w, r, prec)?)
}

/// `sum_l D^l (c_l E_{w-2l} + alpha_l)` as a q-series.
pub fn recompose(d: &DerivativeDecomposition, prec: usize) -> QSeries {
    let mut total = QSeries::zero(prec);
    for (l, e) in d.entries.iter().enumerate() {
        let m = d.weight.saturating_sub(2 * l as u32);
        let mut h = e.cusp.series.truncate(prec);
        if !e.eis_mult.is_zero() {
            h = h.add_scaled(&eisenstein_series(m, prec), &e.eis_mult);
        }
        total = &total + &h.derive_n(l as u32);
    }
    total
}

/// Whether every cusp part vanishes to precision.
pub fn cusp_parts_vanish(d: &DerivativeDecomposition) -> bool {
    d.entries.iter().all(|e| e.cusp.is_zero())
}
