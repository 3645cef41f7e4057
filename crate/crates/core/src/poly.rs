//! Exact quasimodular forms as polynomials in `E_2`, `E_4`, `E_6`.
//!
//! Level-one quasimodular forms are exactly the weighted-homogeneous elements
//! of `Q[E_2, E_4, E_6]`, and `D` acts on the generators through Ramanujan's
//! identities, so every recursion over weights can run here without any
//! truncation. Expansion to q-series happens once, at the end.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::modular::{eisenstein_series, ModularFormSeries, QuasimodularForm};
use crate::series::{int, rat, QSeries, Rational};

/// `E_2^e2 E_4^e4 E_6^e6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub e2: u32,
    pub e4: u32,
    pub e6: u32,
}

impl Monomial {
    pub const fn new(e2: u32, e4: u32, e6: u32) -> Self {
        Monomial { e2, e4, e6 }
    }

    pub fn weight(&self) -> u32 {
        2 * self.e2 + 4 * self.e4 + 6 * self.e6
    }
}

/// A weighted-homogeneous polynomial in `E_2, E_4, E_6` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QmPoly {
    weight: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl QmPoly {
    pub fn zero(weight: u32) -> Self {
        QmPoly { weight, terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Monomial::new(0, 0, 0), c)
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.weight());
        p.add_term(m, c);
        p
    }

    pub fn e2() -> Self {
        Self::monomial(Monomial::new(1, 0, 0), Rational::one())
    }

    pub fn e4() -> Self {
        Self::monomial(Monomial::new(0, 1, 0), Rational::one())
    }

    pub fn e6() -> Self {
        Self::monomial(Monomial::new(0, 0, 1), Rational::one())
    }

    /// `Delta = (E_4^3 - E_6^2) / 1728`.
    pub fn delta() -> Self {
        let mut p = Self::zero(12);
        p.add_term(Monomial::new(0, 3, 0), rat(1, 1728));
        p.add_term(Monomial::new(0, 0, 2), rat(-1, 1728));
        p
    }

    /// Builds a polynomial from `(coefficient, e2, e4, e6)` tuples.
    pub fn from_terms(weight: u32, terms: &[(i64, u32, u32, u32)]) -> Self {
        let mut p = Self::zero(weight);
        for &(c, a, b, d) in terms {
            let m = Monomial::new(a, b, d);
            assert_eq!(m.weight(), weight, "monomial {m:?} has the wrong weight");
            p.add_term(m, int(c));
        }
        p
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Highest power of `E_2` present (0 for the zero polynomial).
    pub fn depth(&self) -> u32 {
        self.terms.keys().map(|m| m.e2).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.weight);
        }
        QmPoly {
            weight: self.weight,
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn add_scaled(&self, other: &Self, c: &Rational) -> Self {
        let mut out = self.clone();
        if other.is_zero() {
            return out;
        }
        if self.is_zero() {
            out.weight = other.weight;
        }
        assert_eq!(out.weight, other.weight, "adding polynomials of different weight");
        for (m, a) in &other.terms {
            out.add_term(*m, a * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.add_scaled(other, &Rational::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &-Rational::one())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.weight + other.weight);
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                let m = Monomial::new(m1.e2 + m2.e2, m1.e4 + m2.e4, m1.e6 + m2.e6);
                out.add_term(m, a * b);
            }
        }
        out
    }

    /// `D = q d/dq`, via
    /// `DE_2 = (E_2^2 - E_4)/12`, `DE_4 = (E_2E_4 - E_6)/3`, `DE_6 = (E_2E_6 - E_4^2)/2`.
    pub fn derive(&self) -> Self {
        self.serre(0)
    }

    /// Serre derivative `D - (k/12) E_2`.
    pub fn serre(&self, k: i64) -> Self {
        let mut out = Self::zero(self.weight + 2);
        for (m, c) in &self.terms {
            let (a, b, d) = (m.e2 as i64, m.e4 as i64, m.e6 as i64);
            let up = rat(m.weight() as i64 - a - k, 12);
            out.add_term(Monomial::new(m.e2 + 1, m.e4, m.e6), c * up);
            if a > 0 {
                out.add_term(Monomial::new(m.e2 - 1, m.e4 + 1, m.e6), c * rat(-a, 12));
            }
            if b > 0 {
                out.add_term(Monomial::new(m.e2, m.e4 - 1, m.e6 + 1), c * rat(-b, 3));
            }
            if d > 0 {
                out.add_term(Monomial::new(m.e2, m.e4 + 2, m.e6 - 1), c * rat(-d, 2));
            }
        }
        out
    }

    /// Iterated Serre derivative `d_k^times`.
    pub fn serre_power(&self, k: i64, times: u32) -> Self {
        let mut f = self.clone();
        for j in 0..times {
            f = f.serre(k + 2 * j as i64);
        }
        f
    }

    /// The coefficient of `E_2^l` as a polynomial in `E_4, E_6`.
    pub fn component(&self, l: u32) -> QmPoly {
        let mut out = QmPoly::zero(self.weight.saturating_sub(2 * l));
        for (m, c) in &self.terms {
            if m.e2 == l {
                out.add_term(Monomial::new(0, m.e4, m.e6), c.clone());
            }
        }
        out
    }

    /// Expands to components form with `depth + 1` components at precision `prec`.
    pub fn to_quasimodular(&self, depth: u32, prec: usize) -> QuasimodularForm {
        let mut expander = Expander::new(prec);
        let components = (0..=depth)
            .map(|l| {
                let w = self.weight.saturating_sub(2 * l);
                ModularFormSeries::new(w, expander.expand_modular(&self.component(l)))
            })
            .collect();
        QuasimodularForm { weight: self.weight, components }
    }

    /// The q-expansion to precision `prec`.
    pub fn expand(&self, prec: usize) -> QSeries {
        self.to_quasimodular(self.depth(), prec).render()
    }
}

/// Expands polynomials in `E_4, E_6`, reusing powers of the generators.
struct Expander {
    prec: usize,
    e4_pows: Vec<QSeries>,
    e6_pows: Vec<QSeries>,
}

impl Expander {
    fn new(prec: usize) -> Self {
        let prec = prec.max(1);
        Expander {
            prec,
            e4_pows: vec![QSeries::one(prec)],
            e6_pows: vec![QSeries::one(prec)],
        }
    }

    fn power(pows: &mut Vec<QSeries>, base: u32, k: u32, prec: usize) -> QSeries {
        while pows.len() <= k as usize {
            let g = eisenstein_series(base, prec);
            let next = pows.last().unwrap() * &g;
            pows.push(next);
        }
        pows[k as usize].clone()
    }

    /// `sum c E_4^a E_6^b`, grouped by the power of `E_6`.
    fn expand_modular(&mut self, p: &QmPoly) -> QSeries {
        let mut by_e6: BTreeMap<u32, Vec<(u32, &Rational)>> = BTreeMap::new();
        for (m, c) in &p.terms {
            debug_assert_eq!(m.e2, 0);
            by_e6.entry(m.e6).or_default().push((m.e4, c));
        }
        let mut total = QSeries::zero(self.prec);
        for (b, group) in by_e6 {
            let mut inner = QSeries::zero(self.prec);
            for (a, c) in group {
                let pa = Self::power(&mut self.e4_pows, 4, a, self.prec);
                inner = inner.add_scaled(&pa, c);
            }
            let term = if b == 0 {
                inner
            } else {
                &inner * &Self::power(&mut self.e6_pows, 6, b, self.prec)
            };
            total = &total + &term;
        }
        total
    }
}

impl fmt::Display for QmPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest E_2 power last, as in the usual written form.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.e2, std::cmp::Reverse(m.e4), m.e6));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            let mut factors = Vec::new();
            for (name, e) in [("E2", m.e2), ("E4", m.e4), ("E6", m.e6)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
