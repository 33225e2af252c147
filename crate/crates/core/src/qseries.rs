//! Truncated power series in `q` whose coefficients are Laurent polynomials
//! in `ζ` with big-integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("not invertible as a power series: constant term is {0}, expected 1")]
    NotInvertible(String),
}

/// Sparse Laurent polynomial `Σ c_e ζ^e`; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Value at `ζ = 1`, i.e. the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// `ζ ↦ ζ^{-1}`.
    pub fn reflect(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, c * k)).collect(),
        }
    }

    fn add_assign_ref(&mut self, other: &Self) {
        for (&e, c) in &other.coeffs {
            self.add_term(e, c.clone());
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&ea, ca) in &self.coeffs {
            for (&eb, cb) in &other.coeffs {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{e}:{c}")?;
            first = false;
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.mul_ref(rhs)
    }
}

/// `Σ_{n=0}^{order} a_n(ζ) q^n`, exact modulo `q^{order+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    order: usize,
    terms: Vec<LaurentPoly>,
}

impl BivariateSeries {
    pub fn zero(order: usize) -> Self {
        Self { order, terms: vec![LaurentPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.terms[0] = LaurentPoly::one();
        s
    }

    /// Series with `ζ`-free integer coefficients; entries past `order` are dropped.
    pub fn from_q_coeffs<I: IntoIterator<Item = (usize, BigInt)>>(order: usize, coeffs: I) -> Self {
        let mut s = Self::zero(order);
        for (n, c) in coeffs {
            s.add_term(n, 0, c);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> &LaurentPoly {
        &self.terms[n]
    }

    /// Adds `c ζ^m q^n`; silently ignores `n > order`.
    pub fn add_term(&mut self, n: usize, m: i64, c: BigInt) {
        if n <= self.order {
            self.terms[n].add_term(m, c);
        }
    }

    /// Drops everything above `order` (which must not exceed the current order).
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        Self { order, terms: self.terms[..=order].to_vec() }
    }

    pub fn reflect(&self) -> Self {
        Self { order: self.order, terms: self.terms.iter().map(LaurentPoly::reflect).collect() }
    }

    /// Coefficient sums at `ζ = 1`.
    pub fn eval_at_one(&self) -> Vec<BigInt> {
        self.terms.iter().map(LaurentPoly::eval_at_one).collect()
    }

    /// One line per power of `q`: `n: m1:c1 m2:c2 ...`, exponents ascending.
    pub fn debug_dump(&self) -> String {
        let mut out = String::new();
        for (n, t) in self.terms.iter().enumerate() {
            if t.is_zero() {
                out.push_str(&format!("{n}:\n"));
            } else {
                out.push_str(&format!("{n}: {t}\n"));
            }
        }
        out
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn series_mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        if self.order != other.order {
            log::debug!("series_mul: truncating orders {} and {} to {}", self.order, other.order, order);
        }
        let mut out = Self::zero(order);
        for (i, a) in self.terms.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.terms.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                let prod = a * b;
                out.terms[i + j].add_assign_ref(&prod);
            }
        }
        out
    }

    /// Power-series inverse; the constant term must be exactly `1`.
    pub fn series_invert(&self) -> Result<Self, SeriesError> {
        if self.terms[0] != LaurentPoly::one() {
            return Err(SeriesError::NotInvertible(self.terms[0].to_string()));
        }
        // b_0 = 1, b_n = -Σ_{k=1}^{n} a_k b_{n-k}
        let mut inv = Self::zero(self.order);
        inv.terms[0] = LaurentPoly::one();
        for n in 1..=self.order {
            let mut acc = LaurentPoly::zero();
            for k in 1..=n {
                if self.terms[k].is_zero() || inv.terms[n - k].is_zero() {
                    continue;
                }
                acc.add_assign_ref(&(&self.terms[k] * &inv.terms[n - k]));
            }
            inv.terms[n] = -&acc;
        }
        Ok(inv)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly) -> Self {
        let order = self.order.min(other.order);
        Self {
            order,
            terms: (0..=order).map(|n| f(&self.terms[n], &other.terms[n])).collect(),
        }
    }

    pub fn scale(&self, k: impl Into<BigInt>) -> Self {
        let k = k.into();
        Self { order: self.order, terms: self.terms.iter().map(|t| t.scale(&k)).collect() }
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;
    fn add(self, rhs: &BivariateSeries) -> BivariateSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BivariateSeries {
    type Output = BivariateSeries;
    fn sub(self, rhs: &BivariateSeries) -> BivariateSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;
    fn mul(self, rhs: &BivariateSeries) -> BivariateSeries {
        self.series_mul(rhs)
    }
}

/// `Π_{k=1}^{order} (1 - q^k)` modulo `q^{order+1}`, multiplied out factor by factor.
pub fn qpochhammer_prefix(order: usize) -> BivariateSeries {
    let mut acc = BivariateSeries::one(order);
    for k in 1..=order {
        let factor = BivariateSeries::from_q_coeffs(order, [(0, BigInt::one()), (k, -BigInt::one())]);
        acc = acc.series_mul(&factor);
    }
    acc
}

/// `Σ_{k∈ℤ} (-1)^k q^{k(3k-1)/2}` modulo `q^{order+1}`.
pub fn pentagonal_series(order: usize) -> BivariateSeries {
    let mut s = BivariateSeries::one(order);
    let mut k = 1usize;
    while k * (3 * k - 1) / 2 <= order {
        let sign = if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        s.add_term(k * (3 * k - 1) / 2, 0, sign.clone());
        s.add_term(k * (3 * k + 1) / 2, 0, sign);
        k += 1;
    }
    s
}

/// Bilateral numerator `(1-ζ) Σ_k (-1)^k q^{(3k²+k)/2} / (1-ζq^k)` to order `order`.
///
/// `k > 0` terms expand geometrically in `ζq^k`. For `k = -j < 0` the term is
/// rewritten as `(1-ζ^{-1}) (-1)^j q^{(3j²+j)/2} / (1-ζ^{-1}q^j)` and expanded
/// in `ζ^{-1}q^j`. The `k = 0` term is exactly `1`.
pub fn rank_numerator_series(order: usize) -> BivariateSeries {
    let mut s = BivariateSeries::one(order);
    let mut k = 1usize;
    while (3 * k * k + k) / 2 <= order {
        let base = (3 * k * k + k) / 2;
        let sign: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
        let mut l = 0usize;
        while base + k * l <= order {
            let n = base + k * l;
            let li = l as i64;
            // (1-ζ) ζ^l and its mirror (1-ζ^{-1}) ζ^{-l}
            s.add_term(n, li, BigInt::from(sign));
            s.add_term(n, li + 1, BigInt::from(-sign));
            s.add_term(n, -li, BigInt::from(sign));
            s.add_term(n, -li - 1, BigInt::from(-sign));
            l += 1;
        }
        k += 1;
    }
    s
}

/// `R(ζ; q) = Σ N(m, n) ζ^m q^n` to order `order`.
pub fn rank_generating_expansion(order: usize) -> BivariateSeries {
    let inv = qpochhammer_prefix(order)
        .series_invert()
        .expect("(q)_∞ has constant term 1");
    rank_numerator_series(order).series_mul(&inv)
}
