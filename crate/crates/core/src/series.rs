//! Truncated Laurent series in `t = q^{1/2}` with big-integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;

/// A series `sum_i coeffs[i] * q^{min_exp + i/2}`, known exactly for every
/// exponent below `order`.
///
/// Stored densely on the half-exponent grid. Leading and trailing zeros are
/// trimmed, so a nonzero series always has a nonzero first and last
/// coefficient. The canonical zero has no coefficients; [`QSeries::zero`] is
/// the exact zero with infinite order, while `O(q^N)` is an empty series
/// with `order = N`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    min_exp: HalfInt,
    coeffs: Vec<BigInt>,
    order: HalfInt,
}

/// The smallest exponent at which two series differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    /// z-exponent of the differing coefficient, for Laurent-in-z comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_exp: Option<i64>,
    pub exponent: HalfInt,
    #[serde(with = "decimal")]
    pub lhs: BigInt,
    #[serde(with = "decimal")]
    pub rhs: BigInt,
}

/// Outcome of a coefficient-wise comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub equal: bool,
    pub compared_order: HalfInt,
    pub first_mismatch: Option<Mismatch>,
}

pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl QSeries {
    /// The exact zero.
    pub fn zero() -> Self {
        Self::zero_to(HalfInt::INFINITY)
    }

    /// `O(q^order)`: nothing known to be nonzero below `order`.
    pub fn zero_to(order: HalfInt) -> Self {
        QSeries { min_exp: HalfInt::ZERO, coeffs: Vec::new(), order }
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), HalfInt::ZERO)
    }

    /// Exact `c * q^exp`.
    pub fn monomial(c: BigInt, exp: HalfInt) -> Self {
        Self::from_coeffs(exp, vec![c], HalfInt::INFINITY)
    }

    /// Builds a series from dense half-grid coefficients starting at `min_exp`.
    /// Coefficients at or beyond `order` are dropped.
    pub fn from_coeffs(min_exp: HalfInt, coeffs: Vec<BigInt>, order: HalfInt) -> Self {
        let mut s = QSeries { min_exp, coeffs, order };
        s.normalize();
        s
    }

    /// Exact polynomial in `q` from integer coefficients `c[0] + c[1] q + ...`.
    pub fn from_q_poly<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        let mut dense = Vec::new();
        for c in coeffs {
            if !dense.is_empty() {
                dense.push(BigInt::zero());
            }
            dense.push(BigInt::from(c));
        }
        Self::from_coeffs(HalfInt::ZERO, dense, HalfInt::INFINITY)
    }

    fn normalize(&mut self) {
        if !self.order.is_infinite() {
            let keep = (self.order.halves() - self.min_exp.halves()).max(0) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = HalfInt::ZERO;
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp = self.min_exp + HalfInt::from_halves(lead as i64);
        }
    }

    pub fn order(&self) -> HalfInt {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order.is_infinite()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero coefficient, `None` for zero.
    pub fn min_exp(&self) -> Option<HalfInt> {
        (!self.is_zero()).then_some(self.min_exp)
    }

    /// Exponent of the last stored nonzero coefficient, `None` for zero.
    pub fn max_exp(&self) -> Option<HalfInt> {
        (!self.is_zero()).then(|| self.min_exp + HalfInt::from_halves(self.coeffs.len() as i64 - 1))
    }

    /// Lower bound on where this series can be nonzero: `min_exp`, or the
    /// order when nothing below it is nonzero.
    pub fn valuation(&self) -> HalfInt {
        self.min_exp().unwrap_or(self.order)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.first()
    }

    /// Coefficient of `q^exp`, or `None` at or beyond the truncation order.
    pub fn coeff(&self, exp: HalfInt) -> Option<BigInt> {
        if exp >= self.order {
            return None;
        }
        let idx = exp.halves() - self.min_exp.halves();
        if self.is_zero() || idx < 0 || idx as usize >= self.coeffs.len() {
            return Some(BigInt::zero());
        }
        Some(self.coeffs[idx as usize].clone())
    }

    /// Coefficient of `q^n` for integral `n`.
    pub fn coeff_q(&self, n: i64) -> Option<BigInt> {
        self.coeff(HalfInt::from_int(n))
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (HalfInt, &BigInt)> + '_ {
        let base = self.min_exp.halves();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (HalfInt::from_halves(base + i as i64), c))
    }

    /// True if no coefficient sits at a half-integral exponent.
    pub fn is_integral(&self) -> bool {
        self.terms().all(|(e, _)| e.is_integral())
    }

    /// Drops everything at or beyond `order` (which can only lower the order).
    pub fn truncate(&self, order: HalfInt) -> Self {
        let mut s = self.clone();
        s.truncate_in_place(order);
        s
    }

    pub fn truncate_in_place(&mut self, order: HalfInt) {
        if order < self.order {
            self.order = order;
            self.normalize();
        }
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: HalfInt) -> Self {
        QSeries {
            min_exp: if self.is_zero() { HalfInt::ZERO } else { self.min_exp + e },
            coeffs: self.coeffs.clone(),
            order: self.order + e,
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero_to(self.order);
        }
        QSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            order: self.order,
        }
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.scale(&BigInt::from(c))
    }

    fn add_scaled(&self, other: &QSeries, negate: bool) -> QSeries {
        let order = self.order.min(other.order);
        if self.is_zero() && other.is_zero() {
            return Self::zero_to(order);
        }
        let lo = match (self.min_exp(), other.min_exp()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let hi = [self.max_exp(), other.max_exp()].into_iter().flatten().max().unwrap();
        let mut hi_excl = hi.halves() + 1;
        if !order.is_infinite() {
            hi_excl = hi_excl.min(order.halves());
        }
        let len = (hi_excl - lo.halves()).max(0) as usize;
        let mut coeffs = vec![BigInt::zero(); len];
        for (e, c) in self.terms() {
            let i = (e.halves() - lo.halves()) as usize;
            if i < len {
                coeffs[i] += c;
            }
        }
        for (e, c) in other.terms() {
            let i = (e.halves() - lo.halves()) as usize;
            if i < len {
                if negate {
                    coeffs[i] -= c;
                } else {
                    coeffs[i] += c;
                }
            }
        }
        Self::from_coeffs(lo, coeffs, order)
    }

    /// Cauchy product, truncated at
    /// `min(a.order + valuation(b), b.order + valuation(a))`.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order = (self.order + other.valuation()).min(other.order + self.valuation());
        if self.is_zero() || other.is_zero() {
            return Self::zero_to(order);
        }
        let lo = self.min_exp + other.min_exp;
        let mut len = self.coeffs.len() + other.coeffs.len() - 1;
        if !order.is_infinite() {
            len = len.min((order.halves() - lo.halves()).max(0) as usize);
        }
        let mut out = vec![BigInt::zero(); len];
        let rhs: Vec<(usize, &BigInt)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for &(j, b) in &rhs {
                if i + j >= len {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(lo, out, order)
    }

    /// Multiplicative inverse. The leading coefficient must be `±1` and the
    /// order finite; the relative precision `order - min_exp` is preserved.
    pub fn inv(&self) -> Result<QSeries> {
        let lead = self.leading_coeff().ok_or_else(|| Error::NonInvertible("0".into()))?;
        if !lead.abs().is_one() {
            return Err(Error::NonInvertible(lead.to_string()));
        }
        if self.order.is_infinite() {
            return Err(Error::UnboundedInverse);
        }
        let precision = (self.order.halves() - self.min_exp.halves()) as usize;
        let lead_is_one = lead.is_one();
        let mut out: Vec<BigInt> = Vec::with_capacity(precision);
        for n in 0..precision {
            let mut acc = if n == 0 { BigInt::one() } else { BigInt::zero() };
            for k in 1..=n.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    acc -= a * &out[n - k];
                }
            }
            if !lead_is_one {
                acc = -acc;
            }
            out.push(acc);
        }
        let min_exp = -self.min_exp;
        Ok(Self::from_coeffs(min_exp, out, min_exp + HalfInt::from_halves(precision as i64)))
    }

    /// `self * (1 + c q^e)`, computed in place. Lowers the order by `-e`
    /// when `e < 0`.
    pub fn mul_two_term(&self, c: i64, e: HalfInt) -> QSeries {
        if c == 0 {
            return self.clone();
        }
        let shifted = self.shift(e).scale_i64(c);
        self.add_scaled(&shifted, false)
    }

    /// `self / (1 - c q^e)` for `e > 0`; preserves the order.
    ///
    /// For an exact input the quotient is an infinite series, so the order
    /// must be finite.
    pub fn div_one_minus(&self, c: i64, e: HalfInt) -> QSeries {
        assert!(e.is_positive(), "division by 1 - c q^e needs e > 0");
        assert!(!self.order.is_infinite(), "division needs a finite truncation order");
        if self.is_zero() || c == 0 {
            return self.clone();
        }
        let len = (self.order.halves() - self.min_exp.halves()).max(0) as usize;
        let step = e.halves() as usize;
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(len, BigInt::zero());
        let c = BigInt::from(c);
        for i in step..len {
            let (head, tail) = coeffs.split_at_mut(i);
            let prev = &head[i - step];
            if !prev.is_zero() {
                if c.is_one() {
                    tail[0] += prev;
                } else {
                    tail[0] += prev * &c;
                }
            }
        }
        Self::from_coeffs(self.min_exp, coeffs, self.order)
    }

    /// `self / (q^start; q^step)_n`, i.e. divided by `prod_{i<n} (1 - q^{start + i*step})`.
    pub fn div_pochhammer(&self, start: HalfInt, step: HalfInt, n: u32) -> QSeries {
        let mut out = self.clone();
        for i in 0..n as i64 {
            out = out.div_one_minus(1, start + step * i);
        }
        out
    }

    /// `self / (q;q)_n`.
    pub fn div_qfactorial(&self, n: u32) -> QSeries {
        self.div_pochhammer(HalfInt::ONE, HalfInt::ONE, n)
    }

    /// Compares all coefficients below `min(self.order, other.order)`.
    pub fn eq_upto(&self, other: &QSeries) -> Comparison {
        let compared_order = self.order.min(other.order);
        let diff = self.add_scaled(other, true);
        let first_mismatch = diff.min_exp().map(|e| Mismatch {
            z_exp: None,
            exponent: e,
            lhs: self.coeff(e).unwrap_or_default(),
            rhs: other.coeff(e).unwrap_or_default(),
        });
        Comparison { equal: first_mismatch.is_none(), compared_order, first_mismatch }
    }
}

impl Default for QSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_scaled(rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_scaled(rhs, true)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        QSeries::mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale_i64(-1)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let e_str = if e.is_integral() { e.to_string() } else { format!("({e})") };
            match (mag.is_one(), e == HalfInt::ZERO) {
                (_, true) => write!(f, "{mag}")?,
                (true, false) if e == HalfInt::ONE => write!(f, "q")?,
                (true, false) => write!(f, "q^{e_str}")?,
                (false, false) if e == HalfInt::ONE => write!(f, "{mag}q")?,
                (false, false) => write!(f, "{mag}q^{e_str}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if !self.order.is_infinite() {
            write!(f, " + O(q^{})", self.order)?;
        }
        Ok(())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}
