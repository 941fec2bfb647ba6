//! Laurent polynomials in `z` with [`QSeries`] coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;

use crate::half::HalfInt;
use crate::series::{Comparison, Mismatch, QSeries};

/// `sum_s terms[s] * z^s`. Absent keys are zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ZLaurent {
    terms: BTreeMap<i64, QSeries>,
    order: HalfInt,
}

impl ZLaurent {
    /// The exact zero polynomial.
    pub fn zero() -> Self {
        Self::zero_to(HalfInt::INFINITY)
    }

    pub fn zero_to(order: HalfInt) -> Self {
        ZLaurent { terms: BTreeMap::new(), order }
    }

    /// A `z`-free Laurent polynomial.
    pub fn constant(c: QSeries) -> Self {
        Self::from_terms([(0, c)])
    }

    /// `coeff * z^s`.
    pub fn z_monomial(s: i64, coeff: QSeries) -> Self {
        Self::from_terms([(s, coeff)])
    }

    /// Collects terms, summing repeated `z` powers. The shared order is the
    /// minimum over all supplied coefficients.
    pub fn from_terms<I: IntoIterator<Item = (i64, QSeries)>>(terms: I) -> Self {
        let mut out = ZLaurent::zero();
        for (s, c) in terms {
            out.add_term(s, &c);
        }
        out
    }

    fn add_term(&mut self, s: i64, c: &QSeries) {
        self.order = self.order.min(c.order());
        let next = match self.terms.get(&s) {
            Some(prev) => prev + c,
            None => c.clone(),
        };
        self.terms.insert(s, next);
        self.normalize();
    }

    fn normalize(&mut self) {
        let order = self.order;
        for c in self.terms.values_mut() {
            c.truncate_in_place(order);
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn order(&self) -> HalfInt {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `z^s` (zero with the common order when absent).
    pub fn coeff(&self, s: i64) -> QSeries {
        self.terms.get(&s).cloned().unwrap_or_else(|| QSeries::zero_to(self.order))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &QSeries)> + '_ {
        self.terms.iter().map(|(&s, c)| (s, c))
    }

    /// Smallest and largest `z` powers carried, `None` for zero.
    pub fn z_support(&self) -> Option<(i64, i64)> {
        Some((*self.terms.keys().next()?, *self.terms.keys().next_back()?))
    }

    /// Minimum `q`-exponent over all coefficients.
    pub fn min_q_exp(&self) -> Option<HalfInt> {
        self.terms.values().filter_map(QSeries::min_exp).min()
    }

    pub fn truncate(&self, order: HalfInt) -> Self {
        let mut out = self.clone();
        out.order = out.order.min(order);
        out.normalize();
        out
    }

    fn map<F: Fn(i64, &QSeries) -> (i64, QSeries)>(&self, f: F) -> Self {
        let mut out = ZLaurent::zero();
        for (&s, c) in &self.terms {
            let (t, v) = f(s, c);
            out.add_term(t, &v);
        }
        if self.terms.is_empty() {
            out.order = self.order;
        }
        out
    }

    /// Applies `f` to every coefficient, keeping the `z` powers.
    pub fn map_coeffs<F: Fn(&QSeries) -> QSeries>(&self, f: F) -> Self {
        let mut out = self.map(|s, c| (s, f(c)));
        if self.terms.is_empty() {
            out.order = f(&QSeries::zero_to(self.order)).order();
        }
        out
    }

    /// Multiplication by the scalar series `c`.
    pub fn mul_scalar(&self, c: &QSeries) -> Self {
        self.map_coeffs(|x| x * c)
    }

    pub fn scale_i64(&self, c: i64) -> Self {
        self.map_coeffs(|x| x.scale_i64(c))
    }

    pub fn mul(&self, other: &ZLaurent) -> Self {
        let mut out = ZLaurent::zero_to(self.order.min(other.order));
        for (&s, a) in &self.terms {
            for (&t, b) in &other.terms {
                out.add_term(s + t, &(a * b));
            }
        }
        out
    }

    /// Substitution `z -> sign * q^e * z`.
    pub fn zscale(&self, sign: i8, e: HalfInt) -> Self {
        self.map(|s, c| {
            let v = c.shift(e * s);
            (s, if sign < 0 && s.rem_euclid(2) == 1 { -&v } else { v })
        })
    }

    /// Substitution `z -> z * q^e`.
    pub fn zshift(&self, e: HalfInt) -> Self {
        self.zscale(1, e)
    }

    /// Substitution `z -> 1/z`.
    pub fn zinvert(&self) -> Self {
        self.map(|s, c| (-s, c.clone()))
    }

    /// `self * (1 - sign * q^e * z^d)`.
    pub fn mul_one_minus(&self, sign: i8, e: HalfInt, d: i64) -> Self {
        let mut out = self.clone();
        for (&s, c) in &self.terms {
            let v = c.shift(e);
            out.add_term(s + d, &if sign > 0 { -&v } else { v });
        }
        out
    }

    /// Collapses to a scalar series at `z = sign * q^m`.
    pub fn substitute(&self, sign: i8, m: HalfInt) -> QSeries {
        let mut acc = QSeries::zero();
        let mut order = HalfInt::INFINITY;
        for (&s, c) in &self.terms {
            let mut v = c.shift(m * s);
            if sign < 0 && s.rem_euclid(2) == 1 {
                v = -&v;
            }
            order = order.min(v.order());
            acc = &acc + &v;
        }
        if self.terms.is_empty() {
            return QSeries::zero_to(self.order);
        }
        acc.truncate(order)
    }

    /// Coefficient-wise comparison across every `z` power; the mismatch is
    /// the smallest `q`-exponent, ties broken by the smaller `z` power.
    pub fn eq_upto(&self, other: &ZLaurent) -> Comparison {
        let compared_order = self.order.min(other.order);
        let mut first: Option<Mismatch> = None;
        let keys: std::collections::BTreeSet<i64> =
            self.terms.keys().chain(other.terms.keys()).copied().collect();
        for s in keys {
            let a = self.coeff(s).truncate(compared_order);
            let b = other.coeff(s).truncate(compared_order);
            let cmp = a.eq_upto(&b);
            if let Some(mut m) = cmp.first_mismatch {
                if first.as_ref().is_none_or(|f| m.exponent < f.exponent) {
                    m.z_exp = Some(s);
                    first = Some(m);
                }
            }
        }
        Comparison { equal: first.is_none(), compared_order, first_mismatch: first }
    }
}

impl Add for &ZLaurent {
    type Output = ZLaurent;
    fn add(self, rhs: &ZLaurent) -> ZLaurent {
        let mut out = self.clone();
        out.order = out.order.min(rhs.order);
        out.normalize();
        for (&s, c) in &rhs.terms {
            out.add_term(s, c);
        }
        out
    }
}

impl Sub for &ZLaurent {
    type Output = ZLaurent;
    fn sub(self, rhs: &ZLaurent) -> ZLaurent {
        self + &rhs.scale_i64(-1)
    }
}

impl fmt::Display for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if *s != 0 {
                write!(f, "z^{s}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZLaurent({self})")
    }
}

/// Exact `c * q^e` as a scalar series, for building test data.
pub fn qmono(c: i64, e: HalfInt) -> QSeries {
    QSeries::monomial(BigInt::from(c), e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    #[test]
    fn substitute_constant() {
        let p = ZLaurent::constant(QSeries::one());
        assert_eq!(p.substitute(1, q(0)), QSeries::one());
    }

    #[test]
    fn zshift_examples() {
        let z = ZLaurent::z_monomial(1, QSeries::one());
        assert_eq!(z.zshift(q(1)), ZLaurent::z_monomial(1, qmono(1, q(1))));
        let p = ZLaurent::from_terms([(-2, qmono(3, q(1))), (1, qmono(-1, HalfInt::HALF))]);
        assert_eq!(p.zshift(q(0)), p);
        assert_eq!(p.zshift(q(1)).zshift(q(-1)), p);
    }

    #[test]
    fn zinvert_examples() {
        let z = ZLaurent::z_monomial(1, QSeries::one());
        assert_eq!(z.zinvert(), ZLaurent::z_monomial(-1, QSeries::one()));
        let p = ZLaurent::from_terms([(-2, qmono(3, q(1))), (1, qmono(-1, HalfInt::HALF))]);
        assert_eq!(p.zinvert().zinvert(), p);
    }

    #[test]
    fn substitution_of_symmetric_polynomial_is_mirror_invariant() {
        let p = ZLaurent::from_terms([(-1, qmono(1, q(2))), (0, qmono(4, q(0))), (1, qmono(1, q(2)))]);
        let m = HalfInt::from_halves(3);
        assert_eq!(p.substitute(1, m), p.zinvert().substitute(1, m));
    }

    #[test]
    fn signed_substitution() {
        // (1 - q z)(1 - 1/z) at z = -1 is 2(1 + q)
        let p = ZLaurent::constant(QSeries::one()).mul_one_minus(1, q(1), 1).mul_one_minus(1, q(0), -1);
        let v = p.substitute(-1, q(0));
        assert_eq!(v, QSeries::from_q_poly([2, 2]));
    }

    #[test]
    fn products_and_comparison() {
        let a = ZLaurent::from_terms([(0, QSeries::one()), (1, qmono(-1, q(1)))]);
        let b = a.mul(&a);
        assert_eq!(b.coeff(1), qmono(-2, q(1)));
        assert_eq!(b.coeff(2), qmono(1, q(2)));
        let c = &b + &ZLaurent::z_monomial(2, qmono(1, q(3)));
        let cmp = b.eq_upto(&c);
        assert!(!cmp.equal);
        let m = cmp.first_mismatch.unwrap();
        assert_eq!((m.z_exp, m.exponent), (Some(2), q(3)));
        assert!((&b - &b).is_zero());
    }
}
