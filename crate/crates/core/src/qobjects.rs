//! q-Pochhammer symbols, Gaussian binomials, ordinary binomials and the
//! Euler product `(q;q)_inf`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::laurent::ZLaurent;
use crate::series::QSeries;

/// `sign * q^q_exp * z^z_exp`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub sign: i8,
    pub q_exp: HalfInt,
    #[serde(default)]
    pub z_exp: i64,
}

impl Monomial {
    pub fn new(sign: i8, q_exp: HalfInt, z_exp: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        Monomial { sign, q_exp, z_exp }
    }

    /// `+q^e`
    pub fn q_power(e: HalfInt) -> Self {
        Self::new(1, e, 0)
    }

    /// `sign * q^e`
    pub fn scalar(sign: i8, e: HalfInt) -> Self {
        Self::new(sign, e, 0)
    }

    pub fn negate(self) -> Self {
        Monomial { sign: -self.sign, ..self }
    }

    pub fn times(self, other: Monomial) -> Self {
        Monomial {
            sign: self.sign * other.sign,
            q_exp: self.q_exp + other.q_exp,
            z_exp: self.z_exp + other.z_exp,
        }
    }

    pub fn recip(self) -> Self {
        Monomial { sign: self.sign, q_exp: -self.q_exp, z_exp: -self.z_exp }
    }

    pub fn shift_q(self, e: HalfInt) -> Self {
        Monomial { q_exp: self.q_exp + e, ..self }
    }

    /// Replaces `z` by the scalar monomial `z`.
    pub fn substitute(self, z: Monomial) -> Monomial {
        debug_assert_eq!(z.z_exp, 0);
        let sign = if self.z_exp.rem_euclid(2) == 1 { self.sign * z.sign } else { self.sign };
        Monomial { sign, q_exp: self.q_exp + z.q_exp * self.z_exp, z_exp: 0 }
    }

    pub fn is_scalar(self) -> bool {
        self.z_exp == 0
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}q^{}", if self.sign < 0 { "-" } else { "" }, self.q_exp)?;
        match self.z_exp {
            0 => Ok(()),
            1 => write!(f, "z"),
            d => write!(f, "z^{d}"),
        }
    }
}

/// `(arg; q^base_exp)_n = prod_{i<n} (1 - arg q^{base_exp i})`, truncated at `order`.
pub fn poch_finite(arg: Monomial, n: u32, base_exp: HalfInt, order: HalfInt) -> ZLaurent {
    let mut out = ZLaurent::constant(QSeries::one());
    for i in 0..n as i64 {
        out = out.mul_one_minus(arg.sign, arg.q_exp + base_exp * i, arg.z_exp);
    }
    out.truncate(order)
}

/// Scalar version of [`poch_finite`] for `z`-free arguments.
pub fn poch_finite_scalar(arg: Monomial, n: u32, base_exp: HalfInt, order: HalfInt) -> QSeries {
    assert!(arg.is_scalar(), "scalar Pochhammer needs a z-free argument");
    let mut out = QSeries::one();
    for i in 0..n as i64 {
        out = out.mul_two_term(-arg.sign as i64, arg.q_exp + base_exp * i);
    }
    out.truncate(order)
}

/// `(arg; q^base_exp)_inf` truncated at `order`.
///
/// The finitely many factors with a nonpositive exponent are multiplied in
/// exactly first, so Laurent arguments are fine as long as no factor
/// vanishes. A factor `1 - q^0` makes the whole product zero and is
/// rejected as ill-posed.
pub fn poch_infinite(arg: Monomial, base_exp: HalfInt, order: HalfInt) -> Result<QSeries> {
    if !arg.is_scalar() {
        return Err(Error::IllPosedProduct(format!("argument {arg:?} still depends on z")));
    }
    if !base_exp.is_positive() {
        return Err(Error::IllPosedProduct(format!("base q^{base_exp} does not converge")));
    }
    if order.is_infinite() {
        return Err(Error::IllPosedProduct("infinite product needs a finite order".into()));
    }
    let mut head = QSeries::one();
    let mut i = 0i64;
    loop {
        let e = arg.q_exp + base_exp * i;
        if e.is_positive() {
            break;
        }
        if e == HalfInt::ZERO && arg.sign > 0 {
            return Err(Error::IllPosedProduct(format!(
                "({arg:?}; q^{base_exp})_inf has the vanishing factor (1 - 1)"
            )));
        }
        head = head.mul_two_term(-arg.sign as i64, e);
        i += 1;
    }
    let mut out = head.truncate(order);
    loop {
        let e = arg.q_exp + base_exp * i;
        if e >= order - out.valuation().min(HalfInt::ZERO) {
            break;
        }
        out = out.mul_two_term(-arg.sign as i64, e);
        i += 1;
    }
    Ok(out)
}

/// `(q;q)_inf` via the pentagonal number theorem:
/// `sum_k (-1)^k q^{k(3k-1)/2}` over all integers `k`.
pub fn euler_product(order: HalfInt) -> QSeries {
    assert!(!order.is_infinite(), "Euler product needs a finite order");
    let limit = order.ceil().max(0);
    let mut coeffs = vec![BigInt::zero(); (2 * limit).max(0) as usize];
    let mut put = |e: i64, sign: i64| {
        if e < limit {
            coeffs[(2 * e) as usize] += sign;
        }
    };
    put(0, 1);
    let mut k = 1i64;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        if e1 >= limit {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        put(e1, sign);
        put(e1 + k, sign);
        k += 1;
    }
    QSeries::from_coeffs(HalfInt::ZERO, coeffs, order)
}

fn partition_cache() -> &'static Mutex<HashMap<i64, Arc<QSeries>>> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<QSeries>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `1/(q;q)_inf`, the partition generating function, cached per order.
pub fn partition_series(order: HalfInt) -> Arc<QSeries> {
    let key = order.halves();
    if let Some(hit) = partition_cache().lock().unwrap().get(&key) {
        return hit.clone();
    }
    let inv = Arc::new(euler_product(order).inv().expect("Euler product is a unit"));
    partition_cache().lock().unwrap().entry(key).or_insert(inv).clone()
}

thread_local! {
    static QBINOM_ROWS: RefCell<HashMap<i64, Vec<Vec<QSeries>>>> = RefCell::new(HashMap::new());
}

/// Gaussian binomial `[n choose k]_q` truncated at `order`; zero when
/// `k < 0` or `k > n`. Rows come from the q-Pascal recurrence
/// `[n;k] = [n-1;k-1] + q^k [n-1;k]`, memoized per thread and order.
pub fn qbinom(n: u32, k: i64, order: HalfInt) -> QSeries {
    if k < 0 || k > n as i64 {
        return QSeries::zero_to(order);
    }
    QBINOM_ROWS.with(|cell| {
        let mut tables = cell.borrow_mut();
        let rows = tables.entry(order.halves()).or_default();
        while rows.len() <= n as usize {
            let m = rows.len();
            let row: Vec<QSeries> = if m == 0 {
                vec![QSeries::one().truncate(order)]
            } else {
                let prev = &rows[m - 1];
                (0..=m)
                    .map(|j| {
                        if j == 0 || j == m {
                            QSeries::one().truncate(order)
                        } else {
                            &prev[j - 1] + &prev[j].shift(HalfInt::from_int(j as i64)).truncate(order)
                        }
                    })
                    .collect()
            };
            rows.push(row);
        }
        rows[n as usize][k as usize].clone()
    })
}

/// Drops this thread's Gaussian-binomial memo tables.
pub fn clear_qbinom_cache() {
    QBINOM_ROWS.with(|cell| cell.borrow_mut().clear());
}

/// Ordinary binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn poly(c: &[i64]) -> QSeries {
        QSeries::from_q_poly(c.iter().copied())
    }

    #[test]
    fn empty_pochhammer_is_one() {
        let p = poch_finite(Monomial::q_power(q(1)), 0, q(1), q(10));
        assert_eq!(p, ZLaurent::constant(QSeries::one().truncate(q(10))));
    }

    #[test]
    fn q_factorial_two() {
        let p = poch_finite_scalar(Monomial::q_power(q(1)), 2, q(1), HalfInt::INFINITY);
        assert_eq!(p, &poly(&[1, -1]) * &poly(&[1, 0, -1]));
        assert_eq!(p, poly(&[1, -1, -1, 1]));
    }

    #[test]
    fn z_pochhammer_at_one() {
        // (qz;q)_1 (1/z;q)_1 = (1 - qz)(1 - 1/z)
        let a = poch_finite(Monomial::new(1, q(1), 1), 1, q(1), HalfInt::INFINITY);
        let b = poch_finite(Monomial::new(1, q(0), -1), 1, q(1), HalfInt::INFINITY);
        let p = a.mul(&b);
        assert_eq!(p.coeff(-1), poly(&[-1]));
        assert_eq!(p.coeff(0), poly(&[1, 1]));
        assert_eq!(p.coeff(1), poly(&[0, -1]));
    }

    #[test]
    fn reciprocal_z_pochhammer_vanishes_at_one() {
        for n in 1..5 {
            let p = poch_finite(Monomial::new(1, q(0), -1), n, q(1), q(20));
            assert!(p.substitute(1, q(0)).is_zero());
        }
    }

    #[test]
    fn pochhammer_step() {
        let arg = Monomial::scalar(-1, HalfInt::HALF);
        for n in 0..6 {
            let a = poch_finite_scalar(arg, n, q(2), HalfInt::INFINITY)
                .mul_two_term(1, HalfInt::HALF + q(2) * n as i64);
            assert_eq!(a, poch_finite_scalar(arg, n + 1, q(2), HalfInt::INFINITY));
        }
    }

    #[test]
    fn euler_product_matches_pentagonal_oracle() {
        let e = euler_product(q(8));
        assert_eq!(e, poly(&[1, -1, -1, 0, 0, 1, 0, 1]).truncate(q(8)));
        let naive = poch_infinite(Monomial::q_power(q(1)), q(1), q(60)).unwrap();
        assert_eq!(euler_product(q(60)), naive);
    }

    #[test]
    fn partition_numbers() {
        let p = partition_series(q(12));
        let expected = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56];
        for (n, &c) in expected.iter().enumerate() {
            assert_eq!(p.coeff_q(n as i64).unwrap(), BigInt::from(c));
        }
    }

    #[test]
    fn single_factor_below_order() {
        let p = poch_infinite(Monomial::q_power(q(5)), q(5), q(5)).unwrap();
        assert_eq!(p, QSeries::one().truncate(q(5)));
        let p = poch_infinite(Monomial::q_power(q(5)), q(5), q(6)).unwrap();
        assert_eq!(p, poly(&[1, 0, 0, 0, 0, -1]).truncate(q(6)));
    }

    #[test]
    fn ill_posed_products() {
        assert!(poch_infinite(Monomial::q_power(q(0)), q(1), q(5)).is_err());
        assert!(poch_infinite(Monomial::q_power(q(1)), q(0), q(5)).is_err());
        assert!(poch_infinite(Monomial::new(1, q(1), 1), q(1), q(5)).is_err());
        // (-1; q)_inf = 2 (-q; q)_inf is fine
        let p = poch_infinite(Monomial::scalar(-1, q(0)), q(1), q(4)).unwrap();
        assert_eq!(p, poly(&[2, 2, 2, 4]).truncate(q(4)));
    }

    #[test]
    fn laurent_argument_keeps_full_order() {
        // (-q^{-1}; q)_inf = (1 + q^{-1}) (1 + 1) (-q; q)_inf
        let p = poch_infinite(Monomial::scalar(-1, q(-1)), q(1), q(6)).unwrap();
        assert_eq!(p.order(), q(6));
        let expected = &(&poly(&[1, 1]).shift(q(-1)) * &poly(&[2]))
            * &poch_infinite(Monomial::scalar(-1, q(1)), q(1), q(7)).unwrap();
        assert!(p.eq_upto(&expected).equal);
    }

    #[test]
    fn qbinom_examples() {
        let inf = HalfInt::INFINITY;
        assert_eq!(qbinom(5, 0, inf), QSeries::one());
        assert_eq!(qbinom(2, 1, inf), poly(&[1, 1]));
        assert_eq!(qbinom(4, 2, inf), poly(&[1, 1, 2, 1, 1]));
        assert!(qbinom(3, 4, inf).is_zero());
        assert!(qbinom(3, -1, inf).is_zero());
    }

    #[test]
    fn qbinom_matches_pochhammer_quotient() {
        let order = q(30);
        for n in 0..10u32 {
            for k in 0..=n {
                let quotient = poch_finite_scalar(Monomial::q_power(q(1)), n, q(1), order)
                    .div_qfactorial(k)
                    .div_qfactorial(n - k);
                assert_eq!(qbinom(n, k as i64, order), quotient, "[{n} choose {k}]");
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(7, 0), BigInt::one());
        assert_eq!(binom(3, 1), BigInt::from(3));
        let table: Vec<BigInt> = (0..4).map(|t| binom(6 - t, t)).collect();
        assert_eq!(table, [1, 5, 6, 1].map(BigInt::from));
        assert!(binom(3, 5).is_zero());
        assert!(binom(3, -1).is_zero());
    }
}
