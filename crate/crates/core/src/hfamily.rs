//! Bressoud's polynomials `H_{2n}(z, a | q)`, the iterated family
//! `F_n^{(j)}(z, a)` and their `n -> inf` limits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::laurent::ZLaurent;
use crate::product::{eval_product_sum, TripleProductSpec};
use crate::qobjects::{binom, qbinom, Monomial};
use crate::series::QSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HSpec {
    pub n: u32,
    pub a: HalfInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FSpec {
    pub n: u32,
    pub j: u32,
    pub a: HalfInt,
}

/// `H_{2n}(z, a) = sum_{s=-n}^{n} [2n; n-s]_q q^{a s^2} z^s`.
pub fn h_poly(spec: HSpec, order: HalfInt) -> ZLaurent {
    let n = spec.n as i64;
    ZLaurent::from_terms((-n..=n).map(|s| {
        let weight = spec.a * (s * s);
        // a < 0 pulls coefficients down; fetch them with matching headroom
        let need = if weight < HalfInt::ZERO { order - weight } else { order };
        (s, qbinom(2 * spec.n, n - s, need).shift(weight).truncate(order))
    }))
}

/// `F_n^{(j)}(z, a)` from the defining recursion
/// `F^{(j+1)}(z) = F^{(j)}(zq) + F^{(j)}(q/z)` with `F^{(0)} = H_{2n}`.
pub fn f_func(spec: FSpec, order: HalfInt) -> ZLaurent {
    // each step shifts z^s by at most |s| <= n powers of q
    let headroom = HalfInt::from_int(spec.n as i64 * spec.j as i64);
    let mut f = h_poly(HSpec { n: spec.n, a: spec.a }, order + headroom);
    for _ in 0..spec.j {
        f = &f.zshift(HalfInt::ONE) + &f.zshift(HalfInt::ONE).zinvert();
    }
    f.truncate(order)
}

/// Smallest value of `a s^2 + m s` over integers `s`, for `a > 0`.
fn quadratic_floor(a: HalfInt, m: HalfInt) -> HalfInt {
    let a2 = a.halves() as f64;
    let vertex = -(m.halves() as f64) / (2.0 * a2);
    let c = vertex.floor() as i64;
    [c - 1, c, c + 1, c + 2]
        .into_iter()
        .map(|s| a * (s * s) + m * s)
        .min()
        .unwrap()
}

/// `H_{2n}(sign q^m, a)` as a scalar series, exact below `order`.
pub fn h_substituted(n: u32, a: HalfInt, sign: i8, m: HalfInt, order: HalfInt) -> QSeries {
    let floor = if a.is_positive() {
        quadratic_floor(a, m)
    } else {
        (-(n as i64)..=n as i64).map(|s| a * (s * s) + m * s).min().unwrap_or(HalfInt::ZERO)
    };
    // round the headroom up so nearby calls share q-binomial tables
    let headroom = HalfInt::from_halves(((-floor.halves()).max(0) + 7) / 8 * 8);
    let work = order + headroom;
    let nn = n as i64;
    let mut acc = QSeries::zero_to(order);
    for s in -nn..=nn {
        let mut term = qbinom(2 * n, nn - s, work).shift(a * (s * s) + m * s);
        if sign < 0 && s.rem_euclid(2) == 1 {
            term = -&term;
        }
        acc = &acc + &term.truncate(order);
    }
    acc
}

/// `F_n^{(j)}(sign q^m, a)` via the defining recursion on monomials:
/// `2^j` leaf substitutions of `H_{2n}`.
pub fn f_substituted(n: u32, j: u32, a: HalfInt, sign: i8, m: HalfInt, order: HalfInt) -> QSeries {
    if j == 0 {
        return h_substituted(n, a, sign, m, order);
    }
    let up = f_substituted(n, j - 1, a, sign, m + HalfInt::ONE, order);
    let down = f_substituted(n, j - 1, a, sign, HalfInt::ONE - m, order);
    &up + &down
}

/// `lim_n H_{2n}(-z, a) = (q^{2a}, z q^a, q^a / z; q^{2a})_inf / (q;q)_inf`
/// at a scalar monomial `z`.
pub fn h_limit_product(a: HalfInt, z: Monomial, order: HalfInt) -> Result<QSeries> {
    f_limit_sum(0, a, z, order)
}

/// `lim_n F_n^{(j)}(-z, a) =
/// sum_{s=0}^{j} C(j, s) (q^{2a}, z q^{a+j-2s}, q^{a-j+2s}/z; q^{2a})_inf / (q;q)_inf`.
pub fn f_limit_sum(j: u32, a: HalfInt, z: Monomial, order: HalfInt) -> Result<QSeries> {
    if !z.is_scalar() {
        return Err(Error::InvalidParams("limit products need a z-free monomial".into()));
    }
    let specs = f_limit_specs(j, a, z);
    eval_product_sum(&specs, order)
}

/// The triple products summed by [`f_limit_sum`].
pub fn f_limit_specs(j: u32, a: HalfInt, z: Monomial) -> Vec<TripleProductSpec> {
    let j = j as i64;
    (0..=j)
        .map(|s| {
            let e = HalfInt::from_int(j - 2 * s);
            TripleProductSpec::new(a * 2, z.shift_q(a + e), z.recip().shift_q(a - e))
                .with_weight(binom(j, s))
        })
        .collect()
}

/// How to decide that a sequence indexed by `n` has reached its limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stabilization {
    /// Stop once `extra + 1` consecutive steps leave the value unchanged.
    Consecutive { extra: u32 },
    /// Evaluate at exactly this `n`.
    Fixed(u32),
}

impl Default for Stabilization {
    fn default() -> Self {
        Stabilization::Consecutive { extra: 1 }
    }
}

/// Result of a stabilized `n -> inf` evaluation.
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub value: QSeries,
    pub n: u32,
}

/// Evaluates `f(n)` for increasing `n` until the policy is met, giving up
/// after `max_n`.
pub fn stabilize<F: FnMut(u32) -> QSeries>(
    mut f: F,
    policy: Stabilization,
    max_n: u32,
) -> Result<Stabilized> {
    match policy {
        Stabilization::Fixed(n) => Ok(Stabilized { value: f(n), n }),
        Stabilization::Consecutive { extra } => {
            let mut prev = f(0);
            let mut streak = 0;
            for n in 1..=max_n {
                let cur = f(n);
                if cur == prev {
                    streak += 1;
                    if streak > extra {
                        return Ok(Stabilized { value: cur, n });
                    }
                } else {
                    streak = 0;
                }
                prev = cur;
            }
            Err(Error::NoStabilization(format!("no agreement up to n = {max_n}")))
        }
    }
}

/// A provable `n` from which `H_{2n}(sign q^m, a)` agrees with its limit
/// below `order`: the tail `[2n; n-s] - 1/(q)_inf` starts at `q^{n-|s|+1}`
/// and the missing `|s| > n` terms sit at `q^{a s^2 + m s}`.
pub fn h_stable_n(a: HalfInt, m: HalfInt, order: HalfInt) -> u32 {
    assert!(a.is_positive());
    let mut n: i64 = 0;
    loop {
        let inside = (-n..=n).all(|s| {
            a * (s * s) + m * s + HalfInt::from_int(n - s.abs() + 1) >= order
        });
        let outside = (n + 1..n + 2 + order.halves().abs()).all(|s| {
            a * (s * s) + m * s >= order && a * (s * s) - m * s >= order
        });
        if inside && outside {
            return n as u32;
        }
        n += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use crate::qobjects::poch_finite;

    fn q(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    const INF: HalfInt = HalfInt::INFINITY;

    #[test]
    fn h_zero_is_one() {
        assert_eq!(h_poly(HSpec { n: 0, a: q(3) }, INF), ZLaurent::constant(QSeries::one()));
    }

    #[test]
    fn h_one_direct_expansion() {
        let h = h_poly(HSpec { n: 1, a: q(1) }, INF);
        assert_eq!(h.coeff(-1), QSeries::from_q_poly([0, 1]));
        assert_eq!(h.coeff(0), QSeries::from_q_poly([1, 1]));
        assert_eq!(h.coeff(1), QSeries::from_q_poly([0, 1]));
        assert_eq!(h.z_support(), Some((-1, 1)));
    }

    #[test]
    fn half_parameter_factors() {
        // H_{2n}(-z q^{1/2}, 1/2) = (qz, 1/z; q)_n
        for n in 0..5 {
            let h = h_poly(HSpec { n, a: HalfInt::HALF }, INF).zscale(-1, HalfInt::HALF);
            let p = poch_finite(Monomial::new(1, q(1), 1), n, q(1), INF)
                .mul(&poch_finite(Monomial::new(1, q(0), -1), n, q(1), INF));
            assert_eq!(h, p, "n = {n}");
        }
    }

    #[test]
    fn h_is_symmetric_and_supported_on_minus_n_to_n() {
        for n in 0..6 {
            for a in [1, 2, 3, 5] {
                let h = h_poly(HSpec { n, a: HalfInt::from_halves(a) }, INF);
                assert_eq!(h.zinvert(), h);
                assert_eq!(h.z_support(), Some((-(n as i64), n as i64)));
            }
        }
    }

    #[test]
    fn f_base_case_and_first_step() {
        let a = HalfInt::from_halves(3);
        let order = q(25);
        assert_eq!(f_func(FSpec { n: 3, j: 0, a }, order), h_poly(HSpec { n: 3, a }, order));
        let h = h_poly(HSpec { n: 3, a }, INF);
        let expected = (&h.zshift(q(1)) + &h.zshift(q(1)).zinvert()).truncate(order);
        assert_eq!(f_func(FSpec { n: 3, j: 1, a }, order), expected);
    }

    #[test]
    fn f_is_symmetric_with_bounded_support() {
        for j in 0..4 {
            let f = f_func(FSpec { n: 4, j, a: q(2) }, q(30));
            assert_eq!(f.zinvert(), f);
            let (lo, hi) = f.z_support().unwrap();
            assert!(lo >= -4 && hi <= 4);
        }
    }

    #[test]
    fn substitution_paths_agree() {
        let order = q(30);
        for (n, j, a, sign, m) in [(3, 0, 3, -1, 1), (4, 2, 5, 1, -1), (2, 3, 2, -1, 0), (5, 1, 7, 1, 3)] {
            let a = HalfInt::from_halves(a);
            let m = HalfInt::from_halves(m);
            let symbolic = f_func(FSpec { n, j, a }, INF).substitute(sign, m).truncate(order);
            assert_eq!(f_substituted(n, j, a, sign, m, order), symbolic);
        }
    }

    #[test]
    fn functional_equation_small_cases() {
        // H_{2n}(-q^c, c) = q^n H_{2n}(-q^{c-1}, c)
        for n in 0..=10 {
            for c in [1, 2, 3, 4, 5] {
                let c = HalfInt::from_halves(c);
                let lhs = h_substituted(n, c, -1, c, q(40));
                let rhs = h_substituted(n, c, -1, c - q(1), q(40)).shift(q(n as i64)).truncate(q(40));
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(h_substituted(1, q(1), -1, q(1), q(20)), QSeries::from_q_poly([0, 1, -1]).truncate(q(20)));
    }

    #[test]
    fn rogers_ramanujan_limit_product() {
        // a = 5/2, z = q^{1/2}: (q^5, q^3, q^2; q^5)_inf / (q)_inf
        let p = h_limit_product(HalfInt::from_halves(5), Monomial::q_power(HalfInt::HALF), q(30)).unwrap();
        let direct = eval_product_sum(
            &[TripleProductSpec::new(q(5), Monomial::q_power(q(2)), Monomial::q_power(q(3)))],
            q(30),
        )
        .unwrap();
        assert_eq!(p, direct);
    }

    #[test]
    fn limit_weights() {
        let weights = |j| -> Vec<BigInt> {
            f_limit_specs(j, q(4), Monomial::q_power(q(0))).into_iter().map(|s| s.weight).collect()
        };
        assert_eq!(weights(0), vec![BigInt::from(1)]);
        assert_eq!(weights(1), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(weights(3), [1, 3, 3, 1].map(BigInt::from).to_vec());
    }

    #[test]
    fn stabilization_reaches_limit_product() {
        let a = HalfInt::from_halves(5);
        let order = q(20);
        let got = stabilize(
            |n| h_substituted(n, a, -1, HalfInt::HALF, order),
            Stabilization::default(),
            80,
        )
        .unwrap();
        let limit = h_limit_product(a, Monomial::q_power(HalfInt::HALF), order).unwrap();
        assert_eq!(got.value, limit);
        let bound = h_stable_n(a, HalfInt::HALF, order);
        assert!(bound <= got.n);
        assert_eq!(h_substituted(bound, a, -1, HalfInt::HALF, order), limit);
    }
}
