//! Multisums over weakly decreasing tuples `s_1 >= s_2 >= ... >= s_k >= 0`.
//!
//! A summand is
//!
//! ```text
//! q^{sum s_i^2 + lambda_i s_i} * B(s) * T(s_k)
//!   / ((q)_{n - s_1} (q)_{s_1 - s_2} ... (q)_{s_{k-1} - s_k})
//! ```
//!
//! where `B` collects the binomial factors of the placement set, the
//! `(q)_{n - s_1}` head factor is only present when a head `n` is given,
//! and `T` is one of the [`Tail`] kinds.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::hfamily::{f_func, f_substituted, FSpec};
use crate::laurent::ZLaurent;
use crate::qobjects::{poch_finite, Monomial};
use crate::series::QSeries;

/// Factor attached to the last index `s = s_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tail {
    /// `1 / (q;q)_s`
    Odd,
    /// `1 / (q^2;q^2)_s`
    Even,
    /// `(-z, -q/z; q)_s / (q;q)_{2s}`
    Over,
    /// `(-z q^{k+1}; q)_{s+1} (-q^{-k}/z; q)_s / (q;q)_{2s+1}`
    OverOdd { k: i64 },
    /// `(qz, 1/z; q)_s / (q;q)_{2s}`
    ZPoch,
    /// `F_s^{(j)}(z, a) / (q;q)_{2s}`; `j = 0` is `H_{2s}(z, a)`.
    Family { j: u32, a: HalfInt },
}

impl Tail {
    /// Pochhammer factors `(arg; q)_{s + extra}` of the numerator.
    fn poch_factors(self) -> Vec<(Monomial, i64)> {
        let h = HalfInt::from_int;
        match self {
            Tail::Odd | Tail::Even | Tail::Family { .. } => vec![],
            Tail::Over => vec![(Monomial::new(-1, h(0), 1), 0), (Monomial::new(-1, h(1), -1), 0)],
            Tail::OverOdd { k } => {
                vec![(Monomial::new(-1, h(k + 1), 1), 1), (Monomial::new(-1, h(-k), -1), 0)]
            }
            Tail::ZPoch => vec![(Monomial::new(1, h(1), 1), 0), (Monomial::new(1, h(0), -1), 0)],
        }
    }

    /// `(start, step, length)` of the denominator Pochhammer symbol.
    fn denominator(self, s: i64) -> (HalfInt, HalfInt, u32) {
        let one = HalfInt::ONE;
        match self {
            Tail::Odd => (one, one, s as u32),
            Tail::Even => (one * 2, one * 2, s as u32),
            Tail::Over | Tail::ZPoch | Tail::Family { .. } => (one, one, 2 * s as u32),
            Tail::OverOdd { .. } => (one, one, 2 * s as u32 + 1),
        }
    }

    fn depends_on_z(self) -> bool {
        !matches!(self, Tail::Odd | Tail::Even)
    }

    /// The exact numerator at `s`, symbolic in `z` unless `z` is given.
    fn numerator(self, s: i64, z: Option<Monomial>) -> ZLaurent {
        if let Tail::Family { j, a } = self {
            return match z {
                Some(z) => ZLaurent::constant(f_substituted(s as u32, j, a, z.sign, z.q_exp, HalfInt::INFINITY)),
                None => f_func(FSpec { n: s as u32, j, a }, HalfInt::INFINITY),
            };
        }
        let mut out = ZLaurent::constant(QSeries::one());
        for (arg, extra) in self.poch_factors() {
            let arg = z.map_or(arg, |z| arg.substitute(z));
            out = out.mul(&poch_finite(arg, (s + extra) as u32, HalfInt::ONE, HalfInt::INFINITY));
        }
        out
    }

    /// A lower bound `gamma s^2 + alpha s + beta` on the `q`-valuation of
    /// the numerator.
    fn valuation_bound(self, z: Option<Monomial>) -> Quad {
        let zq = z.map_or(HalfInt::ZERO, |z| z.q_exp);
        if let Tail::Family { j, a } = self {
            // |z power| <= s; each recursion step moves it by at most s
            let drift = HalfInt::from_int(j as i64) + HalfInt::from_halves(zq.halves().abs());
            return Quad { a: a.min(HalfInt::ZERO), b: -drift, c: HalfInt::ZERO };
        }
        let mut c = HalfInt::ZERO;
        for (arg, _) in self.poch_factors() {
            let e = z.map_or(arg.q_exp, |z| arg.substitute(z).q_exp);
            let mut i = 0;
            while e + HalfInt::from_int(i) < HalfInt::ZERO {
                c += e + HalfInt::from_int(i);
                i += 1;
            }
        }
        Quad { a: HalfInt::ZERO, b: HalfInt::ZERO, c }
    }
}

/// Declarative description of a multisum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummandSpec {
    pub k: usize,
    /// `lambda_1, ..., lambda_k`.
    pub linear: Vec<i64>,
    /// Sorted positions (1-based) carrying `q^{-s_i}(1 + q^{s_{i-1} + s_i})`;
    /// position 1 carries a bare `q^{-s_1}` unless there is a head.
    pub binomial_placement: Vec<usize>,
    /// Fixed `s_0 = n`: adds `1/(q)_{n - s_1}` and bounds `s_1 <= n`.
    pub head: Option<u32>,
    pub tail: Tail,
    /// Scalar value substituted for `z`; `None` keeps `z` symbolic.
    pub z: Option<Monomial>,
}

impl SummandSpec {
    /// `k` indices, `q^{sum s_i^2}`, no binomial factors, no head.
    pub fn plain(k: usize, tail: Tail) -> Self {
        SummandSpec { k, linear: vec![0; k], binomial_placement: vec![], head: None, tail, z: None }
    }

    pub fn with_linear(mut self, linear: Vec<i64>) -> Self {
        self.linear = linear;
        self
    }

    pub fn with_placement(mut self, placement: Vec<usize>) -> Self {
        self.binomial_placement = placement;
        self
    }

    pub fn with_head(mut self, n: u32) -> Self {
        self.head = Some(n);
        self
    }

    pub fn with_z(mut self, z: Monomial) -> Self {
        self.z = Some(z);
        self
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedSummand(m));
        if self.k == 0 {
            return bad("a multisum needs at least one index".into());
        }
        if self.linear.len() != self.k {
            return bad(format!("{} linear coefficients for {} indices", self.linear.len(), self.k));
        }
        let p = &self.binomial_placement;
        if p.windows(2).any(|w| w[0] >= w[1]) {
            return bad(format!("placement {p:?} is not strictly increasing"));
        }
        if p.iter().any(|&i| i == 0 || i > self.k) {
            return bad(format!("placement {p:?} leaves 1..={}", self.k));
        }
        if let Some(z) = self.z {
            if !z.is_scalar() {
                return bad(format!("z = {z:?} is not a scalar monomial"));
            }
        }
        if let Tail::OverOdd { k } = self.tail {
            if k < 0 {
                return bad(format!("odd overpartition tail with k = {k}"));
            }
        }
        Ok(())
    }

    /// Effective linear coefficient of index `i` (1-based): `lambda_i`
    /// minus one when the placement puts `q^{-s_i}` there.
    fn effective_linear(&self, i: usize) -> i64 {
        self.linear[i - 1] - self.binomial_placement.contains(&i) as i64
    }
}

/// `a s^2 + b s + c`.
#[derive(Clone, Copy, Debug)]
struct Quad {
    a: HalfInt,
    b: HalfInt,
    c: HalfInt,
}

impl Quad {
    fn index(lambda: i64) -> Self {
        Quad { a: HalfInt::ONE, b: HalfInt::from_int(lambda), c: HalfInt::ZERO }
    }

    fn plus(self, o: Quad) -> Self {
        Quad { a: self.a + o.a, b: self.b + o.b, c: self.c + o.c }
    }

    fn at(self, s: i64) -> HalfInt {
        self.a * (s * s) + self.b * s + self.c
    }

    /// Minimum over integers `0 <= s <= cap`; `None` if unbounded below.
    fn min_on(self, cap: Option<i64>) -> Option<HalfInt> {
        let mut cands = vec![0];
        if let Some(cap) = cap {
            cands.push(cap);
        }
        if self.a.is_positive() {
            let v = (-self.b.halves()).div_euclid(2 * self.a.halves());
            cands.extend([v, v + 1]);
        } else if cap.is_none() && (self.a < HalfInt::ZERO || self.b < HalfInt::ZERO) {
            return None;
        }
        let hi = cap.unwrap_or(i64::MAX);
        cands.into_iter().map(|s| self.at(s.clamp(0, hi))).min()
    }
}

/// Per-index exponent quadratics, with the tail bound folded into the last.
fn index_quads(spec: &SummandSpec) -> Vec<Quad> {
    let mut quads: Vec<Quad> = (1..=spec.k).map(|i| Quad::index(spec.effective_linear(i))).collect();
    let last = quads.len() - 1;
    quads[last] = quads[last].plus(spec.tail.valuation_bound(spec.z));
    quads
}

fn bound_with(quads: &[Quad], head: Option<u32>, prefix: &[i64]) -> Result<HalfInt> {
    let mut total = HalfInt::ZERO;
    for (q, &s) in quads.iter().zip(prefix) {
        total += q.at(s);
    }
    let cap = prefix.last().copied().or(head.map(i64::from));
    for q in &quads[prefix.len()..] {
        total += q.min_on(cap).ok_or_else(|| {
            Error::MalformedSummand("summand exponents are unbounded below".into())
        })?;
    }
    Ok(total)
}

/// A provable lower bound on the `q`-exponent of every summand whose tuple
/// starts with `prefix`. Binomial factors `(1 + q^{...})` only add
/// nonnegative exponents; the `q^{-s_i}` they come with are counted.
pub fn prune_bound(spec: &SummandSpec, prefix: &[i64]) -> Result<HalfInt> {
    spec.validate()?;
    if prefix.len() > spec.k || prefix.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::MalformedSummand(format!("{prefix:?} is not a weakly decreasing prefix")));
    }
    bound_with(&index_quads(spec), spec.head, prefix)
}

/// Value of a multisum together with the number of tuples evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multisum<T> {
    pub value: T,
    pub tuple_count: u64,
}

/// The `z`-free core of a summand: everything except the tail, truncated
/// so that multiplying by a numerator of valuation `tail_val` lands at
/// `order`.
fn core_term(spec: &SummandSpec, t: &[i64], order: HalfInt, tail_val: HalfInt) -> QSeries {
    let mut exp = HalfInt::ZERO;
    for (i, &s) in t.iter().enumerate() {
        exp += HalfInt::from_int(s * s + spec.effective_linear(i + 1) * s);
    }
    let mut term = QSeries::monomial(1.into(), exp);
    for &i in &spec.binomial_placement {
        let prev = if i >= 2 { Some(t[i - 2]) } else { spec.head.map(i64::from) };
        if let Some(prev) = prev {
            term = term.mul_two_term(1, HalfInt::from_int(prev + t[i - 1]));
        }
    }
    let mut term = term.truncate(order - tail_val);
    if let Some(n) = spec.head {
        term = term.div_qfactorial((n as i64 - t[0]) as u32);
    }
    for w in t.windows(2) {
        term = term.div_qfactorial((w[0] - w[1]) as u32);
    }
    term
}

struct Walk<'a> {
    spec: &'a SummandSpec,
    quads: Vec<Quad>,
    order: HalfInt,
    tails: &'a [ZLaurent],
}

type Buckets = BTreeMap<i64, (QSeries, u64)>;

impl Walk<'_> {
    fn descend(&self, prefix: &mut Vec<i64>, out: &mut Buckets) -> Result<()> {
        if prefix.len() == self.spec.k {
            let last = *prefix.last().unwrap();
            let tail = &self.tails[last as usize];
            if tail.is_zero() {
                return Ok(());
            }
            let val = tail.min_q_exp().unwrap();
            let term = core_term(self.spec, prefix, self.order, val);
            let entry = out
                .entry(last)
                .or_insert_with(|| (QSeries::zero_to(self.order - val), 0));
            entry.0 = &entry.0 + &term;
            entry.1 += 1;
            return Ok(());
        }
        let cap = *prefix.last().unwrap();
        for s in 0..=cap {
            prefix.push(s);
            if bound_with(&self.quads, self.spec.head, prefix)? < self.order {
                self.descend(prefix, out)?;
            }
            prefix.pop();
        }
        Ok(())
    }
}

/// Largest `s_1` that can contribute below `order`.
fn first_index_cap(spec: &SummandSpec, quads: &[Quad], order: HalfInt) -> Result<i64> {
    if let Some(n) = spec.head {
        return Ok(n as i64);
    }
    let unbounded = || Error::MalformedSummand("summand exponents are unbounded below".into());
    let mut rest = HalfInt::ZERO;
    for q in &quads[1..] {
        rest += q.min_on(None).ok_or_else(unbounded)?;
    }
    let first = quads[0];
    first.min_on(None).ok_or_else(unbounded)?;
    let vertex = (-first.b.halves()).div_euclid(2 * first.a.halves()).max(0);
    let mut s = vertex;
    while first.at(s) + rest < order {
        s += 1;
    }
    Ok(s)
}

/// Evaluates the multisum below `order`, keeping `z` symbolic when the
/// spec does not substitute it.
pub fn eval_multisum_laurent(spec: &SummandSpec, order: HalfInt) -> Result<Multisum<ZLaurent>> {
    spec.validate()?;
    if order.is_infinite() {
        return Err(Error::MalformedSummand("a multisum needs a finite order".into()));
    }
    let quads = index_quads(spec);
    let cap = first_index_cap(spec, &quads, order)?;
    let tails: Vec<ZLaurent> =
        (0..=cap).into_par_iter().map(|s| spec.tail.numerator(s, spec.z)).collect();
    let walk = Walk { spec, quads, order, tails: &tails };

    let per_root: Vec<Buckets> = (0..=cap)
        .into_par_iter()
        .map(|s1| {
            let mut out = Buckets::new();
            let mut prefix = vec![s1];
            if bound_with(&walk.quads, spec.head, &prefix)? < order {
                walk.descend(&mut prefix, &mut out)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut merged = Buckets::new();
    for buckets in per_root {
        for (s, (v, c)) in buckets {
            let e = merged.entry(s).or_insert_with(|| (QSeries::zero(), 0));
            e.0 = &e.0 + &v;
            e.1 += c;
        }
    }
    let mut value = ZLaurent::zero_to(order);
    let mut tuple_count = 0;
    for (s, (core, count)) in merged {
        tuple_count += count;
        let (start, step, len) = spec.tail.denominator(s);
        let term = tails[s as usize]
            .mul_scalar(&core)
            .truncate(order)
            .map_coeffs(|c| c.div_pochhammer(start, step, len));
        value = &value + &term;
    }
    Ok(Multisum { value, tuple_count })
}

/// Evaluates a `z`-free multisum below `order`.
pub fn eval_multisum(spec: &SummandSpec, order: HalfInt) -> Result<Multisum<QSeries>> {
    if spec.z.is_none() && spec.tail.depends_on_z() {
        return Err(Error::MalformedSummand(format!(
            "tail {:?} depends on z; substitute z or use the Laurent evaluator",
            spec.tail
        )));
    }
    let r = eval_multisum_laurent(spec, order)?;
    if r.value.z_support().is_some_and(|(lo, hi)| lo != 0 || hi != 0) {
        return Err(Error::MalformedSummand("sum still depends on z".into()));
    }
    Ok(Multisum { value: r.value.coeff(0), tuple_count: r.tuple_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn gap_partitions(n: usize, min_part: usize) -> u64 {
        // partitions of n into parts >= min_part differing by at least 2
        fn go(rem: usize, max: usize, min_part: usize) -> u64 {
            if rem == 0 {
                return 1;
            }
            (min_part..=max.min(rem)).map(|p| go(rem - p, p.saturating_sub(2), min_part)).sum()
        }
        go(n, n, min_part.max(1))
    }

    #[test]
    fn rogers_ramanujan_sum_side() {
        let r = eval_multisum(&SummandSpec::plain(1, Tail::Odd), q(40)).unwrap();
        assert_eq!(r.value.order(), q(40));
        for n in 0..40 {
            assert_eq!(r.value.coeff_q(n).unwrap(), BigInt::from(gap_partitions(n as usize, 1)), "n = {n}");
        }
        let first: Vec<i64> = (0..7).map(|n| r.value.coeff_q(n).unwrap().try_into().unwrap()).collect();
        assert_eq!(first, [1, 1, 1, 1, 2, 2, 3]);
        let r1 = eval_multisum(&SummandSpec::plain(1, Tail::Odd).with_linear(vec![1]), q(40)).unwrap();
        for n in 0..40 {
            assert_eq!(r1.value.coeff_q(n).unwrap(), BigInt::from(gap_partitions(n as usize, 2)));
        }
    }

    #[test]
    fn zero_tuple_contributes_one() {
        let spec = SummandSpec::plain(3, Tail::Odd).with_linear(vec![0, 1, 1]);
        let r = eval_multisum(&spec, q(1)).unwrap();
        assert_eq!(r.value, QSeries::one().truncate(q(1)));
        assert_eq!(r.tuple_count, 1);
    }

    #[test]
    fn binomial_factor_at_a_single_tuple() {
        // (1,1,1), j = 3: q^{3-3} (1 + q^2)^2, tail excluded
        let spec = SummandSpec::plain(3, Tail::Odd).with_placement(vec![1, 2, 3]);
        let t = core_term(&spec, &[1, 1, 1], q(20), HalfInt::ZERO);
        assert_eq!(t, QSeries::from_q_poly([1, 0, 2, 0, 1]).truncate(q(20)));
    }

    #[test]
    fn prune_bound_examples() {
        let spec = SummandSpec::plain(2, Tail::Odd);
        assert_eq!(prune_bound(&spec, &[]).unwrap(), q(0));
        let spec = SummandSpec::plain(1, Tail::Odd).with_linear(vec![-1]);
        assert_eq!(prune_bound(&spec, &[3]).unwrap(), q(6));
        let bad = SummandSpec::plain(2, Tail::Odd);
        assert!(prune_bound(&bad, &[1, 2]).is_err());
    }

    #[test]
    fn prune_bound_is_monotone_and_sound() {
        let spec = SummandSpec::plain(3, Tail::Odd).with_linear(vec![0, 1, 1]).with_placement(vec![1, 2]);
        let mut all = vec![];
        for a in 0..6i64 {
            for b in 0..=a {
                for c in 0..=b {
                    all.push([a, b, c]);
                }
            }
        }
        for t in &all {
            let exact = t.iter().enumerate().map(|(i, &s)| s * s + spec.effective_linear(i + 1) * s).sum::<i64>();
            let mut prev = prune_bound(&spec, &[]).unwrap();
            for len in 1..=3 {
                let b = prune_bound(&spec, &t[..len]).unwrap();
                assert!(b >= prev, "{t:?}");
                prev = b;
            }
            assert!(prev <= q(exact));
        }
    }

    #[test]
    fn malformed_specs_are_rejected() {
        let mut spec = SummandSpec::plain(2, Tail::Odd);
        spec.linear = vec![0];
        assert!(matches!(eval_multisum(&spec, q(5)), Err(Error::MalformedSummand(_))));
        let spec = SummandSpec::plain(2, Tail::Odd).with_placement(vec![3]);
        assert!(eval_multisum(&spec, q(5)).is_err());
        let spec = SummandSpec::plain(2, Tail::Over);
        assert!(eval_multisum(&spec, q(5)).is_err());
        let spec = SummandSpec::plain(1, Tail::Odd).with_linear(vec![-3]);
        assert!(eval_multisum(&spec, q(5)).is_ok());
    }

    #[test]
    fn scalar_and_symbolic_tails_agree() {
        let order = q(25);
        for tail in [Tail::Over, Tail::ZPoch, Tail::OverOdd { k: 1 }, Tail::Family { j: 1, a: q(2) }] {
            let spec = SummandSpec::plain(2, tail).with_head(4);
            let symbolic = eval_multisum_laurent(&spec, order).unwrap().value;
            for m in [-1, 0, 1, 3] {
                let z = Monomial::scalar(-1, HalfInt::from_halves(m));
                let direct = eval_multisum(&spec.clone().with_z(z), order).unwrap().value;
                assert!(direct.eq_upto(&symbolic.substitute(-1, z.q_exp)).equal, "{tail:?} m={m}");
            }
        }
    }

    #[test]
    fn vanishing_tail_forces_last_index_to_zero() {
        // (1/z; q)_s = 0 at z = 1 for s >= 1
        let spec = SummandSpec::plain(2, Tail::ZPoch).with_z(Monomial::q_power(q(0)));
        let plain = eval_multisum(&SummandSpec::plain(1, Tail::Odd), q(30)).unwrap();
        assert_eq!(eval_multisum(&spec, q(30)).unwrap().value, plain.value);
    }

    #[test]
    fn placement_invariance_small() {
        let order = q(30);
        let k = 3;
        let reference =
            eval_multisum(&SummandSpec::plain(k, Tail::Odd).with_placement(vec![1, 2]), order).unwrap().value;
        for p in [vec![1, 3], vec![2, 3]] {
            let v = eval_multisum(&SummandSpec::plain(k, Tail::Odd).with_placement(p.clone()), order).unwrap();
            assert_eq!(v.value, reference, "{p:?}");
        }
    }
}
