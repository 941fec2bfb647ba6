//! Derives the Andrews-Gordon sum side from `H_{2n}(-q^{r+1/2}, k+3/2)` by
//! alternating key-lemma expansions with functional-equation steps.
//!
//! The running value is `sum_m w_m H_{2m}(-q^c, a) / (q)_{2m}`, where `m`
//! is the current last index. Tuples sharing a last index are merged,
//! since every later step depends on `m` alone.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::families::{ag_product_specs, ag_sum_spec};
use super::{IdentityCase, IdentityId, Outcome, VerificationReport};
use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::hfamily::h_substituted;
use crate::product::eval_product_sum;
use crate::series::QSeries;
use crate::summation::eval_multisum;

const DEFAULT_N: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Key,
    FuncEq,
}

/// `k - r` further key steps, then `r` rounds of (funceq, key).
fn schedule(k: u32, r: u32) -> Vec<Step> {
    let mut s = vec![Step::Key; (k - r) as usize];
    for _ in 0..r {
        s.extend([Step::FuncEq, Step::Key]);
    }
    s
}

struct State {
    weights: BTreeMap<i64, QSeries>,
    a: HalfInt,
    c: HalfInt,
    order: HalfInt,
    tuples: u64,
}

impl State {
    fn add(map: &mut BTreeMap<i64, QSeries>, m: i64, w: QSeries) {
        match map.get_mut(&m) {
            Some(acc) => *acc = &*acc + &w,
            None => {
                map.insert(m, w);
            }
        }
    }

    /// `H_{2m}(z,a)/(q)_{2m} = sum_{s<=m} q^{s^2}/(q)_{m-s} H_{2s}(z,a-1)/(q)_{2s}`.
    fn key(&mut self) {
        let mut next = BTreeMap::new();
        for (&m, w) in &self.weights {
            let mut s = 0;
            while s <= m && w.valuation() + HalfInt::from_int(s * s) < self.order {
                let t = w.shift(HalfInt::from_int(s * s)).truncate(self.order).div_qfactorial((m - s) as u32);
                Self::add(&mut next, s, t);
                self.tuples += 1;
                s += 1;
            }
        }
        self.weights = next;
        self.a = self.a - HalfInt::ONE;
    }

    /// `H_{2m}(-q^c, c) = q^m H_{2m}(-q^{c-1}, c)`.
    fn funceq(&mut self) -> Result<()> {
        if self.a != self.c {
            return Err(Error::InvalidParams(format!("functional equation needs a = c, got a = {}, c = {}", self.a, self.c)));
        }
        let order = self.order;
        self.weights = std::mem::take(&mut self.weights)
            .into_iter()
            .map(|(m, w)| (m, w.shift(HalfInt::from_int(m)).truncate(order)))
            .filter(|(_, w)| !w.is_zero())
            .collect();
        self.c = self.c - HalfInt::ONE;
        Ok(())
    }

    /// The running value; every `H` term has nonnegative valuation since `c <= a`.
    fn value(&self) -> QSeries {
        let mut acc = QSeries::zero_to(self.order);
        for (&m, w) in &self.weights {
            let h = h_substituted(m as u32, self.a, -1, self.c, self.order).div_qfactorial(2 * m as u32);
            acc = &acc + &w.mul(&h);
        }
        acc.truncate(self.order)
    }
}

/// Runs the pipeline from initial weights on the first index and checks
/// every intermediate value against `target`. Returns the weight left on
/// last index `0`.
fn pipeline(k: u32, r: u32, first: BTreeMap<i64, QSeries>, target: &QSeries, order: HalfInt, label: &str, out: &mut Outcome) -> Result<QSeries> {
    let mut st = State {
        tuples: first.len() as u64,
        weights: first,
        a: HalfInt::from_halves(2 * k as i64 + 1),
        c: HalfInt::from_halves(2 * r as i64 + 1),
        order,
    };
    out.compare(&st.value(), target, || format!("{label}, after step 1"));
    for (i, step) in schedule(k, r).into_iter().enumerate() {
        match step {
            Step::Key => st.key(),
            Step::FuncEq => st.funceq()?,
        }
        out.compare(&st.value(), target, || format!("{label}, after step {} ({step:?})", i + 2));
    }
    out.add_tuples(st.tuples);
    // H_{2m}(-q^{1/2}, 1/2) vanishes for m >= 1
    debug_assert_eq!(st.a, HalfInt::HALF);
    debug_assert_eq!(st.c, HalfInt::HALF);
    for &m in st.weights.keys().filter(|&&m| m > 0) {
        let h = h_substituted(m as u32, st.a, -1, st.c, HalfInt::INFINITY);
        out.check_exact(
            h.is_zero(),
            || crate::series::Mismatch {
                z_exp: None,
                exponent: h.valuation(),
                lhs: h.leading_coeff().cloned().unwrap_or_default(),
                rhs: BigInt::default(),
            },
            || format!("{label}, H_{}(-q^(1/2), 1/2) = 0", 2 * m),
        );
    }
    Ok(st.weights.remove(&0).unwrap_or_else(|| QSeries::zero_to(order)))
}

fn run_pipelines(k: u32, r: u32, n: u32, order: HalfInt, out: &mut Outcome) -> Result<()> {
    let product = eval_product_sum(&ag_product_specs(k, r), order)?;
    let sum = eval_multisum(&ag_sum_spec(k, r), order)?;
    out.add_tuples(sum.tuple_count);
    out.compare(&sum.value, &product, || "sum side against product side".into());

    let mut first = BTreeMap::new();
    let mut s = 0i64;
    while HalfInt::from_int(s * s) < order {
        first.insert(s, QSeries::monomial(BigInt::from(1), HalfInt::from_int(s * s)).truncate(order));
        s += 1;
    }
    let limit = pipeline(k, r, first, &product, order, "n = inf", out)?;
    out.compare(&limit, &sum.value, || "n = inf, final weights against the sum side".into());

    // the same pipeline below a head index n
    let lhs = h_substituted(n, HalfInt::from_halves(2 * k as i64 + 3), -1, HalfInt::from_halves(2 * r as i64 + 1), order)
        .div_qfactorial(2 * n);
    let first: BTreeMap<i64, QSeries> = (0..=n as i64)
        .map(|s| (s, QSeries::monomial(BigInt::from(1), HalfInt::from_int(s * s)).truncate(order).div_qfactorial(n - s as u32)))
        .collect();
    let finite = pipeline(k, r, first, &lhs, order, &format!("n = {n}"), out)?;
    let headed = eval_multisum(&ag_sum_spec(k, r).with_head(n), order)?;
    out.add_tuples(headed.tuple_count);
    out.compare(&finite, &headed.value, || format!("n = {n}, final weights against the headed sum side"));
    Ok(())
}

/// Replays the derivation for `(k, r)` and checks every intermediate value,
/// the vanishing of the leftover `H` terms, and the final sum side.
pub fn verify_andrews_answer(k: u32, r: u32, order: HalfInt) -> VerificationReport {
    super::verify(&IdentityCase::new(IdentityId::AndrewsAnswer).k(k).r(r).order(order))
}

pub(super) fn validate(case: &IdentityCase) -> Result<()> {
    let p = &case.params;
    let (k, r) = (p.k.unwrap_or(1), p.r.unwrap_or(0));
    if r > k {
        return Err(Error::InvalidParams(format!("need 0 <= r <= k, got k = {k}, r = {r}")));
    }
    if k > 6 {
        return Err(Error::InvalidParams(format!("k = {k} is out of range (k <= 6)")));
    }
    if p.n.unwrap_or(DEFAULT_N) > 24 {
        return Err(Error::InvalidParams("n is out of range (n <= 24)".into()));
    }
    Ok(())
}

pub(super) fn run(case: &IdentityCase, out: &mut Outcome) -> Result<()> {
    let p = &case.params;
    run_pipelines(p.k.unwrap_or(1), p.r.unwrap_or(0), p.n.unwrap_or(DEFAULT_N), case.effective_order(), out)
}
