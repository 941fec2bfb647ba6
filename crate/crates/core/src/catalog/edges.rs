//! Non-overlapping edge sets on a path, their weights, and the small
//! integer and series facts used alongside the binomial theorems.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{IdentityCase, IdentityId, Outcome, VerificationReport};
use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::hfamily::h_substituted;
use crate::qobjects::binom;
use crate::series::{Mismatch, QSeries};

const DEFAULT_SAMPLES: u32 = 50;
const MAX_S1: i64 = 10;

/// A matching in the path `1 - 2 - ... - j`; edge `i` joins `i` and `i+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet {
    pub edges: Vec<usize>,
}

impl EdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Whether vertex `v` is an endpoint of a chosen edge.
    pub fn covers(&self, v: usize) -> bool {
        self.edges.iter().any(|&e| e == v || e + 1 == v)
    }
}

/// All matchings of the path on `j` vertices, in lexicographic order.
pub fn enumerate_edge_sets(j: usize) -> Vec<EdgeSet> {
    fn go(next: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<EdgeSet>) {
        out.push(EdgeSet { edges: cur.clone() });
        for e in next..j {
            cur.push(e);
            go(e + 2, j, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    go(1, j, &mut vec![], &mut out);
    out.sort();
    out
}

/// `wt(E)` at a concrete tuple: an uncovered vertex 1 gives `q^{-s_1}`, an
/// uncovered vertex `i >= 2` gives `q^{-s_i} (1 + q^{s_{i-1} + s_i})`.
/// Exact Laurent polynomial.
pub fn edge_weight(set: &EdgeSet, s: &[i64]) -> QSeries {
    let mut w = QSeries::one();
    for v in 1..=s.len() {
        if set.covers(v) {
            continue;
        }
        w = w.shift(HalfInt::from_int(-s[v - 1]));
        if v >= 2 {
            w = w.mul_two_term(1, HalfInt::from_int(s[v - 2] + s[v - 1]));
        }
    }
    w
}

/// `sum_E (-1)^{|E|} wt(E)`.
fn signed_weight_sum(s: &[i64]) -> QSeries {
    let mut acc = QSeries::zero();
    for set in enumerate_edge_sets(s.len()) {
        let w = edge_weight(&set, s);
        acc = if set.len() % 2 == 0 { &acc + &w } else { &acc - &w };
    }
    acc
}

fn edge_lemma_into(out: &mut Outcome, samples: &[Vec<i64>]) {
    for s in samples {
        let lhs = signed_weight_sum(s);
        let rhs = QSeries::monomial(BigInt::one(), HalfInt::from_int(-s.iter().sum::<i64>()));
        out.compare(&lhs, &rhs, || format!("s = {s:?}"));
    }
}

/// Checks `sum_E (-1)^{|E|} wt(E) = q^{-s_1 - ... - s_j}` exactly at every
/// sample tuple.
pub fn verify_edge_lemma(j: u32, samples: &[Vec<i64>]) -> VerificationReport {
    let start = Instant::now();
    let case = IdentityCase::new(IdentityId::EdgeLemma).j(j).samples(samples.len() as u32);
    if let Some(bad) = samples.iter().find(|s| s.len() != j as usize) {
        return error_report(case, format!("tuple {bad:?} does not have {j} entries"));
    }
    let mut out = Outcome::default();
    edge_lemma_into(&mut out, samples);
    out.into_report(case, start.elapsed().as_millis() as u64)
}

/// `count` weakly decreasing tuples of length `j` with entries in `0..=10`.
pub fn random_tuples(j: u32, count: u32, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut t: Vec<i64> = (0..j).map(|_| rng.gen_range(0..=MAX_S1)).collect();
            t.sort_unstable_by(|a, b| b.cmp(a));
            t
        })
        .collect()
}

/// `sum_{s+t=u} C(j-t, t) (-1)^t C(j-2t, s)` for one `u`.
fn chu_sum(j: i64, u: i64) -> BigInt {
    let mut acc = BigInt::zero();
    for t in 0..=u.min(j / 2) {
        let term = binom(j - t, t) * binom(j - 2 * t, u - t);
        if t % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Whether the alternating double sum equals 1 for every `0 <= u <= j`.
pub fn verify_chu_collapse(j: u32) -> bool {
    (0..=j as i64).all(|u| chu_sum(j as i64, u).is_one())
}

fn even_fact_into(out: &mut Outcome, s_max: u32, order: HalfInt) {
    for s in 0..=s_max {
        let lhs = h_substituted(s, HalfInt::ONE, -1, HalfInt::ZERO, order).div_qfactorial(2 * s);
        let rhs = QSeries::one().truncate(order).div_pochhammer(HalfInt::from_int(2), HalfInt::from_int(2), s);
        out.compare(&lhs, &rhs, || format!("s = {s}"));
    }
}

/// `H_{2s}(-1, 1)/(q;q)_{2s} = 1/(q^2;q^2)_s` for `0 <= s <= s_max`.
pub fn verify_even_fact(s_max: u32, order: HalfInt) -> VerificationReport {
    let start = Instant::now();
    let case = IdentityCase::new(IdentityId::EvenFact).n(s_max).order(order);
    if let Err(e) = case.validate() {
        return error_report(case, e.to_string());
    }
    let mut out = Outcome::default();
    even_fact_into(&mut out, s_max, order);
    out.into_report(case, start.elapsed().as_millis() as u64)
}

fn error_report(case: IdentityCase, detail: String) -> VerificationReport {
    VerificationReport {
        case,
        status: super::Status::Error,
        compared_order: None,
        first_mismatch: None,
        elapsed_ms: 0,
        tuple_count: 0,
        checks: 0,
        detail: Some(detail),
    }
}

pub(super) fn validate(case: &IdentityCase) -> Result<()> {
    let p = &case.params;
    let (limit, value) = match case.id {
        IdentityId::EdgeLemma => (16, p.j.unwrap_or(3)),
        IdentityId::ChuCoeff => (400, p.j.unwrap_or(3)),
        _ => (30, p.n.unwrap_or(8)),
    };
    if value > limit {
        return Err(Error::InvalidParams(format!("{} parameter {value} is out of range (<= {limit})", case.id)));
    }
    if case.id == IdentityId::EdgeLemma && p.samples == Some(0) {
        return Err(Error::InvalidParams("samples must be positive".into()));
    }
    Ok(())
}

pub(super) fn run(case: &IdentityCase, out: &mut Outcome) -> Result<()> {
    let p = &case.params;
    match case.id {
        IdentityId::EdgeLemma => {
            let j = p.j.unwrap_or(3);
            let samples = random_tuples(j, p.samples.unwrap_or(DEFAULT_SAMPLES), p.seed.unwrap_or(0));
            edge_lemma_into(out, &samples);
        }
        IdentityId::ChuCoeff => {
            let j = p.j.unwrap_or(3) as i64;
            for u in 0..=j {
                let v = chu_sum(j, u);
                out.check_exact(
                    v.is_one(),
                    || Mismatch { z_exp: None, exponent: HalfInt::from_int(u), lhs: v.clone(), rhs: BigInt::one() },
                    || format!("u = {u}"),
                );
            }
        }
        _ => even_fact_into(out, p.n.unwrap_or(8), case.effective_order()),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }

    fn poly(terms: &[(i64, i64)]) -> QSeries {
        terms.iter().fold(QSeries::zero(), |acc, &(c, e)| &acc + &QSeries::monomial(BigInt::from(c), q(e)))
    }

    #[test]
    fn three_vertex_sets() {
        let sets = enumerate_edge_sets(3);
        let edges: Vec<Vec<usize>> = sets.into_iter().map(|s| s.edges).collect();
        assert_eq!(edges, vec![vec![], vec![1], vec![2]]);
        assert_eq!(enumerate_edge_sets(0), vec![EdgeSet { edges: vec![] }]);
        assert_eq!(enumerate_edge_sets(5).iter().filter(|s| s.len() == 2).count(), 3);
    }

    #[test]
    fn weights_for_three_vertices() {
        let s = [3, 2, 1];
        // q^{-6}(1+q^5)(1+q^3)
        let empty = edge_weight(&EdgeSet { edges: vec![] }, &s);
        assert_eq!(empty, poly(&[(1, -6), (1, -3), (1, -1), (1, 2)]));
        // q^{-1}(1+q^3)
        assert_eq!(edge_weight(&EdgeSet { edges: vec![1] }, &s), poly(&[(1, -1), (1, 2)]));
        assert_eq!(edge_weight(&EdgeSet { edges: vec![2] }, &s), poly(&[(1, -3)]));
    }

    #[test]
    fn lemma_at_the_displayed_instance() {
        let r = verify_edge_lemma(3, &[vec![2, 1, 1]]);
        assert_eq!(r.status, super::super::Status::Pass);
        assert_eq!(signed_weight_sum(&[2, 1, 1]), poly(&[(1, -4)]));
        let r = verify_edge_lemma(0, &[vec![]]);
        assert_eq!(r.status, super::super::Status::Pass);
    }

    #[test]
    fn chu_examples() {
        assert_eq!(chu_sum(3, 1), BigInt::one());
        assert_eq!(chu_sum(0, 0), BigInt::one());
        assert!((0..=20).all(verify_chu_collapse));
    }

    #[test]
    fn even_fact_small() {
        let order = q(20);
        let one = h_substituted(1, HalfInt::ONE, -1, HalfInt::ZERO, HalfInt::INFINITY);
        // -q + 1 + q - q... collapses to 1 - q
        assert_eq!(one, poly(&[(1, 0), (-1, 1)]));
        let r = verify_even_fact(8, order);
        assert_eq!(r.status, super::super::Status::Pass, "{r:?}");
    }

    #[test]
    fn random_tuples_are_deterministic_and_decreasing() {
        let a = random_tuples(5, 10, 7);
        assert_eq!(a, random_tuples(5, 10, 7));
        for t in &a {
            assert!(t.windows(2).all(|w| w[0] >= w[1]));
            assert!(t[0] <= MAX_S1);
        }
    }
}
