use num_bigint::BigInt;

use super::families::pairings;
use super::*;
use crate::hfamily::h_substituted;
use crate::product::eval_product_sum;
use crate::summation::{eval_multisum, SummandSpec, Tail};

fn q(n: i64) -> HalfInt {
    HalfInt::from_int(n)
}

fn assert_pass(case: IdentityCase) -> VerificationReport {
    let r = verify(&case);
    assert_eq!(r.status, Status::Pass, "{r:?}");
    r
}

fn sides(case: &IdentityCase) -> (QSeries, QSeries) {
    let order = case.effective_order();
    let p = pairings(case).into_iter().next().unwrap();
    (eval_multisum(&p.sum, order).unwrap().value, eval_product_sum(&p.products, order).unwrap())
}

#[test]
fn rogers_ramanujan_through_q100() {
    let r = assert_pass(IdentityCase::new(IdentityId::Ag).k(1).r(0).order(q(100)));
    assert_eq!(r.compared_order, Some(q(100)));
    assert!(r.tuple_count > 0);
}

#[test]
fn functional_equation_at_n_1() {
    assert_pass(IdentityCase::new(IdentityId::FuncEq).n(1).c(HalfInt::ONE).order(q(20)));
    let lhs = h_substituted(1, HalfInt::ONE, -1, HalfInt::ONE, HalfInt::INFINITY);
    let expected = &QSeries::monomial(BigInt::from(1), q(1)) - &QSeries::monomial(BigInt::from(1), q(2));
    assert_eq!(lhs, expected);
}

#[test]
fn second_theorem_at_j_0_is_andrews_gordon() {
    for k in 1..=3 {
        for r in 0..=k {
            let a = sides(&IdentityCase::new(IdentityId::Ag).k(k).r(r));
            let b = sides(&IdentityCase::new(IdentityId::Thm32).k(k).r(r).j(0));
            assert_eq!(a, b, "k = {k}, r = {r}");
        }
    }
}

#[test]
fn second_theorem_at_r_0_is_bressoud() {
    for k in 1..=3 {
        for j in 0..=k {
            let a = sides(&IdentityCase::new(IdentityId::BressJ).k(k).j(j));
            let b = sides(&IdentityCase::new(IdentityId::Thm32).k(k).r(0).j(j));
            assert_eq!(a, b, "k = {k}, j = {j}");
            assert_pass(IdentityCase::new(IdentityId::BressJ).k(k).j(j));
        }
    }
}

#[test]
fn first_theorem_at_j_0_is_andrews_gordon() {
    let a = sides(&IdentityCase::new(IdentityId::Ag).k(2).r(1));
    let b = sides(&IdentityCase::new(IdentityId::Thm31).k(2).r(1).j(0));
    assert_eq!(a, b);
}

#[test]
fn signed_placements_combine_into_the_second_theorem() {
    let order = q(40);
    for k in 1..=3usize {
        for r in 0..=k {
            for j in 0..=(k - r).min(3) {
                let linear: Vec<i64> = (1..=k).map(|i| (i > k - r) as i64).collect();
                let mut acc = QSeries::zero_to(order);
                for e in enumerate_edge_sets(j) {
                    let placement: Vec<usize> = (1..=j).filter(|&v| !e.covers(v)).collect();
                    let spec = SummandSpec::plain(k, Tail::Odd).with_linear(linear.clone()).with_placement(placement);
                    let v = eval_multisum(&spec, order).unwrap().value;
                    acc = if e.len() % 2 == 0 { &acc + &v } else { &acc - &v };
                }
                let second: Vec<i64> = linear.iter().enumerate().map(|(i, l)| l - (i < j) as i64).collect();
                let spec = SummandSpec::plain(k, Tail::Odd).with_linear(second);
                let direct = eval_multisum(&spec, order).unwrap().value;
                assert_eq!(acc.truncate(order), direct, "k = {k}, r = {r}, j = {j}");
            }
        }
    }
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![vec![]];
    }
    if n < size {
        return vec![];
    }
    let mut out = subsets(n - 1, size);
    for mut s in subsets(n - 1, size - 1) {
        s.push(n);
        out.push(s);
    }
    out
}

#[test]
fn first_theorem_placement_invariance() {
    for k in 1..=3u32 {
        for r in 0..=k {
            for j in 0..=(k - r) {
                let mut seen: Option<(QSeries, QSeries)> = None;
                for pl in subsets((k - r) as usize, j as usize) {
                    let case = IdentityCase::new(IdentityId::Thm31).k(k).r(r).j(j).placement(pl.clone()).order(q(30));
                    let s = sides(&case);
                    if let Some(prev) = &seen {
                        assert_eq!(&s, prev, "k = {k}, r = {r}, placement {pl:?}");
                    }
                    seen = Some(s);
                }
            }
        }
    }
}

#[test]
fn overpartition_placement_invariance() {
    let z = Monomial::scalar(1, HalfInt::HALF);
    let mut seen = None;
    for pl in subsets(3, 2) {
        let case = IdentityCase::new(IdentityId::Over1).k(2).j(2).placement(pl).order(q(30));
        let p = pairings(&case).into_iter().next().unwrap();
        let v = eval_multisum(&p.sum.with_z(z), q(30)).unwrap().value;
        if let Some(prev) = &seen {
            assert_eq!(&v, prev);
        }
        seen = Some(v);
    }
}

#[test]
fn every_identity_passes_at_defaults() {
    for &id in IdentityId::ALL {
        let mut case = IdentityCase::new(id);
        // keep the unit run quick
        if id == IdentityId::EvenFact {
            case = case.order(q(30));
        }
        assert_pass(case);
    }
}

#[test]
fn andrews_answer_cases() {
    for (k, r) in [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)] {
        let rep = verify_andrews_answer(k, r, q(35));
        assert_eq!(rep.status, Status::Pass, "{rep:?}");
    }
    let rep = verify_andrews_answer(1, 2, q(20));
    assert_eq!(rep.status, Status::Error);
}

#[test]
fn structural_identities_over_a_grid() {
    use IdentityId::*;
    for id in [KeyLemma, NewProp, NewProp2, AnotherF, FSum, RecurseF] {
        for a in [1, 3, 5] {
            for n in [0, 1, 3] {
                assert_pass(IdentityCase::new(id).n(n).a(HalfInt::from_halves(a)).order(q(20)));
            }
        }
    }
    for k in 0..=2 {
        assert_pass(IdentityCase::new(IterateBress).n(3).k(k).order(q(20)));
        assert_pass(IdentityCase::new(IterProp).n(3).k(k).order(q(20)));
    }
    for n in 0..=4 {
        assert_pass(IdentityCase::new(SpecialA).n(n).order(q(20)));
        assert_pass(IdentityCase::new(FuncEq).n(n).c(HalfInt::from_halves(3)).order(q(20)));
    }
}

#[test]
fn perturbed_modulus_fails() {
    let r = verify(&IdentityCase::new(IdentityId::Ag).k(1).modulus_delta(1).order(q(30)));
    assert_eq!(r.status, Status::Fail);
    assert!(r.first_mismatch.is_some());
}

#[test]
fn bad_parameters_are_error_reports() {
    let cases = [
        IdentityCase::new(IdentityId::Ag).k(1).r(2),
        IdentityCase::new(IdentityId::Ag).n(3),
        IdentityCase::new(IdentityId::Thm31).k(3).j(2).placement(vec![1, 1]),
        IdentityCase::new(IdentityId::AnotherF).j(0),
        IdentityCase::new(IdentityId::Ag).order(q(-1)),
    ];
    for c in cases {
        let r = verify(&c);
        assert_eq!(r.status, Status::Error, "{c:?}");
        assert!(r.detail.is_some());
    }
}

#[test]
fn case_json_round_trip() {
    let case = IdentityCase::new(IdentityId::Over1).k(2).j(1).z(-1, HalfInt::HALF).placement(vec![2]).order(q(25));
    let json = serde_json::to_string(&case).unwrap();
    let back: IdentityCase = serde_json::from_str(&json).unwrap();
    assert_eq!(back, case);
    let parsed: IdentityCase = serde_json::from_str(r#"{"id": "ag", "k": 2, "r": 1, "order": "61/2"}"#).unwrap();
    assert_eq!(parsed, IdentityCase::new(IdentityId::Ag).k(2).r(1).order(HalfInt::from_halves(61)));
    assert!(serde_json::from_str::<IdentityCase>(r#"{"id": "AG", "bogus": 1}"#).is_err());
}

#[test]
fn identity_names_round_trip() {
    for &id in IdentityId::ALL {
        assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        assert_eq!(id.name().to_lowercase().parse::<IdentityId>().unwrap(), id);
    }
    assert!("NOPE".parse::<IdentityId>().is_err());
}

#[test]
fn odd_overpartition_tail_orientation() {
    // z enters the sum only through the tail, so the sum at 1/z is the
    // tail with z and 1/z swapped
    let at = |e: i64| sum_product_sides(&IdentityCase::new(IdentityId::Over3).k(1).z(1, q(e)).order(q(30))).unwrap().remove(0);
    let (_, sum_q, prod_q) = at(1);
    let (_, sum_inv, _) = at(-1);
    assert!(sum_q.eq_upto(&prod_q).equal);
    assert!(!sum_inv.eq_upto(&prod_q).equal);
}
