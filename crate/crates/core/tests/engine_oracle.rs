//! The pruned, bucketed multisum engine against plain enumeration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qverify::oracle::{naive_eval, NaiveExpr};
use qverify::summation::{eval_multisum, SummandSpec, Tail};
use qverify::{Error, HalfInt, Monomial};

fn random_spec(rng: &mut ChaCha8Rng) -> SummandSpec {
    let k = rng.gen_range(1..=3usize);
    let tail = match rng.gen_range(0..5) {
        0 => Tail::Odd,
        1 => Tail::Even,
        2 => Tail::Over,
        3 => Tail::OverOdd { k: rng.gen_range(0..=2) },
        _ => Tail::ZPoch,
    };
    let linear = (0..k).map(|_| rng.gen_range(-1..=2)).collect();
    let placement = (1..=k).filter(|_| rng.gen_bool(0.4)).collect();
    let mut spec = SummandSpec::plain(k, tail).with_linear(linear).with_placement(placement);
    if rng.gen_bool(0.3) {
        spec = spec.with_head(rng.gen_range(0..=5));
    }
    if matches!(tail, Tail::Over | Tail::OverOdd { .. } | Tail::ZPoch) {
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        spec = spec.with_z(Monomial::scalar(sign, HalfInt::from_halves(rng.gen_range(-2..=2))));
    }
    spec
}

#[test]
fn engine_matches_brute_force_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut compared = 0;
    let mut attempts = 0;
    while compared < 100 {
        attempts += 1;
        assert!(attempts < 1000, "too many rejected specs");
        let spec = random_spec(&mut rng);
        let order = rng.gen_range(4..=20i64);
        let fast = match eval_multisum(&spec, HalfInt::from_int(order)) {
            Ok(v) => v.value,
            // unbounded or otherwise malformed summands are rejected up front
            Err(Error::MalformedSummand(_)) => continue,
            Err(e) => panic!("{spec:?}: {e}"),
        };
        let naive = naive_eval(&NaiveExpr::Multisum { spec: spec.clone(), cap: 30 }, 2 * order).unwrap();
        let low = fast.min_exp().map_or(0, |e| e.halves()).min(naive.low);
        for e in low..2 * order {
            assert_eq!(
                fast.coeff(HalfInt::from_halves(e)).unwrap(),
                naive.coeff(e),
                "{spec:?} at t^{e}, order q^{order}"
            );
        }
        compared += 1;
    }
}
