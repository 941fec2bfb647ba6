//! The Andrews-Gordon family and its binomial variants through the catalog.

use qverify::catalog::{verify, verify_andrews_answer, IdentityCase, IdentityId};
use qverify::suite::report_text;
use qverify::HalfInt;

fn main() {
    let order = HalfInt::from_int(50);
    for k in 1..=3 {
        for r in 0..=k {
            let report = verify(&IdentityCase::new(IdentityId::Ag).k(k).r(r).order(order));
            println!("{}", report_text(&report));
        }
    }

    // binomial factors (1 + q^{s_{i-1}+s_i}) at a chosen set of positions
    let case = IdentityCase::new(IdentityId::Thm31).k(3).r(1).j(2).placement(vec![1, 2]).order(order);
    println!("{}", report_text(&verify(&case)));
    let case = IdentityCase::new(IdentityId::Thm41).k(3).r(0).j(2).placement(vec![2, 3]).order(order);
    println!("{}", report_text(&verify(&case)));

    // the sum side derived step by step from H_{2n}(-q^{r+1/2}, k+3/2)
    println!("{}", report_text(&verify_andrews_answer(3, 2, HalfInt::from_int(40))));
}
