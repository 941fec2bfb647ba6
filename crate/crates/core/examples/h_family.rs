//! Bressoud's polynomials H_{2n}(z, a) symbolically in z, the iterated
//! family F and their limits.

use qverify::catalog::{verify, IdentityCase, IdentityId};
use qverify::hfamily::{f_func, h_poly, FSpec, HSpec};
use qverify::suite::report_text;
use qverify::HalfInt;

fn main() {
    let a = HalfInt::from_halves(3);
    println!("H_4(z, 3/2) = {}", h_poly(HSpec { n: 2, a }, HalfInt::INFINITY));
    println!("F_2^(1)(z, 3/2) = {}", f_func(FSpec { n: 2, j: 1, a }, HalfInt::from_int(12)));

    for id in [
        IdentityId::KeyLemma,
        IdentityId::SpecialA,
        IdentityId::IterateBress,
        IdentityId::FuncEq,
        IdentityId::NewProp,
        IdentityId::RecurseF,
    ] {
        println!("{}", report_text(&verify(&IdentityCase::new(id).n(5))));
    }
    let limit = IdentityCase::new(IdentityId::FLimit).j(2).a(HalfInt::from_halves(5)).z(1, HalfInt::HALF);
    println!("{}", report_text(&verify(&limit)));
}
