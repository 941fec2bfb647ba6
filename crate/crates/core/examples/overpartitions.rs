//! Overpartition-type sums with a free variable z, at sampled monomials.

use qverify::catalog::{verify, z_samples, IdentityCase, IdentityId, Params};
use qverify::summation::{eval_multisum, SummandSpec, Tail};
use qverify::suite::report_text;
use qverify::{HalfInt, Monomial};

fn main() -> qverify::Result<()> {
    println!("default z samples: {:?}", z_samples(&Params::default()));
    for (id, j) in [(IdentityId::Over1, 1), (IdentityId::Over2, 2), (IdentityId::Over3, 0)] {
        let mut case = IdentityCase::new(id).k(2).order(HalfInt::from_int(40));
        if j > 0 {
            case = case.j(j);
        }
        println!("{}", report_text(&verify(&case)));
    }
    println!("{}", report_text(&verify(&IdentityCase::new(IdentityId::Curious))));

    // the first sum at z = 1 is the overpartition generating function
    let spec = SummandSpec::plain(1, Tail::Over).with_z(Monomial::scalar(1, HalfInt::ZERO));
    println!("z = 1: {}", eval_multisum(&spec, HalfInt::from_int(12))?.value);
    Ok(())
}
