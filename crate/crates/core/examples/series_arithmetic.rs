//! Truncated series arithmetic on the half-integer grid.

use qverify::qobjects::{euler_product, qbinom};
use qverify::{HalfInt, QSeries};

fn main() -> qverify::Result<()> {
    let order = HalfInt::from_int(15);

    // (q;q)_inf by the pentagonal number theorem, and its inverse p(n)
    let euler = euler_product(order);
    println!("(q;q)_inf   = {euler}");
    let partitions = euler.inv()?;
    println!("1/(q;q)_inf = {partitions}");

    // a Laurent polynomial times a series with half-integer exponents
    let laurent = QSeries::from_q_poly([1, 0, 1]).shift(HalfInt::from_int(-1));
    let half = QSeries::one().truncate(order).div_one_minus(1, HalfInt::HALF);
    println!("(q^-1 + q) / (1 - q^(1/2)) = {}", laurent.mul(&half));

    // Gaussian binomial coefficients are polynomials
    println!("[6; 3]_q = {}", qbinom(6, 3, HalfInt::INFINITY));

    let a = &partitions * &euler;
    println!("p(q) * (q;q)_inf = {a}");
    Ok(())
}
