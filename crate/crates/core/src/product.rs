//! Product sides: weighted sums of `(a, b, q^M; q^M)_inf / (q;q)_inf`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::qobjects::{partition_series, poch_infinite, Monomial};
use crate::series::QSeries;

/// `weight * (arg1, arg2, q^modulus; q^modulus)_inf / (q;q)_inf`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleProductSpec {
    pub modulus: HalfInt,
    pub arg1: Monomial,
    pub arg2: Monomial,
    #[serde(with = "crate::series::decimal")]
    pub weight: BigInt,
}

impl TripleProductSpec {
    pub fn new(modulus: HalfInt, arg1: Monomial, arg2: Monomial) -> Self {
        TripleProductSpec { modulus, arg1, arg2, weight: BigInt::one() }
    }

    pub fn with_weight(mut self, weight: BigInt) -> Self {
        self.weight = weight;
        self
    }

    /// Substitutes a scalar monomial for `z` in both arguments.
    pub fn substitute(&self, z: Monomial) -> Self {
        TripleProductSpec {
            arg1: self.arg1.substitute(z),
            arg2: self.arg2.substitute(z),
            ..self.clone()
        }
    }
}

/// The numerator `(arg1, arg2, q^M; q^M)_inf`, truncated at `order`.
pub fn triple_product(spec: &TripleProductSpec, order: HalfInt) -> Result<QSeries> {
    if !spec.modulus.is_positive() {
        return Err(Error::IllPosedProduct(format!("modulus {} is not positive", spec.modulus)));
    }
    let m = spec.modulus;
    // a factor (1 - 1) makes the whole theta product vanish
    let vanishes = |a: Monomial| {
        a.is_scalar() && a.sign > 0 && a.q_exp <= HalfInt::ZERO && (-a.q_exp).halves() % m.halves() == 0
    };
    if vanishes(spec.arg1) || vanishes(spec.arg2) {
        return Ok(QSeries::zero_to(order));
    }
    // Laurent factors can lower the order of the partial product, so each
    // piece is taken with enough headroom for the others' negative parts.
    let lead = |a: Monomial| {
        let mut low = HalfInt::ZERO;
        let mut i = 0;
        while (a.q_exp + m * i) <= HalfInt::ZERO {
            low = low + (a.q_exp + m * i);
            i += 1;
        }
        low
    };
    let (l1, l2) = (lead(spec.arg1), lead(spec.arg2));
    let p1 = poch_infinite(spec.arg1, m, order - l2)?;
    let p2 = poch_infinite(spec.arg2, m, order - l1)?;
    let p3 = poch_infinite(Monomial::q_power(m), m, order - l1 - l2)?;
    Ok((&(&p1 * &p2) * &p3).truncate(order))
}

/// `sum weight * (arg1, arg2, q^M; q^M)_inf / (q;q)_inf` for `z`-free specs.
pub fn eval_product_sum(specs: &[TripleProductSpec], order: HalfInt) -> Result<QSeries> {
    let mut acc = QSeries::zero_to(order);
    for spec in specs {
        if !spec.arg1.is_scalar() || !spec.arg2.is_scalar() {
            return Err(Error::IllPosedProduct("product arguments must be z-free".into()));
        }
        if spec.weight.is_zero() {
            continue;
        }
        let num = triple_product(spec, order)?;
        let low = num.valuation().min(HalfInt::ZERO);
        let euler_inv = partition_series(order - low);
        let term = (&num * &euler_inv).truncate(order);
        acc = &acc + &term.scale(&spec.weight);
    }
    Ok(acc)
}

/// Product with `-q^e` arguments (factors `1 + q^e`), as on overpartition
/// product sides. Same evaluation path as [`eval_product_sum`] but checks
/// the arguments really are negative monomials.
pub fn negative_arg_product(spec: &TripleProductSpec, order: HalfInt) -> Result<QSeries> {
    if spec.arg1.sign > 0 || spec.arg2.sign > 0 {
        return Err(Error::IllPosedProduct("expected arguments of the form -q^e".into()));
    }
    eval_product_sum(std::slice::from_ref(spec), order)
}
