//! Finite-`n` identities between Laurent polynomials in `z`, checked
//! symbolically in `z`.

use super::{IdentityCase, IdentityId, Outcome};
use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::hfamily::{f_func, h_poly, h_substituted, FSpec, HSpec};
use crate::laurent::ZLaurent;
use crate::qobjects::{binom, poch_finite, Monomial};
use crate::summation::{eval_multisum_laurent, SummandSpec, Tail};

const DEFAULT_N: u32 = 4;

fn default_a() -> HalfInt {
    HalfInt::from_halves(3)
}

pub(super) fn validate(case: &IdentityCase) -> Result<()> {
    use IdentityId::*;
    let p = &case.params;
    let bad = |m: String| Err(Error::InvalidParams(m));
    if p.n.unwrap_or(DEFAULT_N) > 24 {
        return bad(format!("n = {} is out of range (n <= 24)", p.n.unwrap()));
    }
    let j = p.j.unwrap_or(1);
    match case.id {
        AnotherF | RecurseF if j == 0 => bad(format!("{} needs j >= 1", case.id)),
        NewProp2 | AnotherF | FSum | RecurseF if j > 6 => bad(format!("j = {j} is out of range (j <= 6)")),
        IterProp | IterateBress if p.k.unwrap_or(1) > 6 => bad("k is out of range (k <= 6)".into()),
        _ => Ok(()),
    }
}

/// `p / (q;q)_{2n}` coefficient-wise.
fn over_q2n(p: &ZLaurent, n: u32) -> ZLaurent {
    p.map_coeffs(|c| c.div_qfactorial(2 * n))
}

fn sum_side(spec: SummandSpec, order: HalfInt, out: &mut Outcome) -> Result<ZLaurent> {
    let r = eval_multisum_laurent(&spec, order)?;
    out.add_tuples(r.tuple_count);
    Ok(r.value)
}

/// `H(z q^e)` and `H(q^e / z)` from the coefficients of `H`.
fn at_zq(p: &ZLaurent, e: i64) -> ZLaurent {
    p.zshift(HalfInt::from_int(e))
}

fn at_q_over_z(p: &ZLaurent, e: i64) -> ZLaurent {
    p.zshift(HalfInt::from_int(e)).zinvert()
}

pub(super) fn run(case: &IdentityCase, out: &mut Outcome) -> Result<()> {
    use IdentityId::*;
    let p = &case.params;
    let order = case.effective_order();
    let n = p.n.unwrap_or(DEFAULT_N);
    let a = p.a.unwrap_or_else(default_a);
    let j = p.j.unwrap_or(1);
    let k = p.k.unwrap_or(1);
    let one = HalfInt::ONE;
    // headroom for z -> zq^e substitutions, which move z^s down by |s e|
    let room = |e: u32| order + HalfInt::from_int((n * e) as i64);
    match case.id {
        KeyLemma => {
            let lhs = over_q2n(&h_poly(HSpec { n, a }, order), n);
            let rhs = sum_side(SummandSpec::plain(1, Tail::Family { j: 0, a: a - one }).with_head(n), order, out)?;
            out.compare_laurent(&lhs, &rhs, || "H_2n(z, a)/(q)_2n".into());
        }
        IterProp => {
            let lhs = over_q2n(&h_poly(HSpec { n, a: a + HalfInt::from_int(k as i64 + 1) }, order), n);
            let spec = SummandSpec::plain(k as usize + 1, Tail::Family { j: 0, a }).with_head(n);
            let rhs = sum_side(spec, order, out)?;
            out.compare_laurent(&lhs, &rhs, || "H_2n(z, a+k+1)/(q)_2n".into());
        }
        SpecialA => {
            let half = HalfInt::HALF;
            let lhs = h_poly(HSpec { n, a: half }, HalfInt::INFINITY).zscale(-1, half);
            let rhs = poch_finite(Monomial::new(1, one, 1), n, one, HalfInt::INFINITY)
                .mul(&poch_finite(Monomial::new(1, HalfInt::ZERO, -1), n, one, HalfInt::INFINITY));
            out.compare_laurent(&lhs.truncate(order), &rhs.truncate(order), || "H_2n(-z q^(1/2), 1/2)".into());
        }
        IterateBress => {
            let a = HalfInt::from_halves(2 * k as i64 + 3);
            let h = h_poly(HSpec { n, a }, room(1)).zscale(-1, HalfInt::HALF).truncate(order);
            let lhs = over_q2n(&h, n);
            let rhs = sum_side(SummandSpec::plain(k as usize + 1, Tail::ZPoch).with_head(n), order, out)?;
            out.compare_laurent(&lhs, &rhs, || "H_2n(-z q^(1/2), k+3/2)/(q)_2n".into());
        }
        FuncEq => {
            let c = p.c.unwrap_or(one);
            let lhs = h_substituted(n, c, -1, c, order);
            let rhs = h_substituted(n, c, -1, c - one, order).shift(HalfInt::from_int(n as i64)).truncate(order);
            out.compare(&lhs, &rhs, || "H_2n(-q^c, c)".into());
        }
        NewProp => {
            let h = h_poly(HSpec { n, a }, room(1));
            let lhs = over_q2n(&(&at_zq(&h, 1) + &at_q_over_z(&h, 1)).truncate(order), n);
            let spec = SummandSpec::plain(1, Tail::Family { j: 0, a: a - one }).with_head(n).with_placement(vec![1]);
            let rhs = sum_side(spec, order, out)?;
            out.compare_laurent(&lhs, &rhs, || "(H_2n(zq, a) + H_2n(q/z, a))/(q)_2n".into());
        }
        NewProp2 => {
            let lhs = over_q2n(&f_func(FSpec { n, j: j + 1, a }, order), n);
            let spec = SummandSpec::plain(1, Tail::Family { j, a: a - one }).with_head(n).with_placement(vec![1]);
            let rhs = sum_side(spec, order, out)?;
            out.compare_laurent(&lhs, &rhs, || "F_n^(j+1)(z, a)/(q)_2n".into());
        }
        AnotherF => {
            let lhs = over_q2n(&f_func(FSpec { n, j, a }, order), n);
            let spec = SummandSpec::plain(j as usize, Tail::Family { j: 0, a: a - HalfInt::from_int(j as i64) })
                .with_head(n)
                .with_placement((1..=j as usize).collect());
            let rhs = sum_side(spec, order, out)?;
            out.compare_laurent(&lhs, &rhs, || "F_n^(j)(z, a)/(q)_2n".into());
        }
        FSum => {
            let lhs = over_q2n(&f_func(FSpec { n, j, a }, order), n);
            let rhs = sum_side(SummandSpec::plain(1, Tail::Family { j, a: a - one }).with_head(n), order, out)?;
            out.compare_laurent(&lhs, &rhs, || "F_n^(j)(z, a)/(q)_2n".into());
        }
        RecurseF => {
            let lhs = f_func(FSpec { n, j, a }, order);
            let h = h_poly(HSpec { n, a }, room(j));
            let mut rhs = ZLaurent::zero();
            for s in 0..j as i64 {
                let e = j as i64 - 2 * s;
                let pair = &at_zq(&h, e) + &at_q_over_z(&h, e);
                let w = binom(j as i64 - 1, s);
                rhs = &rhs + &pair.map_coeffs(|c| c.scale(&w));
            }
            out.compare_laurent(&lhs, &rhs.truncate(order), || "F_n^(j)(z, a)".into());
        }
        _ => unreachable!(),
    }
    Ok(())
}
