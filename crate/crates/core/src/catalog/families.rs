//! Sum = product identities and the `n -> inf` limits of the `H`/`F` family.

use num_bigint::BigInt;

use super::{describe_z, z_monomial, IdentityCase, IdentityId, Outcome, Params};
use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::hfamily::{f_limit_sum, f_substituted, h_limit_product, h_stable_n, stabilize, Stabilization};
use crate::product::{eval_product_sum, TripleProductSpec};
use crate::qobjects::{binom, Monomial};
use crate::series::QSeries;
use crate::summation::{eval_multisum, SummandSpec, Tail};

fn h(n: i64) -> HalfInt {
    HalfInt::from_int(n)
}

fn invalid<T>(msg: String) -> Result<T> {
    Err(Error::InvalidParams(msg))
}

/// The default `z` samples `z = ±q^{m/2}`, `m = -2..=3`, or the single
/// monomial fixed by the parameters.
pub fn z_samples(p: &Params) -> Vec<Monomial> {
    if let Some(z) = z_monomial(p) {
        return vec![z];
    }
    let mut out = vec![];
    for sign in [1, -1] {
        for m in -2..=3 {
            out.push(Monomial::scalar(sign, HalfInt::from_halves(m)));
        }
    }
    out
}

/// Sum side of the odd-modulus identity with `k` indices and `r` linear terms.
pub fn ag_sum_spec(k: u32, r: u32) -> SummandSpec {
    let k = k as usize;
    let linear = (1..=k).map(|i| (i > k - r as usize) as i64).collect();
    SummandSpec::plain(k, Tail::Odd).with_linear(linear)
}

/// `(q^{k+1-r}, q^{k+2+r}, q^{2k+3}; q^{2k+3})_inf / (q)_inf`.
pub fn ag_product_specs(k: u32, r: u32) -> Vec<TripleProductSpec> {
    binomial_products(Parity::Odd, k as i64, r as i64, 0, false)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Parity {
    Odd,
    Even,
}

/// `sum_{s=0}^{j} w_s (q^{k+1-r+j-2s}, q^{k+2+r-j+2s} or q^{k+1+r-j+2s}, q^M; q^M)`.
fn binomial_products(parity: Parity, k: i64, r: i64, j: i64, weighted: bool) -> Vec<TripleProductSpec> {
    let (m, second) = match parity {
        Parity::Odd => (2 * k + 3, k + 2 + r),
        Parity::Even => (2 * k + 2, k + 1 + r),
    };
    (0..=j)
        .map(|s| {
            let w = if weighted { binom(j, s) } else { BigInt::from(1) };
            TripleProductSpec::new(
                h(m),
                Monomial::q_power(h(k + 1 - r + j - 2 * s)),
                Monomial::q_power(h(second - j + 2 * s)),
            )
            .with_weight(w)
        })
        .collect()
}

/// `sum_{s=0}^{j} w_s (-z q^{k+1+j-2s}, -q^{k+2-j+2s}/z, q^{2k+3}; q^{2k+3})`.
fn over_products(k: i64, j: i64, weighted: bool) -> Vec<TripleProductSpec> {
    (0..=j)
        .map(|s| {
            let w = if weighted { binom(j, s) } else { BigInt::from(1) };
            TripleProductSpec::new(
                h(2 * k + 3),
                Monomial::new(-1, h(k + 1 + j - 2 * s), 1),
                Monomial::new(-1, h(k + 2 - j + 2 * s), -1),
            )
            .with_weight(w)
        })
        .collect()
}

struct Params2 {
    k: u32,
    r: u32,
    j: u32,
}

fn kr_j(p: &Params) -> Params2 {
    Params2 { k: p.k.unwrap_or(1), r: p.r.unwrap_or(0), j: p.j.unwrap_or(0) }
}

fn check_placement(placement: &[usize], j: u32, limit: usize) -> Result<()> {
    if placement.len() != j as usize {
        return invalid(format!("placement {placement:?} must have j = {j} elements"));
    }
    if placement.windows(2).any(|w| w[0] >= w[1]) {
        return invalid(format!("placement {placement:?} must be strictly increasing"));
    }
    if placement.iter().any(|&i| i == 0 || i > limit) {
        return invalid(format!("placement {placement:?} must lie in 1..={limit}"));
    }
    Ok(())
}

pub(super) fn validate(case: &IdentityCase) -> Result<()> {
    use IdentityId::*;
    let p = &case.params;
    let Params2 { k, r, j } = kr_j(p);
    match case.id {
        Ag | BressoudEven | BressJ | Thm31 | Thm32 | Thm41 | Thm42 => {
            if k == 0 {
                return invalid(format!("{} needs k >= 1", case.id));
            }
            if r > k || j > k || j + r > k {
                return invalid(format!("{} needs j + r <= k (k = {k}, r = {r}, j = {j})", case.id));
            }
            if let Some(pl) = &p.placement {
                check_placement(pl, j, (k - r) as usize)?;
            }
        }
        Over1 | Over2 => {
            if j > k + 1 {
                return invalid(format!("{} needs j <= k + 1 (k = {k}, j = {j})", case.id));
            }
            if let Some(pl) = &p.placement {
                check_placement(pl, j, (k + 1) as usize)?;
            }
        }
        Over3 | CorInfty | Curious => {}
        HLimit | FLimit => {
            let a = p.a.unwrap_or(HalfInt::from_halves(5));
            if !a.is_positive() {
                return invalid(format!("{} needs a > 0, got {a}", case.id));
            }
            if j > 8 {
                return invalid(format!("F_LIMIT with j = {j} is out of range (j <= 8)"));
            }
        }
        _ => unreachable!(),
    }
    if k > 12 {
        return invalid(format!("k = {k} is out of range (k <= 12)"));
    }
    if let Some(d) = p.modulus_delta {
        let m = match case.id {
            BressoudEven | Thm41 | Thm42 => 2 * k as i64 + 2,
            Curious => 3,
            _ => 2 * k as i64 + 3,
        };
        if m + d <= 0 {
            return invalid(format!("modulus {m} + delta {d} is not positive"));
        }
    }
    Ok(())
}

/// One sum side against one product side, possibly at sampled `z`.
pub(super) struct Pairing {
    pub(super) label: &'static str,
    pub(super) sum: SummandSpec,
    pub(super) products: Vec<TripleProductSpec>,
}

pub(super) fn pairings(case: &IdentityCase) -> Vec<Pairing> {
    use IdentityId::*;
    let p = &case.params;
    let Params2 { k, r, j } = kr_j(p);
    let (ki, ri, ji) = (k as i64, r as i64, j as i64);
    let ku = k as usize;
    let one = |label, sum, products| vec![Pairing { label, sum, products }];
    let lambda = |minus: u32, plus: u32, len: usize| -> Vec<i64> {
        (1..=len)
            .map(|i| (i > len - plus as usize) as i64 - (i <= minus as usize) as i64)
            .collect()
    };
    let default_placement = |j: u32| -> Vec<usize> { (1..=j as usize).collect() };
    match case.id {
        Ag => one("sum", ag_sum_spec(k, r), ag_product_specs(k, r)),
        BressoudEven => one(
            "sum",
            SummandSpec::plain(ku, Tail::Even).with_linear(lambda(0, r, ku)),
            binomial_products(Parity::Even, ki, ri, 0, false),
        ),
        BressJ => one(
            "sum",
            SummandSpec::plain(ku, Tail::Odd).with_linear(lambda(j, 0, ku)),
            binomial_products(Parity::Odd, ki, 0, ji, false),
        ),
        Thm31 | Thm41 => {
            let (tail, parity) = if case.id == Thm31 { (Tail::Odd, Parity::Odd) } else { (Tail::Even, Parity::Even) };
            let placement = p.placement.clone().unwrap_or_else(|| default_placement(j));
            one(
                "sum",
                SummandSpec::plain(ku, tail).with_linear(lambda(0, r, ku)).with_placement(placement),
                binomial_products(parity, ki, ri, ji, true),
            )
        }
        Thm32 | Thm42 => {
            let (tail, parity) = if case.id == Thm32 { (Tail::Odd, Parity::Odd) } else { (Tail::Even, Parity::Even) };
            one(
                "sum",
                SummandSpec::plain(ku, tail).with_linear(lambda(j, r, ku)),
                binomial_products(parity, ki, ri, ji, false),
            )
        }
        Over1 => {
            let placement = p.placement.clone().unwrap_or_else(|| default_placement(j));
            one("sum", SummandSpec::plain(ku + 1, Tail::Over).with_placement(placement), over_products(ki, ji, true))
        }
        Over2 => one(
            "sum",
            SummandSpec::plain(ku + 1, Tail::Over).with_linear(lambda(j, 0, ku + 1)),
            over_products(ki, ji, false),
        ),
        Over3 => one(
            "sum",
            SummandSpec::plain(ku + 1, Tail::OverOdd { k: ki }).with_linear(vec![1; ku + 1]),
            over_products(ki, 0, false),
        ),
        Curious => vec![
            Pairing { label: "first sum", sum: SummandSpec::plain(1, Tail::Over), products: over_products(0, 0, false) },
            Pairing {
                label: "second sum",
                sum: SummandSpec::plain(1, Tail::OverOdd { k: 0 }).with_linear(vec![1]),
                products: over_products(0, 0, false),
            },
        ],
        CorInfty => one(
            "sum",
            SummandSpec::plain(ku + 1, Tail::ZPoch),
            vec![TripleProductSpec::new(
                h(2 * ki + 3),
                Monomial::new(1, h(ki + 2), 1),
                Monomial::new(1, h(ki + 1), -1),
            )],
        ),
        _ => unreachable!(),
    }
}

fn perturb(specs: &[TripleProductSpec], delta: Option<i64>) -> Vec<TripleProductSpec> {
    let d = delta.unwrap_or(0);
    specs
        .iter()
        .map(|s| TripleProductSpec { modulus: s.modulus + h(d), ..s.clone() })
        .collect()
}

fn uses_z(case: &IdentityCase) -> bool {
    use IdentityId::*;
    matches!(case.id, Over1 | Over2 | Over3 | Curious | CorInfty)
}

pub(super) fn run(case: &IdentityCase, out: &mut Outcome) -> Result<()> {
    match case.id {
        IdentityId::HLimit | IdentityId::FLimit => return run_limit(case, out),
        _ => {}
    }
    let order = case.effective_order();
    let pairs = pairings(case);
    if !uses_z(case) {
        for pair in &pairs {
            let lhs = eval_multisum(&pair.sum, order)?;
            out.add_tuples(lhs.tuple_count);
            let rhs = eval_product_sum(&perturb(&pair.products, case.params.modulus_delta), order)?;
            out.compare(&lhs.value, &rhs, || pair.label.to_string());
        }
        return Ok(());
    }
    let mut skipped = 0;
    let mut used = 0;
    for z in z_samples(&case.params) {
        let specs: Vec<Vec<TripleProductSpec>> = pairs
            .iter()
            .map(|pair| perturb(&pair.products, case.params.modulus_delta).iter().map(|s| s.substitute(z)).collect())
            .collect();
        let rhs: Result<Vec<_>> = specs.iter().map(|s| eval_product_sum(s, order)).collect();
        let rhs = match rhs {
            Ok(r) => r,
            Err(Error::IllPosedProduct(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        used += 1;
        for (pair, rhs) in pairs.iter().zip(&rhs) {
            let lhs = eval_multisum(&pair.sum.clone().with_z(z), order)?;
            out.add_tuples(lhs.tuple_count);
            out.compare(&lhs.value, rhs, || format!("{} at {}", pair.label, describe_z(z)));
        }
    }
    out.note(format!("{used} z samples ({skipped} ill-posed skipped)"));
    Ok(())
}

/// Both sides of every sum = product pairing of `case`, at each `z` sample
/// where the product is defined. Labels name the pairing and the sample.
pub(super) fn sides(case: &IdentityCase) -> Result<Vec<(String, QSeries, QSeries)>> {
    if matches!(case.id, IdentityId::HLimit | IdentityId::FLimit) {
        return invalid(format!("{} has no sum side", case.id));
    }
    let order = case.effective_order();
    let zs: Vec<Option<Monomial>> =
        if uses_z(case) { z_samples(&case.params).into_iter().map(Some).collect() } else { vec![None] };
    let mut out = vec![];
    for z in zs {
        for pair in pairings(case) {
            let mut products = perturb(&pair.products, case.params.modulus_delta);
            let mut sum = pair.sum.clone();
            let mut label = pair.label.to_string();
            if let Some(z) = z {
                products = products.iter().map(|s| s.substitute(z)).collect();
                sum = sum.with_z(z);
                label = format!("{label} at {}", describe_z(z));
            }
            let rhs = match eval_product_sum(&products, order) {
                Err(Error::IllPosedProduct(_)) => continue,
                r => r?,
            };
            out.push((label, eval_multisum(&sum, order)?.value, rhs));
        }
    }
    Ok(out)
}

fn run_limit(case: &IdentityCase, out: &mut Outcome) -> Result<()> {
    let p = &case.params;
    let a = p.a.unwrap_or(HalfInt::from_halves(5));
    let j = p.j.unwrap_or(0);
    let order = case.effective_order();
    let (mut used, mut skipped) = (0, 0);
    let mut max_n = 0;
    for z in z_samples(p) {
        // the limit is taken at -z
        let sign = -z.sign;
        let rhs = match f_limit_sum(j, a, z, order) {
            Ok(r) => r,
            Err(Error::IllPosedProduct(_)) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        if j == 0 {
            let direct = h_limit_product(a, z, order)?;
            out.compare(&direct, &rhs, || format!("limit product at {}", describe_z(z)));
        }
        // the recursion evaluates H at 2^j shifted points; bound each
        let mut leaves = vec![z.q_exp];
        for _ in 0..j {
            leaves = leaves.iter().flat_map(|&m| [m + HalfInt::ONE, HalfInt::ONE - m]).collect();
        }
        let bound = leaves.iter().map(|&m| h_stable_n(a, m, order)).max().unwrap();
        let eval = |n: u32| f_substituted(n, j, a, sign, z.q_exp, order);
        let st = stabilize(eval, Stabilization::default(), bound + 4)?;
        max_n = max_n.max(st.n);
        out.compare(&st.value, &rhs, || format!("stabilized value (n = {}) at {}", st.n, describe_z(z)));
        out.compare(&eval(bound), &rhs, || format!("value at the proven bound n = {bound}, {}", describe_z(z)));
        used += 1;
    }
    out.note(format!("{used} z samples ({skipped} ill-posed skipped), stabilized by n = {max_n}"));
    Ok(())
}
