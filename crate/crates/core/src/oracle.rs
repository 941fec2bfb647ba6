//! Slow, independent reference implementations for cross-checking.
//!
//! Nothing here touches [`crate::series::QSeries`]: series are dense
//! vectors over the half-exponent grid, multiplied by plain convolution,
//! and sums are enumerated without pruning.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::summation::{SummandSpec, Tail};

/// Dense series `sum coeffs[i] t^{low + i}` (`t^2 = q`), trusted below
/// `t^order`. All exponents are in half-units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaiveSeries {
    pub low: i64,
    pub coeffs: Vec<BigInt>,
    pub order: i64,
}

impl NaiveSeries {
    pub fn zero(order: i64) -> Self {
        NaiveSeries { low: 0, coeffs: vec![], order }
    }

    /// `c t^e`.
    pub fn monomial(c: i64, e: i64, order: i64) -> Self {
        let mut s = NaiveSeries { low: e, coeffs: vec![BigInt::from(c)], order };
        s.clip();
        s
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(1, 0, order)
    }

    fn clip(&mut self) {
        let keep = (self.order - self.low).max(0) as usize;
        self.coeffs.truncate(keep);
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        assert!(e < self.order, "t^{e} is beyond the trusted order {}", self.order);
        let i = e - self.low;
        if i < 0 || i as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    /// Coefficient of `q^n`.
    pub fn coeff_q(&self, n: i64) -> BigInt {
        self.coeff(2 * n)
    }

    pub fn add(&self, other: &NaiveSeries) -> NaiveSeries {
        let order = self.order.min(other.order);
        let low = self.low.min(other.low);
        let end = (self.low + self.coeffs.len() as i64).max(other.low + other.coeffs.len() as i64);
        let len = (end.min(order) - low).max(0) as usize;
        let mut out = NaiveSeries { low, coeffs: vec![BigInt::zero(); len], order };
        for s in [self, other] {
            for (i, c) in s.coeffs.iter().enumerate() {
                let e = s.low + i as i64;
                if e < order {
                    out.coeffs[(e - low) as usize] += c;
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> NaiveSeries {
        NaiveSeries { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect(), order: self.order }
    }

    /// Plain convolution, kept below the smaller of the two orders. Callers
    /// are responsible for headroom when a factor has negative exponents.
    pub fn mul(&self, other: &NaiveSeries) -> NaiveSeries {
        let order = self.order.min(other.order);
        let low = self.low + other.low;
        let natural = (self.coeffs.len() + other.coeffs.len()).saturating_sub(1);
        let len = natural.min((order - low).max(0) as usize);
        let mut out = NaiveSeries { low, coeffs: vec![BigInt::zero(); len], order };
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx < out.coeffs.len() {
                    out.coeffs[idx] += a * b;
                }
            }
        }
        out
    }

    /// `self * (1 + c t^e)`.
    pub fn times_binomial(&self, c: i64, e: i64) -> NaiveSeries {
        let mut f = NaiveSeries::one(i64::MAX / 4);
        f = f.add(&NaiveSeries::monomial(c, e, i64::MAX / 4));
        self.mul(&f)
    }

    /// `self / (1 - t^e)` for `e > 0`, by multiplying with the geometric
    /// series `1 + t^e + t^{2e} + ...`.
    pub fn over_one_minus(&self, e: i64) -> NaiveSeries {
        assert!(e > 0);
        let span = self.order - self.low;
        let mut g = NaiveSeries { low: 0, coeffs: vec![BigInt::zero(); span.max(0) as usize], order: span };
        let mut x = 0;
        while x < span {
            g.coeffs[x as usize] = BigInt::one();
            x += e;
        }
        g.order = i64::MAX / 4;
        self.mul(&g)
    }
}

/// Partitions of `n` with every part congruent to an allowed residue.
pub fn count_partitions_in_residues(n: u32, modulus: u32, allowed_residues: &[u32]) -> BigInt {
    fn go(rem: u32, max_part: u32, ok: &dyn Fn(u32) -> bool) -> BigInt {
        if rem == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for p in (1..=max_part.min(rem)).rev() {
            if ok(p) {
                total += go(rem - p, p, ok);
            }
        }
        total
    }
    let ok = |p: u32| allowed_residues.contains(&(p % modulus));
    go(n, n, &ok)
}

/// Partitions of `n` whose parts differ by at least 2, with parts `> r`
/// (`k = 1` only).
pub fn count_gap_partitions(n: u32, k: u32, r: u32) -> Result<BigInt> {
    if k != 1 || r > 1 {
        return Err(Error::Unsupported(format!("gap partitions for k = {k}, r = {r}")));
    }
    fn go(rem: u32, max_part: u32, min_part: u32) -> BigInt {
        if rem == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        let mut p = min_part;
        while p <= max_part.min(rem) {
            total += go(rem - p, p.saturating_sub(2), min_part);
            p += 1;
        }
        total
    }
    Ok(go(n, n, r + 1))
}

/// Expressions the oracle can evaluate on its own.
#[derive(Clone, Debug)]
pub enum NaiveExpr {
    /// `prod_{i >= 1} (1 - q^i)`.
    EulerProduct,
    /// `(q;q)_n / ((q;q)_k (q;q)_{n-k})` by exact polynomial division.
    QBinomQuotient { n: u32, k: u32 },
    /// `sum w * prod_f (f.sign q^{f.exp}; q^{modulus})_inf / (q;q)_inf`,
    /// exponents in half-units, each term a list of `(sign, exp)` arguments.
    ProductSum { modulus: i64, terms: Vec<(i64, Vec<(i64, i64)>)> },
    /// A multisum with every index capped at `cap`, no pruning. `z` must be
    /// substituted and the tail must not be an `H`/`F` family.
    Multisum { spec: SummandSpec, cap: i64 },
}

fn euler(order: i64) -> NaiveSeries {
    let mut p = NaiveSeries::one(order);
    let mut i = 2;
    while i < order {
        p = p.times_binomial(-1, i);
        i += 2;
    }
    p
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    // both in powers of q, den[0] = 1
    let mut rem = num.to_vec();
    let qlen = num.len() + 1 - den.len();
    let mut quot = vec![BigInt::zero(); qlen];
    for i in 0..qlen {
        let c = rem[i].clone();
        if !c.is_zero() {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
        }
        quot[i] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "division left a remainder");
    quot
}

fn q_factorial_poly(n: u32) -> Vec<BigInt> {
    let mut p = vec![BigInt::one()];
    for i in 1..=n as usize {
        let mut next = vec![BigInt::zero(); p.len() + i];
        for (j, c) in p.iter().enumerate() {
            next[j] += c;
            next[j + i] -= c;
        }
        p = next;
    }
    p
}

/// A finite product `prod (1 + c t^e)` as an exact Laurent polynomial.
fn exact_product(factors: &[(i64, i64)]) -> NaiveSeries {
    let mut p = NaiveSeries::one(i64::MAX / 4);
    for &(c, e) in factors {
        p = p.times_binomial(c, e);
    }
    p
}

fn naive_multisum(spec: &SummandSpec, cap: i64, order: i64) -> Result<NaiveSeries> {
    let z = match (spec.tail, spec.z) {
        (Tail::Family { .. }, _) => return Err(Error::Unsupported("H/F tails".into())),
        (Tail::Odd | Tail::Even, _) => None,
        (_, Some(z)) => Some((z.sign as i64, z.q_exp.halves())),
        (_, None) => return Err(Error::Unsupported("symbolic z".into())),
    };
    let k = spec.k;
    let mut total = NaiveSeries::zero(order);
    let mut t = vec![0i64; k];
    loop {
        // (1 + c t^e) factors of the numerator, exponents in half-units
        let mut factors: Vec<(i64, i64)> = vec![];
        let mut exp = 0;
        for i in 0..k {
            exp += 2 * (t[i] * t[i] + spec.linear[i] * t[i]);
        }
        for &p in &spec.binomial_placement {
            exp -= 2 * t[p - 1];
            let prev = if p >= 2 { Some(t[p - 2]) } else { spec.head.map(i64::from) };
            if let Some(prev) = prev {
                factors.push((1, 2 * (prev + t[p - 1])));
            }
        }
        let s = t[k - 1];
        let pochs = |out: &mut Vec<(i64, i64)>, sign: i64, e: i64, len: i64| {
            for i in 0..len {
                out.push((-sign, e + 2 * i));
            }
        };
        match (spec.tail, z) {
            (Tail::Over, Some((zs, ze))) => {
                pochs(&mut factors, -zs, ze, s);
                pochs(&mut factors, -zs, 2 - ze, s);
            }
            (Tail::OverOdd { k: kk }, Some((zs, ze))) => {
                pochs(&mut factors, -zs, 2 * (kk + 1) + ze, s + 1);
                pochs(&mut factors, -zs, -2 * kk - ze, s);
            }
            (Tail::ZPoch, Some((zs, ze))) => {
                pochs(&mut factors, zs, 2 + ze, s);
                pochs(&mut factors, zs, -ze, s);
            }
            _ => {}
        }
        let headroom: i64 = factors.iter().map(|&(_, e)| (-e).max(0)).sum::<i64>() + (-exp).max(0);
        let mut term = NaiveSeries::monomial(1, exp, order + headroom);
        for &(c, e) in &factors {
            term = term.times_binomial(c, e);
        }
        term.order = order;
        term.clip();
        let mut dens: Vec<i64> = vec![];
        if let Some(n) = spec.head {
            dens.extend((1..=n as i64 - t[0]).map(|i| 2 * i));
        }
        for w in t.windows(2) {
            dens.extend((1..=w[0] - w[1]).map(|i| 2 * i));
        }
        match spec.tail {
            Tail::Odd => dens.extend((1..=s).map(|i| 2 * i)),
            Tail::Even => dens.extend((1..=s).map(|i| 4 * i)),
            Tail::OverOdd { .. } => dens.extend((1..=2 * s + 1).map(|i| 2 * i)),
            _ => dens.extend((1..=2 * s).map(|i| 2 * i)),
        }
        for e in dens {
            term = term.over_one_minus(e);
        }
        total = total.add(&term);

        // next weakly decreasing tuple with t[0] <= cap
        let top = spec.head.map_or(cap, |n| cap.min(n as i64));
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(total);
            }
            i -= 1;
            let limit = if i == 0 { top } else { t[i - 1] };
            if t[i] < limit {
                t[i] += 1;
                for x in t.iter_mut().skip(i + 1) {
                    *x = 0;
                }
                break;
            }
        }
    }
}

/// Evaluates `expr` below `t^order` (half-units).
pub fn naive_eval(expr: &NaiveExpr, order: i64) -> Result<NaiveSeries> {
    match expr {
        NaiveExpr::EulerProduct => Ok(euler(order)),
        NaiveExpr::QBinomQuotient { n, k } => {
            if k > n {
                return Ok(NaiveSeries::zero(order));
            }
            let num = q_factorial_poly(*n);
            let den = {
                let a = q_factorial_poly(*k);
                let b = q_factorial_poly(n - k);
                let mut d = vec![BigInt::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        d[i + j] += x * y;
                    }
                }
                d
            };
            let quot = poly_div_exact(&num, &den);
            let mut out = NaiveSeries::zero(order);
            for (i, c) in quot.iter().enumerate() {
                let m = NaiveSeries { low: 2 * i as i64, coeffs: vec![c.clone()], order };
                out = out.add(&m);
            }
            Ok(out)
        }
        NaiveExpr::ProductSum { modulus, terms } => {
            if *modulus <= 0 {
                return Err(Error::IllPosedProduct("modulus must be positive".into()));
            }
            let mut total = NaiveSeries::zero(order);
            for (w, args) in terms {
                let mut headroom = 0;
                for &(_, e) in args {
                    let mut x = e;
                    while x < 0 {
                        headroom -= x;
                        x += modulus;
                    }
                }
                let mut factors = vec![];
                for &(sign, e) in args {
                    let mut x = e;
                    while x < order + headroom {
                        if x == 0 && sign > 0 {
                            return Err(Error::IllPosedProduct("vanishing factor".into()));
                        }
                        factors.push((-sign, x));
                        x += modulus;
                    }
                }
                let mut num = exact_product(&factors);
                num.order = order + headroom;
                num.clip();
                let mut term = num;
                let mut i = 2;
                while i < order + headroom {
                    term = term.over_one_minus(i);
                    i += 2;
                }
                term.order = order;
                term.clip();
                total = total.add(&term.scale(&BigInt::from(*w)));
            }
            Ok(total)
        }
        NaiveExpr::Multisum { spec, cap } => naive_multisum(spec, *cap, order),
    }
}
