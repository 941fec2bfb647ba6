//! The identity registry: builds both sides of each identity and compares
//! them coefficient by coefficient.

mod andrews;
mod edges;
mod families;
mod structural;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::half::HalfInt;
use crate::laurent::ZLaurent;
use crate::qobjects::Monomial;
use crate::series::{Mismatch, QSeries};

pub use andrews::verify_andrews_answer;
pub use edges::{edge_weight, enumerate_edge_sets, random_tuples, verify_chu_collapse, verify_edge_lemma, verify_even_fact, EdgeSet};
pub use families::{ag_product_specs, ag_sum_spec, z_samples};

macro_rules! identity_ids {
    ($($variant:ident => $name:literal,)*) => {
        /// Every identity the catalog can verify.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum IdentityId {
            $($variant,)*
        }

        impl IdentityId {
            pub const ALL: &'static [IdentityId] = &[$(IdentityId::$variant,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(IdentityId::$variant => $name,)*
                }
            }
        }

        impl FromStr for IdentityId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim().to_ascii_uppercase().as_str() {
                    $($name => Ok(IdentityId::$variant),)*
                    _ => Err(Error::Parse(format!("unknown identity id {s:?}"))),
                }
            }
        }
    };
}

identity_ids! {
    Ag => "AG",
    BressoudEven => "BRESSOUD_EVEN",
    BressJ => "BRESS_J",
    KeyLemma => "KEY_LEMMA",
    IterProp => "ITER_PROP",
    SpecialA => "SPECIAL_A",
    IterateBress => "ITERATE_BRESS",
    HLimit => "H_LIMIT",
    CorInfty => "COR_INFTY",
    FuncEq => "FUNC_EQ",
    AndrewsAnswer => "ANDREWS_ANSWER",
    NewProp => "NEW_PROP",
    NewProp2 => "NEW_PROP2",
    AnotherF => "ANOTHER_F",
    FSum => "F_SUM",
    RecurseF => "RECURSE_F",
    FLimit => "F_LIMIT",
    Thm31 => "THM_3_1",
    Thm32 => "THM_3_2",
    EdgeLemma => "EDGE_LEMMA",
    ChuCoeff => "CHU_COEFF",
    EvenFact => "EVEN_FACT",
    Thm41 => "THM_4_1",
    Thm42 => "THM_4_2",
    Over1 => "OVER_1",
    Over2 => "OVER_2",
    Over3 => "OVER_3",
    Curious => "CURIOUS",
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// `+1` or `-1`, written `+`/`-` in flags and JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Sign(pub i8);

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" => Ok(Sign(1)),
            "-" | "-1" => Ok(Sign(-1)),
            _ => Err(Error::Parse(format!("sign must be + or -, got {s:?}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 < 0 { "-" } else { "+" })
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(1) => Ok(Sign(1)),
            Raw::Int(-1) => Ok(Sign(-1)),
            Raw::Int(v) => Err(serde::de::Error::custom(format!("sign must be +1 or -1, got {v}"))),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Parameters of a case. Unset fields take per-identity defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<HalfInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<HalfInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_sign: Option<Sign>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_exp: Option<HalfInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub placement: Option<Vec<usize>>,
    /// Number of random tuples for the edge-set lemma.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Perturbs the product-side modulus; only useful as a negative control.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_delta: Option<i64>,
}

/// An identity together with its parameters and truncation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "RawCase")]
pub struct IdentityCase {
    pub id: IdentityId,
    #[serde(flatten)]
    pub params: Params,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<HalfInt>,
}

// `flatten` ignores `deny_unknown_fields`, so parsing goes through a flat copy.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    id: IdentityId,
    #[serde(default)]
    order: Option<HalfInt>,
    #[serde(default)]
    k: Option<u32>,
    #[serde(default)]
    r: Option<u32>,
    #[serde(default)]
    j: Option<u32>,
    #[serde(default)]
    n: Option<u32>,
    #[serde(default)]
    a: Option<HalfInt>,
    #[serde(default)]
    c: Option<HalfInt>,
    #[serde(default)]
    z_sign: Option<Sign>,
    #[serde(default)]
    z_exp: Option<HalfInt>,
    #[serde(default)]
    placement: Option<Vec<usize>>,
    #[serde(default)]
    samples: Option<u32>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    modulus_delta: Option<i64>,
}

impl From<RawCase> for IdentityCase {
    fn from(r: RawCase) -> Self {
        IdentityCase {
            id: r.id,
            order: r.order,
            params: Params {
                k: r.k,
                r: r.r,
                j: r.j,
                n: r.n,
                a: r.a,
                c: r.c,
                z_sign: r.z_sign,
                z_exp: r.z_exp,
                placement: r.placement,
                samples: r.samples,
                seed: r.seed,
                modulus_delta: r.modulus_delta,
            },
        }
    }
}

impl IdentityCase {
    pub fn new(id: IdentityId) -> Self {
        IdentityCase { id, params: Params::default(), order: None }
    }

    pub fn k(mut self, k: u32) -> Self {
        self.params.k = Some(k);
        self
    }
    pub fn r(mut self, r: u32) -> Self {
        self.params.r = Some(r);
        self
    }
    pub fn j(mut self, j: u32) -> Self {
        self.params.j = Some(j);
        self
    }
    pub fn n(mut self, n: u32) -> Self {
        self.params.n = Some(n);
        self
    }
    pub fn a(mut self, a: HalfInt) -> Self {
        self.params.a = Some(a);
        self
    }
    pub fn c(mut self, c: HalfInt) -> Self {
        self.params.c = Some(c);
        self
    }
    pub fn z(mut self, sign: i8, exp: HalfInt) -> Self {
        self.params.z_sign = Some(Sign(sign));
        self.params.z_exp = Some(exp);
        self
    }
    pub fn placement(mut self, p: Vec<usize>) -> Self {
        self.params.placement = Some(p);
        self
    }
    pub fn samples(mut self, samples: u32) -> Self {
        self.params.samples = Some(samples);
        self
    }
    pub fn modulus_delta(mut self, d: i64) -> Self {
        self.params.modulus_delta = Some(d);
        self
    }
    pub fn order(mut self, order: HalfInt) -> Self {
        self.order = Some(order);
        self
    }

    /// The order used when none is given: 30 powers of `q` past the modulus
    /// for sum = product identities, `q^40` for the rest.
    pub fn default_order(&self) -> HalfInt {
        use IdentityId::*;
        let k = self.params.k.unwrap_or(1) as i64;
        let modulus = match self.id {
            Ag | BressJ | Thm31 | Thm32 | Over1 | Over2 | Over3 | CorInfty | AndrewsAnswer => Some(2 * k + 3),
            BressoudEven | Thm41 | Thm42 => Some(2 * k + 2),
            Curious => Some(3),
            EvenFact => return HalfInt::from_int(60),
            _ => None,
        };
        HalfInt::from_int(modulus.map_or(40, |m| 30 + m))
    }

    pub fn effective_order(&self) -> HalfInt {
        self.order.unwrap_or_else(|| self.default_order())
    }

    /// Checks the parameters without running anything.
    pub fn validate(&self) -> Result<()> {
        let order = self.effective_order();
        if !order.is_positive() || order.is_infinite() {
            return Err(Error::InvalidParams(format!("order {order} must be positive and finite")));
        }
        if self.params.z_sign.is_some() != self.params.z_exp.is_some() {
            return Err(Error::InvalidParams("z_sign and z_exp go together".into()));
        }
        let used = used_params(self.id);
        let p = &self.params;
        let given = [
            ("k", p.k.is_some()),
            ("r", p.r.is_some()),
            ("j", p.j.is_some()),
            ("n", p.n.is_some()),
            ("a", p.a.is_some()),
            ("c", p.c.is_some()),
            ("z", p.z_sign.is_some()),
            ("placement", p.placement.is_some()),
            ("samples", p.samples.is_some()),
            ("seed", p.seed.is_some()),
            ("modulus_delta", p.modulus_delta.is_some()),
        ];
        for (name, set) in given {
            if set && !used.contains(&name) {
                return Err(Error::InvalidParams(format!("{} does not take parameter {name}", self.id)));
            }
        }
        dispatch_validate(self)
    }
}

fn used_params(id: IdentityId) -> &'static [&'static str] {
    use IdentityId::*;
    match id {
        Ag | BressoudEven => &["k", "r", "modulus_delta"],
        BressJ => &["k", "j", "modulus_delta"],
        Thm31 | Thm41 => &["k", "r", "j", "placement", "modulus_delta"],
        Thm32 | Thm42 => &["k", "r", "j", "modulus_delta"],
        Over1 => &["k", "j", "z", "placement", "modulus_delta"],
        Over2 => &["k", "j", "z", "modulus_delta"],
        Over3 => &["k", "z", "modulus_delta"],
        Curious => &["z", "modulus_delta"],
        CorInfty => &["k", "z", "modulus_delta"],
        HLimit => &["a", "z"],
        FLimit => &["a", "j", "z"],
        KeyLemma | NewProp => &["n", "a"],
        IterProp => &["n", "a", "k"],
        SpecialA => &["n"],
        IterateBress => &["n", "k"],
        FuncEq => &["n", "c"],
        NewProp2 | AnotherF | FSum | RecurseF => &["n", "a", "j"],
        AndrewsAnswer => &["k", "r", "n"],
        EdgeLemma => &["j", "samples", "seed"],
        ChuCoeff => &["j"],
        EvenFact => &["n"],
    }
}

fn dispatch_validate(case: &IdentityCase) -> Result<()> {
    use IdentityId::*;
    match case.id {
        Ag | BressoudEven | BressJ | Thm31 | Thm32 | Thm41 | Thm42 | Over1 | Over2 | Over3 | Curious
        | CorInfty | HLimit | FLimit => families::validate(case),
        KeyLemma | IterProp | SpecialA | IterateBress | FuncEq | NewProp | NewProp2 | AnotherF | FSum
        | RecurseF => structural::validate(case),
        EdgeLemma | ChuCoeff | EvenFact => edges::validate(case),
        AndrewsAnswer => andrews::validate(case),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

/// Outcome of one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: IdentityCase,
    pub status: Status,
    /// Lowest order actually compared over all checks; `inf` for exact
    /// identities between polynomials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compared_order: Option<HalfInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<Mismatch>,
    pub elapsed_ms: u64,
    pub tuple_count: u64,
    /// Number of individual comparisons (one per `z` sample, per `n`, ...).
    pub checks: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl VerificationReport {
    /// The report with its timing zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> Self {
        VerificationReport { elapsed_ms: 0, ..self.clone() }
    }
}

/// Accumulates comparisons for one case.
#[derive(Debug, Default)]
pub(crate) struct Outcome {
    compared_order: Option<HalfInt>,
    mismatch: Option<Mismatch>,
    mismatch_label: Option<String>,
    tuple_count: u64,
    checks: u64,
    notes: Vec<String>,
}

impl Outcome {
    fn record(&mut self, order: HalfInt, mismatch: Option<Mismatch>, label: &dyn Fn() -> String) {
        self.checks += 1;
        self.compared_order = Some(self.compared_order.map_or(order, |o| o.min(order)));
        if self.mismatch.is_none() {
            if let Some(m) = mismatch {
                self.mismatch = Some(m);
                self.mismatch_label = Some(label());
            }
        }
    }

    pub(crate) fn compare(&mut self, lhs: &QSeries, rhs: &QSeries, label: impl Fn() -> String) {
        let c = lhs.eq_upto(rhs);
        self.record(c.compared_order, c.first_mismatch, &label);
    }

    pub(crate) fn compare_laurent(&mut self, lhs: &ZLaurent, rhs: &ZLaurent, label: impl Fn() -> String) {
        let c = lhs.eq_upto(rhs);
        self.record(c.compared_order, c.first_mismatch, &label);
    }

    /// An exact check with no series attached (integer identities).
    pub(crate) fn check_exact(&mut self, ok: bool, mismatch: impl Fn() -> Mismatch, label: impl Fn() -> String) {
        let m = (!ok).then(mismatch);
        self.record(HalfInt::INFINITY, m, &label);
    }

    pub(crate) fn add_tuples(&mut self, n: u64) {
        self.tuple_count += n;
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn into_report(self, case: IdentityCase, elapsed_ms: u64) -> VerificationReport {
        let status = if self.mismatch.is_some() { Status::Fail } else { Status::Pass };
        let mut detail = self.notes;
        if let Some(l) = self.mismatch_label {
            detail.insert(0, format!("first mismatch in {l}"));
        }
        VerificationReport {
            case,
            status,
            compared_order: self.compared_order,
            first_mismatch: self.mismatch,
            elapsed_ms,
            tuple_count: self.tuple_count,
            checks: self.checks,
            detail: (!detail.is_empty()).then(|| detail.join("; ")),
        }
    }
}

fn run(case: &IdentityCase) -> Result<Outcome> {
    use IdentityId::*;
    case.validate()?;
    let mut out = Outcome::default();
    match case.id {
        Ag | BressoudEven | BressJ | Thm31 | Thm32 | Thm41 | Thm42 | Over1 | Over2 | Over3 | Curious
        | CorInfty | HLimit | FLimit => families::run(case, &mut out)?,
        KeyLemma | IterProp | SpecialA | IterateBress | FuncEq | NewProp | NewProp2 | AnotherF | FSum
        | RecurseF => structural::run(case, &mut out)?,
        EdgeLemma | ChuCoeff | EvenFact => edges::run(case, &mut out)?,
        AndrewsAnswer => andrews::run(case, &mut out)?,
    }
    if out.checks == 0 {
        return Err(Error::InvalidParams("no well-posed comparison for these parameters".into()));
    }
    Ok(out)
}

/// Runs one case. Parameter and evaluation errors become `Status::Error`
/// reports rather than panics.
pub fn verify(case: &IdentityCase) -> VerificationReport {
    let start = Instant::now();
    let result = run(case);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    match result {
        Ok(out) => out.into_report(case.clone(), elapsed_ms),
        Err(e) => VerificationReport {
            case: case.clone(),
            status: Status::Error,
            compared_order: None,
            first_mismatch: None,
            elapsed_ms,
            tuple_count: 0,
            checks: 0,
            detail: Some(e.to_string()),
        },
    }
}

/// Evaluates both sides of a sum = product identity without comparing
/// them: one `(label, sum, product)` triple per pairing and `z` sample.
pub fn sum_product_sides(case: &IdentityCase) -> Result<Vec<(String, QSeries, QSeries)>> {
    use IdentityId::*;
    case.validate()?;
    match case.id {
        Ag | BressoudEven | BressJ | Thm31 | Thm32 | Thm41 | Thm42 | Over1 | Over2 | Over3 | Curious
        | CorInfty => families::sides(case),
        _ => Err(Error::InvalidParams(format!("{} is not a sum = product identity", case.id))),
    }
}

pub(crate) fn z_monomial(p: &Params) -> Option<Monomial> {
    match (p.z_sign, p.z_exp) {
        (Some(s), Some(e)) => Some(Monomial::scalar(s.0, e)),
        _ => None,
    }
}

pub(crate) fn describe_z(z: Monomial) -> String {
    format!("z = {}q^{}", if z.sign < 0 { "-" } else { "" }, z.q_exp)
}

#[cfg(test)]
mod tests;
