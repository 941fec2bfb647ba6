//! Batch runs: a JSON list of cases in, one report per case out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use crate::catalog::{verify, IdentityCase, Status, VerificationReport};
use crate::error::{Error, Result};
use crate::half::HalfInt;

/// What a suite case is expected to do. Negative controls expect `fail`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
}

/// A case plus its expectation. In JSON the expectation keys sit next to
/// the case keys: `{"id": "AG", "k": 1, "modulus_delta": 1, "expect": "fail",
/// "expect_mismatch": 5}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteCase {
    pub case: IdentityCase,
    pub expect: Expect,
    /// Exponent of the first mismatch, for expected failures.
    pub expect_mismatch: Option<HalfInt>,
}

impl From<IdentityCase> for SuiteCase {
    fn from(case: IdentityCase) -> Self {
        SuiteCase { case, expect: Expect::Pass, expect_mismatch: None }
    }
}

impl Serialize for SuiteCase {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut v = serde_json::to_value(&self.case).map_err(serde::ser::Error::custom)?;
        let map = v.as_object_mut().expect("cases serialize as objects");
        if self.expect != Expect::Pass {
            map.insert("expect".into(), serde_json::to_value(self.expect).unwrap());
        }
        if let Some(e) = self.expect_mismatch {
            map.insert("expect_mismatch".into(), Value::String(e.to_string()));
        }
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuiteCase {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let mut map = Map::<String, Value>::deserialize(d)?;
        let expect = match map.remove("expect") {
            Some(v) => serde_json::from_value(v).map_err(D::Error::custom)?,
            None => Expect::Pass,
        };
        let expect_mismatch = match map.remove("expect_mismatch") {
            Some(v) => Some(serde_json::from_value(v).map_err(D::Error::custom)?),
            None => None,
        };
        let case = serde_json::from_value(Value::Object(map)).map_err(D::Error::custom)?;
        Ok(SuiteCase { case, expect, expect_mismatch })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Order for cases that do not set their own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_order: Option<HalfInt>,
    /// Worker threads; all cores when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parallelism: Option<usize>,
    /// Where to write the JSON report, relative to the working directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub cases: Vec<SuiteCase>,
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("suite config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// The cases with the default order filled in, each validated.
    pub fn resolved_cases(&self) -> Result<Vec<SuiteCase>> {
        self.cases
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut c = c.clone();
                if c.case.order.is_none() {
                    c.case.order = self.default_order;
                }
                c.case.validate().map_err(|e| Error::InvalidParams(format!("case {i} ({}): {e}", c.case.id)))?;
                Ok(c)
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_mismatch: Option<HalfInt>,
    pub as_expected: bool,
    pub report: VerificationReport,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    /// Cases whose outcome differs from their expectation.
    pub unexpected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub records: Vec<CaseRecord>,
    pub summary: Summary,
}

fn as_expected(c: &SuiteCase, r: &VerificationReport) -> bool {
    match c.expect {
        Expect::Pass => r.status == Status::Pass,
        Expect::Fail => {
            r.status == Status::Fail
                && c.expect_mismatch.is_none_or(|e| r.first_mismatch.as_ref().map(|m| m.exponent) == Some(e))
        }
    }
}

/// Runs every case, in parallel, and returns the records sorted by
/// identity id (ties keep config order).
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let cases = config.resolved_cases()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.parallelism {
        builder = builder.num_threads(n.max(1));
    }
    let pool = builder.build().map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
    let reports: Vec<VerificationReport> = pool.install(|| cases.par_iter().map(|c| verify(&c.case)).collect());
    let mut records: Vec<(usize, CaseRecord)> = cases
        .iter()
        .zip(reports)
        .enumerate()
        .map(|(i, (c, report))| {
            (i, CaseRecord { expect: c.expect, expect_mismatch: c.expect_mismatch, as_expected: as_expected(c, &report), report })
        })
        .collect();
    records.sort_by_key(|(i, r)| (r.report.case.id, *i));
    let records: Vec<CaseRecord> = records.into_iter().map(|(_, r)| r).collect();
    let summary = Summary {
        total: records.len(),
        passed: records.iter().filter(|r| r.report.status == Status::Pass).count(),
        failed: records.iter().filter(|r| r.report.status == Status::Fail).count(),
        errors: records.iter().filter(|r| r.report.status == Status::Error).count(),
        unexpected: records.iter().filter(|r| !r.as_expected).count(),
    };
    let report = SuiteReport { records, summary };
    if let Some(path) = &config.output_path {
        std::fs::write(path, report.to_json())
            .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(report)
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("suite report: {e}")))
    }

    /// `0` when every case behaved as expected, `1` otherwise.
    pub fn exit_code(&self) -> i32 {
        (self.summary.unexpected > 0) as i32
    }

    /// The same report with timings zeroed.
    pub fn without_timing(&self) -> Self {
        let records = self
            .records
            .iter()
            .map(|r| CaseRecord { report: r.report.without_timing(), ..r.clone() })
            .collect();
        SuiteReport { records, summary: self.summary.clone() }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&report_text(&r.report));
            if r.expect == Expect::Fail {
                s.push_str(if r.as_expected { "  (expected failure)" } else { "  (expected to fail)" });
            }
            s.push('\n');
        }
        let m = &self.summary;
        let _ = write!(
            s,
            "{} cases: {} passed, {} failed, {} errors, {} unexpected",
            m.total, m.passed, m.failed, m.errors, m.unexpected
        );
        s
    }
}

/// `AG k=1 r=0 order=100` style rendering of a case.
pub fn describe_case(case: &IdentityCase) -> String {
    let p = &case.params;
    let mut parts = vec![case.id.to_string()];
    let mut push = |name: &str, v: Option<String>| {
        if let Some(v) = v {
            parts.push(format!("{name}={v}"));
        }
    };
    push("k", p.k.map(|x| x.to_string()));
    push("r", p.r.map(|x| x.to_string()));
    push("j", p.j.map(|x| x.to_string()));
    push("n", p.n.map(|x| x.to_string()));
    push("a", p.a.map(|x| x.to_string()));
    push("c", p.c.map(|x| x.to_string()));
    if let (Some(sign), Some(e)) = (p.z_sign, p.z_exp) {
        push("z", Some(format!("{}q^{e}", if sign.0 < 0 { "-" } else { "" })));
    }
    push("placement", p.placement.as_ref().map(|v| v.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")));
    push("samples", p.samples.map(|x| x.to_string()));
    push("seed", p.seed.map(|x| x.to_string()));
    push("modulus_delta", p.modulus_delta.map(|x| x.to_string()));
    push("order", case.order.map(|x| x.to_string()));
    parts.join(" ")
}

/// One line per report, plus a second line for a mismatch or error.
pub fn report_text(r: &VerificationReport) -> String {
    let mut s = format!("{:<5} {}", r.status.to_string().to_uppercase(), describe_case(&r.case));
    if let Some(o) = r.compared_order {
        if o.is_infinite() {
            s.push_str("  [exact]");
        } else {
            let _ = write!(s, "  [through q^{o}]");
        }
    }
    let _ = write!(s, "  checks={} tuples={} {}ms", r.checks, r.tuple_count, r.elapsed_ms);
    if let Some(m) = &r.first_mismatch {
        let z = m.z_exp.map(|e| format!(" z^{e}")).unwrap_or_default();
        let _ = write!(s, "\n      first mismatch at q^{}{z}: lhs {} rhs {}", m.exponent, m.lhs, m.rhs);
    }
    if let Some(d) = &r.detail {
        let _ = write!(s, "\n      {d}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::IdentityId;

    #[test]
    fn config_parses_with_expectations() {
        let cfg = SuiteConfig::from_json(
            r#"{"default_order": "60/2", "cases": [
                {"id": "THM_3_1", "k": 3, "r": 1, "j": 2, "placement": [1, 2]},
                {"id": "AG", "k": 1, "modulus_delta": 1, "expect": "fail", "expect_mismatch": 5}
            ]}"#,
        )
        .unwrap();
        assert_eq!(cfg.default_order, Some(HalfInt::from_int(30)));
        assert_eq!(cfg.cases[1].expect, Expect::Fail);
        assert_eq!(cfg.cases[1].expect_mismatch, Some(HalfInt::from_int(5)));
        let back = SuiteConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(SuiteConfig::from_json(r#"{"cases": [{"id": "AG", "expect": "maybe"}]}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"cases": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn empty_suite_succeeds() {
        let r = run_suite(&SuiteConfig::default()).unwrap();
        assert_eq!(r.summary.total, 0);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn records_are_sorted_by_id_and_round_trip() {
        let cfg = SuiteConfig {
            default_order: Some(HalfInt::from_int(20)),
            parallelism: Some(2),
            cases: vec![
                IdentityCase::new(IdentityId::ChuCoeff).j(4).into(),
                IdentityCase::new(IdentityId::Ag).k(2).into(),
                IdentityCase::new(IdentityId::Ag).k(1).into(),
            ],
            ..Default::default()
        };
        let r = run_suite(&cfg).unwrap();
        let ids: Vec<_> = r.records.iter().map(|x| (x.report.case.id, x.report.case.params.k)).collect();
        assert_eq!(ids, vec![(IdentityId::Ag, Some(2)), (IdentityId::Ag, Some(1)), (IdentityId::ChuCoeff, None)]);
        assert_eq!(SuiteReport::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(run_suite(&cfg).unwrap().without_timing(), r.without_timing());
        assert!(r.to_text().ends_with("3 cases: 3 passed, 0 failed, 0 errors, 0 unexpected"));
    }

    #[test]
    fn negative_control_counts_as_expected() {
        let mut bad = SuiteCase::from(IdentityCase::new(IdentityId::Ag).k(1).modulus_delta(1));
        bad.expect = Expect::Fail;
        let cfg = SuiteConfig { default_order: Some(HalfInt::from_int(20)), cases: vec![bad.clone()], ..Default::default() };
        let r = run_suite(&cfg).unwrap();
        assert_eq!(r.summary.failed, 1);
        assert_eq!(r.exit_code(), 0);
        // the same case without the expectation makes the suite fail
        let cfg = SuiteConfig { cases: vec![SuiteCase { expect: Expect::Pass, ..bad }], ..cfg };
        assert_eq!(run_suite(&cfg).unwrap().exit_code(), 1);
    }

    #[test]
    fn invalid_case_is_rejected_before_running() {
        let cfg = SuiteConfig { cases: vec![IdentityCase::new(IdentityId::Ag).k(1).r(5).into()], ..Default::default() };
        assert!(matches!(run_suite(&cfg), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn text_rendering() {
        let case = IdentityCase::new(IdentityId::Thm31).k(3).r(1).j(2).placement(vec![1, 2]);
        assert_eq!(describe_case(&case), "THM_3_1 k=3 r=1 j=2 placement=1,2");
    }
}
