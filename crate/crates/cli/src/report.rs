//! The `report-v1` document and its text rendering.
//!
//! Field order and map ordering are fixed, so two runs of the same command
//! produce identical JSON apart from `timing_ms`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use lsca_core::arith::{fmt_rational, Assignment, Var};
use lsca_core::checks::{CheckOutcome, Counterexample, Subject};

use crate::style::Style;

pub const SCHEMA: &str = "report-v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SubjectInfo {
    /// `family`, `file` or `catalog`.
    pub source: &'static str,
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra_kind: Option<&'static str>,
    /// Parameter name to value; symbolic parameters map to their own name.
    pub params: BTreeMap<String, String>,
    pub constraints: Vec<String>,
}

impl SubjectInfo {
    pub fn of(subject: &Subject, set: &BTreeMap<String, lsca_core::arith::Rational>) -> SubjectInfo {
        let alg = &subject.algebra;
        let params = match &subject.family {
            Some(inst) => inst.env.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            None => alg
                .universe()
                .symbols()
                .iter()
                .map(|s| {
                    let name = s.to_string();
                    let value = set.get(&name).map(fmt_rational).unwrap_or_else(|| name.clone());
                    (name, value)
                })
                .collect(),
        };
        SubjectInfo {
            source: if subject.family.is_some() { "family" } else { "file" },
            id: subject.label.clone(),
            algebra_kind: Some(alg.kind.keyword()),
            params,
            constraints: alg.constraints().iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn catalog(id: &str) -> SubjectInfo {
        SubjectInfo {
            source: "catalog",
            id: id.to_owned(),
            algebra_kind: None,
            params: BTreeMap::new(),
            constraints: Vec::new(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ItemRecord {
    pub label: String,
    pub status: Status,
    pub value: String,
    #[serde(skip)]
    short: String,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleRecord {
    pub label: String,
    pub residual: String,
    /// Admissible point where the residual is nonzero, when one was found.
    pub point: Option<BTreeMap<String, String>>,
    pub value: Option<String>,
    #[serde(skip)]
    short: String,
}

fn point_map(at: &Assignment) -> BTreeMap<String, String> {
    let mut m: BTreeMap<String, String> = at.params.iter().map(|(s, v)| (s.to_string(), fmt_rational(v))).collect();
    for v in Var::ALL {
        if let Some(r) = at.var(v) {
            m.insert(v.name().to_owned(), fmt_rational(r));
        }
    }
    m
}

impl From<&Counterexample> for CounterexampleRecord {
    fn from(c: &Counterexample) -> CounterexampleRecord {
        CounterexampleRecord {
            label: c.label.clone(),
            residual: c.residual.clone(),
            point: c.point.as_ref().map(point_map),
            value: c.value.as_ref().map(fmt_rational),
            short: c.residual_short.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub status: Status,
    pub checked: usize,
    pub residual_count: usize,
    pub items: Vec<ItemRecord>,
    pub counterexample: Option<CounterexampleRecord>,
}

impl From<&CheckOutcome> for CheckRecord {
    fn from(o: &CheckOutcome) -> CheckRecord {
        CheckRecord {
            name: o.name,
            status: Status::of(o.passed()),
            checked: o.checked,
            residual_count: o.failed,
            items: o
                .items
                .iter()
                .map(|i| ItemRecord {
                    label: i.label.clone(),
                    status: Status::of(i.ok),
                    value: i.value.clone(),
                    short: i.value_short.clone(),
                })
                .collect(),
            counterexample: o.counterexample.as_ref().map(CounterexampleRecord::from),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BracketRecord {
    pub pair: String,
    pub value: String,
}

#[derive(Debug, Serialize)]
pub struct CatalogEntry {
    pub id: String,
    pub target: String,
    pub params: Vec<String>,
    pub constraints: String,
    pub brackets: Vec<BracketRecord>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub subject: SubjectInfo,
    pub status: Status,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub catalog: Option<Vec<CatalogEntry>>,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(command: Vec<String>, subject: SubjectInfo, outcomes: Vec<CheckOutcome>) -> Report {
        let checks: Vec<CheckRecord> = outcomes.iter().map(CheckRecord::from).collect();
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION"),
            command,
            subject,
            status: Status::of(outcomes.iter().all(CheckOutcome::passed)),
            checks,
            catalog: None,
            timing_ms: 0.0,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self, style: Style) -> String {
        let mut out = String::new();
        if let Some(entries) = &self.catalog {
            for e in entries {
                let _ = writeln!(
                    out,
                    "{:<4} over {:<7} params: {:<22} constraints: {}",
                    e.id,
                    e.target,
                    e.params.join(", "),
                    e.constraints
                );
                for b in &e.brackets {
                    let _ = writeln!(out, "     [{}] = {}", b.pair, b.value);
                }
            }
            return out;
        }
        let s = &self.subject;
        let _ = write!(out, "{}", s.id);
        if let Some(kind) = s.algebra_kind {
            let _ = write!(out, " [{kind}]");
        }
        let params: Vec<String> = s
            .params
            .iter()
            .filter(|(k, v)| k != v)
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        if !params.is_empty() {
            let _ = write!(out, " {}", style.dim(&params.join(", ")));
        }
        out.push('\n');
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => style.pass("pass"),
                Status::Fail => style.fail("FAIL"),
            };
            let _ = writeln!(
                out,
                "  {tag} {:<20} {} checked, {} failed",
                c.name, c.checked, c.residual_count
            );
            for i in &c.items {
                let mark = match i.status {
                    Status::Pass => "ok ",
                    Status::Fail => "!! ",
                };
                let _ = writeln!(out, "       {mark}{:<5} {}", i.label, i.short);
            }
            if let Some(cx) = &c.counterexample {
                let _ = writeln!(out, "       counterexample {}: {}", cx.label, cx.short);
                if let (Some(point), Some(value)) = (&cx.point, &cx.value) {
                    let at: Vec<String> = point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    let _ = writeln!(out, "       nonzero at {{{}}}: {value}", at.join(", "));
                }
            }
        }
        let verdict = match self.status {
            Status::Pass => style.pass("pass"),
            Status::Fail => style.fail("FAIL"),
        };
        let _ = writeln!(out, "result: {verdict}");
        out
    }
}
