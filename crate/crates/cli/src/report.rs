//! Schema-versioned reports with a stable text rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

use weilkit::graded::GradedSpace;
use weilkit::linalg::SVec;
use weilkit::scalar::fmt_q;

pub const SCHEMA: &str = "weilkit-report/1";

/// Residual entries shown per failing check.
const MAX_RESIDUAL: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Serialize)]
pub struct Residual {
    pub nonzero: usize,
    pub entries: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Residual>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub status: Status,
    pub checks: Vec<Check>,
    pub tables: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report { schema: SCHEMA, command, status: Status::Pass, checks: Vec::new(), tables: BTreeMap::new() }
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: Option<String>) -> bool {
        let status = if ok { Status::Pass } else { Status::Fail };
        if !ok {
            self.status = Status::Fail;
        }
        self.checks.push(Check { name: name.into(), status, detail, residual: None });
        ok
    }

    /// A check that passes iff the residual vanishes.
    pub fn residual(&mut self, name: &str, space: &GradedSpace, r: &SVec) -> bool {
        let ok = self.check(name, r.is_empty(), None);
        if !ok {
            let entries = r.iter().take(MAX_RESIDUAL).map(|(i, c)| (space.label(*i).to_string(), fmt_q(c))).collect();
            self.checks.last_mut().unwrap().residual = Some(Residual { nonzero: r.len(), entries });
        }
        ok
    }

    pub fn table(&mut self, name: &str, v: impl Serialize) {
        self.tables.insert(name.into(), serde_json::to_value(v).expect("tables serialize"));
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "weilkit {}", self.command.join(" ")).unwrap();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            write!(s, "  {tag}  {}", c.name).unwrap();
            if let Some(d) = &c.detail {
                write!(s, ": {d}").unwrap();
            }
            writeln!(s).unwrap();
            if let Some(r) = &c.residual {
                let shown: Vec<String> = r.entries.iter().map(|(l, v)| format!("{l} = {v}")).collect();
                writeln!(s, "        residual ({} nonzero): {}", r.nonzero, shown.join(", ")).unwrap();
            }
        }
        for (name, v) in &self.tables {
            writeln!(s, "  {name}: {v}").unwrap();
        }
        let verdict = match self.status {
            Status::Pass => "all checks passed",
            Status::Fail => "some checks failed",
        };
        writeln!(s, "{verdict}").unwrap();
        s
    }
}

/// `{label: "num/den"}`
pub fn vector_table(space: &GradedSpace, v: &SVec) -> BTreeMap<String, String> {
    v.iter().map(|(i, c)| (space.label(*i).to_string(), fmt_q(c))).collect()
}

/// `[[degree, dim], ...]` in increasing degree.
pub fn dims_table(d: &BTreeMap<i64, usize>) -> Vec<(i64, usize)> {
    d.iter().map(|(k, v)| (*k, *v)).collect()
}
