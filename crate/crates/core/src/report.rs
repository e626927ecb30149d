//! Experiment reports and their JSON / CSV serialisations.
//!
//! A report is a flat list of check records plus a summary derived from them.
//! Everything that goes into the serialised form is a function of the
//! experiment parameters alone; wall time is kept out unless explicitly
//! attached, so repeated runs produce byte-identical files.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// Above this many records the JSON form omits the record list unless asked.
pub const RECORD_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    /// Instance address: tournament code, sample index, `n`, ….
    pub id: String,
    /// Which check this record is for (`rank(D_n)`, `identity`, …).
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    /// Least integer value the checked quantity must reach.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<i64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    pub fn new(id: impl Into<String>, check: impl Into<String>) -> Self {
        Record {
            id: id.into(),
            check: check.into(),
            rank: None,
            bound: None,
            pass: true,
            detail: None,
        }
    }

    pub fn rank(mut self, rank: usize) -> Self {
        self.rank = Some(rank);
        self
    }

    pub fn bound(mut self, bound: i64) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Sets `rank` and `bound` and passes iff `rank ≥ bound`.
    pub fn at_least(self, rank: usize, bound: i64) -> Self {
        self.rank(rank).bound(bound).pass(rank as i64 >= bound)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct CheckSummary {
    pub records: usize,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub median_rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_rank: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub rank_histogram: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Summary {
    pub records: usize,
    pub violations: usize,
    pub pass: bool,
    /// Every bound checked was ≤ 0, so passing says nothing.
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_violation: Option<Record>,
    /// Checks that were requested but not run, with the reason.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub refused: Vec<String>,
    pub checks: BTreeMap<String, CheckSummary>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub experiment_id: String,
    pub parameters: BTreeMap<String, String>,
    pub summary: Summary,
    #[serde(skip)]
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(experiment_id: impl Into<String>) -> Self {
        Report {
            experiment_id: experiment_id.into(),
            parameters: BTreeMap::new(),
            summary: Summary::default(),
            records: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn refuse(&mut self, reason: impl Into<String>) {
        self.summary.refused.push(reason.into());
    }

    pub fn extra(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.extra.insert(key.to_string(), value.into());
    }

    pub fn extend(&mut self, records: impl IntoIterator<Item = Record>) {
        self.records.extend(records);
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    /// Recomputes the summary counters from the records.
    pub fn finish(mut self) -> Self {
        let mut checks: BTreeMap<String, CheckSummary> = BTreeMap::new();
        let mut ranks: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for r in &self.records {
            let c = checks.entry(r.check.clone()).or_default();
            c.records += 1;
            c.violations += usize::from(!r.pass);
            if let Some(rank) = r.rank {
                *c.rank_histogram.entry(rank).or_default() += 1;
                ranks.entry(r.check.clone()).or_default().push(rank);
            }
        }
        for (check, mut rs) in ranks {
            rs.sort_unstable();
            let c = checks.get_mut(&check).expect("check present");
            c.min_rank = rs.first().copied();
            c.max_rank = rs.last().copied();
            // lower median
            c.median_rank = rs.get((rs.len() - 1) / 2).copied();
        }
        let s = &mut self.summary;
        s.records = self.records.len();
        s.violations = self.records.iter().filter(|r| !r.pass).count();
        s.pass = s.violations == 0;
        s.first_violation = self.records.iter().find(|r| !r.pass).cloned();
        let bounds: Vec<i64> = self.records.iter().filter_map(|r| r.bound).collect();
        s.vacuous = !bounds.is_empty() && bounds.iter().all(|&b| b <= 0);
        s.checks = checks;
        self
    }

    pub fn pass(&self) -> bool {
        self.summary.pass
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.summary.checks.get(name)
    }

    /// Pretty JSON; records are included when there are at most
    /// [`RECORD_LIMIT`] of them or `full_records` is set.
    pub fn to_json(&self, full_records: bool) -> String {
        let mut v = serde_json::to_value(self).expect("report serialises");
        if full_records || self.records.len() <= RECORD_LIMIT {
            v["records"] = serde_json::to_value(&self.records).expect("records serialise");
        } else {
            v["records_elided"] = Value::from(self.records.len());
        }
        let mut out = serde_json::to_string_pretty(&v).expect("json");
        out.push('\n');
        out
    }

    /// One line per record: `id,check,rank,bound,pass,detail`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,check,rank,bound,pass,detail\n");
        for r in &self.records {
            let fields = [
                csv_field(&r.id),
                csv_field(&r.check),
                r.rank.map(|v| v.to_string()).unwrap_or_default(),
                r.bound.map(|v| v.to_string()).unwrap_or_default(),
                r.pass.to_string(),
                csv_field(r.detail.as_deref().unwrap_or("")),
            ];
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Concatenates several reports into one under a new id; parameters of the
/// parts are kept with a `part<k>.` prefix.
pub fn merge(experiment_id: &str, parts: Vec<Report>) -> Report {
    let mut out = Report::new(experiment_id);
    for (k, part) in parts.into_iter().enumerate() {
        out.parameters
            .insert(format!("part{k}.experiment_id"), part.experiment_id.clone());
        for (key, v) in part.parameters {
            out.parameters.insert(format!("part{k}.{key}"), v);
        }
        out.summary.refused.extend(part.summary.refused);
        for (key, v) in part.summary.extra {
            out.summary.extra.insert(format!("part{k}.{key}"), v);
        }
        out.records.extend(part.records);
    }
    out.finish()
}
