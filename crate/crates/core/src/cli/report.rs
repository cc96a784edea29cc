//! Versioned run reports and their JSON / CSV encodings.

use super::config::{Format, RunConfig};
use crate::charts::SurfaceSamples;
use crate::error::{Error, Result};
use crate::pair::Stats;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const REPORT_VERSION: u32 = 1;

/// A named property check with its measured value and bound.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value < threshold`.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Check {
        Check { name: name.into(), value, threshold, pass: value < threshold }
    }

    /// A boolean outcome, encoded as `value = 1` on success.
    pub fn holds(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), value: if ok { 1.0 } else { 0.0 }, threshold: 1.0, pass: ok }
    }
}

/// Per-point data in row-major grid order (`j` outer, `i` inner).
#[derive(Clone, Debug, Default, Serialize, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Table {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Sorts rows by the `j`, `i` columns when present.
    pub fn sort_row_major(&mut self) {
        let ci = self.columns.iter().position(|c| c == "i");
        let cj = self.columns.iter().position(|c| c == "j");
        if let (Some(ci), Some(cj)) = (ci, cj) {
            self.rows.sort_by(|a, b| (a[cj], a[ci]).partial_cmp(&(b[cj], b[ci])).unwrap_or(std::cmp::Ordering::Equal));
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|x| format!("{x:?}")).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Invalid("empty csv".into()))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for l in lines.filter(|l| !l.is_empty()) {
            let row: Vec<f64> = l
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|_| Error::Invalid(format!("csv cell '{c}'"))))
                .collect::<Result<_>>()?;
            if row.len() != columns.len() {
                return Err(Error::Invalid("csv row length differs from header".into()));
            }
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub report_version: u32,
    pub tool_version: String,
    pub config: RunConfig,
    pub summaries: BTreeMap<String, Stats>,
    pub values: BTreeMap<String, f64>,
    pub flags: BTreeMap<String, bool>,
    pub verdict: Option<String>,
    pub witnesses: BTreeMap<String, Vec<f64>>,
    pub checks: Vec<Check>,
    pub names: Vec<String>,
    pub table: Option<Table>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub export: Option<SurfaceSamples>,
    pub timing_ms: f64,
}

impl Report {
    pub fn new(config: RunConfig) -> Report {
        Report {
            report_version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            summaries: BTreeMap::new(),
            values: BTreeMap::new(),
            flags: BTreeMap::new(),
            verdict: None,
            witnesses: BTreeMap::new(),
            checks: Vec::new(),
            names: Vec::new(),
            table: None,
            export: None,
            timing_ms: 0.0,
        }
    }

    pub fn summary(&mut self, name: &str, xs: impl IntoIterator<Item = f64>) {
        self.summaries.insert(name.to_string(), Stats::of(xs));
    }

    pub fn value(&mut self, name: &str, x: f64) {
        self.values.insert(name.to_string(), x);
    }

    pub fn values_from(&mut self, prefix: &str, m: &BTreeMap<String, f64>) {
        for (k, v) in m {
            self.values.insert(format!("{prefix}{k}"), *v);
        }
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// 0 on success, 2 on an inconclusive verdict, 1 when a check failed.
    pub fn exit_code(&self) -> i32 {
        if !self.all_checks_pass() {
            1
        } else if self.verdict.as_deref() == Some("Inconclusive") {
            2
        } else {
            0
        }
    }

    /// The JSON value without the wall-clock timing.
    pub fn payload(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(o) = v.as_object_mut() {
            o.remove("timing_ms");
        }
        v
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => match &self.export {
                Some(s) => Ok(serde_json::to_string_pretty(s)?),
                None => Ok(serde_json::to_string_pretty(self)?),
            },
            Format::Csv => Ok(match &self.table {
                Some(t) => t.to_csv(),
                None => self.scalar_csv(),
            }),
        }
    }

    fn scalar_csv(&self) -> String {
        let mut s = String::from("name,value\n");
        for (k, v) in &self.values {
            let _ = writeln!(s, "{k},{v:?}");
        }
        for (k, st) in &self.summaries {
            let _ = writeln!(s, "{k}.min,{:?}\n{k}.max,{:?}\n{k}.mean,{:?}", st.min, st.max, st.mean);
        }
        for c in &self.checks {
            let _ = writeln!(s, "{},{:?}", c.name, c.value);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_exact() {
        let mut t = Table::new(&["i", "j", "x"]);
        t.push(vec![1.0, 0.0, 0.1 + 0.2]);
        t.push(vec![0.0, 0.0, 1e-300]);
        t.push(vec![0.0, 1.0, -std::f64::consts::PI]);
        t.sort_row_major();
        assert_eq!(t.rows[0][0], 0.0);
        let back = Table::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
    }
}
