use std::fmt::Write as _;

use serde::Serialize;
use stringc_core::Verdict;

use crate::{Failure, Format};

/// A rectangular report, rendered as a markdown table or CSV.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn markdown(&self) -> String {
        let cell = |s: &str| s.replace('|', "\\|");
        let mut out = String::new();
        let _ = writeln!(out, "| {} |", self.headers.iter().map(|h| cell(h)).collect::<Vec<_>>().join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(self.headers.len()));
        for row in &self.rows {
            let _ = writeln!(out, "| {} |", row.iter().map(|c| cell(c)).collect::<Vec<_>>().join(" | "));
        }
        out
    }

    pub fn csv(&self) -> Result<String, Failure> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers).map_err(engine)?;
        for row in &self.rows {
            w.write_record(row).map_err(engine)?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Engine(e.to_string()))?;
        String::from_utf8(bytes).map_err(engine)
    }
}

fn engine(e: impl std::fmt::Display) -> Failure {
    Failure::Engine(e.to_string())
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(engine)
}

/// Renders `value` as JSON, or `table` (with an optional markdown preamble)
/// as markdown or CSV.
pub fn emit<T: Serialize + ?Sized>(format: Format, value: &T, table: &Table, notes: &str) -> Result<String, Failure> {
    match format {
        Format::Json => json(value),
        Format::Csv => table.csv(),
        Format::Md => Ok(format!("{}{}", table.markdown(), notes)),
    }
}

pub fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// One row per check, prefixed with the verdict's subject.
pub fn verdict_rows(table: &mut Table, v: &Verdict) {
    for c in &v.checks {
        table.push(vec![v.subject.clone(), c.name.clone(), status(c.ok).to_string(), c.detail.clone()]);
    }
}

pub fn verdict_table(verdicts: &[&Verdict]) -> Table {
    let mut t = Table::new(&["subject", "check", "result", "detail"]);
    for v in verdicts {
        verdict_rows(&mut t, v);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new(&["group", "count"]);
        t.push(vec!["N_II,9(7)".into(), "7 + 0".into()]);
        assert_eq!(t.csv().unwrap(), "group,count\n\"N_II,9(7)\",7 + 0\n");
        assert!(t.markdown().contains("| N_II,9(7) | 7 + 0 |"));
    }
}
