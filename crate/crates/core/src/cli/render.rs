//! JSON and aligned-table rendering.

use serde_json::Value as Json;

use super::checks::{CheckReport, CheckRow};
use super::Format;

/// Left-aligned columns separated by two spaces.
#[derive(Debug, Default)]
pub(super) struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub(super) fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub(super) fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn to_text(&self) -> String {
        let mut all: Vec<&Vec<String>> = Vec::new();
        if !self.header.is_empty() {
            all.push(&self.header);
        }
        all.extend(&self.rows);
        let cols = all.iter().map(|r| r.len()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|c| all.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for r in all {
            let line: Vec<String> = r
                .iter()
                .enumerate()
                .map(|(c, s)| format!("{s:<w$}", w = widths[c]))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

pub(super) fn render(format: Format, doc: &Json, table: &Table) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Table => table.to_text(),
    }
}

fn flatten(report: &CheckReport, table: &mut Table) {
    for row in &report.rows {
        let verdict = if row.passed() { "pass" } else { "FAIL" }.to_string();
        match row {
            CheckRow::Slice(r) => table.row(vec![
                report.suite.clone(),
                r.direction.clone(),
                r.arity.to_string(),
                r.expected.clone(),
                r.actual.to_string(),
                r.reference.to_string(),
                verdict,
            ]),
            CheckRow::Identity(r) => table.row(vec![
                report.suite.clone(),
                format!("identity d={}", r.base),
                r.m.to_string(),
                String::new(),
                String::new(),
                String::new(),
                verdict,
            ]),
        }
    }
    for sub in &report.checks {
        flatten(sub, table);
    }
    if let Some(why) = &report.exhausted {
        table.row(vec![report.suite.clone(), why.clone(), String::new(), String::new(), String::new(), String::new(), "EXHAUSTED".into()]);
    }
}

pub(super) fn check_table(report: &CheckReport) -> Table {
    let mut t = Table::new(&["suite", "comparison", "n", "expected", "actual", "reference", "verdict"]);
    flatten(report, &mut t);
    t.row(vec![
        report.suite.clone(),
        "overall".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        if report.pass { "pass" } else { "FAIL" }.into(),
    ]);
    t
}
