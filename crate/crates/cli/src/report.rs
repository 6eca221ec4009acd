//! The report model shared by the JSON and table renderers.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = "patchwork/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceInfo {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            title: title.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        self.rows
            .push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    /// A grid indexed `[q][p]` with rows labelled by `q`.
    pub fn grid(title: impl Into<String>, grid: &[Vec<usize>]) -> Self {
        let width = grid.first().map_or(0, Vec::len);
        let mut columns = vec!["q\\p".to_string()];
        columns.extend((0..width).map(|p| p.to_string()));
        let mut t = Table {
            title: title.into(),
            columns,
            rows: Vec::new(),
        };
        for (q, row) in grid.iter().enumerate() {
            let mut cells = vec![q.to_string()];
            cells.extend(row.iter().map(usize::to_string));
            t.rows.push(cells);
        }
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub instance: InstanceInfo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flavor: Option<String>,
    pub values: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    /// Audits whose failure makes the run fail.
    pub audits: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, instance: InstanceInfo) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            instance,
            flavor: None,
            values: BTreeMap::new(),
            tables: Vec::new(),
            verdicts: Vec::new(),
            audits: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn value(&mut self, key: &str, v: impl Serialize) {
        self.values.insert(
            key.into(),
            serde_json::to_value(v).expect("serializable value"),
        );
    }

    pub fn verdict(&mut self, name: &str, holds: bool) {
        self.verdicts.push(Verdict {
            name: name.into(),
            holds,
            details: Vec::new(),
        });
    }

    pub fn audit(&mut self, name: &str, failures: Vec<String>) {
        self.audits.push(Verdict {
            name: name.into(),
            holds: failures.is_empty(),
            details: failures,
        });
    }

    pub fn failed(&self) -> bool {
        self.audits.iter().any(|a| !a.holds)
    }
}

fn render_grid(out: &mut String, t: &Table) {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for row in &t.rows {
        for (i, cell) in row.iter().enumerate() {
            if i >= widths.len() {
                widths.push(0);
            }
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
    };
    let _ = writeln!(out, "{}", t.title);
    let _ = writeln!(out, "  {}", line(&t.columns));
    for row in &t.rows {
        let _ = writeln!(out, "  {}", line(row));
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable rendering of a report.
pub fn render_table(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {} [{}]", r.command, r.instance.path, r.schema);
    let _ = writeln!(out, "sha256 {}", r.instance.sha256);
    if let Some(f) = &r.flavor {
        let _ = writeln!(out, "flavor {f}");
    }
    for (k, v) in &r.values {
        let _ = writeln!(out, "{k}: {v}");
    }
    for t in &r.tables {
        out.push('\n');
        render_grid(&mut out, t);
    }
    if !r.verdicts.is_empty() || !r.audits.is_empty() {
        out.push('\n');
    }
    for v in &r.verdicts {
        let _ = writeln!(out, "{}: {}", v.name, yes_no(v.holds));
        for d in &v.details {
            let _ = writeln!(out, "  {d}");
        }
    }
    for a in &r.audits {
        let _ = writeln!(
            out,
            "audit {}: {}",
            a.name,
            if a.holds { "pass" } else { "FAIL" }
        );
        for d in &a.details {
            let _ = writeln!(out, "  {d}");
        }
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    out
}

pub fn render_json(r: &Report) -> String {
    serde_json::to_string_pretty(r).expect("serializable report")
}
