//! Report structure and its JSON / text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hsurf_core::{Citation, CohomologyTable, RankBound, Violation};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use serde_json::Value;

/// Version of the JSON report layout. Fields are only ever added.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedTable {
    pub name: String,
    #[serde(flatten)]
    pub table: CohomologyTable,
}

/// A claim in the report together with the registered statement backing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Note {
    pub statement: String,
    pub citation: Citation,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub values: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub tables: Vec<NamedTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<Note>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            values: BTreeMap::new(),
            tables: Vec::new(),
            notes: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.values.insert(key.to_string(), v.into());
        self
    }

    pub fn note(&mut self, statement: impl Into<String>, citation: Citation) -> &mut Self {
        self.notes.push(Note {
            statement: statement.into(),
            citation,
        });
        self
    }

    /// Adds a table and one note per citation it uses, listing the degrees.
    pub fn table(&mut self, name: &str, table: CohomologyTable) -> &mut Self {
        let mut by_citation: BTreeMap<Citation, Vec<u32>> = BTreeMap::new();
        for g in &table.rows {
            by_citation.entry(g.provenance).or_default().push(g.degree);
        }
        for (citation, degrees) in by_citation {
            let list = degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(", ");
            self.note(format!("{name}: {} for k = {list}", table.variant.heading()), citation);
        }
        self.tables.push(NamedTable {
            name: name.to_string(),
            table,
        });
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) -> &mut Self {
        self.warnings.push(message.into());
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Io,
    Schema,
    Validation,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub schema: u32,
    pub command: String,
    pub error: ErrorBody,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
}

impl ErrorReport {
    pub fn new(command: &str, kind: ErrorKind, message: impl Into<String>) -> Self {
        ErrorReport {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            error: ErrorBody {
                kind,
                message: message.into(),
                violations: Vec::new(),
            },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.error.kind {
            ErrorKind::Internal => 2,
            _ => 1,
        }
    }
}

/// Integers as JSON numbers when they fit, decimal strings otherwise.
pub fn uint_value(v: &BigUint) -> Value {
    u64::try_from(v).map(Value::from).unwrap_or_else(|_| Value::from(v.to_string()))
}

pub fn int_value(v: &BigInt) -> Value {
    i64::try_from(v).map(Value::from).unwrap_or_else(|_| Value::from(v.to_string()))
}

pub fn bound_value(v: &RankBound) -> Value {
    match v.as_finite() {
        Some(x) => uint_value(x),
        None => Value::from("inf"),
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn citation_key(c: Citation) -> String {
    format!("{c:?}")
}

/// Left-aligned columns separated by two spaces.
fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c + 1 == row.len() {
                line.push_str(cell);
            } else {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            }
        }
        out.push_str("  ");
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

pub fn render_text(report: &Report, quiet: bool) -> String {
    let mut out = String::new();
    if !report.values.is_empty() {
        let rows: Vec<Vec<String>> = report
            .values
            .iter()
            .map(|(k, v)| vec![k.clone(), value_text(v)])
            .collect();
        out.push_str(&aligned(&rows));
    }
    for t in &report.tables {
        if !out.is_empty() {
            out.push('\n');
        }
        let _ = writeln!(out, "{} ({})", t.name, t.table.variant.heading());
        let mut rows = vec![vec![
            "k".to_string(),
            "group".to_string(),
            "rank".to_string(),
            "free".to_string(),
            "source".to_string(),
        ]];
        for g in &t.table.rows {
            let rank = match &g.exact_rank {
                Some(r) => r.to_string(),
                None => match &g.stated_bound {
                    Some(st) => format!("[{}, {}] (stated <= {st})", g.rank_lo, g.rank_hi),
                    None => format!("[{}, {}]", g.rank_lo, g.rank_hi),
                },
            };
            let group = if g.exact_rank.is_some() { g.to_string() } else { "?".to_string() };
            rows.push(vec![
                g.degree.to_string(),
                group,
                rank,
                if g.known_free { "yes" } else { "?" }.to_string(),
                citation_key(g.provenance),
            ]);
        }
        out.push_str(&aligned(&rows));
    }
    if !quiet {
        let mut cited: Vec<Citation> = report.notes.iter().map(|n| n.citation).collect();
        cited.sort();
        cited.dedup();
        if !cited.is_empty() {
            out.push_str("\nsources\n");
            let rows: Vec<Vec<String>> = cited
                .iter()
                .map(|c| vec![citation_key(*c), c.text().to_string()])
                .collect();
            out.push_str(&aligned(&rows));
        }
        for w in &report.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
    }
    out
}

pub fn render_error_text(err: &ErrorReport) -> String {
    let kind = match err.error.kind {
        ErrorKind::Io => "io",
        ErrorKind::Schema => "schema",
        ErrorKind::Validation => "validation",
        ErrorKind::Internal => "internal",
    };
    let mut out = format!("error ({kind}): {}\n", err.error.message);
    for v in &err.error.violations {
        let _ = writeln!(out, "  [{}] {}", v.code, v.message);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use hsurf_core::invariants::smooth_table;

    #[test]
    fn numbers_and_infinity() {
        assert_eq!(uint_value(&BigUint::from(7u32)), Value::from(7));
        let huge = BigUint::from(u64::MAX) + 1u32;
        assert_eq!(uint_value(&huge), Value::from("18446744073709551616"));
        assert_eq!(bound_value(&RankBound::Infinite), Value::from("inf"));
        assert_eq!(int_value(&BigInt::from(-6)), Value::from(-6));
    }

    #[test]
    fn table_notes_cover_every_row() {
        let mut r = Report::new("smooth");
        r.table("smooth", smooth_table(3, 3).unwrap());
        let cited: Vec<Citation> = r.notes.iter().map(|n| n.citation).collect();
        for g in &r.tables[0].table.rows {
            assert!(cited.contains(&g.provenance));
        }
    }

    #[test]
    fn text_is_aligned() {
        let mut r = Report::new("smooth");
        r.value("b_n", 10).table("smooth", smooth_table(2, 3).unwrap());
        let text = render_text(&r, true);
        assert!(text.contains("b_n  10"));
        assert!(text.contains("2  Z^7"));
        assert!(!text.contains("sources"));
    }
}
