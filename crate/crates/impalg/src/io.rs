//! Text and structured table formats, newline-delimited streams, and an
//! isomorphism check.
//!
//! Text format:
//!
//! ```text
//! # comment
//! elements: a b 1
//! 1 1 a
//! 1 1 1
//! a b 1
//! ```

use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::{Element, Table, TableError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: duplicate element name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: no element named `1`")]
    MissingOne { line: usize },
    #[error("line {line}, column {col}: `{token}` is not a declared element")]
    BadCell {
        line: usize,
        col: usize,
        token: String,
    },
    #[error("tables have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("structured document: {0}")]
    Structured(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Output format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// A parsed table plus non-fatal diagnostics.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub table: Table,
    pub warnings: Vec<String>,
}

fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Builds a table from declared names and rows of element indices (declaration
/// order), moving `1` to the last position when needed.
fn assemble(
    declared: Vec<String>,
    rows: Vec<Vec<usize>>,
    one: usize,
    warnings: &mut Vec<String>,
) -> Result<Table, IoError> {
    let n = declared.len();
    let mut order: Vec<usize> = (0..n).filter(|&i| i != one).collect();
    order.push(one);
    let mut pos = vec![0usize; n];
    for (internal, &decl) in order.iter().enumerate() {
        pos[decl] = internal;
    }
    let names: Vec<String> = order.iter().map(|&i| declared[i].clone()).collect();
    let mut cells = vec![0 as Element; n * n];
    for (dx, row) in rows.iter().enumerate() {
        for (dy, &v) in row.iter().enumerate() {
            cells[pos[dx] * n + pos[dy]] = pos[v] as Element;
        }
    }
    let mut table = Table::new(names, cells)?;
    if one != n - 1 {
        warnings.push(format!(
            "element `1` declared at position {} was moved last",
            one + 1
        ));
        table.set_display(pos.iter().map(|&p| p as Element).collect());
    }
    Ok(table)
}

/// Parses the text format, returning warnings alongside the table.
pub fn parse_table_with_warnings(text: &str) -> Result<Parsed, IoError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hline, header) = lines.next().ok_or(IoError::Parse {
        line: 1,
        col: 1,
        msg: "empty document".into(),
    })?;
    let htoks = tokens(header);
    let (_, first) = htoks[0];
    let mut names_toks: Vec<(usize, &str)> = htoks[1..].to_vec();
    if first != "elements:" {
        match first.strip_prefix("elements:") {
            Some(rest) if !rest.is_empty() => names_toks.insert(0, (htoks[0].0 + 9, rest)),
            _ => {
                return Err(IoError::Parse {
                    line: hline,
                    col: htoks[0].0,
                    msg: "expected `elements:` header".into(),
                })
            }
        }
    }
    if names_toks.is_empty() {
        return Err(IoError::Parse {
            line: hline,
            col: header.len() + 1,
            msg: "no elements declared".into(),
        });
    }
    let mut declared: Vec<String> = Vec::new();
    for &(_, name) in &names_toks {
        if declared.iter().any(|d| d == name) {
            return Err(IoError::DuplicateName {
                line: hline,
                name: name.to_string(),
            });
        }
        declared.push(name.to_string());
    }
    let one = declared
        .iter()
        .position(|d| d == "1")
        .ok_or(IoError::MissingOne { line: hline })?;
    let n = declared.len();
    let mut rows = Vec::with_capacity(n);
    let mut last_line = hline;
    for (lno, line) in lines {
        last_line = lno;
        let toks = tokens(line);
        if rows.len() == n {
            return Err(IoError::Parse {
                line: lno,
                col: toks[0].0,
                msg: format!("more than {n} rows"),
            });
        }
        if toks.len() != n {
            let col = toks
                .get(n)
                .map(|t| t.0)
                .unwrap_or(line.trim_end().len() + 1);
            return Err(IoError::Parse {
                line: lno,
                col,
                msg: format!("expected {n} cells, found {}", toks.len()),
            });
        }
        let mut row = Vec::with_capacity(n);
        for (col, tok) in toks {
            let v = declared
                .iter()
                .position(|d| d == tok)
                .ok_or_else(|| IoError::BadCell {
                    line: lno,
                    col,
                    token: tok.to_string(),
                })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(IoError::Parse {
            line: last_line + 1,
            col: 1,
            msg: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    let mut warnings = Vec::new();
    let table = assemble(declared, rows, one, &mut warnings)?;
    Ok(Parsed { table, warnings })
}

/// Parses the text format.
pub fn parse_table(text: &str) -> Result<Table, IoError> {
    parse_table_with_warnings(text).map(|p| p.table)
}

/// Structured record: `{"elements": [...], "table": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl TableDocument {
    pub fn from_table(t: &Table) -> TableDocument {
        let order = t.display_order();
        TableDocument {
            elements: order.iter().map(|&e| t.name(e).to_string()).collect(),
            table: order
                .iter()
                .map(|&x| {
                    order
                        .iter()
                        .map(|&y| t.name(t.op(x, y)).to_string())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_table(&self) -> Result<Parsed, IoError> {
        let declared = &self.elements;
        let n = declared.len();
        if n == 0 {
            return Err(IoError::Structured("no elements".into()));
        }
        for (i, d) in declared.iter().enumerate() {
            if declared[..i].contains(d) {
                return Err(IoError::DuplicateName {
                    line: 1,
                    name: d.clone(),
                });
            }
        }
        let one = declared
            .iter()
            .position(|d| d == "1")
            .ok_or(IoError::MissingOne { line: 1 })?;
        if self.table.len() != n {
            return Err(IoError::Structured(format!(
                "expected {n} rows, found {}",
                self.table.len()
            )));
        }
        let mut rows = Vec::with_capacity(n);
        for (r, row) in self.table.iter().enumerate() {
            if row.len() != n {
                return Err(IoError::Structured(format!(
                    "row {} has {} cells, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            let mut out = Vec::with_capacity(n);
            for (c, tok) in row.iter().enumerate() {
                let v = declared
                    .iter()
                    .position(|d| d == tok)
                    .ok_or_else(|| IoError::BadCell {
                        line: r + 1,
                        col: c + 1,
                        token: tok.clone(),
                    })?;
                out.push(v);
            }
            rows.push(out);
        }
        let mut warnings = Vec::new();
        let table = assemble(declared.clone(), rows, one, &mut warnings)?;
        Ok(Parsed { table, warnings })
    }
}

/// Parses one structured record.
pub fn parse_structured(text: &str) -> Result<Table, IoError> {
    let doc: TableDocument =
        serde_json::from_str(text).map_err(|e| IoError::Structured(e.to_string()))?;
    doc.to_table().map(|p| p.table)
}

/// Parses either format, detected from the first non-blank character.
pub fn parse_any(text: &str) -> Result<Parsed, IoError> {
    if text.trim_start().starts_with('{') {
        let doc: TableDocument =
            serde_json::from_str(text).map_err(|e| IoError::Structured(e.to_string()))?;
        doc.to_table()
    } else {
        parse_table_with_warnings(text)
    }
}

/// Canonical serialization. The structured form is a single line.
pub fn emit_table(table: &Table, format: Format) -> String {
    match format {
        Format::Text => {
            let order = table.display_order();
            let mut s = String::from("elements:");
            for &e in &order {
                s.push(' ');
                s.push_str(table.name(e));
            }
            s.push('\n');
            for &x in &order {
                let row: Vec<&str> = order.iter().map(|&y| table.name(table.op(x, y))).collect();
                s.push_str(&row.join(" "));
                s.push('\n');
            }
            s
        }
        Format::Structured => {
            let mut s =
                serde_json::to_string(&TableDocument::from_table(table)).expect("serializable");
            s.push('\n');
            s
        }
    }
}

/// Writes one newline-delimited structured record.
pub fn write_record<W: Write + ?Sized>(out: &mut W, table: &Table) -> std::io::Result<()> {
    out.write_all(emit_table(table, Format::Structured).as_bytes())
}

/// Reads a newline-delimited stream of structured records.
pub fn read_stream(text: &str) -> Result<Vec<Table>, IoError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            parse_structured(l).map_err(|e| match e {
                IoError::Structured(m) => IoError::Structured(format!("record {}: {m}", i + 1)),
                other => other,
            })
        })
        .collect()
}

/// True iff a bijection fixing 1 carries `t1`'s operation onto `t2`'s.
pub fn are_isomorphic(t1: &Table, t2: &Table) -> Result<bool, IoError> {
    if t1.size() != t2.size() {
        return Err(IoError::SizeMismatch(t1.size(), t2.size()));
    }
    let n = t1.size();
    let mut perm: Vec<Element> = (0..n as Element).collect();
    let mut used = vec![false; n];
    used[n - 1] = true;
    Ok(extend(t1, t2, &mut perm, &mut used, 0))
}

fn consistent(t1: &Table, t2: &Table, perm: &[Element], assigned: &[bool]) -> bool {
    let n = t1.size();
    for x in 0..n {
        if !assigned[x] {
            continue;
        }
        for y in 0..n {
            if !assigned[y] {
                continue;
            }
            let v = t1.op(x as Element, y as Element) as usize;
            if assigned[v] && t2.op(perm[x], perm[y]) != perm[v] {
                return false;
            }
        }
    }
    true
}

fn extend(t1: &Table, t2: &Table, perm: &mut [Element], used: &mut [bool], i: usize) -> bool {
    let n = t1.size();
    let mut assigned = vec![false; n];
    assigned[..i].fill(true);
    assigned[n - 1] = true;
    if !consistent(t1, t2, perm, &assigned) {
        return false;
    }
    if i == n - 1 {
        return true;
    }
    for c in 0..n - 1 {
        if !used[c] {
            used[c] = true;
            perm[i] = c as Element;
            if extend(t1, t2, perm, used, i + 1) {
                return true;
            }
            used[c] = false;
        }
    }
    false
}
