//! Plain-text storage.
//!
//! The graph format is line oriented. `#` starts a comment, blank lines are
//! skipped, and two markers divide the file:
//!
//! ```text
//! [meta]
//! companion 4 3
//! order numeric
//! time t9          # an instant no edge uses
//! node 7           # a node no edge touches
//! [edges]
//! 0 t0 3 t0
//! 3 t0 0 t0 2.5    # trailing weight, omitted when it is 1
//! ```
//!
//! Only the edges, the disconnected nodes, and the unused instants are
//! stored; connected nodes and used instants are rebuilt from the edge
//! list, so the record count is exactly |E| + |V_N| + |T_N|. Every file
//! must fix the label order one of two ways: `order numeric` reads each
//! label's position from the number it contains (an optional prefix such
//! as `t` is ignored), while `times <l0> <l1> ...` spells the whole order
//! out for labels that carry no usable number. Labels outside the rule in
//! force are errors.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use thiserror::Error;

use crate::algebra::SparseMatrix;
use crate::convert::{CtiInterval, Snapshot, SnapshotSequence};
use crate::model::{DynamicEdge, Tvg};

#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("time label `{label}` has no declared or numeric position")]
    UnorderableLabel { label: String },
    #[error("time labels `{a}` and `{b}` share one numeric position; their order is ambiguous")]
    AmbiguousOrder { a: String, b: String },
    #[error("{message}")]
    Inconsistent { message: String },
}

fn parse_err(line: usize, message: impl Into<String>) -> ReadError {
    ReadError::Parse {
        line,
        message: message.into(),
    }
}

// ---------------------------------------------------------------------------
// storage accounting
// ---------------------------------------------------------------------------

/// Number of records a graph serializes to, by kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageReport {
    /// One per edge.
    pub edge_items: usize,
    /// One per node outside the connected set.
    pub disconnected_node_items: usize,
    /// One per instant outside the used set.
    pub unused_time_items: usize,
    /// Sum of the above; the stored size is linear in it.
    pub total_items: usize,
}

pub fn storage_report(tvg: &Tvg) -> StorageReport {
    let partition = tvg.partition();
    let edge_items = tvg.edge_count();
    let disconnected_node_items = partition.disconnected_nodes.len();
    let unused_time_items = partition.unused_times.len();
    StorageReport {
        edge_items,
        disconnected_node_items,
        unused_time_items,
        total_items: edge_items + disconnected_node_items + unused_time_items,
    }
}

// ---------------------------------------------------------------------------
// graph files
// ---------------------------------------------------------------------------

/// Position encoded in a label: the number after an optional non-numeric
/// prefix. `t12` -> 12, `3.5` -> 3.5, `start` -> none.
fn numeric_key(label: &str) -> Option<f64> {
    let from = label.find(|c: char| c.is_ascii_digit() || c == '+' || c == '-' || c == '.')?;
    let value: f64 = label[from..].parse().ok()?;
    value.is_finite().then_some(value)
}

/// Whether numeric keys alone reproduce this exact label order.
fn numerically_ordered(labels: &[String]) -> bool {
    let mut previous: Option<f64> = None;
    for label in labels {
        let Some(key) = numeric_key(label) else {
            return false;
        };
        if let Some(p) = previous {
            if p >= key {
                return false;
            }
        }
        previous = Some(key);
    }
    true
}

fn edge_line(tvg: &Tvg, edge: &DynamicEdge) -> String {
    let ta = tvg
        .time_label(edge.origin_time)
        .expect("edge instants are in range");
    let tb = tvg
        .time_label(edge.dest_time)
        .expect("edge instants are in range");
    let mut line = format!("{} {} {} {}", edge.origin_node, ta, edge.dest_node, tb);
    if edge.weight != 1.0 {
        line.push_str(&format!(" {}", edge.weight));
    }
    line
}

/// Write a graph. Output is deterministic: meta first (companion, label
/// ordering, unused instants, disconnected nodes), then the edges in
/// insertion order.
pub fn write_tvg<W: Write>(tvg: &Tvg, mut sink: W) -> std::io::Result<()> {
    let partition = tvg.partition();
    writeln!(sink, "[meta]")?;
    writeln!(sink, "companion {} {}", tvg.node_count(), tvg.time_count())?;
    if numerically_ordered(tvg.time_labels()) {
        writeln!(sink, "order numeric")?;
        for time in &partition.unused_times {
            writeln!(
                sink,
                "time {}",
                tvg.time_label(*time)
                    .expect("partition instants are in range")
            )?;
        }
    } else {
        // labels without usable numbers: spell the whole order out
        writeln!(sink, "times {}", tvg.time_labels().join(" "))?;
    }
    for node in &partition.disconnected_nodes {
        writeln!(sink, "node {}", node)?;
    }
    writeln!(sink, "[edges]")?;
    for edge in tvg.edges() {
        writeln!(sink, "{}", edge_line(tvg, edge))?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Meta,
    Edges,
}

struct EdgeLine {
    line: usize,
    origin_node: usize,
    origin_label: String,
    dest_node: usize,
    dest_label: String,
    weight: f64,
}

#[derive(Default)]
struct RawFile {
    companion: Option<(usize, usize, usize)>, // line, nodes, times
    order_numeric: Option<usize>,
    times_decl: Option<(usize, Vec<String>)>,
    time_lines: Vec<(usize, String)>,
    node_lines: Vec<(usize, usize)>,
    edges: Vec<EdgeLine>,
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize, ReadError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, got `{token}`")))
}

fn parse_f64(token: &str, line: usize, what: &str) -> Result<f64, ReadError> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("expected {what}, got `{token}`")))
}

/// Strip the comment and surrounding whitespace; `None` when nothing is
/// left.
fn significant(line: &str) -> Option<&str> {
    let text = line.split('#').next().unwrap_or("").trim();
    (!text.is_empty()).then_some(text)
}

fn scan_tvg<R: BufRead>(source: R) -> Result<RawFile, ReadError> {
    let mut raw = RawFile::default();
    // a file may omit the markers entirely and start with edge lines
    let mut section = Section::Edges;
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let Some(text) = significant(&line) else {
            continue;
        };
        match text {
            "[meta]" => {
                section = Section::Meta;
                continue;
            }
            "[edges]" => {
                section = Section::Edges;
                continue;
            }
            _ => {}
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match section {
            Section::Meta => match tokens[0] {
                "companion" => {
                    if raw.companion.is_some() {
                        return Err(parse_err(line_no, "companion is declared twice"));
                    }
                    if tokens.len() != 3 {
                        return Err(parse_err(line_no, "companion takes two counts"));
                    }
                    let nodes = parse_usize(tokens[1], line_no, "a node count")?;
                    let times = parse_usize(tokens[2], line_no, "an instant count")?;
                    raw.companion = Some((line_no, nodes, times));
                }
                "order" => {
                    if raw.order_numeric.is_some() {
                        return Err(parse_err(line_no, "order is declared twice"));
                    }
                    if tokens.len() != 2 || tokens[1] != "numeric" {
                        return Err(parse_err(
                            line_no,
                            "the only ordering rule is `order numeric`",
                        ));
                    }
                    raw.order_numeric = Some(line_no);
                }
                "times" => {
                    if raw.times_decl.is_some() {
                        return Err(parse_err(line_no, "times is declared twice"));
                    }
                    let labels: Vec<String> = tokens[1..].iter().map(|t| t.to_string()).collect();
                    raw.times_decl = Some((line_no, labels));
                }
                "time" => {
                    if tokens.len() != 2 {
                        return Err(parse_err(line_no, "time takes one label"));
                    }
                    raw.time_lines.push((line_no, tokens[1].to_string()));
                }
                "node" => {
                    if tokens.len() != 2 {
                        return Err(parse_err(line_no, "node takes one id"));
                    }
                    raw.node_lines
                        .push((line_no, parse_usize(tokens[1], line_no, "a node id")?));
                }
                other => {
                    return Err(parse_err(line_no, format!("unknown meta entry `{other}`")));
                }
            },
            Section::Edges => {
                if tokens.len() != 4 && tokens.len() != 5 {
                    return Err(parse_err(
                        line_no,
                        format!(
                            "an edge takes 4 fields plus an optional weight, got {}",
                            tokens.len()
                        ),
                    ));
                }
                let weight = if tokens.len() == 5 {
                    parse_f64(tokens[4], line_no, "a weight")?
                } else {
                    1.0
                };
                raw.edges.push(EdgeLine {
                    line: line_no,
                    origin_node: parse_usize(tokens[0], line_no, "a node id")?,
                    origin_label: tokens[1].to_string(),
                    dest_node: parse_usize(tokens[2], line_no, "a node id")?,
                    dest_label: tokens[3].to_string(),
                    weight,
                });
            }
        }
    }
    Ok(raw)
}

/// Recover the full label order from a scan: declared order when present,
/// numeric order of every mentioned label otherwise.
fn resolve_labels(raw: &RawFile) -> Result<Vec<String>, ReadError> {
    if let Some((decl_line, declared)) = &raw.times_decl {
        if raw.order_numeric.is_some() {
            return Err(ReadError::Inconsistent {
                message: "`order numeric` conflicts with an explicit `times` declaration"
                    .to_string(),
            });
        }
        let mut seen = HashSet::new();
        for label in declared {
            if !seen.insert(label.as_str()) {
                return Err(parse_err(
                    *decl_line,
                    format!("label `{label}` is declared twice"),
                ));
            }
        }
        for (line, label) in &raw.time_lines {
            if !seen.contains(label.as_str()) {
                return Err(parse_err(
                    *line,
                    format!("label `{label}` is not in the times declaration"),
                ));
            }
        }
        for edge in &raw.edges {
            for label in [&edge.origin_label, &edge.dest_label] {
                if !seen.contains(label.as_str()) {
                    return Err(ReadError::UnorderableLabel {
                        label: label.clone(),
                    });
                }
            }
        }
        return Ok(declared.clone());
    }
    if raw.order_numeric.is_none() {
        // without a declared order, labels have no defined positions
        let mentioned = raw
            .time_lines
            .first()
            .map(|(_, label)| label.clone())
            .or_else(|| raw.edges.first().map(|e| e.origin_label.clone()));
        if let Some(label) = mentioned {
            return Err(ReadError::Inconsistent {
                message: format!(
                    "label `{label}` has no position: declare `order numeric` or a `times` list"
                ),
            });
        }
        return Ok(Vec::new());
    }

    // numeric rule: order is the number carried by each label
    let mut labels: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    let mentioned = raw.time_lines.iter().map(|(_, label)| label).chain(
        raw.edges
            .iter()
            .flat_map(|e| [&e.origin_label, &e.dest_label]),
    );
    for label in mentioned {
        if seen.insert(label.clone()) {
            labels.push(label.clone());
        }
    }
    let mut keyed: Vec<(f64, String)> = Vec::with_capacity(labels.len());
    for label in labels {
        let Some(key) = numeric_key(&label) else {
            return Err(ReadError::UnorderableLabel { label });
        };
        keyed.push((key, label));
    }
    keyed.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("keys are finite"));
    for pair in keyed.windows(2) {
        if pair[0].0 == pair[1].0 {
            return Err(ReadError::AmbiguousOrder {
                a: pair[0].1.clone(),
                b: pair[1].1.clone(),
            });
        }
    }
    Ok(keyed.into_iter().map(|(_, label)| label).collect())
}

/// Read a graph written by [`write_tvg`] (or by hand).
pub fn read_tvg<R: BufRead>(source: R) -> Result<Tvg, ReadError> {
    let raw = scan_tvg(source)?;
    let labels = resolve_labels(&raw)?;

    let node_count = match raw.companion {
        Some((line, nodes, times)) => {
            if times != labels.len() {
                return Err(parse_err(
                    line,
                    format!(
                        "companion declares {times} instants but {} labels are known",
                        labels.len()
                    ),
                ));
            }
            for (node_line, id) in &raw.node_lines {
                if *id >= nodes {
                    return Err(parse_err(
                        *node_line,
                        format!("node {id} is out of range: companion declares {nodes} nodes"),
                    ));
                }
            }
            nodes
        }
        None => raw
            .node_lines
            .iter()
            .map(|&(_, id)| id + 1)
            .chain(raw.edges.iter().map(|e| e.origin_node.max(e.dest_node) + 1))
            .max()
            .unwrap_or(0),
    };

    let mut tvg = Tvg::new(node_count, labels).map_err(|e| ReadError::Inconsistent {
        message: e.to_string(),
    })?;
    let position: HashMap<String, usize> = tvg
        .time_labels()
        .iter()
        .enumerate()
        .map(|(i, label)| (label.clone(), i))
        .collect();
    for edge in &raw.edges {
        let ta = position[&edge.origin_label];
        let tb = position[&edge.dest_label];
        tvg.add_edge(
            DynamicEdge::new(edge.origin_node, ta, edge.dest_node, tb).with_weight(edge.weight),
        )
        .map_err(|e| parse_err(edge.line, e.to_string()))?;
    }
    Ok(tvg)
}

// ---------------------------------------------------------------------------
// matrix files
// ---------------------------------------------------------------------------

/// Write a sparse matrix: a `rows cols nnz` header, then one `row col
/// value` line per stored entry in row-major order.
pub fn write_matrix<W: Write>(matrix: &SparseMatrix, mut sink: W) -> std::io::Result<()> {
    writeln!(sink, "{} {} {}", matrix.rows(), matrix.cols(), matrix.nnz())?;
    for (row, col, value) in matrix.entries() {
        writeln!(sink, "{row} {col} {value}")?;
    }
    Ok(())
}

/// Read a sparse matrix written by [`write_matrix`]. The entry count must
/// match the header; entries must be in range, distinct, and non-zero.
pub fn read_matrix<R: BufRead>(source: R) -> Result<SparseMatrix, ReadError> {
    let mut matrix: Option<SparseMatrix> = None;
    let mut expected = 0usize;
    let mut found = 0usize;
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let Some(text) = significant(&line) else {
            continue;
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(parse_err(line_no, "matrix lines take 3 fields"));
        }
        match matrix.as_mut() {
            None => {
                let rows = parse_usize(tokens[0], line_no, "a row count")?;
                let cols = parse_usize(tokens[1], line_no, "a column count")?;
                expected = parse_usize(tokens[2], line_no, "an entry count")?;
                matrix = Some(SparseMatrix::new(rows, cols));
            }
            Some(m) => {
                let row = parse_usize(tokens[0], line_no, "a row index")?;
                let col = parse_usize(tokens[1], line_no, "a column index")?;
                let value = parse_f64(tokens[2], line_no, "a value")?;
                if value == 0.0 {
                    return Err(parse_err(line_no, "zero entries are left out, not stored"));
                }
                if row >= m.rows() || col >= m.cols() {
                    return Err(parse_err(
                        line_no,
                        format!(
                            "entry ({row}, {col}) is out of range for a {}x{} matrix",
                            m.rows(),
                            m.cols()
                        ),
                    ));
                }
                if m.get(row, col) != 0.0 {
                    return Err(parse_err(
                        line_no,
                        format!("duplicate entry ({row}, {col})"),
                    ));
                }
                m.set(row, col, value).expect("bounds were just checked");
                found += 1;
            }
        }
    }
    let Some(matrix) = matrix else {
        return Err(ReadError::Inconsistent {
            message: "matrix file has no header".to_string(),
        });
    };
    if found != expected {
        return Err(ReadError::Inconsistent {
            message: format!("header promises {expected} entries, file has {found}"),
        });
    }
    Ok(matrix)
}

// ---------------------------------------------------------------------------
// model-class input files
// ---------------------------------------------------------------------------

/// Contact/wait input split into its two record kinds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SteInput {
    pub contacts: Vec<(usize, usize, f64)>,
    pub waits: Vec<(usize, f64, f64)>,
}

/// Read a snapshot sequence: `snapshot <label>` headers, each followed by
/// `u v` pair lines. The node count is the largest id mentioned plus one.
pub fn read_snapshots<R: BufRead>(source: R) -> Result<SnapshotSequence, ReadError> {
    let mut snapshots: Vec<Snapshot> = Vec::new();
    let mut node_count = 0usize;
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let Some(text) = significant(&line) else {
            continue;
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens[0] == "snapshot" {
            if tokens.len() != 2 {
                return Err(parse_err(line_no, "snapshot takes one label"));
            }
            snapshots.push(Snapshot {
                label: tokens[1].to_string(),
                pairs: Vec::new(),
            });
            continue;
        }
        if tokens.len() != 2 {
            return Err(parse_err(line_no, "a pair takes 2 node ids"));
        }
        let u = parse_usize(tokens[0], line_no, "a node id")?;
        let v = parse_usize(tokens[1], line_no, "a node id")?;
        let Some(current) = snapshots.last_mut() else {
            return Err(parse_err(
                line_no,
                "pair appears before any snapshot header",
            ));
        };
        current.pairs.push((u, v));
        node_count = node_count.max(u + 1).max(v + 1);
    }
    Ok(SnapshotSequence {
        node_count,
        snapshots,
    })
}

/// Read presence intervals: `u v open close` lines, with an optional
/// trailing `bidir` marking a two-way contact.
pub fn read_cti<R: BufRead>(source: R) -> Result<Vec<CtiInterval>, ReadError> {
    let mut intervals = Vec::new();
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let Some(text) = significant(&line) else {
            continue;
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 4 && tokens.len() != 5 {
            return Err(parse_err(
                line_no,
                "an interval takes 4 fields plus an optional `bidir`",
            ));
        }
        let bidirectional = if tokens.len() == 5 {
            if tokens[4] != "bidir" {
                return Err(parse_err(
                    line_no,
                    format!("expected `bidir`, got `{}`", tokens[4]),
                ));
            }
            true
        } else {
            false
        };
        intervals.push(CtiInterval {
            origin: parse_usize(tokens[0], line_no, "a node id")?,
            dest: parse_usize(tokens[1], line_no, "a node id")?,
            open: parse_f64(tokens[2], line_no, "an open bound")?,
            close: parse_f64(tokens[3], line_no, "a close bound")?,
            bidirectional,
        });
    }
    Ok(intervals)
}

/// Read contact/wait records: `contact u v t` and `wait n from to` lines.
pub fn read_ste<R: BufRead>(source: R) -> Result<SteInput, ReadError> {
    let mut input = SteInput::default();
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let Some(text) = significant(&line) else {
            continue;
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens[0] {
            "contact" => {
                if tokens.len() != 4 {
                    return Err(parse_err(line_no, "contact takes 3 fields"));
                }
                input.contacts.push((
                    parse_usize(tokens[1], line_no, "a node id")?,
                    parse_usize(tokens[2], line_no, "a node id")?,
                    parse_f64(tokens[3], line_no, "a time value")?,
                ));
            }
            "wait" => {
                if tokens.len() != 4 {
                    return Err(parse_err(line_no, "wait takes 3 fields"));
                }
                input.waits.push((
                    parse_usize(tokens[1], line_no, "a node id")?,
                    parse_f64(tokens[2], line_no, "a time value")?,
                    parse_f64(tokens[3], line_no, "a time value")?,
                ));
            }
            other => {
                return Err(parse_err(
                    line_no,
                    format!("expected `contact` or `wait`, got `{other}`"),
                ));
            }
        }
    }
    Ok(input)
}

/// Read raw cross-instant edges: `u from v to` lines with numeric times.
pub fn read_tme<R: BufRead>(source: R) -> Result<Vec<(usize, f64, usize, f64)>, ReadError> {
    let mut edges = Vec::new();
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        let Some(text) = significant(&line) else {
            continue;
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(parse_err(line_no, "an edge takes 4 fields"));
        }
        edges.push((
            parse_usize(tokens[0], line_no, "a node id")?,
            parse_f64(tokens[1], line_no, "a time value")?,
            parse_usize(tokens[2], line_no, "a node id")?,
            parse_f64(tokens[3], line_no, "a time value")?,
        ));
    }
    Ok(edges)
}
