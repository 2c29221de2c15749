//! Lossless importers for the input styles older tooling produces —
//! snapshot sequences, presence intervals, contact/wait lists, and raw
//! instant-pair edges — plus shape-based detection of which of those
//! families a graph could have come from.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::model::{DynamicEdge, EdgeKind, ModelError, Orientation, Tvg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvertError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("time value {0} must be finite")]
    NonFiniteTime(f64),
    #[error("interval ({open}, {close}] is empty: the open bound must come first")]
    EmptyInterval { open: f64, close: f64 },
    #[error("snapshot `{label}` pairs node {node} with itself")]
    SelfLoopPair { label: String, node: usize },
    #[error("contact at {at} connects node {node} to itself")]
    SelfLoopContact { node: usize, at: f64 },
    #[error("wait for node {node} at {at} spans no time")]
    EmptyWait { node: usize, at: f64 },
    #[error("wait for node {node} runs backwards, from {from} to {to}")]
    BackwardWait { node: usize, from: f64, to: f64 },
    #[error("edge ({u}, {at}, {v}, {at}) is spatial; instant-pair inputs carry only cross-instant edges")]
    TmeSpatialEdge { u: usize, v: usize, at: f64 },
    #[error("edge ({node}, {at}, {node}, {at}) is a self-loop; instant-pair inputs carry only cross-instant edges")]
    TmeSelfLoop { node: usize, at: f64 },
    #[error(
        "edge ({u}, {from}, {v}, {to}) runs backwards; instant-pair inputs move forward in time"
    )]
    TmeRegressiveEdge {
        u: usize,
        from: f64,
        v: usize,
        to: f64,
    },
}

/// A static graph per labelled instant: the classic discrete-time input.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSequence {
    pub node_count: usize,
    pub snapshots: Vec<Snapshot>,
}

/// One instant of a [`SnapshotSequence`]: a label and the directed node
/// pairs present at it.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub label: String,
    pub pairs: Vec<(usize, usize)>,
}

/// A presence interval: nodes `origin` and `dest` are in contact over the
/// half-open span `(open, close]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CtiInterval {
    pub origin: usize,
    pub dest: usize,
    pub open: f64,
    pub close: f64,
    pub bidirectional: bool,
}

impl CtiInterval {
    /// Contact holding in both directions (two edges per materialization).
    pub fn bidirectional(origin: usize, dest: usize, open: f64, close: f64) -> Self {
        CtiInterval {
            origin,
            dest,
            open,
            close,
            bidirectional: true,
        }
    }

    /// Contact holding only from `origin` to `dest`.
    pub fn directed(origin: usize, dest: usize, open: f64, close: f64) -> Self {
        CtiInterval {
            origin,
            dest,
            open,
            close,
            bidirectional: false,
        }
    }
}

/// How to materialize presence intervals as edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtiMode {
    /// One forward mixed edge per interval, from its open bound to its
    /// close bound.
    MixedEdges,
    /// A spatial contact at every instant the interval covers.
    Snapshots,
    /// The contacts of [`CtiMode::Snapshots`] plus waiting chains for both
    /// endpoints across the interval's span.
    SpatialTemporal,
}

/// The model families a graph's edge shapes can be checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModelClass {
    /// Contemporaneous contacts only.
    Snapshot,
    /// Presence intervals (any of the three materializations).
    Cti,
    /// Contacts plus forward waits.
    Ste,
    /// Forward cross-instant edges only.
    Tme,
    /// The quadruple form itself; everything fits.
    Unifying,
}

impl std::fmt::Display for ModelClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            ModelClass::Snapshot => "snapshot",
            ModelClass::Cti => "cti",
            ModelClass::Ste => "ste",
            ModelClass::Tme => "tme",
            ModelClass::Unifying => "unifying",
        };
        f.write_str(name)
    }
}

// ---------------------------------------------------------------------------
// importers
// ---------------------------------------------------------------------------

/// Import a snapshot sequence: instants are the snapshot labels in order,
/// every listed pair becomes one spatial edge at its instant. Repeated
/// pairs within a snapshot collapse (pairs form a set).
pub fn from_snapshots(input: &SnapshotSequence) -> Result<Tvg, ConvertError> {
    let mut tvg = Tvg::new(
        input.node_count,
        input.snapshots.iter().map(|s| s.label.clone()),
    )?;
    for (t, snapshot) in input.snapshots.iter().enumerate() {
        for &(u, v) in &snapshot.pairs {
            if u == v {
                return Err(ConvertError::SelfLoopPair {
                    label: snapshot.label.clone(),
                    node: u,
                });
            }
            let edge = DynamicEdge::new(u, t, v, t);
            if !tvg.contains_edge(&edge) {
                tvg.add_edge(edge)?;
            }
        }
    }
    Ok(tvg)
}

/// Copy of the graph with a waiting edge (n, t, n, t+1) for every node and
/// every consecutive pair of instants, wherever one is not already present.
/// This spells out the "nodes persist between snapshots" assumption that
/// snapshot sequences leave implicit.
pub fn add_waiting_edges(tvg: &Tvg) -> Tvg {
    let mut out = tvg.clone();
    for node in 0..tvg.node_count() {
        for t in 1..tvg.time_count() {
            let edge = DynamicEdge::new(node, t - 1, node, t);
            if !out.contains_edge(&edge) {
                out.add_edge(edge)
                    .expect("waiting edges are in range and checked for presence");
            }
        }
    }
    out
}

/// Normalize so that -0.0 and 0.0 share one bit pattern and therefore one
/// label.
fn canon(value: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value
    }
}

/// Sorted distinct time values plus a value -> index lookup.
fn time_axis(values: impl IntoIterator<Item = f64>) -> (Vec<f64>, HashMap<u64, usize>) {
    let mut sorted: Vec<f64> = values.into_iter().map(canon).collect();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("time values are finite"));
    sorted.dedup();
    let index = sorted
        .iter()
        .enumerate()
        .map(|(i, v)| (v.to_bits(), i))
        .collect();
    (sorted, index)
}

fn add_if_absent(tvg: &mut Tvg, edge: DynamicEdge) {
    if !tvg.contains_edge(&edge) {
        tvg.add_edge(edge)
            .expect("importer edges are in range with weight 1");
    }
}

/// Import presence intervals. The instants are the sorted distinct interval
/// bounds, labelled by their numeric value; an interval covers the instants
/// strictly after its open bound up to and including its close bound.
pub fn from_cti(intervals: &[CtiInterval], mode: CtiMode) -> Result<Tvg, ConvertError> {
    for interval in intervals {
        for bound in [interval.open, interval.close] {
            if !bound.is_finite() {
                return Err(ConvertError::NonFiniteTime(bound));
            }
        }
        if interval.open >= interval.close {
            return Err(ConvertError::EmptyInterval {
                open: interval.open,
                close: interval.close,
            });
        }
    }

    let (values, index) = time_axis(intervals.iter().flat_map(|iv| [iv.open, iv.close]));
    let node_count = intervals
        .iter()
        .map(|iv| iv.origin.max(iv.dest) + 1)
        .max()
        .unwrap_or(0);
    let mut tvg = Tvg::new(node_count, values.iter().map(|v| format!("{v}")))
        .expect("distinct finite values render to distinct tokens");

    for interval in intervals {
        let open = index[&canon(interval.open).to_bits()];
        let close = index[&canon(interval.close).to_bits()];
        let (u, v) = (interval.origin, interval.dest);
        match mode {
            CtiMode::MixedEdges => {
                add_if_absent(&mut tvg, DynamicEdge::new(u, open, v, close));
                if interval.bidirectional {
                    add_if_absent(&mut tvg, DynamicEdge::new(v, open, u, close));
                }
            }
            CtiMode::Snapshots => {
                add_covered_contacts(&mut tvg, interval, open, close);
            }
            CtiMode::SpatialTemporal => {
                add_covered_contacts(&mut tvg, interval, open, close);
                // waiting chains span the whole interval, open bound
                // included, so interval-granularity connectivity survives
                for t in open..close {
                    add_if_absent(&mut tvg, DynamicEdge::new(u, t, u, t + 1));
                    add_if_absent(&mut tvg, DynamicEdge::new(v, t, v, t + 1));
                }
            }
        }
    }
    Ok(tvg)
}

fn add_covered_contacts(tvg: &mut Tvg, interval: &CtiInterval, open: usize, close: usize) {
    for t in open + 1..=close {
        add_if_absent(tvg, DynamicEdge::new(interval.origin, t, interval.dest, t));
        if interval.bidirectional {
            add_if_absent(tvg, DynamicEdge::new(interval.dest, t, interval.origin, t));
        }
    }
}

/// Import contact/wait lists: a contact (u, v, t) becomes a spatial edge at
/// t, a wait (n, from, to) becomes a forward temporal edge. Instants are
/// the sorted distinct time values mentioned.
pub fn from_ste(
    contacts: &[(usize, usize, f64)],
    waits: &[(usize, f64, f64)],
) -> Result<Tvg, ConvertError> {
    for &(u, v, t) in contacts {
        if !t.is_finite() {
            return Err(ConvertError::NonFiniteTime(t));
        }
        if u == v {
            return Err(ConvertError::SelfLoopContact { node: u, at: t });
        }
    }
    for &(node, from, to) in waits {
        for value in [from, to] {
            if !value.is_finite() {
                return Err(ConvertError::NonFiniteTime(value));
            }
        }
        if from == to {
            return Err(ConvertError::EmptyWait { node, at: from });
        }
        if from > to {
            return Err(ConvertError::BackwardWait { node, from, to });
        }
    }

    let (values, index) = time_axis(
        contacts
            .iter()
            .map(|&(_, _, t)| t)
            .chain(waits.iter().flat_map(|&(_, from, to)| [from, to])),
    );
    let node_count = contacts
        .iter()
        .map(|&(u, v, _)| u.max(v) + 1)
        .chain(waits.iter().map(|&(n, _, _)| n + 1))
        .max()
        .unwrap_or(0);
    let mut tvg = Tvg::new(node_count, values.iter().map(|v| format!("{v}")))
        .expect("distinct finite values render to distinct tokens");

    for &(u, v, t) in contacts {
        let t = index[&canon(t).to_bits()];
        add_if_absent(&mut tvg, DynamicEdge::new(u, t, v, t));
    }
    for &(node, from, to) in waits {
        let from = index[&canon(from).to_bits()];
        let to = index[&canon(to).to_bits()];
        add_if_absent(&mut tvg, DynamicEdge::new(node, from, node, to));
    }
    Ok(tvg)
}

/// Import raw cross-instant edges (u, from, v, to). Contemporaneous or
/// backward quadruples are rejected: this input family only connects
/// distinct instants moving forward.
pub fn from_tme(edges: &[(usize, f64, usize, f64)]) -> Result<Tvg, ConvertError> {
    for &(u, from, v, to) in edges {
        for value in [from, to] {
            if !value.is_finite() {
                return Err(ConvertError::NonFiniteTime(value));
            }
        }
        if from == to {
            if u == v {
                return Err(ConvertError::TmeSelfLoop { node: u, at: from });
            }
            return Err(ConvertError::TmeSpatialEdge { u, v, at: from });
        }
        if from > to {
            return Err(ConvertError::TmeRegressiveEdge { u, from, v, to });
        }
    }

    let (values, index) = time_axis(edges.iter().flat_map(|&(_, from, _, to)| [from, to]));
    let node_count = edges
        .iter()
        .map(|&(u, _, v, _)| u.max(v) + 1)
        .max()
        .unwrap_or(0);
    let mut tvg = Tvg::new(node_count, values.iter().map(|v| format!("{v}")))
        .expect("distinct finite values render to distinct tokens");

    for &(u, from, v, to) in edges {
        let from = index[&canon(from).to_bits()];
        let to = index[&canon(to).to_bits()];
        add_if_absent(&mut tvg, DynamicEdge::new(u, from, v, to));
    }
    Ok(tvg)
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

/// Which model families could have produced this graph, judged by edge
/// shape alone. Snapshot form allows only contemporaneous contacts;
/// contact/wait form adds forward waits; instant-pair form uses only
/// forward cross-instant edges; interval form shows up either as one
/// forward mixed edge per interval or as its discretized contact form.
/// Backward edges rule out every prior family, so such graphs detect as
/// quadruple-form only. The quadruple form always applies.
pub fn detect_class(tvg: &Tvg) -> BTreeSet<ModelClass> {
    let classes: Vec<_> = tvg.edges().iter().map(|e| e.classify()).collect();
    let all_spatial = classes.iter().all(|c| c.kind == EdgeKind::Spatial);
    let forward_only = classes
        .iter()
        .all(|c| c.orientation != Orientation::Regressive);
    let all_forward_mixed = classes
        .iter()
        .all(|c| c.kind == EdgeKind::Mixed && c.orientation == Orientation::Progressive);

    let mut found = BTreeSet::from([ModelClass::Unifying]);
    if all_spatial {
        found.insert(ModelClass::Snapshot);
    }
    if forward_only
        && classes
            .iter()
            .all(|c| matches!(c.kind, EdgeKind::Spatial | EdgeKind::Temporal))
    {
        found.insert(ModelClass::Ste);
    }
    if forward_only
        && classes
            .iter()
            .all(|c| matches!(c.kind, EdgeKind::Temporal | EdgeKind::Mixed))
    {
        found.insert(ModelClass::Tme);
    }
    if all_spatial || all_forward_mixed {
        found.insert(ModelClass::Cti);
    }
    found
}

/// Whether models of class `by` can express every graph of class `target`.
///
/// The full relation:
///
/// | by \ target | snapshot | cti | ste | tme | unifying |
/// |-------------|----------|-----|-----|-----|----------|
/// | snapshot    | yes      | yes | -   | -   | -        |
/// | cti         | yes      | yes | yes | -   | -        |
/// | ste         | yes      | yes | yes | -   | -        |
/// | tme         | -        | yes | -   | yes | -        |
/// | unifying    | yes      | yes | yes | yes | yes      |
pub fn can_represent(by: ModelClass, target: ModelClass) -> bool {
    use ModelClass::*;
    matches!(
        (by, target),
        (Unifying, _)
            | (Snapshot, Snapshot | Cti)
            | (Cti, Snapshot | Cti | Ste)
            | (Ste, Snapshot | Cti | Ste)
            | (Tme, Cti | Tme)
    )
}
