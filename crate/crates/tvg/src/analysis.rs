//! Connectivity queries on the static digraph a time-varying graph folds
//! into: vertices are flat temporal-node indices, arcs are the edges.
//! Reachability and cyclicity are plain digraph questions here; no
//! time-respecting path machinery is needed.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::algebra::{temporal_index, temporal_node_at};
use crate::model::{EdgeKind, Orientation, TemporalNode, Tvg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("source ({node}, {time}) is out of range for companion ({nodes}, {times})")]
    SourceOutOfRange {
        node: usize,
        time: usize,
        nodes: usize,
        times: usize,
    },
}

/// Ordinary directed graph over flat temporal-node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct StaticDigraph {
    /// |V| * |T| of the source graph.
    pub vertex_count: usize,
    /// One arc per edge: (origin flat index, destination flat index, weight).
    pub arcs: Vec<(usize, usize, f64)>,
}

/// Fold a graph into its static digraph. Arcs keep edge insertion order.
pub fn to_static_digraph(tvg: &Tvg) -> StaticDigraph {
    let companion = tvg.companion();
    let arcs = tvg
        .edges()
        .iter()
        .map(|e| {
            let from = temporal_index(TemporalNode::new(e.origin_node, e.origin_time), companion)
                .expect("edge components are validated on insertion");
            let to = temporal_index(TemporalNode::new(e.dest_node, e.dest_time), companion)
                .expect("edge components are validated on insertion");
            (from, to, e.weight)
        })
        .collect();
    StaticDigraph {
        vertex_count: companion.temporal_node_count(),
        arcs,
    }
}

/// Temporal nodes reachable from a source by following edges forward.
/// The source is always included (the empty path reaches it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    pub source: TemporalNode,
    pub reached: BTreeSet<TemporalNode>,
}

/// Breadth-first reachability from one temporal node.
pub fn reachable(tvg: &Tvg, source: TemporalNode) -> Result<ReachSet, AnalysisError> {
    let companion = tvg.companion();
    let start = temporal_index(source, companion).map_err(|_| AnalysisError::SourceOutOfRange {
        node: source.node.0,
        time: source.time.0,
        nodes: companion.nodes,
        times: companion.times,
    })?;

    let digraph = to_static_digraph(tvg);
    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(from, to, _) in &digraph.arcs {
        out.entry(from).or_default().push(to);
    }

    let mut seen = BTreeSet::new();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        if let Some(next) = out.get(&v) {
            for &w in next {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }

    let reached = seen
        .into_iter()
        .map(|i| temporal_node_at(i, companion).expect("indices come from in-range arcs"))
        .collect();
    Ok(ReachSet { source, reached })
}

/// Whether any edge runs backwards in time.
pub fn has_regressive(tvg: &Tvg) -> bool {
    tvg.edges()
        .iter()
        .any(|e| e.classify().orientation == Orientation::Regressive)
}

/// Whether the static digraph contains a directed cycle. Both directions of
/// an undirected contact count: a bidirectional spatial pair is a 2-cycle.
pub fn is_cyclic(tvg: &Tvg) -> bool {
    let digraph = to_static_digraph(tvg);
    let mut out: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(from, to, _) in &digraph.arcs {
        out.entry(from).or_default().push(to);
    }
    has_cycle(&out)
}

/// Like [`is_cyclic`], but the 2-cycles formed by the two directions of a
/// bidirectional spatial contact are not counted as cycles. Any other cycle
/// (longer ones through contacts included) still is.
pub fn is_cyclic_ignoring_spatial_pairs(tvg: &Tvg) -> bool {
    let companion = tvg.companion();
    let edges = tvg.edges();

    // arc endpoints as flat indices, plus a lookup from endpoint pair to
    // arc id for partner detection
    let mut ends = Vec::with_capacity(edges.len());
    let mut by_ends = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        let from = temporal_index(TemporalNode::new(e.origin_node, e.origin_time), companion)
            .expect("edge components are validated on insertion");
        let to = temporal_index(TemporalNode::new(e.dest_node, e.dest_time), companion)
            .expect("edge components are validated on insertion");
        ends.push((from, to));
        by_ends.insert((from, to), i);
    }

    // partner[i] = the reverse arc of a spatial contact, when both
    // directions are present
    let partner: Vec<Option<usize>> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.classify().kind != EdgeKind::Spatial {
                return None;
            }
            let (from, to) = ends[i];
            by_ends
                .get(&(to, from))
                .filter(|&&j| edges[j].classify().kind == EdgeKind::Spatial)
                .copied()
        })
        .collect();

    // walk arc-to-arc; a closed walk that never immediately doubles back
    // over a paired contact is a real cycle
    let mut arcs_from: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &(from, _)) in ends.iter().enumerate() {
        arcs_from.entry(from).or_default().push(i);
    }
    let successors: Vec<Vec<usize>> = ends
        .iter()
        .enumerate()
        .map(|(i, &(_, to))| {
            arcs_from
                .get(&to)
                .map(|candidates| {
                    candidates
                        .iter()
                        .copied()
                        .filter(|&j| partner[i] != Some(j))
                        .collect()
                })
                .unwrap_or_default()
        })
        .collect();

    let adjacency: HashMap<usize, Vec<usize>> = successors
        .iter()
        .enumerate()
        .map(|(i, next)| (i, next.clone()))
        .collect();
    has_cycle(&adjacency)
}

/// Three-colour depth-first cycle search over an adjacency map.
fn has_cycle(out: &HashMap<usize, Vec<usize>>) -> bool {
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let mut color: HashMap<usize, u8> = HashMap::new();
    let empty: Vec<usize> = Vec::new();

    let mut roots: Vec<usize> = out.keys().copied().collect();
    roots.sort_unstable();
    for root in roots {
        if color.contains_key(&root) {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color.insert(root, GRAY);
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            let next = out.get(&v).unwrap_or(&empty);
            if i < next.len() {
                top.1 += 1;
                let w = next[i];
                match color.get(&w).copied() {
                    Some(GRAY) => return true,
                    Some(_) => {}
                    None => {
                        color.insert(w, GRAY);
                        stack.push((w, 0));
                    }
                }
            } else {
                color.insert(v, BLACK);
                stack.pop();
            }
        }
    }
    false
}
