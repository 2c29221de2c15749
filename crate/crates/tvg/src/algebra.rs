//! Sparse matrix forms over temporal nodes.
//!
//! Flattening maps a temporal node (v, t) to the flat index
//! `t * |V| + v`: instants become contiguous blocks of |V| indices, so a
//! square matrix over flat indices decomposes into a |T| x |T| grid of
//! |V| x |V| blocks. The adjacency form is exactly invertible ([`refold`]);
//! the incidence form records edge endpoints column by column.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::model::{Companion, DynamicEdge, EdgeKind, TemporalNode, Tvg};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("temporal node ({node}, {time}) is out of range for companion ({nodes}, {times})")]
    TemporalNodeOutOfRange {
        node: usize,
        time: usize,
        nodes: usize,
        times: usize,
    },
    #[error("flat index {index} is out of range: companion has {count} temporal nodes")]
    FlatIndexOutOfRange { index: usize, count: usize },
    #[error("matrix is {rows}x{cols} but companion ({nodes}, {times}) needs {side}x{side}")]
    DimensionMismatch {
        rows: usize,
        cols: usize,
        nodes: usize,
        times: usize,
        side: usize,
    },
    #[error("entry ({row}, {col}) is out of range for a {rows}x{cols} matrix")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },
    #[error("explicit zero entry at ({row}, {col}); absent coordinates encode zero")]
    ZeroEntry { row: usize, col: usize },
    #[error("self-loop edge ({0}) has no incidence column: its endpoints coincide")]
    SelfLoopEdge(DynamicEdge),
    #[error("edge order must be a permutation of the edge set")]
    InvalidEdgeOrder,
}

/// Coordinate-listed sparse matrix. Only non-zero entries are stored; at
/// most one entry per coordinate. Entries iterate in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), f64>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    /// Build from (row, col, value) triples; coordinates must be in range,
    /// distinct, and non-zero.
    pub fn from_triples(
        rows: usize,
        cols: usize,
        triples: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self, AlgebraError> {
        let mut m = SparseMatrix::new(rows, cols);
        for (row, col, value) in triples {
            if value == 0.0 {
                return Err(AlgebraError::ZeroEntry { row, col });
            }
            m.check_bounds(row, col)?;
            if m.entries.insert((row, col), value).is_some() {
                return Err(AlgebraError::DuplicateEntry { row, col });
            }
        }
        Ok(m)
    }

    fn check_bounds(&self, row: usize, col: usize) -> Result<(), AlgebraError> {
        if row >= self.rows || col >= self.cols {
            return Err(AlgebraError::EntryOutOfRange {
                row,
                col,
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Set one coordinate; a zero value clears it.
    pub fn set(&mut self, row: usize, col: usize, value: f64) -> Result<(), AlgebraError> {
        self.check_bounds(row, col)?;
        if value == 0.0 {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
        Ok(())
    }

    /// Value at a coordinate, zero when absent.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries.get(&(row, col)).copied().unwrap_or(0.0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of stored (non-zero) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Stored entries as (row, col, value), row-major.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }
}

/// Flat index of a temporal node under the given companion.
pub fn temporal_index(tn: TemporalNode, companion: Companion) -> Result<usize, AlgebraError> {
    if tn.node.0 >= companion.nodes || tn.time.0 >= companion.times {
        return Err(AlgebraError::TemporalNodeOutOfRange {
            node: tn.node.0,
            time: tn.time.0,
            nodes: companion.nodes,
            times: companion.times,
        });
    }
    Ok(tn.time.0 * companion.nodes + tn.node.0)
}

/// Inverse of [`temporal_index`].
pub fn temporal_node_at(index: usize, companion: Companion) -> Result<TemporalNode, AlgebraError> {
    let count = companion.temporal_node_count();
    if index >= count {
        return Err(AlgebraError::FlatIndexOutOfRange { index, count });
    }
    Ok(TemporalNode::new(
        index % companion.nodes,
        index / companion.nodes,
    ))
}

/// Square adjacency matrix over flat temporal-node indices: one entry per
/// edge, holding its weight, at (origin index, destination index).
pub fn adjacency_matrix(tvg: &Tvg) -> SparseMatrix {
    let companion = tvg.companion();
    let side = companion.temporal_node_count();
    let mut m = SparseMatrix::new(side, side);
    for edge in tvg.edges() {
        let row = temporal_index(
            TemporalNode::new(edge.origin_node, edge.origin_time),
            companion,
        )
        .expect("edge components are validated on insertion");
        let col = temporal_index(TemporalNode::new(edge.dest_node, edge.dest_time), companion)
            .expect("edge components are validated on insertion");
        m.set(row, col, edge.weight)
            .expect("flat indices fit the matrix; quadruples are unique");
    }
    m
}

/// Rebuild a graph from a square matrix over flat indices. Instants get
/// generated labels `t0..`. Together with [`adjacency_matrix`] this is an
/// exact inverse on edge sets and weights.
pub fn refold(m: &SparseMatrix, companion: Companion) -> Result<Tvg, AlgebraError> {
    let side = companion.temporal_node_count();
    if m.rows() != side || m.cols() != side {
        return Err(AlgebraError::DimensionMismatch {
            rows: m.rows(),
            cols: m.cols(),
            nodes: companion.nodes,
            times: companion.times,
            side,
        });
    }
    let mut tvg = Tvg::new(
        companion.nodes,
        (0..companion.times).map(|i| format!("t{i}")),
    )
    .expect("generated labels are distinct tokens");
    for (row, col, value) in m.entries() {
        let origin = temporal_node_at(row, companion)?;
        let dest = temporal_node_at(col, companion)?;
        tvg.add_edge(
            DynamicEdge::new(origin.node, origin.time, dest.node, dest.time).with_weight(value),
        )
        .expect("distinct coordinates give distinct in-range quadruples");
    }
    Ok(tvg)
}

/// Column order used by [`incidence_matrix`]: edges that cross instants
/// (temporal, mixed) first, then contemporaneous ones, each group in
/// insertion order.
pub fn default_edge_order(tvg: &Tvg) -> Vec<DynamicEdge> {
    let mut order: Vec<DynamicEdge> = Vec::with_capacity(tvg.edge_count());
    for edge in tvg.edges() {
        if matches!(edge.classify().kind, EdgeKind::Temporal | EdgeKind::Mixed) {
            order.push(*edge);
        }
    }
    for edge in tvg.edges() {
        if !matches!(edge.classify().kind, EdgeKind::Temporal | EdgeKind::Mixed) {
            order.push(*edge);
        }
    }
    order
}

/// Incidence matrix with the default column order: (|V||T|) rows, one
/// column per edge holding -1 at the origin's flat index and +1 at the
/// destination's. Self-loop edges have no such column and are rejected.
pub fn incidence_matrix(tvg: &Tvg) -> Result<SparseMatrix, AlgebraError> {
    build_incidence(tvg, &default_edge_order(tvg))
}

/// Incidence matrix with caller-chosen column order; `order` must be a
/// permutation of the edge set.
pub fn incidence_matrix_with_order(
    tvg: &Tvg,
    order: &[DynamicEdge],
) -> Result<SparseMatrix, AlgebraError> {
    if order.len() != tvg.edge_count() {
        return Err(AlgebraError::InvalidEdgeOrder);
    }
    let mut seen = HashSet::new();
    for edge in order {
        if !tvg.contains_edge(edge) || !seen.insert(edge.quadruple()) {
            return Err(AlgebraError::InvalidEdgeOrder);
        }
    }
    build_incidence(tvg, order)
}

fn build_incidence(tvg: &Tvg, order: &[DynamicEdge]) -> Result<SparseMatrix, AlgebraError> {
    let companion = tvg.companion();
    let mut m = SparseMatrix::new(companion.temporal_node_count(), order.len());
    for (col, edge) in order.iter().enumerate() {
        if edge.classify().kind == EdgeKind::SelfLoop {
            return Err(AlgebraError::SelfLoopEdge(*edge));
        }
        let origin = temporal_index(
            TemporalNode::new(edge.origin_node, edge.origin_time),
            companion,
        )
        .expect("edge components are validated on insertion");
        let dest = temporal_index(TemporalNode::new(edge.dest_node, edge.dest_time), companion)
            .expect("edge components are validated on insertion");
        m.set(origin, col, -1.0).expect("row and column in range");
        m.set(dest, col, 1.0).expect("row and column in range");
    }
    Ok(m)
}

/// Non-zero counts of a square flat-index matrix relative to its |V| x |V|
/// block grid: the diagonal holds contemporaneous entries, everything above
/// it progressive ones, everything below regressive ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    /// Entries in diagonal blocks (origin and destination instant equal).
    pub spatial_nnz: usize,
    /// Entries above the block diagonal (destination instant later).
    pub progressive_nnz: usize,
    /// Entries below the block diagonal (destination instant earlier).
    pub regressive_nnz: usize,
    /// Per-block counts, indexed `[origin instant][destination instant]`.
    pub block_counts: Vec<Vec<usize>>,
}

/// Count matrix entries by block position. The matrix must be square with
/// side |V| * |T|.
pub fn block_report(m: &SparseMatrix, companion: Companion) -> Result<BlockReport, AlgebraError> {
    let side = companion.temporal_node_count();
    if m.rows() != side || m.cols() != side {
        return Err(AlgebraError::DimensionMismatch {
            rows: m.rows(),
            cols: m.cols(),
            nodes: companion.nodes,
            times: companion.times,
            side,
        });
    }
    let mut report = BlockReport {
        spatial_nnz: 0,
        progressive_nnz: 0,
        regressive_nnz: 0,
        block_counts: vec![vec![0; companion.times]; companion.times],
    };
    for (row, col, _) in m.entries() {
        let block_row = row / companion.nodes;
        let block_col = col / companion.nodes;
        report.block_counts[block_row][block_col] += 1;
        match block_col.cmp(&block_row) {
            std::cmp::Ordering::Equal => report.spatial_nnz += 1,
            std::cmp::Ordering::Greater => report.progressive_nnz += 1,
            std::cmp::Ordering::Less => report.regressive_nnz += 1,
        }
    }
    Ok(report)
}
