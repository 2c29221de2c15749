//! Finite discrete time-varying graphs built on a single edge primitive:
//! the directed quadruple (origin node, origin instant, destination node,
//! destination instant).
//!
//! The crate covers the graph model itself ([`model`]), sparse matrix forms
//! over temporal nodes ([`algebra`]), lossless importers for snapshot,
//! interval, and contact-style inputs ([`convert`]), reachability and
//! cyclicity queries ([`analysis`]), and plain-text storage ([`io`]).

pub mod algebra;
pub mod analysis;
pub mod convert;
pub mod io;
pub mod model;

pub use model::{
    project, Axis, Companion, DynamicEdge, EdgeClass, EdgeComponent, EdgeKind, ModelError, NodeId,
    Orientation, Partition, TemporalNode, TimeId, Tvg,
};

#[cfg(test)]
pub(crate) mod testutil;
