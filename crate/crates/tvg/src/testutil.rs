//! Small fixtures shared by the unit tests.

use crate::model::{DynamicEdge, Tvg};

/// The 4-node, 3-instant worked example used throughout the tests: every
/// node waits across both gaps (8 temporal edges) and four undirected
/// contacts appear as 8 directed spatial edges.
pub fn tvg_w() -> Tvg {
    let mut tvg = Tvg::new(4, ["t0", "t1", "t2"]).unwrap();
    // waiting edges, one pair per node
    for node in 0..4 {
        tvg.add_edge(DynamicEdge::new(node, 0, node, 1)).unwrap();
        tvg.add_edge(DynamicEdge::new(node, 1, node, 2)).unwrap();
    }
    // contacts: 0-1, 1-2, 0-3 at the first instant, 1-3 at the last
    for (u, v, t) in [(0, 1, 0), (1, 2, 0), (0, 3, 0), (1, 3, 2)] {
        tvg.add_edge(DynamicEdge::new(u, t, v, t)).unwrap();
        tvg.add_edge(DynamicEdge::new(v, t, u, t)).unwrap();
    }
    tvg
}
