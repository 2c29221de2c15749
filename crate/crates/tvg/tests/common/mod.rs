#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;

use rand::rngs::StdRng;
use rand::Rng;

use tvg::algebra::temporal_index;
use tvg::{DynamicEdge, NodeId, TemporalNode, TimeId, Tvg};

pub fn load_w() -> Tvg {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/w.tvg");
    let file = File::open(path).expect("checked-in data file opens");
    tvg::io::read_tvg(BufReader::new(file)).expect("checked-in data file parses")
}

/// A generated graph plus the node/instant usage recorded while building
/// it, kept independently of anything the library computes.
pub struct GeneratedTvg {
    pub tvg: Tvg,
    pub touched_nodes: BTreeSet<NodeId>,
    pub touched_times: BTreeSet<TimeId>,
}

fn alpha_label(i: usize) -> String {
    let mut i = i + 1;
    let mut out = String::new();
    while i > 0 {
        i -= 1;
        out.insert(0, (b'a' + (i % 26) as u8) as char);
        i /= 26;
    }
    out
}

pub fn random_tvg(
    rng: &mut StdRng,
    max_nodes: usize,
    max_times: usize,
    max_edges: usize,
) -> GeneratedTvg {
    let node_count = rng.gen_range(1..=max_nodes);
    let time_count = rng.gen_range(1..=max_times);
    // mostly numeric labels, sometimes purely alphabetic ones
    let labels: Vec<String> = if rng.gen_range(0..4) == 3 {
        (0..time_count).map(alpha_label).collect()
    } else {
        (0..time_count).map(|i| format!("t{i}")).collect()
    };
    let mut tvg = Tvg::new(node_count, labels).expect("generated labels are valid");
    let mut touched_nodes = BTreeSet::new();
    let mut touched_times = BTreeSet::new();
    let attempts = rng.gen_range(0..=max_edges);
    for _ in 0..attempts {
        let u = rng.gen_range(0..node_count);
        let ta = rng.gen_range(0..time_count);
        let v = rng.gen_range(0..node_count);
        let tb = rng.gen_range(0..time_count);
        // halves stay exact through text and matrix round trips
        let weight = if rng.gen_bool(0.3) {
            rng.gen_range(1..=8) as f64 / 2.0
        } else {
            1.0
        };
        let edge = DynamicEdge::new(u, ta, v, tb).with_weight(weight);
        if tvg.contains_edge(&edge) {
            continue;
        }
        tvg.add_edge(edge).expect("fresh in-range edge");
        touched_nodes.insert(NodeId(u));
        touched_nodes.insert(NodeId(v));
        touched_times.insert(TimeId(ta));
        touched_times.insert(TimeId(tb));
    }
    GeneratedTvg {
        tvg,
        touched_nodes,
        touched_times,
    }
}

/// Edge set keyed by quadruple and exact weight bits, for order-free
/// comparison.
pub fn edge_set(tvg: &Tvg) -> BTreeSet<(usize, usize, usize, usize, u64)> {
    tvg.edges()
        .iter()
        .map(|e| {
            (
                e.origin_node.0,
                e.origin_time.0,
                e.dest_node.0,
                e.dest_time.0,
                e.weight.to_bits(),
            )
        })
        .collect()
}

/// Reachability by repeated squaring of the boolean one-step matrix with
/// the diagonal set — an oracle independent of the library's search.
pub fn closure_reach(tvg: &Tvg, source: TemporalNode) -> BTreeSet<TemporalNode> {
    let companion = tvg.companion();
    let n = companion.temporal_node_count();
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in tvg.edges() {
        let a = temporal_index(TemporalNode::new(e.origin_node, e.origin_time), companion)
            .expect("edge endpoints are in range");
        let b = temporal_index(TemporalNode::new(e.dest_node, e.dest_time), companion)
            .expect("edge endpoints are in range");
        r[a][b] = true;
    }
    let mut steps = 1usize;
    while steps < n {
        let mut next = vec![vec![false; n]; n];
        for (next_row, r_row) in next.iter_mut().zip(&r) {
            for (hop_row, &step) in r.iter().zip(r_row) {
                if step {
                    for (cell, &hop) in next_row.iter_mut().zip(hop_row) {
                        *cell = *cell || hop;
                    }
                }
            }
        }
        r = next;
        steps *= 2;
    }
    let src = temporal_index(source, companion).expect("source is in range");
    (0..n)
        .filter(|&j| r[src][j])
        .map(|j| tvg::algebra::temporal_node_at(j, companion).expect("index is in range"))
        .collect()
}

/// Coefficient of determination of the least-squares line through the
/// points.
pub fn linear_r2(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    1.0 - ss_res / ss_tot
}
