//! One test per release gate, each printing a single PASS line.
//! Run with `cargo test -p tvg --test acceptance -- --nocapture`.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{closure_reach, edge_set, linear_r2, load_w, random_tvg};
use tvg::algebra::{adjacency_matrix, block_report, incidence_matrix, refold};
use tvg::analysis::{reachable, to_static_digraph};
use tvg::convert::{
    can_represent, detect_class, from_cti, from_snapshots, from_ste, from_tme, CtiInterval,
    CtiMode, ModelClass, Snapshot, SnapshotSequence,
};
use tvg::io::{read_tvg, storage_report, write_tvg};
use tvg::{DynamicEdge, NodeId, TemporalNode, TimeId, Tvg};

#[test]
fn criterion_1_adjacency_form_of_the_worked_example() {
    let started = Instant::now();
    let w = load_w();
    let m = adjacency_matrix(&w);
    assert_eq!((m.rows(), m.cols()), (12, 12));
    assert_eq!(m.rows() * m.cols(), 144);
    assert_eq!(m.nnz(), 16);
    let blocks = block_report(&m, w.companion()).unwrap();
    assert_eq!(blocks.spatial_nnz, 8);
    assert_eq!(blocks.progressive_nnz, 8);
    assert_eq!(blocks.regressive_nnz, 0);
    assert_eq!(blocks.block_counts[0][1], 4);
    assert_eq!(blocks.block_counts[1][2], 4);
    let grid_total: usize = blocks.block_counts.iter().flatten().sum();
    assert_eq!(grid_total, m.nnz());
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "took {elapsed:?}, budget is 1s"
    );
    println!(
        "PASS criterion 1: adjacency form is 12x12 with 16 stored entries, blocks 8/8/0, in {elapsed:?}"
    );
}

#[test]
fn criterion_2_incidence_form_of_the_worked_example() {
    let w = load_w();
    let n = incidence_matrix(&w).unwrap();
    assert_eq!((n.rows(), n.cols()), (12, 16));
    let logical = n.rows() * n.cols();
    assert_eq!(logical, 192);
    let minus: usize = n.entries().filter(|&(_, _, v)| v == -1.0).count();
    let plus: usize = n.entries().filter(|&(_, _, v)| v == 1.0).count();
    assert_eq!(minus, 16);
    assert_eq!(plus, 16);
    assert_eq!(n.nnz(), 32);
    assert_eq!(logical - n.nnz(), 160);
    println!(
        "PASS criterion 2: incidence form is 12x16 with 160 zeros, 16 entries of -1 and 16 of +1"
    );
}

#[test]
fn criterion_3_partition_and_file_round_trip_on_random_graphs() {
    let mut rng = StdRng::seed_from_u64(3);
    for round in 0..1000 {
        let g = random_tvg(&mut rng, 20, 10, 200);
        let p = g.tvg.partition();
        assert_eq!(p.connected_nodes, g.touched_nodes, "round {round}");
        assert_eq!(p.used_times, g.touched_times, "round {round}");
        let idle_nodes: BTreeSet<NodeId> = (0..g.tvg.node_count())
            .map(NodeId)
            .filter(|n| !g.touched_nodes.contains(n))
            .collect();
        let idle_times: BTreeSet<TimeId> = (0..g.tvg.time_count())
            .map(TimeId)
            .filter(|t| !g.touched_times.contains(t))
            .collect();
        assert_eq!(p.disconnected_nodes, idle_nodes, "round {round}");
        assert_eq!(p.unused_times, idle_times, "round {round}");

        let mut buffer = Vec::new();
        write_tvg(&g.tvg, &mut buffer).unwrap();
        let back = read_tvg(buffer.as_slice()).unwrap();
        assert_eq!(
            back, g.tvg,
            "round {round}: file round trip changed the graph"
        );
    }
    println!("PASS criterion 3: partition matches construction records and files round-trip on 1000 random graphs");
}

#[test]
fn criterion_4_storage_size_is_linear_in_the_record_count() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);

    // record accounting against construction-time ground truth
    for _ in 0..300 {
        let g = random_tvg(&mut rng, 20, 10, 200);
        let report = storage_report(&g.tvg);
        assert_eq!(report.edge_items, g.tvg.edge_count());
        assert_eq!(
            report.disconnected_node_items,
            g.tvg.node_count() - g.touched_nodes.len()
        );
        assert_eq!(
            report.unused_time_items,
            g.tvg.time_count() - g.touched_times.len()
        );
        assert_eq!(
            report.total_items,
            report.edge_items + report.disconnected_node_items + report.unused_time_items
        );
        if report.disconnected_node_items + report.unused_time_items < report.edge_items {
            assert!(report.total_items < 2 * report.edge_items);
        }
    }

    // byte size against record count across three decades
    let targets = [100usize, 316, 1000, 3162, 10_000, 31_623, 100_000];
    let mut points = Vec::new();
    for &target in &targets {
        let mut tvg = Tvg::new(50, (0..50).map(|i| format!("t{i}"))).unwrap();
        while tvg.edge_count() < target {
            let u = rng.gen_range(0..50usize);
            let ta = rng.gen_range(0..50usize);
            let v = rng.gen_range(0..50usize);
            let tb = rng.gen_range(0..50usize);
            let edge = DynamicEdge::new(u, ta, v, tb);
            if !tvg.contains_edge(&edge) {
                tvg.add_edge(edge).unwrap();
            }
        }
        let mut buffer = Vec::new();
        write_tvg(&tvg, &mut buffer).unwrap();
        points.push((storage_report(&tvg).total_items as f64, buffer.len() as f64));
    }
    let r2 = linear_r2(&points);
    assert!(r2 > 0.99, "bytes vs records fit poorly: R^2 = {r2}");
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 30.0,
        "took {elapsed:?}, budget is 30s"
    );
    println!(
        "PASS criterion 4: accounting holds on 300 random graphs; bytes/records R^2 = {r2:.6} over 100..100000 edges in {elapsed:?}"
    );
}

#[test]
fn criterion_5_interval_import_respects_size_bounds() {
    let mut rng = StdRng::seed_from_u64(5);
    for round in 0..200 {
        let eta = rng.gen_range(1..=50usize);
        let mut intervals = Vec::with_capacity(eta);
        for _ in 0..eta {
            let u = rng.gen_range(0..10usize);
            let mut v = rng.gen_range(0..10usize);
            if v == u {
                v = (v + 1) % 10;
            }
            let open = rng.gen_range(0..400) as f64 * 0.25;
            let close = open + rng.gen_range(1..=40) as f64 * 0.25;
            intervals.push(CtiInterval::directed(u, v, open, close));
        }
        let fine = from_cti(&intervals, CtiMode::SpatialTemporal).unwrap();
        assert!(
            fine.time_count() <= 2 * eta,
            "round {round}: {} instants from {eta} intervals",
            fine.time_count()
        );
        assert!(
            fine.edge_count() <= 6 * eta * eta - 2 * eta,
            "round {round}: {} edges from {eta} intervals",
            fine.edge_count()
        );
        let coarse = from_cti(&intervals, CtiMode::MixedEdges).unwrap();
        assert!(coarse.time_count() <= 2 * eta);
        assert!(coarse.edge_count() <= eta);
    }
    println!(
        "PASS criterion 5: 200 random one-way interval sets stay within 2n instants and 6n^2-2n edges"
    );
}

#[test]
fn criterion_6_importer_outputs_land_in_their_classes() {
    // the full representability table
    use ModelClass as Mc;
    let order = [Mc::Snapshot, Mc::Cti, Mc::Ste, Mc::Tme, Mc::Unifying];
    let expected = [
        // by Snapshot
        [true, true, false, false, false],
        // by Cti
        [true, true, true, false, false],
        // by Ste
        [true, true, true, false, false],
        // by Tme
        [false, true, false, true, false],
        // by Unifying
        [true, true, true, true, true],
    ];
    for (i, by) in order.iter().enumerate() {
        for (j, target) in order.iter().enumerate() {
            assert_eq!(
                can_represent(*by, *target),
                expected[i][j],
                "cell ({by}, {target})"
            );
        }
    }

    // fixed inputs
    let chain = SnapshotSequence {
        node_count: 3,
        snapshots: vec![
            Snapshot {
                label: "t0".to_string(),
                pairs: vec![(0, 1)],
            },
            Snapshot {
                label: "t1".to_string(),
                pairs: vec![(1, 2)],
            },
        ],
    };
    assert!(detect_class(&from_snapshots(&chain).unwrap()).contains(&Mc::Snapshot));

    let intervals = [
        CtiInterval::bidirectional(0, 1, 1.0, 15.0),
        CtiInterval::bidirectional(1, 2, 5.0, 7.0),
    ];
    let coarse = detect_class(&from_cti(&intervals, CtiMode::MixedEdges).unwrap());
    assert!(coarse.contains(&Mc::Cti));
    let per_instant = detect_class(&from_cti(&intervals, CtiMode::Snapshots).unwrap());
    assert!(per_instant.contains(&Mc::Snapshot) && per_instant.contains(&Mc::Cti));
    let fine = detect_class(&from_cti(&intervals, CtiMode::SpatialTemporal).unwrap());
    assert!(fine.contains(&Mc::Ste));
    assert!(detect_class(&from_ste(&[(0, 1, 1.0)], &[(1, 1.0, 3.0)]).unwrap()).contains(&Mc::Ste));
    assert!(
        detect_class(&from_tme(&[(0, 0.0, 1, 1.0), (1, 1.0, 0, 2.0)]).unwrap()).contains(&Mc::Tme)
    );

    let w_classes = detect_class(&load_w());
    assert_eq!(w_classes, BTreeSet::from([Mc::Ste, Mc::Unifying]));

    // randomized inputs
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..50 {
        let snapshots: Vec<Snapshot> = (0..rng.gen_range(1..=5usize))
            .map(|i| Snapshot {
                label: format!("t{i}"),
                pairs: (0..rng.gen_range(0..=6usize))
                    .map(|_| {
                        let u = rng.gen_range(0..6usize);
                        let v = (u + rng.gen_range(1..6usize)) % 6;
                        (u, v)
                    })
                    .collect(),
            })
            .collect();
        let input = SnapshotSequence {
            node_count: 6,
            snapshots,
        };
        assert!(detect_class(&from_snapshots(&input).unwrap()).contains(&Mc::Snapshot));

        let intervals: Vec<CtiInterval> = (0..rng.gen_range(1..=8usize))
            .map(|_| {
                let u = rng.gen_range(0..6usize);
                let v = (u + rng.gen_range(1..6usize)) % 6;
                let open = rng.gen_range(0..40) as f64 * 0.5;
                let close = open + rng.gen_range(1..=10) as f64 * 0.5;
                if rng.gen_bool(0.5) {
                    CtiInterval::bidirectional(u, v, open, close)
                } else {
                    CtiInterval::directed(u, v, open, close)
                }
            })
            .collect();
        assert!(
            detect_class(&from_cti(&intervals, CtiMode::MixedEdges).unwrap()).contains(&Mc::Cti)
        );
        assert!(
            detect_class(&from_cti(&intervals, CtiMode::SpatialTemporal).unwrap())
                .contains(&Mc::Ste)
        );

        let contacts: Vec<(usize, usize, f64)> = (0..rng.gen_range(0..=6usize))
            .map(|_| {
                let u = rng.gen_range(0..6usize);
                let v = (u + rng.gen_range(1..6usize)) % 6;
                (u, v, rng.gen_range(0..20) as f64)
            })
            .collect();
        let waits: Vec<(usize, f64, f64)> = (0..rng.gen_range(1..=6usize))
            .map(|_| {
                let from = rng.gen_range(0..20) as f64;
                (
                    rng.gen_range(0..6usize),
                    from,
                    from + rng.gen_range(1..=5) as f64,
                )
            })
            .collect();
        assert!(detect_class(&from_ste(&contacts, &waits).unwrap()).contains(&Mc::Ste));

        let edges: Vec<(usize, f64, usize, f64)> = (0..rng.gen_range(1..=10usize))
            .map(|_| {
                let from = rng.gen_range(0..20) as f64;
                (
                    rng.gen_range(0..6usize),
                    from,
                    rng.gen_range(0..6usize),
                    from + rng.gen_range(1..=5) as f64,
                )
            })
            .collect();
        assert!(detect_class(&from_tme(&edges).unwrap()).contains(&Mc::Tme));
    }
    println!(
        "PASS criterion 6: representability table is exact and every importer's output detects as its own class"
    );
}

#[test]
fn criterion_7_digraph_view_matches_the_adjacency_form() {
    let mut rng = StdRng::seed_from_u64(7);
    for round in 0..500 {
        let g = random_tvg(&mut rng, 20, 10, 200);
        let m = adjacency_matrix(&g.tvg);
        let d = to_static_digraph(&g.tvg);
        assert_eq!(d.vertex_count, m.rows(), "round {round}");
        assert_eq!(d.arcs.len(), g.tvg.edge_count(), "round {round}");
        let arcs: BTreeSet<(usize, usize, u64)> = d
            .arcs
            .iter()
            .map(|&(a, b, w)| (a, b, w.to_bits()))
            .collect();
        let entries: BTreeSet<(usize, usize, u64)> =
            m.entries().map(|(r, c, v)| (r, c, v.to_bits())).collect();
        assert_eq!(arcs, entries, "round {round}");

        let back = refold(&m, g.tvg.companion()).unwrap();
        assert_eq!(back.node_count(), g.tvg.node_count(), "round {round}");
        assert_eq!(back.time_count(), g.tvg.time_count(), "round {round}");
        assert_eq!(edge_set(&back), edge_set(&g.tvg), "round {round}");
    }
    println!(
        "PASS criterion 7: digraph arcs equal adjacency entries and refolding is exact on 500 random graphs"
    );
}

#[test]
fn criterion_8_search_reachability_matches_closure_by_squaring() {
    let w = load_w();
    let from_start = reachable(&w, TemporalNode::new(0usize, 0usize)).unwrap();
    assert_eq!(from_start.reached.len(), 12);
    assert_eq!(
        from_start.reached,
        closure_reach(&w, TemporalNode::new(0usize, 0usize))
    );

    let mut rng = StdRng::seed_from_u64(8);
    for round in 0..200 {
        let g = random_tvg(&mut rng, 4, 2, 64);
        for node in 0..g.tvg.node_count() {
            for time in 0..g.tvg.time_count() {
                let source = TemporalNode::new(node, time);
                let searched = reachable(&g.tvg, source).unwrap().reached;
                let squared = closure_reach(&g.tvg, source);
                assert_eq!(searched, squared, "round {round}, source {node}@{time}");
            }
        }
    }
    println!(
        "PASS criterion 8: search and matrix-closure reachability agree on 200 random graphs from every source"
    );
}
