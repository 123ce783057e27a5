mod common;

use std::path::Path;

use proptest::prelude::*;
use ugclass::bayes::BayesModel;
use ugclass::io::{format_graph, parse_graph, NodeDict};
use ugclass::perturb::{perturb, remove_labels, EdgeOrigin, PerturbationConfig};
use ugclass::ubayes::{frontier, ubayes_run, UBayesParams};
use ugclass::ubayes_plus::ubayes_plus_run;
use ugclass::{Label, LabelAssignment, NodeId, Topology, UncertainGraph};

fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = UncertainGraph> {
    (2..=max_nodes).prop_flat_map(|n| {
        prop::collection::vec((0..n as u32, 0..n as u32, 0.01f64..=1.0), 0..n * 3).prop_map(move |raw| {
            let mut seen = std::collections::HashSet::new();
            let triples = raw
                .into_iter()
                .filter(|&(a, b, _)| a != b && seen.insert((a.min(b), a.max(b))))
                .map(|(a, b, p)| (NodeId(a), NodeId(b), p));
            UncertainGraph::from_edges(n, triples).unwrap()
        })
    })
}

fn labeled_graph(max_nodes: usize, classes: u32) -> impl Strategy<Value = (UncertainGraph, LabelAssignment)> {
    graph_strategy(max_nodes).prop_flat_map(move |g| {
        let n = g.node_count();
        prop::collection::vec(prop_oneof![2 => Just(0u32), 3 => 1..=classes], n).prop_map(move |mut raw| {
            if raw.iter().all(|&l| l == 0) {
                raw[0] = 1;
            }
            let labels = raw.into_iter().map(Label).collect();
            (g.clone(), LabelAssignment::with_num_classes(labels, classes as usize).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn top_edges_are_nested(g in graph_strategy(30), a in 0.01f64..=1.0, b in 0.01f64..=1.0) {
        prop_assume!(g.edge_count() > 0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let small = g.top_edges_by_prob(lo).unwrap();
        let large = g.top_edges_by_prob(hi).unwrap();
        for i in 0..g.edge_count() {
            prop_assert!(!small.is_active(i) || large.is_active(i));
        }
        let min_kept = small.active_edges().map(|e| e.prob).fold(f64::INFINITY, f64::min);
        let max_dropped = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(i, _)| !small.is_active(*i))
            .map(|(_, e)| e.prob)
            .fold(0.0, f64::max);
        prop_assert!(min_kept >= max_dropped);
    }

    #[test]
    fn induced_subgraph_is_idempotent(g in graph_strategy(25), mask in prop::collection::vec(any::<bool>(), 25)) {
        let nodes: Vec<NodeId> = (0..g.node_count()).filter(|&i| mask[i]).map(|i| NodeId(i as u32)).collect();
        let once = g.induced_subgraph(&nodes).unwrap();
        let all: Vec<NodeId> = (0..once.graph.node_count()).map(|i| NodeId(i as u32)).collect();
        let twice = once.graph.induced_subgraph(&all).unwrap();
        prop_assert_eq!(&twice.graph, &once.graph);
        for e in once.graph.edges() {
            let (a, b) = (once.original_ids[e.src.index()], once.original_ids[e.dst.index()]);
            prop_assert_eq!(g.probability(a, b), Some(e.prob));
        }
    }

    #[test]
    fn conditionals_ignore_uniform_scaling((g, labels) in labeled_graph(15, 3), c in 0.05f64..=1.0) {
        let scaled = UncertainGraph::from_edges(g.node_count(), g.edges().iter().map(|e| (e.src, e.dst, e.prob * c))).unwrap();
        let a = BayesModel::estimate(&g, &labels, 1e-4).unwrap();
        let b = BayesModel::estimate(&scaled, &labels, 1e-4).unwrap();
        for p in 1..=3 {
            for q in 1..=3 {
                let (x, y) = (a.conditionals().raw(Label(p), Label(q)), b.conditionals().raw(Label(p), Label(q)));
                prop_assert!(common::rel_err(x, y) < 1e-12, "{} vs {}", x, y);
            }
        }
    }

    #[test]
    fn conditional_columns_sum_to_one((g, labels) in labeled_graph(15, 3)) {
        let m = BayesModel::estimate(&g, &labels, 1e-4).unwrap();
        for q in 1..=3 {
            let s: f64 = (1..=3).map(|p| m.conditionals().raw(Label(p), Label(q))).sum();
            prop_assert!((s - 1.0).abs() < 1e-12, "column {} sums to {}", q, s);
        }
    }

    #[test]
    fn ubayes_labels_everything_and_keeps_seeds((g, seeds) in labeled_graph(40, 3)) {
        let run = ubayes_run(&g, &seeds, &UBayesParams::default()).unwrap();
        prop_assert!(run.labels.is_total());
        for n in seeds.labeled_nodes() {
            prop_assert_eq!(run.labels.get(n), seeds.get(n));
        }
        let trace = run.iteration_trace().unwrap();
        let promoted: usize = trace.iter().map(|t| t.promoted).sum();
        prop_assert_eq!(promoted + seeds.labeled_count() + run.final_step, g.node_count());
        if let Some(first) = trace.first() {
            prop_assert_eq!(first.frontier, frontier(&g, &seeds).len());
        }
    }

    #[test]
    fn ubayes_plus_keeps_seeds((g, seeds) in labeled_graph(40, 2), seed in any::<u64>()) {
        let params = ugclass::ubayes_plus::UBayesPlusParams { alpha: 0.6, beta: 0.5, seed, ..Default::default() };
        let run = ubayes_plus_run(&g, &seeds, &params).unwrap();
        prop_assert!(run.labels.is_total());
        for n in seeds.labeled_nodes() {
            prop_assert_eq!(run.labels.get(n), seeds.get(n));
        }
        prop_assert!(run.active_edges <= g.edge_count());
    }

    #[test]
    fn perturbation_preserves_originals((g, labels) in labeled_graph(30, 2), seed in any::<u64>(), removal in 0.0f64..0.9) {
        let cfg = PerturbationConfig { phi: 0.5, sigma: 0.25, edge_removal: removal, label_ratio: 0.5, seed };
        let Ok(out) = perturb(&g, &labels, &cfg) else { return Ok(()); };
        for (e, origin) in out.graph.graph.edges().iter().zip(&out.graph.origin) {
            prop_assert!(e.prob > 0.0 && e.prob <= 1.0);
            if *origin == EdgeOrigin::Original {
                prop_assert_eq!(g.probability(e.src, e.dst), Some(e.prob));
            }
        }
        for n in out.labels.labeled_nodes() {
            prop_assert_eq!(out.labels.get(n), labels.get(n));
        }
    }

    #[test]
    fn label_removal_count((_, labels) in labeled_graph(40, 3), ratio in 0.0f64..=1.0, seed in any::<u64>()) {
        let kept = remove_labels(&labels, ratio, seed).unwrap();
        let expect = (ratio * labels.labeled_count() as f64 + 0.5 + 1e-9).floor() as usize;
        prop_assert_eq!(kept.labeled_count(), expect);
    }

    #[test]
    fn edge_file_round_trip(g in graph_strategy(20)) {
        let mut dict = NodeDict::new();
        for i in 0..g.node_count() {
            dict.intern(&format!("v{i:02}"));
        }
        let text = format_graph(&g, &dict);
        let mut back_dict = NodeDict::new();
        let back = parse_graph(&text, Path::new("mem"), &mut back_dict).unwrap();
        prop_assert_eq!(format_graph(&back, &back_dict), text);
        prop_assert_eq!(back.edge_count(), g.edge_count());
    }
}
