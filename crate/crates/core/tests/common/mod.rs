//! Brute-force references and helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ugclass::{Label, LabelAssignment, NodeId, UncertainGraph};

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph on up to `max_nodes` nodes: each pair linked with chance
/// `density`, probabilities uniform in (0, 1].
pub fn small_graph(r: &mut ChaCha8Rng, max_nodes: usize, density: f64) -> UncertainGraph {
    let n = r.random_range(2..=max_nodes);
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random::<f64>() < density {
                triples.push((NodeId(a as u32), NodeId(b as u32), 1.0 - r.random::<f64>()));
            }
        }
    }
    UncertainGraph::from_edges(n, triples).unwrap()
}

/// Labels each node with chance `frac`, at least one node labeled.
pub fn small_labels(r: &mut ChaCha8Rng, n: usize, classes: usize, frac: f64) -> LabelAssignment {
    let mut raw: Vec<Label> = (0..n)
        .map(|_| {
            if r.random::<f64>() < frac {
                Label(r.random_range(1..=classes as u32))
            } else {
                Label(0)
            }
        })
        .collect();
    if raw.iter().all(|l| l.0 == 0) {
        raw[r.random_range(0..n)] = Label(r.random_range(1..=classes as u32));
    }
    LabelAssignment::with_num_classes(raw, classes).unwrap()
}

pub fn ref_priors(labels: &LabelAssignment) -> Vec<f64> {
    let k = labels.num_classes();
    let labeled: Vec<u32> = labels.as_slice().iter().map(|l| l.0).filter(|&l| l > 0).collect();
    (1..=k as u32)
        .map(|c| labeled.iter().filter(|&&l| l == c).count() as f64 / labeled.len() as f64)
        .collect()
}

/// `cond[p][q]` = P(neighbor has p | node has q), by scanning every node pair.
/// An edge between classes q and p adds its probability once to the mass of
/// q and once to that of p; within a class it adds once. Classes without any
/// labeled edge fall back to the priors.
pub fn ref_conditionals(g: &UncertainGraph, labels: &LabelAssignment) -> Vec<Vec<f64>> {
    let k = labels.num_classes();
    let priors = ref_priors(labels);
    let n = labels.len();
    let mut cond = vec![vec![0.0; k]; k];
    for q in 1..=k as u32 {
        let mut mass = 0.0;
        let mut toward = vec![0.0; k];
        for i in 0..n {
            for j in i + 1..n {
                let Some(p) = g.probability(NodeId(i as u32), NodeId(j as u32)) else {
                    continue;
                };
                let (a, b) = (labels.as_slice()[i].0, labels.as_slice()[j].0);
                if a == 0 || b == 0 || (a != q && b != q) {
                    continue;
                }
                mass += p;
                let other = if a == q { b } else { a };
                toward[other as usize - 1] += p;
            }
        }
        for p in 0..k {
            cond[p][q as usize - 1] = if mass > 0.0 { toward[p] / mass } else { priors[p] };
        }
    }
    cond
}

/// `(prior(p)+δ) · Π_k (cond(t_k|p)+δ)` multiplied out directly.
pub fn ref_scores(priors: &[f64], cond: &[Vec<f64>], delta: f64, neighbor_labels: &[u32]) -> Vec<f64> {
    (0..priors.len())
        .map(|p| {
            let mut s = priors[p] + delta;
            for &t in neighbor_labels.iter().filter(|&&t| t > 0) {
                s *= cond[t as usize - 1][p] + delta;
            }
            s
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Accuracy counted directly from two label vectors over `nodes`.
pub fn direct_accuracy(truth: &[u32], predicted: &[u32], nodes: &[usize]) -> f64 {
    let hits = nodes.iter().filter(|&&i| truth[i] == predicted[i]).count();
    hits as f64 / nodes.len() as f64
}
