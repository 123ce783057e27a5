//! Comparison classifiers: relational neighbor (RN), weighted-vote RN with
//! relaxation labeling (wvRN), and possible-worlds sampling with voting.

use std::time::{Duration, Instant};

use rand::Rng as _;

use crate::bayes::{argmax_index, PriorTable, ScoreVector};
use crate::error::{Error, Result};
use crate::graph::{EdgeActivationView, NodeId, Topology, UncertainGraph};
use crate::labels::{Label, LabelAssignment};
use crate::rng::{derive_seed, rng_for, Rng, STREAM_WORLDS};

/// Relaxation stops once no belief moves more than this in L1.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

/// Sweep cap for the per-world classifier of [`sampling_classify`].
pub const WORLD_SWEEPS: usize = 20;

/// Probability-weighted share of each label among labeled neighbors.
///
/// With no labeled neighbor the result is uniform.
pub fn rn_score(labeled_neighbors: &[(Label, f64)], num_classes: usize) -> ScoreVector {
    let mut mass = vec![0.0; num_classes];
    let mut total = 0.0;
    for &(label, p) in labeled_neighbors {
        if label.is_unlabeled() {
            continue;
        }
        mass[label.index()] += p;
        total += p;
    }
    if total > 0.0 {
        ScoreVector(mass.into_iter().map(|m| m / total).collect())
    } else {
        ScoreVector(vec![1.0 / num_classes as f64; num_classes])
    }
}

/// One-shot RN: each unlabeled node takes the RN argmax over its seed
/// neighbors, or the prior argmax when it has none.
pub fn rn_classify<G: Topology + ?Sized>(
    graph: &G,
    seeds: &LabelAssignment,
) -> Result<LabelAssignment> {
    let fallback = PriorTable::estimate(seeds)?.argmax();
    let mut out = seeds.clone();
    for i in 0..graph.node_count() {
        let n = NodeId(i as u32);
        if seeds.is_labeled(n) {
            continue;
        }
        let neighbors: Vec<(Label, f64)> = graph
            .adjacent(n)
            .map(|(m, p)| (seeds.get(m), p))
            .filter(|(l, _)| !l.is_unlabeled())
            .collect();
        let label = if neighbors.is_empty() {
            fallback
        } else {
            rn_score(&neighbors, seeds.num_classes()).argmax_label()?
        };
        out.set(n, label);
    }
    Ok(out)
}

/// Per-node class beliefs during relaxation labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationState {
    classes: usize,
    // row-major by node
    belief: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl RelaxationState {
    pub fn belief(&self, node: NodeId) -> &[f64] {
        let i = node.index() * self.classes;
        &self.belief[i..i + self.classes]
    }

    /// Argmax belief per node, ties to the smallest label.
    pub fn labels(&self) -> LabelAssignment {
        let labels = self
            .belief
            .chunks(self.classes)
            .map(|row| argmax_index(row).map_or(Label(1), Label::from_index))
            .collect();
        LabelAssignment::with_num_classes(labels, self.classes).expect("labels within range")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WvrnParams {
    pub max_iterations: usize,
    pub time_budget: Option<Duration>,
}

impl WvrnParams {
    /// wvRN-20: twenty sweeps, no time limit.
    pub fn capped(max_iterations: usize) -> Self {
        WvrnParams {
            max_iterations,
            time_budget: None,
        }
    }
}

impl Default for WvrnParams {
    fn default() -> Self {
        WvrnParams {
            max_iterations: 1000,
            time_budget: None,
        }
    }
}

/// Synchronous relaxation labeling with edge probabilities as weights.
///
/// Seeds are clamped to point masses; other nodes start at the seed priors.
/// The time budget is checked between sweeps only.
pub fn relax<G: Topology + ?Sized>(
    graph: &G,
    seeds: &LabelAssignment,
    params: &WvrnParams,
) -> Result<RelaxationState> {
    let priors = PriorTable::estimate(seeds)?;
    let k = seeds.num_classes();
    let n = graph.node_count();
    let mut belief = vec![0.0; n * k];
    for i in 0..n {
        let row = &mut belief[i * k..(i + 1) * k];
        match seeds.get(NodeId(i as u32)) {
            l if l.is_unlabeled() => row.copy_from_slice(priors.as_slice()),
            l => row[l.index()] = 1.0,
        }
    }
    let started = Instant::now();
    let mut next = belief.clone();
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iterations {
        if params.time_budget.is_some_and(|b| started.elapsed() >= b) {
            break;
        }
        let mut max_change: f64 = 0.0;
        for i in 0..n {
            let node = NodeId(i as u32);
            if seeds.is_labeled(node) {
                continue;
            }
            let row = &mut next[i * k..(i + 1) * k];
            row.fill(0.0);
            let mut weight = 0.0;
            for (m, p) in graph.adjacent(node) {
                let src = &belief[m.index() * k..(m.index() + 1) * k];
                for (r, b) in row.iter_mut().zip(src) {
                    *r += p * b;
                }
                weight += p;
            }
            if weight > 0.0 {
                row.iter_mut().for_each(|r| *r /= weight);
            } else {
                row.copy_from_slice(&belief[i * k..(i + 1) * k]);
            }
            let change: f64 = row
                .iter()
                .zip(&belief[i * k..(i + 1) * k])
                .map(|(a, b)| (a - b).abs())
                .sum();
            max_change = max_change.max(change);
        }
        std::mem::swap(&mut belief, &mut next);
        iterations += 1;
        if max_change < CONVERGENCE_TOLERANCE {
            converged = true;
            break;
        }
    }
    Ok(RelaxationState {
        classes: k,
        belief,
        iterations,
        converged,
    })
}

pub fn wvrn_classify<G: Topology + ?Sized>(
    graph: &G,
    seeds: &LabelAssignment,
    params: &WvrnParams,
) -> Result<LabelAssignment> {
    Ok(relax(graph, seeds, params)?.labels())
}

/// One deterministic instantiation of an uncertain graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldSample {
    /// `present[e]` for each edge index of the base graph.
    pub present: Vec<bool>,
}

impl WorldSample {
    pub fn edge_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }
}

/// Includes each edge independently with its probability.
pub fn sample_world(graph: &UncertainGraph, seed: u64) -> WorldSample {
    sample_world_with(graph, &mut rng_for(seed, STREAM_WORLDS))
}

pub fn sample_world_with(graph: &UncertainGraph, rng: &mut Rng) -> WorldSample {
    WorldSample {
        present: graph
            .edges()
            .iter()
            .map(|e| rng.random::<f64>() < e.prob)
            .collect(),
    }
}

/// Per-node vote counts over sampled worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTally {
    classes: usize,
    votes: Vec<u32>,
    pub worlds_used: usize,
}

impl VoteTally {
    pub fn new(node_count: usize, classes: usize) -> Self {
        VoteTally {
            classes,
            votes: vec![0; node_count * classes],
            worlds_used: 0,
        }
    }

    pub fn record(&mut self, labels: &LabelAssignment) {
        for (i, l) in labels.as_slice().iter().enumerate() {
            self.votes[i * self.classes + l.index()] += 1;
        }
        self.worlds_used += 1;
    }

    pub fn merge(&mut self, other: &VoteTally) {
        for (a, b) in self.votes.iter_mut().zip(&other.votes) {
            *a += b;
        }
        self.worlds_used += other.worlds_used;
    }

    pub fn votes(&self, node: NodeId) -> &[u32] {
        let i = node.index() * self.classes;
        &self.votes[i..i + self.classes]
    }

    /// Label with the most votes, ties to the smallest.
    pub fn winners(&self) -> LabelAssignment {
        let labels = self
            .votes
            .chunks(self.classes)
            .map(|row| {
                let (mut best, mut best_votes) = (0, 0);
                for (c, &v) in row.iter().enumerate() {
                    if v > best_votes {
                        best = c;
                        best_votes = v;
                    }
                }
                Label::from_index(best)
            })
            .collect();
        LabelAssignment::with_num_classes(labels, self.classes).expect("labels within range")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingParams {
    pub num_worlds: usize,
    pub time_budget: Option<Duration>,
    pub seed: u64,
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            num_worlds: 50,
            time_budget: None,
            seed: 0,
        }
    }
}

/// Classifies each sampled world with unit-weight relaxation and returns the
/// per-node majority vote along with the tally.
pub fn sampling_tally(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    params: &SamplingParams,
) -> Result<VoteTally> {
    if params.num_worlds == 0 {
        return Err(Error::InvalidParameter("num_worlds must be at least 1".into()));
    }
    if seeds.labeled_count() == 0 {
        return Err(Error::NoLabeledNodes);
    }
    let unit = graph.with_unit_weights();
    let mut tally = VoteTally::new(graph.node_count(), seeds.num_classes());
    let started = Instant::now();
    let per_world = WvrnParams::capped(WORLD_SWEEPS);
    for w in 0..params.num_worlds {
        if w > 0 && params.time_budget.is_some_and(|b| started.elapsed() >= b) {
            break;
        }
        let world = sample_world(graph, derive_seed(params.seed, w as u64));
        let view = EdgeActivationView::new(&unit, world.present);
        tally.record(&wvrn_classify(&view, seeds, &per_world)?);
    }
    Ok(tally)
}

pub fn sampling_classify(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    params: &SamplingParams,
) -> Result<LabelAssignment> {
    Ok(sampling_tally(graph, seeds, params)?.winners())
}

#[cfg(test)]
mod tests {
    use super::*;

    const BLACK: Label = Label(1);
    const WHITE: Label = Label(2);

    #[test]
    fn rn_examples() {
        let s = rn_score(&[(BLACK, 0.3), (BLACK, 0.9), (WHITE, 0.2)], 2);
        assert!((s.get(BLACK) - 1.2 / 1.4).abs() < 1e-12);
        assert!((s.0.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert_eq!(rn_score(&[(WHITE, 0.3), (WHITE, 0.1)], 2).0, vec![0.0, 1.0]);
        assert_eq!(rn_score(&[], 4).0, vec![0.25; 4]);
    }

    #[test]
    fn single_black_neighbor() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.4)]).unwrap();
        let seeds = LabelAssignment::with_num_classes(vec![BLACK, Label(0)], 2).unwrap();
        let state = relax(&g, &seeds, &WvrnParams::capped(1)).unwrap();
        assert_eq!(state.iterations, 1);
        assert_eq!(state.labels().get(NodeId(1)), BLACK);
    }

    #[test]
    fn barbell_midpoint_is_a_tie() {
        // black triangle 0-1-2, white triangle 4-5-6, midpoint 3 joined to 2 and 4.
        let g = UncertainGraph::from_triples(&[
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 2, 1.0),
            (2, 3, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (4, 6, 1.0),
            (5, 6, 1.0),
        ])
        .unwrap();
        let seeds = LabelAssignment::from_raw(&[1, 0, 0, 0, 0, 0, 2]);
        let state = relax(&g, &seeds, &WvrnParams::default()).unwrap();
        let mid = state.belief(NodeId(3));
        assert!((mid[0] - 0.5).abs() < 1e-9 && (mid[1] - 0.5).abs() < 1e-9);
        assert!(state.converged);
        assert_eq!(state.labels().get(NodeId(3)), BLACK);
        assert_eq!(state.labels().get(NodeId(1)), BLACK);
        assert_eq!(state.labels().get(NodeId(5)), WHITE);
    }

    #[test]
    fn sweep_cap_respected() {
        let triples: Vec<(u32, u32, f64)> = (0..50).map(|i| (i, i + 1, 0.5)).collect();
        let g = UncertainGraph::from_triples(&triples).unwrap();
        let mut raw = vec![0u32; 51];
        raw[0] = 1;
        raw[50] = 2;
        let state = relax(&g, &LabelAssignment::from_raw(&raw), &WvrnParams::capped(20)).unwrap();
        assert_eq!(state.iterations, 20);
        assert!(!state.converged);
    }

    #[test]
    fn beliefs_stay_distributions() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.3), (1, 2, 0.8), (2, 3, 0.1), (3, 0, 0.6)])
            .unwrap();
        let seeds = LabelAssignment::from_raw(&[1, 0, 3, 0]);
        for sweeps in 1..6 {
            let state = relax(&g, &seeds, &WvrnParams::capped(sweeps)).unwrap();
            for i in 0..4 {
                let b = state.belief(NodeId(i));
                assert!((b.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
            assert_eq!(state.belief(NodeId(2)), &[0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn certain_edges_always_sampled() {
        let g = UncertainGraph::from_triples(&[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        for seed in 0..20 {
            assert_eq!(sample_world(&g, seed).edge_count(), 2);
        }
        assert_eq!(sample_world(&g, 7), sample_world(&g, 7));
    }

    #[test]
    fn tally_conserves_votes() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5)]).unwrap();
        let seeds = LabelAssignment::from_raw(&[1, 0, 0, 2]);
        let params = SamplingParams {
            num_worlds: 17,
            ..Default::default()
        };
        let tally = sampling_tally(&g, &seeds, &params).unwrap();
        assert_eq!(tally.worlds_used, 17);
        for i in 0..4 {
            assert_eq!(tally.votes(NodeId(i)).iter().sum::<u32>(), 17);
        }
        assert_eq!(tally.votes(NodeId(0)), &[17, 0]);
    }

    #[test]
    fn sampling_requires_seeds_and_worlds() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5)]).unwrap();
        let none = LabelAssignment::unlabeled(2, 2);
        assert_eq!(
            sampling_classify(&g, &none, &SamplingParams::default()).unwrap_err(),
            Error::NoLabeledNodes
        );
        let seeds = LabelAssignment::from_raw(&[1, 0]);
        let zero = SamplingParams {
            num_worlds: 0,
            ..Default::default()
        };
        assert!(sampling_classify(&g, &seeds, &zero).is_err());
    }

    #[test]
    fn rn_classify_uses_seed_neighbors() {
        let g = UncertainGraph::from_edges(
            5,
            [(0, 2, 0.9), (1, 2, 0.2), (1, 3, 0.5)].map(|(a, b, p)| (NodeId(a), NodeId(b), p)),
        )
        .unwrap();
        let seeds = LabelAssignment::from_raw(&[1, 2, 0, 0, 0]);
        let out = rn_classify(&g, &seeds).unwrap();
        assert_eq!(out.get(NodeId(2)), BLACK);
        assert_eq!(out.get(NodeId(3)), WHITE);
        assert_eq!(out.get(NodeId(4)), BLACK);
    }
}
