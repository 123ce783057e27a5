//! Perturbation generators: noisy-edge injection, edge removal and label
//! removal.
//!
//! The pipeline order is fixed: noise is injected first, removal samples from
//! the noisy edge set, and labels are thinned last.

use std::collections::HashSet;

use rand::seq::index;
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::graph::{Edge, NodeId, Topology, UncertainGraph};
use crate::labels::LabelAssignment;
use crate::rng::{rng_for, Rng, STREAM_EDGE_REMOVAL, STREAM_LABEL_REMOVAL, STREAM_NOISE};
use crate::util::round_half_up;

// Collision resampling budget per requested edge.
const ATTEMPTS_PER_EDGE: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationConfig {
    /// Noisy edges added per existing edge.
    pub phi: f64,
    /// Standard deviation of the noise probability distribution.
    pub sigma: f64,
    /// Fraction of edges removed after noise injection.
    pub edge_removal: f64,
    /// Fraction of labeled nodes that keep their label.
    pub label_ratio: f64,
    pub seed: u64,
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            phi: 3.0,
            sigma: 0.25,
            edge_removal: 0.0,
            label_ratio: 1.0,
            seed: 0,
        }
    }
}

impl PerturbationConfig {
    /// No noise, no removal.
    pub fn identity(seed: u64) -> Self {
        PerturbationConfig {
            phi: 0.0,
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.phi >= 0.0 && self.phi.is_finite()) {
            return bad(format!("phi must be >= 0, got {}", self.phi));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return bad(format!("sigma must be > 0, got {}", self.sigma));
        }
        if !(0.0..=1.0).contains(&self.edge_removal) {
            return bad(format!("edge removal must be in [0, 1], got {}", self.edge_removal));
        }
        if !(0.0..=1.0).contains(&self.label_ratio) {
            return bad(format!("label ratio must be in [0, 1], got {}", self.label_ratio));
        }
        Ok(())
    }
}

/// Draw from `N(0, sigma)` conditioned on landing in `(0, 1]`.
pub fn sample_noise_probability(sigma: f64, rng: &mut Rng) -> f64 {
    let normal = Normal::new(0.0, sigma).expect("sigma validated positive");
    loop {
        let x: f64 = normal.sample(rng);
        if x > 0.0 && x <= 1.0 {
            return x;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    Original,
    Noise,
}

/// A graph with the origin of each edge, indexed like `graph.edges()`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedGraph {
    pub graph: UncertainGraph,
    pub origin: Vec<EdgeOrigin>,
}

impl TaggedGraph {
    pub fn untagged(graph: UncertainGraph) -> Self {
        let origin = vec![EdgeOrigin::Original; graph.edge_count()];
        TaggedGraph { graph, origin }
    }

    pub fn count(&self, origin: EdgeOrigin) -> usize {
        self.origin.iter().filter(|&&o| o == origin).count()
    }
}

pub fn add_noisy_edges(graph: &UncertainGraph, phi: f64, sigma: f64, seed: u64) -> Result<UncertainGraph> {
    Ok(add_noisy_edges_tagged(&TaggedGraph::untagged(graph.clone()), phi, sigma, seed)?.graph)
}

/// Adds `round(phi·|A|)` edges between uniformly drawn unjoined node pairs.
pub fn add_noisy_edges_tagged(
    input: &TaggedGraph,
    phi: f64,
    sigma: f64,
    seed: u64,
) -> Result<TaggedGraph> {
    PerturbationConfig {
        phi,
        sigma,
        ..Default::default()
    }
    .validate()?;
    let graph = &input.graph;
    let requested = round_half_up(phi * graph.edge_count() as f64);
    if requested == 0 {
        return Ok(input.clone());
    }
    let n = graph.node_count() as u64;
    let free_pairs = (n * n.saturating_sub(1) / 2).saturating_sub(graph.edge_count() as u64);
    if (requested as u64) > free_pairs {
        return Err(Error::GraphTooDense {
            requested,
            placed: 0,
        });
    }

    let mut taken: HashSet<(u32, u32)> = graph
        .edges()
        .iter()
        .map(|e| (e.src.0, e.dst.0))
        .collect();
    let mut rng = rng_for(seed, STREAM_NOISE);
    let mut added: Vec<Edge> = Vec::with_capacity(requested);
    let mut attempts = 0usize;
    let budget = ATTEMPTS_PER_EDGE * requested;
    while added.len() < requested {
        if attempts >= budget {
            return Err(Error::GraphTooDense {
                requested,
                placed: added.len(),
            });
        }
        attempts += 1;
        let a = rng.random_range(0..n) as u32;
        let b = rng.random_range(0..n) as u32;
        if a == b {
            continue;
        }
        let (src, dst) = (a.min(b), a.max(b));
        if !taken.insert((src, dst)) {
            continue;
        }
        added.push(Edge {
            src: NodeId(src),
            dst: NodeId(dst),
            prob: sample_noise_probability(sigma, &mut rng),
        });
    }

    let noise: HashSet<(u32, u32)> = added.iter().map(|e| (e.src.0, e.dst.0)).collect();
    let prior_noise: HashSet<(u32, u32)> = graph
        .edges()
        .iter()
        .zip(&input.origin)
        .filter(|(_, &o)| o == EdgeOrigin::Noise)
        .map(|(e, _)| (e.src.0, e.dst.0))
        .collect();
    let out = UncertainGraph::from_edges(
        graph.node_count(),
        graph
            .edges()
            .iter()
            .chain(&added)
            .map(|e| (e.src, e.dst, e.prob)),
    )?;
    let origin = out
        .edges()
        .iter()
        .map(|e| {
            let key = (e.src.0, e.dst.0);
            if noise.contains(&key) || prior_noise.contains(&key) {
                EdgeOrigin::Noise
            } else {
                EdgeOrigin::Original
            }
        })
        .collect();
    Ok(TaggedGraph { graph: out, origin })
}

pub fn remove_edges(graph: &UncertainGraph, edge_removal: f64, seed: u64) -> Result<UncertainGraph> {
    Ok(remove_edges_tagged(&TaggedGraph::untagged(graph.clone()), edge_removal, seed)?.graph)
}

/// Keeps `round((1 - edge_removal)·|A|)` edges drawn uniformly.
pub fn remove_edges_tagged(input: &TaggedGraph, edge_removal: f64, seed: u64) -> Result<TaggedGraph> {
    if !(0.0..=1.0).contains(&edge_removal) {
        return Err(Error::InvalidParameter(format!(
            "edge removal must be in [0, 1], got {edge_removal}"
        )));
    }
    let m = input.graph.edge_count();
    let retain = round_half_up((1.0 - edge_removal) * m as f64).min(m);
    if retain == m {
        return Ok(input.clone());
    }
    let mut keep = vec![false; m];
    for i in index::sample(&mut rng_for(seed, STREAM_EDGE_REMOVAL), m, retain) {
        keep[i] = true;
    }
    let origin = input
        .origin
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(o, _)| *o)
        .collect();
    Ok(TaggedGraph {
        graph: input.graph.retain_edges(&keep),
        origin,
    })
}

/// Keeps labels on `round(label_ratio·|labeled|)` uniformly drawn nodes.
pub fn remove_labels(labels: &LabelAssignment, label_ratio: f64, seed: u64) -> Result<LabelAssignment> {
    if !(0.0..=1.0).contains(&label_ratio) {
        return Err(Error::InvalidParameter(format!(
            "label ratio must be in [0, 1], got {label_ratio}"
        )));
    }
    let labeled = labels.labeled_nodes();
    let retain = round_half_up(label_ratio * labeled.len() as f64).min(labeled.len());
    if retain == labeled.len() {
        return Ok(labels.clone());
    }
    let keep: Vec<NodeId> = index::sample(&mut rng_for(seed, STREAM_LABEL_REMOVAL), labeled.len(), retain)
        .into_iter()
        .map(|i| labeled[i])
        .collect();
    Ok(labels.restricted_to(&keep))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed {
    pub graph: TaggedGraph,
    pub labels: LabelAssignment,
}

/// Noise, then edge removal, then label removal.
pub fn perturb(graph: &UncertainGraph, labels: &LabelAssignment, config: &PerturbationConfig) -> Result<Perturbed> {
    config.validate()?;
    let noisy = add_noisy_edges_tagged(&TaggedGraph::untagged(graph.clone()), config.phi, config.sigma, config.seed)?;
    let thinned = remove_edges_tagged(&noisy, config.edge_removal, config.seed)?;
    debug_assert_eq!(
        thinned.graph.edge_count(),
        round_half_up((1.0 - config.edge_removal) * noisy.graph.edge_count() as f64)
    );
    let labels = remove_labels(labels, config.label_ratio, config.seed)?;
    Ok(Perturbed {
        graph: thinned,
        labels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(n: u32) -> UncertainGraph {
        let triples: Vec<(u32, u32, f64)> = (0..n).map(|i| (i, (i + 1) % n, 0.8)).collect();
        UncertainGraph::from_triples(&triples).unwrap()
    }

    #[test]
    fn noise_count_and_tags() {
        let g = ring(100);
        let noisy = add_noisy_edges_tagged(&TaggedGraph::untagged(g.clone()), 3.0, 0.25, 5).unwrap();
        assert_eq!(noisy.graph.edge_count(), 400);
        assert_eq!(noisy.count(EdgeOrigin::Noise), 300);
        for e in g.edges() {
            assert_eq!(noisy.graph.probability(e.src, e.dst), Some(e.prob));
        }
        for (e, o) in noisy.graph.edges().iter().zip(&noisy.origin) {
            if *o == EdgeOrigin::Noise {
                assert!(e.prob > 0.0 && e.prob <= 1.0);
            }
        }
    }

    #[test]
    fn zero_phi_is_identity() {
        let g = ring(10);
        assert_eq!(add_noisy_edges(&g, 0.0, 0.25, 1).unwrap(), g);
    }

    #[test]
    fn complete_graph_is_too_dense() {
        let mut triples = Vec::new();
        for a in 0..5u32 {
            for b in a + 1..5 {
                triples.push((a, b, 0.5));
            }
        }
        let g = UncertainGraph::from_triples(&triples).unwrap();
        assert!(matches!(
            add_noisy_edges(&g, 0.5, 0.25, 1),
            Err(Error::GraphTooDense { .. })
        ));
    }

    #[test]
    fn removal_counts() {
        let g = ring(400);
        let kept = remove_edges(&g, 0.25, 9).unwrap();
        assert_eq!(kept.edge_count(), 300);
        for e in kept.edges() {
            assert_eq!(g.probability(e.src, e.dst), Some(e.prob));
        }
        assert_eq!(remove_edges(&g, 0.0, 9).unwrap(), g);
        let none = remove_edges(&g, 1.0, 9).unwrap();
        assert_eq!((none.edge_count(), none.node_count()), (0, 400));
    }

    #[test]
    fn label_removal_counts() {
        let labels = LabelAssignment::from_raw(&(0..100).map(|i| 1 + i % 3).collect::<Vec<_>>());
        assert_eq!(remove_labels(&labels, 1.0, 3).unwrap(), labels);
        let kept = remove_labels(&labels, 0.2, 3).unwrap();
        assert_eq!(kept.labeled_count(), 20);
        for n in kept.labeled_nodes() {
            assert_eq!(kept.get(n), labels.get(n));
        }
        assert_eq!(remove_labels(&labels, 0.0, 3).unwrap().labeled_count(), 0);
    }

    #[test]
    fn pipeline_is_deterministic() {
        let g = ring(60);
        let labels = LabelAssignment::from_raw(&(0..60).map(|i| 1 + i % 2).collect::<Vec<_>>());
        let cfg = PerturbationConfig {
            phi: 2.0,
            sigma: 0.3,
            edge_removal: 0.5,
            label_ratio: 0.5,
            seed: 77,
        };
        let a = perturb(&g, &labels, &cfg).unwrap();
        let b = perturb(&g, &labels, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.graph.graph.edge_count(), 90);
        assert_eq!(a.labels.labeled_count(), 30);
    }

    #[test]
    fn rejects_bad_config() {
        let bad = PerturbationConfig {
            sigma: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(remove_labels(&LabelAssignment::from_raw(&[1]), 1.5, 0).is_err());
    }
}
