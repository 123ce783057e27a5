//! Synthetic uncertain graphs with known labels.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::labels::{Label, LabelAssignment};
use crate::rng::{rng_for, STREAM_SYNTH_GRAPH, STREAM_SYNTH_LABELS};

/// Parameters of a planted partition: `classes` blocks of `per_class` nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedPartition {
    pub classes: usize,
    pub per_class: usize,
    /// Chance that a same-class pair is linked.
    pub link_intra: f64,
    /// Chance that a cross-class pair is linked.
    pub link_inter: f64,
    pub prob_intra: f64,
    pub prob_inter: f64,
}

impl Default for PlantedPartition {
    fn default() -> Self {
        PlantedPartition {
            classes: 2,
            per_class: 100,
            link_intra: 0.1,
            link_inter: 0.01,
            prob_intra: 0.9,
            prob_inter: 0.1,
        }
    }
}

impl PlantedPartition {
    /// Node `i` belongs to class `i / per_class + 1`.
    pub fn generate(&self, seed: u64) -> Result<(UncertainGraph, LabelAssignment)> {
        for (name, v) in [("link_intra", self.link_intra), ("link_inter", self.link_inter)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} must be in [0, 1], got {v}")));
            }
        }
        let n = self.classes * self.per_class;
        let class = |i: usize| i / self.per_class.max(1);
        let mut rng = rng_for(seed, STREAM_SYNTH_GRAPH);
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let same = class(a) == class(b);
                let (link, prob) = if same {
                    (self.link_intra, self.prob_intra)
                } else {
                    (self.link_inter, self.prob_inter)
                };
                if rng.random::<f64>() < link {
                    edges.push((NodeId(a as u32), NodeId(b as u32), prob));
                }
            }
        }
        let labels = (0..n).map(|i| Label(class(i) as u32 + 1)).collect();
        Ok((
            UncertainGraph::from_edges(n, edges)?,
            LabelAssignment::with_num_classes(labels, self.classes)?,
        ))
    }
}

/// `edges` distinct random pairs over `nodes` nodes with probabilities drawn
/// uniformly from (0, 1].
pub fn random_graph(nodes: usize, edges: usize, seed: u64) -> Result<UncertainGraph> {
    let pairs = nodes * nodes.saturating_sub(1) / 2;
    if edges > pairs {
        return Err(Error::GraphTooDense {
            requested: edges,
            placed: pairs,
        });
    }
    let mut rng = rng_for(seed, STREAM_SYNTH_GRAPH);
    let mut seen = std::collections::HashSet::with_capacity(edges);
    let mut out = Vec::with_capacity(edges);
    while out.len() < edges {
        let a = rng.random_range(0..nodes as u32);
        let b = rng.random_range(0..nodes as u32);
        if a == b || !seen.insert((a.min(b), a.max(b))) {
            continue;
        }
        out.push((NodeId(a), NodeId(b), 1.0 - rng.random::<f64>()));
    }
    UncertainGraph::from_edges(nodes, out)
}

/// Labels `labeled` random nodes with classes drawn uniformly from `1..=classes`.
pub fn random_labels(nodes: usize, classes: usize, labeled: usize, seed: u64) -> LabelAssignment {
    let mut rng = rng_for(seed, STREAM_SYNTH_LABELS);
    let mut raw = vec![Label::UNLABELED; nodes];
    let picked = rand::seq::index::sample(&mut rng, nodes, labeled.min(nodes));
    for i in picked {
        raw[i] = Label(rng.random_range(1..=classes as u32));
    }
    LabelAssignment::with_num_classes(raw, classes).expect("labels drawn within range")
}
