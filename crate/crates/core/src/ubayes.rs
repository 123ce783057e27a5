//! Iterative probabilistic labeling (uBayes).
//!
//! Each iteration re-estimates the Bayes model from every fixed label, scores
//! the frontier `T⁺` (unlabeled nodes adjacent to a fixed node) using only
//! fixed neighbors, and fixes the frontier at its argmax labels. When no
//! unlabeled node is reachable, the rest take the argmax of the final priors.

use rayon::prelude::*;

use crate::baselines::rn_score;
use crate::bayes::{BayesModel, PriorTable, ScoreVector, DEFAULT_SMOOTHING};
use crate::ubayes_plus::ensemble_scores;
use crate::error::{Error, Result};
use crate::graph::{NodeId, Topology};
use crate::labels::{Label, LabelAssignment};

// Below this frontier size scoring stays on the calling thread.
const PARALLEL_FRONTIER: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct UBayesParams {
    pub delta_s: f64,
    pub max_iterations: Option<usize>,
    /// Fraction of each frontier fixed per iteration, most confident first.
    pub promote_fraction: f64,
    pub record_trace: bool,
}

impl Default for UBayesParams {
    fn default() -> Self {
        UBayesParams {
            delta_s: DEFAULT_SMOOTHING,
            max_iterations: None,
            promote_fraction: 1.0,
            record_trace: true,
        }
    }
}

impl UBayesParams {
    fn validate(&self) -> Result<()> {
        if !(self.delta_s > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "delta_s must be positive, got {}",
                self.delta_s
            )));
        }
        if !(self.promote_fraction > 0.0 && self.promote_fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "promote_fraction must be in (0, 1], got {}",
                self.promote_fraction
            )));
        }
        Ok(())
    }
}

/// How a frontier node is scored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FrontierScoring {
    Bayes,
    /// Convex mix of the Bayes posterior and the RN score.
    BayesWithRn { delta_e: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationRecord {
    pub iteration: usize,
    /// `|T|` when the iteration started.
    pub fixed: usize,
    /// `|T⁺|` scored in this iteration.
    pub frontier: usize,
    /// Nodes fixed by this iteration; equals `frontier` unless a promote
    /// fraction below one is configured.
    pub promoted: usize,
}

#[derive(Debug, Clone)]
pub struct UBayesRun {
    pub labels: LabelAssignment,
    pub iterations: usize,
    /// Nodes labeled by the final prior step.
    pub final_step: usize,
    trace: Option<Vec<IterationRecord>>,
}

impl UBayesRun {
    pub fn iteration_trace(&self) -> Result<&[IterationRecord]> {
        self.trace
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("tracing disabled for this run".into()))
    }
}

/// Unlabeled nodes with at least one visible edge to a labeled node, sorted.
pub fn frontier<G: Topology + ?Sized>(graph: &G, labels: &LabelAssignment) -> Vec<NodeId> {
    (0..graph.node_count() as u32)
        .map(NodeId)
        .filter(|&n| {
            !labels.is_labeled(n) && graph.adjacent(n).any(|(m, _)| labels.is_labeled(m))
        })
        .collect()
}

pub fn ubayes_run<G: Topology + ?Sized>(
    graph: &G,
    seeds: &LabelAssignment,
    params: &UBayesParams,
) -> Result<UBayesRun> {
    run_with_scoring(graph, seeds, params, FrontierScoring::Bayes)
}

pub fn run_with_scoring<G: Topology + ?Sized>(
    graph: &G,
    seeds: &LabelAssignment,
    params: &UBayesParams,
    scoring: FrontierScoring,
) -> Result<UBayesRun> {
    params.validate()?;
    if seeds.len() != graph.node_count() {
        return Err(Error::InvalidParameter(format!(
            "{} labels for {} nodes",
            seeds.len(),
            graph.node_count()
        )));
    }
    if seeds.labeled_count() == 0 {
        return Err(Error::NoLabeledNodes);
    }

    let mut labels = seeds.clone();
    let mut trace = params.record_trace.then(Vec::new);
    let mut in_frontier = vec![false; graph.node_count()];
    let mut current = frontier(graph, &labels);
    for n in &current {
        in_frontier[n.index()] = true;
    }
    let mut iterations = 0usize;

    while !current.is_empty() && params.max_iterations.is_none_or(|cap| iterations < cap) {
        let fixed_before = labels.labeled_count();
        let model = BayesModel::estimate(graph, &labels, params.delta_s)?;
        let score_one = |&n: &NodeId| {
            let dist = score_node(graph, &labels, &model, n, scoring);
            let label = dist.argmax_label().expect("non-empty class set");
            (n, label, dist.get(label))
        };
        let mut scored: Vec<(NodeId, Label, f64)> = if current.len() >= PARALLEL_FRONTIER {
            current.par_iter().map(score_one).collect()
        } else {
            current.iter().map(score_one).collect()
        };

        let promote = promotion_count(scored.len(), params.promote_fraction);
        if promote < scored.len() {
            // Stable, so equally confident nodes keep ascending id order.
            scored.sort_by(|a, b| b.2.total_cmp(&a.2));
        }
        let (fixed_now, deferred) = scored.split_at(promote);
        for &(n, label, _) in fixed_now {
            labels.set(n, label);
            in_frontier[n.index()] = false;
        }
        if let Some(t) = trace.as_mut() {
            t.push(IterationRecord {
                iteration: iterations,
                fixed: fixed_before,
                frontier: scored.len(),
                promoted: promote,
            });
        }
        iterations += 1;

        let mut next: Vec<NodeId> = deferred.iter().map(|&(n, _, _)| n).collect();
        for &(n, _, _) in fixed_now {
            for (m, _) in graph.adjacent(n) {
                if !labels.is_labeled(m) && !in_frontier[m.index()] {
                    in_frontier[m.index()] = true;
                    next.push(m);
                }
            }
        }
        next.sort_unstable();
        current = next;
    }

    let fallback = PriorTable::estimate(&labels)?.argmax();
    let mut final_step = 0;
    for i in 0..labels.len() {
        let n = NodeId(i as u32);
        if !labels.is_labeled(n) {
            labels.set(n, fallback);
            final_step += 1;
        }
    }

    Ok(UBayesRun {
        labels,
        iterations,
        final_step,
        trace,
    })
}

fn promotion_count(frontier: usize, fraction: f64) -> usize {
    if fraction >= 1.0 {
        frontier
    } else {
        ((frontier as f64 * fraction).ceil() as usize).clamp(1, frontier)
    }
}

/// Normalized distribution used to pick a frontier node's label.
fn score_node<G: Topology + ?Sized>(
    graph: &G,
    labels: &LabelAssignment,
    model: &BayesModel,
    node: NodeId,
    scoring: FrontierScoring,
) -> ScoreVector {
    let neighbors = graph
        .adjacent(node)
        .map(|(m, p)| (labels.get(m), p))
        .filter(|(l, _)| !l.is_unlabeled());
    match scoring {
        FrontierScoring::Bayes => model.posterior_distribution(neighbors),
        FrontierScoring::BayesWithRn { delta_e } => {
            let neighbors: Vec<(Label, f64)> = neighbors.collect();
            let bayes = model.posterior_distribution(neighbors.iter().copied());
            let rn = rn_score(&neighbors, model.num_classes());
            ensemble_scores(&bayes, &rn, delta_e).expect("same class set")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::UncertainGraph;

    #[test]
    fn frontier_examples() {
        let chain = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let labels = LabelAssignment::from_raw(&[1, 0, 0]);
        assert_eq!(frontier(&chain, &labels), vec![NodeId(1)]);
        let full = LabelAssignment::from_raw(&[1, 2, 1]);
        assert!(frontier(&chain, &full).is_empty());
    }

    #[test]
    fn fully_labeled_is_identity() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 2, 0.5)]).unwrap();
        let labels = LabelAssignment::from_raw(&[1, 2, 1]);
        let run = ubayes_run(&g, &labels, &UBayesParams::default()).unwrap();
        assert_eq!(run.labels, labels);
        assert!(run.iteration_trace().unwrap().is_empty());
    }

    #[test]
    fn isolated_node_takes_prior_argmax() {
        // 0..3 black and 3 white in a connected block, node 4 isolated.
        let g = UncertainGraph::from_edges(
            5,
            [(0, 1, 0.9), (1, 2, 0.9), (2, 3, 0.4)]
                .map(|(a, b, p)| (NodeId(a), NodeId(b), p)),
        )
        .unwrap();
        let labels = LabelAssignment::from_raw(&[1, 1, 1, 2, 0]);
        let run = ubayes_run(&g, &labels, &UBayesParams::default()).unwrap();
        assert_eq!(run.labels.get(NodeId(4)), Label(1));
        assert_eq!(run.final_step, 1);
    }

    #[test]
    fn no_seeds_rejected() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5)]).unwrap();
        let labels = LabelAssignment::unlabeled(2, 2);
        assert_eq!(
            ubayes_run(&g, &labels, &UBayesParams::default()).unwrap_err(),
            Error::NoLabeledNodes
        );
    }

    #[test]
    fn chain_trace() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5), (3, 4, 0.5)])
            .unwrap();
        let labels = LabelAssignment::from_raw(&[1, 0, 0, 0, 0]);
        let run = ubayes_run(&g, &labels, &UBayesParams::default()).unwrap();
        let trace = run.iteration_trace().unwrap();
        assert_eq!(trace.len(), 4);
        assert!(trace.iter().all(|r| r.frontier == 1));
        assert_eq!(trace.iter().map(|r| r.fixed).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn star_trace() {
        let triples: Vec<(u32, u32, f64)> = (1..=6).map(|i| (0, i, 0.7)).collect();
        let g = UncertainGraph::from_triples(&triples).unwrap();
        let mut raw = vec![0u32; 7];
        raw[0] = 1;
        let run = ubayes_run(&g, &LabelAssignment::from_raw(&raw), &UBayesParams::default())
            .unwrap();
        let trace = run.iteration_trace().unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].frontier, 6);
    }

    #[test]
    fn trace_disabled() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5)]).unwrap();
        let params = UBayesParams {
            record_trace: false,
            ..Default::default()
        };
        let run = ubayes_run(&g, &LabelAssignment::from_raw(&[1, 0]), &params).unwrap();
        assert!(run.iteration_trace().is_err());
    }

    #[test]
    fn iteration_cap_sends_rest_to_final_step() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 2, 0.5), (2, 3, 0.5)]).unwrap();
        let params = UBayesParams {
            max_iterations: Some(1),
            ..Default::default()
        };
        let run = ubayes_run(&g, &LabelAssignment::from_raw(&[1, 0, 0, 0]), &params).unwrap();
        assert_eq!(run.iterations, 1);
        assert_eq!(run.final_step, 2);
        assert!(run.labels.is_total());
    }

    #[test]
    fn partial_promotion_conserves_nodes() {
        let triples: Vec<(u32, u32, f64)> = (1..=9).map(|i| (0, i, 0.1 * i as f64)).collect();
        let g = UncertainGraph::from_triples(&triples).unwrap();
        let mut raw = vec![0u32; 10];
        raw[0] = 1;
        let params = UBayesParams {
            promote_fraction: 0.3,
            ..Default::default()
        };
        let run = ubayes_run(&g, &LabelAssignment::from_raw(&raw), &params).unwrap();
        let trace = run.iteration_trace().unwrap();
        let promoted: usize = trace.iter().map(|r| r.promoted).sum();
        assert_eq!(promoted + 1 + run.final_step, 10);
        assert!(trace.len() > 1);
    }
}
