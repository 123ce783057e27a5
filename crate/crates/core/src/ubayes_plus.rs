//! Iterative edge augmentation (uBayes+) and the uBayes+RN ensemble.
//!
//! The fraction `theta` of most probable edges to keep is chosen on a node
//! sample of the graph: the sampled seeds are split into a training part and
//! a hold-out part, uBayes runs from the training seeds for each `theta` in
//! the grid, and the `theta` with the best hold-out accuracy (smallest on
//! ties) is then applied to the full graph.

use log::warn;
use rand::seq::{index, SliceRandom};
use rayon::prelude::*;

use crate::bayes::{ScoreVector, DEFAULT_SMOOTHING};
use crate::error::{Error, Result};
use crate::graph::{activation_count, EdgeActivationView, NodeId, Subgraph, Topology, UncertainGraph};
use crate::labels::LabelAssignment;
use crate::rng::{rng_for, STREAM_HOLDOUT, STREAM_SAMPLE_NODES};
use crate::ubayes::{run_with_scoring, FrontierScoring, UBayesParams};
use crate::util::{ceil_count, round_half_up};

pub const DEFAULT_DELTA_E: f64 = 0.5;

/// `0.05, 0.10, …, 1.0`.
pub fn default_theta_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct UBayesPlusParams {
    /// Fraction of nodes sampled for the theta search.
    pub alpha: f64,
    /// Fraction of sampled seeds used for training; the rest is held out.
    pub beta: f64,
    pub theta_grid: Vec<f64>,
    pub seed: u64,
    pub delta_s: f64,
}

impl Default for UBayesPlusParams {
    fn default() -> Self {
        UBayesPlusParams {
            alpha: 0.2,
            beta: 0.1,
            theta_grid: default_theta_grid(),
            seed: 0,
            delta_s: DEFAULT_SMOOTHING,
        }
    }
}

impl UBayesPlusParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must be in (0, 1], got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return bad(format!("beta must be in (0, 1), got {}", self.beta));
        }
        validate_grid(&self.theta_grid)
    }

    fn ubayes(&self) -> UBayesParams {
        UBayesParams {
            delta_s: self.delta_s,
            record_trace: false,
            ..Default::default()
        }
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    let ok = !grid.is_empty()
        && grid.iter().all(|&t| t > 0.0 && t <= 1.0)
        && grid.windows(2).all(|w| w[0] < w[1])
        && grid.last() == Some(&1.0);
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "theta grid must be strictly increasing in (0, 1] and end at 1.0: {grid:?}"
        )))
    }
}

/// A node sample of a graph together with the seeds that fall inside it.
#[derive(Debug, Clone)]
pub struct SampledNetwork {
    pub sample: Subgraph,
    pub seeds: LabelAssignment,
}

/// Induced subgraph over `⌈alpha·|N|⌉` nodes drawn without replacement.
pub fn sample_network(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    alpha: f64,
    seed: u64,
) -> Result<SampledNetwork> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must be in (0, 1], got {alpha}"
        )));
    }
    let n = graph.node_count();
    let k = ceil_count(alpha * n as f64).min(n);
    if k == 0 {
        return Err(Error::EmptySample(alpha, n));
    }
    let nodes: Vec<NodeId> = if k == n {
        (0..n as u32).map(NodeId).collect()
    } else {
        let mut rng = rng_for(seed, STREAM_SAMPLE_NODES);
        index::sample(&mut rng, n, k)
            .into_iter()
            .map(|i| NodeId(i as u32))
            .collect()
    };
    let sample = graph.induced_subgraph(&nodes)?;
    let labels = sample.original_ids.iter().map(|&o| seeds.get(o)).collect();
    let seeds = LabelAssignment::with_num_classes(labels, seeds.num_classes())?;
    Ok(SampledNetwork { sample, seeds })
}

/// Disjoint random split into `(train, hold)`, `|train| = max(1, round(beta·n))`
/// and at least one node held out. Both halves come back sorted.
pub fn split_holdout(
    labeled: &[NodeId],
    beta: f64,
    seed: u64,
) -> Result<(Vec<NodeId>, Vec<NodeId>)> {
    if labeled.len() < 2 {
        return Err(Error::TooFewLabels(labeled.len()));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must be in (0, 1), got {beta}"
        )));
    }
    let n = labeled.len();
    let train_size = round_half_up(beta * n as f64).clamp(1, n - 1);
    let mut shuffled = labeled.to_vec();
    shuffled.sort_unstable();
    shuffled.shuffle(&mut rng_for(seed, STREAM_HOLDOUT));
    let (train, hold) = shuffled.split_at(train_size);
    let (mut train, mut hold) = (train.to_vec(), hold.to_vec());
    train.sort_unstable();
    hold.sort_unstable();
    Ok((train, hold))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSweepResult {
    /// `(theta, hold-out accuracy)` in grid order.
    pub per_theta: Vec<(f64, f64)>,
    pub theta_star: f64,
}

impl ThetaSweepResult {
    pub fn best_accuracy(&self) -> f64 {
        self.per_theta
            .iter()
            .map(|&(_, a)| a)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Hold-out accuracy of uBayes from `train` seeds for each grid value.
///
/// `labels` holds the true labels of at least every node in `train` and
/// `hold`.
pub fn theta_sweep(
    graph: &UncertainGraph,
    labels: &LabelAssignment,
    train: &[NodeId],
    hold: &[NodeId],
    theta_grid: &[f64],
    delta_s: f64,
) -> Result<ThetaSweepResult> {
    sweep_with_scoring(
        graph,
        labels,
        train,
        hold,
        theta_grid,
        &UBayesParams {
            delta_s,
            record_trace: false,
            ..Default::default()
        },
        FrontierScoring::Bayes,
    )
}

fn sweep_with_scoring(
    graph: &UncertainGraph,
    labels: &LabelAssignment,
    train: &[NodeId],
    hold: &[NodeId],
    theta_grid: &[f64],
    params: &UBayesParams,
    scoring: FrontierScoring,
) -> Result<ThetaSweepResult> {
    validate_grid(theta_grid)?;
    if hold.is_empty() {
        return Err(Error::TooFewLabels(train.len()));
    }
    let ranking = graph.edge_ranking();
    let seeds = labels.restricted_to(train);
    let per_theta = theta_grid
        .par_iter()
        .map(|&theta| {
            let k = activation_count(theta, graph.edge_count())?;
            let view = EdgeActivationView::top_k(graph, &ranking, k);
            let run = run_with_scoring(&view, &seeds, params, scoring)?;
            let correct = hold
                .iter()
                .filter(|&&n| run.labels.get(n) == labels.get(n))
                .count();
            Ok((theta, correct as f64 / hold.len() as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut theta_star = per_theta[0].0;
    let mut best = per_theta[0].1;
    for &(theta, acc) in &per_theta[1..] {
        if acc > best {
            best = acc;
            theta_star = theta;
        }
    }
    Ok(ThetaSweepResult {
        per_theta,
        theta_star,
    })
}

#[derive(Debug, Clone)]
pub struct UBayesPlusRun {
    pub labels: LabelAssignment,
    /// `None` when parameter selection was skipped.
    pub sweep: Option<ThetaSweepResult>,
    pub theta_star: f64,
    pub active_edges: usize,
}

pub fn ubayes_plus_run(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    params: &UBayesPlusParams,
) -> Result<UBayesPlusRun> {
    run_plus(graph, seeds, params, FrontierScoring::Bayes)
}

/// uBayes+ with every frontier node scored by the Bayes/RN ensemble.
pub fn ubayes_plus_rn_run(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    params: &UBayesPlusParams,
    delta_e: f64,
) -> Result<UBayesPlusRun> {
    check_delta_e(delta_e)?;
    run_plus(graph, seeds, params, FrontierScoring::BayesWithRn { delta_e })
}

fn run_plus(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    params: &UBayesPlusParams,
    scoring: FrontierScoring,
) -> Result<UBayesPlusRun> {
    params.validate()?;
    if seeds.labeled_count() == 0 {
        return Err(Error::NoLabeledNodes);
    }
    let inner = params.ubayes();
    let sweep = match select_theta(graph, seeds, params, &inner, scoring) {
        Ok(sweep) => Some(sweep),
        Err(e @ (Error::EmptySample(..) | Error::TooFewLabels(_))) => {
            warn!("theta selection skipped ({e}); running uBayes on all edges");
            None
        }
        Err(e) => return Err(e),
    };
    let theta_star = sweep.as_ref().map_or(1.0, |s| s.theta_star);
    let k = activation_count(theta_star, graph.edge_count())?;
    let view = EdgeActivationView::top_k(graph, &graph.edge_ranking(), k);
    let run = run_with_scoring(&view, seeds, &inner, scoring)?;
    Ok(UBayesPlusRun {
        labels: run.labels,
        sweep,
        theta_star,
        active_edges: k,
    })
}

fn select_theta(
    graph: &UncertainGraph,
    seeds: &LabelAssignment,
    params: &UBayesPlusParams,
    inner: &UBayesParams,
    scoring: FrontierScoring,
) -> Result<ThetaSweepResult> {
    let sampled = sample_network(graph, seeds, params.alpha, params.seed)?;
    let (train, hold) = split_holdout(&sampled.seeds.labeled_nodes(), params.beta, params.seed)?;
    sweep_with_scoring(
        &sampled.sample.graph,
        &sampled.seeds,
        &train,
        &hold,
        &params.theta_grid,
        inner,
        scoring,
    )
}

fn check_delta_e(delta_e: f64) -> Result<()> {
    if (0.0..=1.0).contains(&delta_e) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "delta_e must be in [0, 1], got {delta_e}"
        )))
    }
}

/// `(bayes + delta_e·rn) / (1 + delta_e)` after normalizing both inputs.
pub fn ensemble_scores(bayes: &ScoreVector, rn: &ScoreVector, delta_e: f64) -> Result<ScoreVector> {
    if bayes.len() != rn.len() {
        return Err(Error::MismatchedLabelSets(bayes.len(), rn.len()));
    }
    check_delta_e(delta_e)?;
    let (b, r) = (bayes.normalized(), rn.normalized());
    Ok(ScoreVector(
        b.0.iter()
            .zip(&r.0)
            .map(|(b, r)| (b + delta_e * r) / (1.0 + delta_e))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::Label;

    #[test]
    fn default_grid_shape() {
        let g = default_theta_grid();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[19], 1.0);
        assert!(validate_grid(&g).is_ok());
        assert!(validate_grid(&[0.5]).is_err());
        assert!(validate_grid(&[0.5, 0.5, 1.0]).is_err());
    }

    #[test]
    fn ensemble_examples() {
        let b = ScoreVector(vec![0.8, 0.2]);
        let r = ScoreVector(vec![0.2, 0.8]);
        assert_eq!(ensemble_scores(&b, &r, 1.0).unwrap().0, vec![0.5, 0.5]);
        let out = ensemble_scores(&ScoreVector(vec![0.6, 0.4]), &r, 0.5).unwrap();
        assert!((out.0[0] - 0.7 / 1.5).abs() < 1e-12);
        assert!((out.0[1] - 0.8 / 1.5).abs() < 1e-12);
        let zero = ensemble_scores(&ScoreVector(vec![3.0, 1.0]), &r, 0.0).unwrap();
        assert_eq!(zero.argmax_label().unwrap(), Label(1));
        assert_eq!(
            ensemble_scores(&b, &ScoreVector(vec![1.0]), 0.5).unwrap_err(),
            Error::MismatchedLabelSets(2, 1)
        );
        assert!(ensemble_scores(&b, &r, 1.5).is_err());
    }

    #[test]
    fn crafted_disagreement_goes_to_rn() {
        let bayes = ScoreVector(vec![0.55, 0.45]);
        let rn = ScoreVector(vec![0.1, 0.9]);
        let out = ensemble_scores(&bayes, &rn, 1.0).unwrap();
        assert_eq!(out.argmax_label().unwrap(), Label(2));
    }

    #[test]
    fn split_counts() {
        let nodes: Vec<NodeId> = (0..10).map(NodeId).collect();
        let (train, hold) = split_holdout(&nodes, 0.1, 3).unwrap();
        assert_eq!((train.len(), hold.len()), (1, 9));
        assert!(train.iter().all(|n| !hold.contains(n)));
        assert_eq!(split_holdout(&nodes[..1], 0.1, 3), Err(Error::TooFewLabels(1)));
        let (t2, h2) = split_holdout(&nodes[..2], 0.9, 3).unwrap();
        assert_eq!((t2.len(), h2.len()), (1, 1));
    }

    #[test]
    fn sample_sizes() {
        let triples: Vec<(u32, u32, f64)> = (0..99).map(|i| (i, i + 1, 0.5)).collect();
        let g = UncertainGraph::from_triples(&triples).unwrap();
        let seeds = LabelAssignment::unlabeled(100, 2);
        let s = sample_network(&g, &seeds, 0.2, 11).unwrap();
        assert_eq!(s.sample.graph.node_count(), 20);
        let again = sample_network(&g, &seeds, 0.2, 11).unwrap();
        assert_eq!(s.sample.original_ids, again.sample.original_ids);
        let all = sample_network(&g, &seeds, 1.0, 11).unwrap();
        assert_eq!(all.sample.graph, g);
        let empty = UncertainGraph::from_triples(&[]).unwrap();
        assert!(matches!(
            sample_network(&empty, &LabelAssignment::unlabeled(0, 1), 0.5, 0),
            Err(Error::EmptySample(..))
        ));
    }

    #[test]
    fn single_grid_value() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.9), (1, 2, 0.9), (2, 3, 0.2)]).unwrap();
        let labels = LabelAssignment::from_raw(&[1, 1, 2, 2]);
        let sweep = theta_sweep(&g, &labels, &[NodeId(0)], &[NodeId(1), NodeId(3)], &[1.0], 1e-4)
            .unwrap();
        assert_eq!(sweep.theta_star, 1.0);
        assert_eq!(sweep.per_theta.len(), 1);
    }
}
