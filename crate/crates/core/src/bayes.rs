//! Naive-Bayes relational model with uncertainty-weighted conditionals.
//!
//! The conditional `P(L(i)=p | L(j)=q)` is the probability mass of edges with
//! one endpoint labeled `q` whose other endpoint is labeled `p`, divided by
//! the mass of all edges with an endpoint labeled `q` and a labeled other
//! endpoint. Every edge counts once: a `(q, q)` edge adds its probability to
//! the numerator and denominator of `cond(q|q)` a single time, while a
//! `(p, q)` edge with `p != q` feeds `cond(p|q)` and `cond(q|p)`.
//!
//! Both tables are smoothed by adding `delta` to every entry, without
//! renormalizing. Cells with no supporting edge fall back to the prior.

use crate::error::{Error, Result};
use crate::graph::Topology;
use crate::labels::{Label, LabelAssignment};

pub const DEFAULT_SMOOTHING: f64 = 1e-4;

/// Class frequencies among labeled nodes, indexed by class.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorTable {
    probs: Vec<f64>,
}

impl PriorTable {
    pub fn estimate(labels: &LabelAssignment) -> Result<Self> {
        let counts = labels.class_counts();
        let total: usize = counts.iter().sum();
        if total == 0 {
            return Err(Error::NoLabeledNodes);
        }
        Ok(PriorTable {
            probs: counts
                .iter()
                .map(|&c| c as f64 / total as f64)
                .collect(),
        })
    }

    pub fn from_probs(probs: Vec<f64>) -> Self {
        PriorTable { probs }
    }

    pub fn num_classes(&self) -> usize {
        self.probs.len()
    }

    pub fn get(&self, label: Label) -> f64 {
        self.probs[label.index()]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn smoothed(&self, delta: f64) -> PriorTable {
        PriorTable {
            probs: self.probs.iter().map(|p| p + delta).collect(),
        }
    }

    /// Most frequent class, ties to the smallest label.
    pub fn argmax(&self) -> Label {
        argmax_index(&self.probs).map_or(Label(1), Label::from_index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalTable {
    classes: usize,
    // row-major by (p, q), pre-smoothing
    raw: Vec<f64>,
    fallback: Vec<bool>,
    delta: f64,
}

impl ConditionalTable {
    /// `priors` are the unsmoothed priors of the same assignment.
    pub fn estimate<G: Topology + ?Sized>(
        graph: &G,
        labels: &LabelAssignment,
        priors: &PriorTable,
        delta: f64,
    ) -> Self {
        let n = labels.num_classes();
        let mut num = vec![0.0f64; n * n];
        let mut den = vec![0.0f64; n];
        for e in graph.visible_edges() {
            let (a, b) = (labels.get(e.src), labels.get(e.dst));
            if a.is_unlabeled() || b.is_unlabeled() {
                continue;
            }
            let (a, b) = (a.index(), b.index());
            if a == b {
                num[a * n + a] += e.prob;
                den[a] += e.prob;
            } else {
                num[b * n + a] += e.prob;
                den[a] += e.prob;
                num[a * n + b] += e.prob;
                den[b] += e.prob;
            }
        }
        Self::from_counts(n, &num, &den, priors, delta)
    }

    pub(crate) fn from_counts(
        n: usize,
        num: &[f64],
        den: &[f64],
        priors: &PriorTable,
        delta: f64,
    ) -> Self {
        let mut raw = vec![0.0; n * n];
        let mut fallback = vec![false; n * n];
        for q in 0..n {
            for p in 0..n {
                if den[q] > 0.0 {
                    raw[p * n + q] = num[p * n + q] / den[q];
                } else {
                    raw[p * n + q] = priors.probs.get(p).copied().unwrap_or(0.0);
                    fallback[p * n + q] = true;
                }
            }
        }
        ConditionalTable {
            classes: n,
            raw,
            fallback,
            delta,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    /// Pre-smoothing estimate of `P(L(i)=p | L(j)=q)`.
    pub fn raw(&self, p: Label, q: Label) -> f64 {
        self.raw[p.index() * self.classes + q.index()]
    }

    /// Smoothed estimate used in scoring.
    pub fn get(&self, p: Label, q: Label) -> f64 {
        self.raw(p, q) + self.delta
    }

    pub fn is_fallback(&self, p: Label, q: Label) -> bool {
        self.fallback[p.index() * self.classes + q.index()]
    }
}

/// Unnormalized posterior over classes `1..=l` (index 0 is label 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector(pub Vec<f64>);

impl ScoreVector {
    pub fn get(&self, label: Label) -> f64 {
        self.0[label.index()]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest-scoring label, ties to the smallest.
    pub fn argmax_label(&self) -> Result<Label> {
        argmax_index(&self.0)
            .map(Label::from_index)
            .ok_or(Error::EmptyScores)
    }

    /// Scaled to sum to one; an all-zero vector becomes uniform.
    pub fn normalized(&self) -> ScoreVector {
        let total: f64 = self.0.iter().sum();
        if total > 0.0 && total.is_finite() {
            ScoreVector(self.0.iter().map(|s| s / total).collect())
        } else {
            let n = self.0.len().max(1) as f64;
            ScoreVector(vec![1.0 / n; self.0.len()])
        }
    }
}

pub(crate) fn argmax_index(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        match best {
            Some((_, b)) if v <= b => {}
            _ => best = Some((i, v)),
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BayesModel {
    raw_priors: PriorTable,
    priors: PriorTable,
    conditionals: ConditionalTable,
    delta: f64,
    log_priors: Vec<f64>,
    // row-major by (t, p): ln cond(t | p)
    log_cond: Vec<f64>,
}

impl BayesModel {
    /// Estimates priors and conditionals from the labeled nodes of `labels`
    /// over the edges visible in `graph`.
    pub fn estimate<G: Topology + ?Sized>(
        graph: &G,
        labels: &LabelAssignment,
        delta: f64,
    ) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "smoothing delta must be positive, got {delta}"
            )));
        }
        let raw_priors = PriorTable::estimate(labels)?;
        let conditionals = ConditionalTable::estimate(graph, labels, &raw_priors, delta);
        Ok(Self::from_parts(raw_priors, conditionals, delta))
    }

    pub fn from_parts(raw_priors: PriorTable, conditionals: ConditionalTable, delta: f64) -> Self {
        let n = raw_priors.num_classes();
        let priors = raw_priors.smoothed(delta);
        let log_priors = priors.probs.iter().map(|p| p.ln()).collect();
        let mut log_cond = vec![0.0; n * n];
        for t in 0..n {
            for p in 0..n {
                log_cond[t * n + p] = conditionals
                    .get(Label::from_index(t), Label::from_index(p))
                    .ln();
            }
        }
        BayesModel {
            raw_priors,
            priors,
            conditionals,
            delta,
            log_priors,
            log_cond,
        }
    }

    pub fn num_classes(&self) -> usize {
        self.priors.num_classes()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Smoothed priors.
    pub fn priors(&self) -> &PriorTable {
        &self.priors
    }

    pub fn raw_priors(&self) -> &PriorTable {
        &self.raw_priors
    }

    pub fn conditionals(&self) -> &ConditionalTable {
        &self.conditionals
    }

    /// `ln prior(p) + Σ_k ln cond(t_k | p)` for each class `p`; unlabeled
    /// neighbors are skipped.
    pub fn log_scores<I>(&self, labeled_neighbors: I) -> Vec<f64>
    where
        I: IntoIterator<Item = (Label, f64)>,
    {
        let n = self.num_classes();
        let mut acc = self.log_priors.clone();
        for (t, _prob) in labeled_neighbors {
            if t.is_unlabeled() {
                continue;
            }
            let row = &self.log_cond[t.index() * n..(t.index() + 1) * n];
            for (a, l) in acc.iter_mut().zip(row) {
                *a += l;
            }
        }
        acc
    }

    /// Posterior scores exponentiated from log space.
    pub fn posterior_scores<I>(&self, labeled_neighbors: I) -> ScoreVector
    where
        I: IntoIterator<Item = (Label, f64)>,
    {
        ScoreVector(
            self.log_scores(labeled_neighbors)
                .into_iter()
                .map(f64::exp)
                .collect(),
        )
    }

    /// Posterior normalized to sum to one, computed stably from log space.
    pub fn posterior_distribution<I>(&self, labeled_neighbors: I) -> ScoreVector
    where
        I: IntoIterator<Item = (Label, f64)>,
    {
        softmax(&self.log_scores(labeled_neighbors))
    }
}

pub(crate) fn softmax(logs: &[f64]) -> ScoreVector {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logs.iter().map(|l| (l - max).exp()).collect();
    ScoreVector(exps).normalized()
}
