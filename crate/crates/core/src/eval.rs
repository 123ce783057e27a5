//! Repeated random sub-sampling validation.
//!
//! Each repeat perturbs the graph with its own seed stream, splits the
//! labeled nodes into training and validation parts, hides the validation
//! labels, classifies, and scores the validation nodes with a confusion
//! matrix. Repeats are summarized by the mean accuracy and a normal
//! approximation 95% interval.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;

use crate::baselines::{rn_classify, sampling_classify, wvrn_classify, SamplingParams, WvrnParams};
use crate::error::{Error, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::labels::LabelAssignment;
use crate::perturb::{perturb, PerturbationConfig};
use crate::rng::{derive_seed, rng_for, STREAM_CLASSIFIER, STREAM_SPLIT};
use crate::ubayes::{ubayes_run, UBayesParams};
use crate::ubayes_plus::{ubayes_plus_rn_run, ubayes_plus_run, UBayesPlusParams};
use crate::util::round_half_up;

/// Normal quantile for a two-sided 95% interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub train_ratio: f64,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_ratio: 2.0 / 3.0,
            repeats: 5,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_ratio > 0.0 && self.train_ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "train ratio must be in (0, 1), got {}",
                self.train_ratio
            )));
        }
        if self.repeats == 0 {
            return Err(Error::InvalidParameter("repeats must be at least 1".into()));
        }
        Ok(())
    }
}

/// Partition of the labeled nodes into `(train, validation)`, both sorted.
pub fn subsample_split(
    labeled: &[NodeId],
    spec: &SplitSpec,
    run_index: usize,
) -> Result<(Vec<NodeId>, Vec<NodeId>)> {
    spec.validate()?;
    if labeled.len() < 2 {
        return Err(Error::TooFewLabels(labeled.len()));
    }
    let n = labeled.len();
    let train_size = round_half_up(spec.train_ratio * n as f64).clamp(1, n - 1);
    let mut shuffled = labeled.to_vec();
    shuffled.sort_unstable();
    let mut rng = rng_for(derive_seed(spec.seed, run_index as u64), STREAM_SPLIT);
    shuffled.shuffle(&mut rng);
    let mut train = shuffled[..train_size].to_vec();
    let mut validation = shuffled[train_size..].to_vec();
    train.sort_unstable();
    validation.sort_unstable();
    Ok((train, validation))
}

/// `counts[i][j]`: validation nodes with true label `i+1` predicted `j+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(classes: usize) -> Self {
        ConfusionMatrix {
            classes,
            counts: vec![0; classes * classes],
        }
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Self {
        let classes = rows.len();
        assert!(rows.iter().all(|r| r.len() == classes), "matrix must be square");
        ConfusionMatrix {
            classes,
            counts: rows.concat(),
        }
    }

    pub fn num_classes(&self) -> usize {
        self.classes
    }

    /// Zero-based class indices.
    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.classes + predicted]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|i| self.get(i, i)).sum()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.classes)
            .flat_map(|i| (0..self.classes).map(move |j| (i, j)))
            .all(|(i, j)| i == j || self.get(i, j) == 0)
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.counts.chunks(self.classes)
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

pub fn confusion(
    predicted: &LabelAssignment,
    truth: &LabelAssignment,
    validation: &[NodeId],
) -> Result<ConfusionMatrix> {
    let classes = truth.num_classes().max(predicted.num_classes());
    let mut m = ConfusionMatrix::new(classes);
    for &n in validation {
        let (t, p) = (truth.get(n), predicted.get(n));
        if t.is_unlabeled() || p.is_unlabeled() {
            return Err(Error::UnlabeledValidationNode(n.0));
        }
        m.counts[t.index() * classes + p.index()] += 1;
    }
    Ok(m)
}

pub fn accuracy(m: &ConfusionMatrix) -> Result<f64> {
    match m.total() {
        0 => Err(Error::EmptyMatrix),
        total => Ok(m.trace() as f64 / total as f64),
    }
}

/// A classifier with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    UBayes(UBayesParams),
    UBayesPlus(UBayesPlusParams),
    UBayesPlusRn { params: UBayesPlusParams, delta_e: f64 },
    Rn,
    Wvrn(WvrnParams),
    Sampling(SamplingParams),
}

/// Labels produced by a classifier plus the selected edge ratio, if any.
#[derive(Debug, Clone)]
pub struct Classification {
    pub labels: LabelAssignment,
    pub theta_star: Option<f64>,
}

impl ClassifierSpec {
    pub fn wvrn_20() -> Self {
        ClassifierSpec::Wvrn(WvrnParams::capped(20))
    }

    pub fn name(&self) -> String {
        match self {
            ClassifierSpec::UBayes(_) => "ubayes".into(),
            ClassifierSpec::UBayesPlus(_) => "ubayes_plus".into(),
            ClassifierSpec::UBayesPlusRn { .. } => "ubayes_plus_rn".into(),
            ClassifierSpec::Rn => "rn".into(),
            ClassifierSpec::Wvrn(p) if p.time_budget.is_none() && p.max_iterations != WvrnParams::default().max_iterations => {
                format!("wvrn-{}", p.max_iterations)
            }
            ClassifierSpec::Wvrn(_) => "wvrn".into(),
            ClassifierSpec::Sampling(_) => "sampling".into(),
        }
    }

    /// Runs the classifier; `seed` drives any randomness it uses.
    pub fn classify(&self, graph: &UncertainGraph, seeds: &LabelAssignment, seed: u64) -> Result<Classification> {
        let plain = |labels| Classification {
            labels,
            theta_star: None,
        };
        Ok(match self {
            ClassifierSpec::UBayes(p) => plain(ubayes_run(graph, seeds, p)?.labels),
            ClassifierSpec::UBayesPlus(p) => {
                let run = ubayes_plus_run(graph, seeds, &UBayesPlusParams { seed, ..p.clone() })?;
                Classification {
                    labels: run.labels,
                    theta_star: Some(run.theta_star),
                }
            }
            ClassifierSpec::UBayesPlusRn { params, delta_e } => {
                let p = UBayesPlusParams {
                    seed,
                    ..params.clone()
                };
                let run = ubayes_plus_rn_run(graph, seeds, &p, *delta_e)?;
                Classification {
                    labels: run.labels,
                    theta_star: Some(run.theta_star),
                }
            }
            ClassifierSpec::Rn => plain(rn_classify(graph, seeds)?),
            ClassifierSpec::Wvrn(p) => plain(wvrn_classify(graph, seeds, p)?),
            ClassifierSpec::Sampling(p) => plain(sampling_classify(
                graph,
                seeds,
                &SamplingParams { seed, ..p.clone() },
            )?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
    pub elapsed: Duration,
    pub theta_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub classifier: String,
    pub per_run: Vec<RunRecord>,
    pub mean_accuracy: f64,
    /// `None` with a single run: one sample has no spread estimate.
    pub ci95_halfwidth: Option<f64>,
}

impl EvalReport {
    pub fn from_runs(classifier: String, per_run: Vec<RunRecord>) -> Self {
        let accs: Vec<f64> = per_run.iter().map(|r| r.accuracy).collect();
        let (mean_accuracy, ci95_halfwidth) = mean_and_ci95(&accs);
        EvalReport {
            classifier,
            per_run,
            mean_accuracy,
            ci95_halfwidth,
        }
    }

    pub fn mean_seconds(&self) -> f64 {
        if self.per_run.is_empty() {
            return 0.0;
        }
        self.per_run.iter().map(|r| r.elapsed.as_secs_f64()).sum::<f64>() / self.per_run.len() as f64
    }
}

/// Mean and `1.96·s/√n` with `s` the sample standard deviation.
pub fn mean_and_ci95(values: &[f64]) -> (f64, Option<f64>) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, None);
    }
    // Sorting makes the float sums independent of run order.
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = sorted.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, None);
    }
    let var = sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Some(Z_95 * var.sqrt() / (n as f64).sqrt()))
}

pub fn run_experiment(
    graph: &UncertainGraph,
    truth: &LabelAssignment,
    classifier: &ClassifierSpec,
    perturbation: &PerturbationConfig,
    split: &SplitSpec,
) -> Result<EvalReport> {
    split.validate()?;
    perturbation.validate()?;
    let mut per_run = Vec::with_capacity(split.repeats);
    for run in 0..split.repeats {
        let record = run_once(graph, truth, classifier, perturbation, split, run).map_err(|e| Error::Run {
            run,
            source: Box::new(e),
        })?;
        per_run.push(record);
    }
    Ok(EvalReport::from_runs(classifier.name(), per_run))
}

fn run_once(
    graph: &UncertainGraph,
    truth: &LabelAssignment,
    classifier: &ClassifierSpec,
    perturbation: &PerturbationConfig,
    split: &SplitSpec,
    run: usize,
) -> Result<RunRecord> {
    let run_seed = derive_seed(split.seed, run as u64);
    let perturbed = perturb(
        graph,
        truth,
        &PerturbationConfig {
            seed: derive_seed(perturbation.seed, run as u64),
            ..perturbation.clone()
        },
    )?;
    let (train, validation) = subsample_split(&perturbed.labels.labeled_nodes(), split, run)?;
    let seeds = perturbed.labels.restricted_to(&train);
    if let Some(leak) = validation.iter().find(|&&n| seeds.is_labeled(n)) {
        return Err(Error::InvalidParameter(format!(
            "validation node {leak} visible to the classifier"
        )));
    }

    let started = Instant::now();
    let out = classifier.classify(&perturbed.graph.graph, &seeds, derive_seed(run_seed, STREAM_CLASSIFIER))?;
    let elapsed = started.elapsed();

    let m = confusion(&out.labels, truth, &validation)?;
    Ok(RunRecord {
        run,
        seed: run_seed,
        accuracy: accuracy(&m)?,
        confusion: m,
        elapsed,
        theta_star: out.theta_star,
    })
}
