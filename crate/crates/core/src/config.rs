//! Experiment configuration, read from TOML.
//!
//! ```toml
//! seed = 7
//!
//! [input]
//! graph = "graph.tsv"
//! labels = "labels.tsv"
//!
//! [classifier]
//! name = ["ubayes_plus", "wvrn-20"]
//! alpha = 0.2
//!
//! [perturbation]
//! phi = 3.0
//!
//! [sweep]
//! phi = [0, 1, 2, 3, 4, 5]
//!
//! [output]
//! dir = "out"
//! ```
//!
//! Unknown keys are rejected. Relative paths are resolved against the
//! directory of the config file.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::baselines::{SamplingParams, WvrnParams};
use crate::bayes::DEFAULT_SMOOTHING;
use crate::error::{Error, Result};
use crate::eval::{ClassifierSpec, SplitSpec};
use crate::perturb::PerturbationConfig;
use crate::ubayes::UBayesParams;
use crate::ubayes_plus::{default_theta_grid, UBayesPlusParams, DEFAULT_DELTA_E};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub input: InputSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub classifier: ClassifierSection,
    #[serde(default)]
    pub perturbation: PerturbationSection,
    #[serde(default)]
    pub split: SplitSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(skip)]
    base_dir: PathBuf,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    pub graph: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    /// Raw records for `ingest`.
    pub records: Option<PathBuf>,
    /// `cooccurrence` or `citation`.
    pub estimator: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_out_dir")]
    pub dir: PathBuf,
    /// Record wall-clock times. Off by default so that repeated runs produce
    /// identical files; timings are still logged.
    #[serde(default)]
    pub timings: bool,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: default_out_dir(),
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifierSection {
    #[serde(default = "default_classifier")]
    pub name: OneOrMany,
    #[serde(default = "default_delta_s")]
    pub delta_s: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_theta_grid")]
    pub theta_grid: Vec<f64>,
    #[serde(default = "default_delta_e")]
    pub delta_e: f64,
    /// uBayes iteration cap or wvRN sweep cap.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[serde(default = "default_num_worlds")]
    pub num_worlds: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_budget_secs: Option<f64>,
}

fn default_classifier() -> OneOrMany {
    OneOrMany::One("ubayes_plus".into())
}
fn default_delta_s() -> f64 {
    DEFAULT_SMOOTHING
}
fn default_alpha() -> f64 {
    UBayesPlusParams::default().alpha
}
fn default_beta() -> f64 {
    UBayesPlusParams::default().beta
}
fn default_delta_e() -> f64 {
    DEFAULT_DELTA_E
}
fn default_num_worlds() -> usize {
    SamplingParams::default().num_worlds
}

impl Default for ClassifierSection {
    fn default() -> Self {
        ClassifierSection {
            name: default_classifier(),
            delta_s: default_delta_s(),
            alpha: default_alpha(),
            beta: default_beta(),
            theta_grid: default_theta_grid(),
            delta_e: default_delta_e(),
            max_iterations: None,
            num_worlds: default_num_worlds(),
            time_budget_secs: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationSection {
    #[serde(default = "default_phi")]
    pub phi: f64,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default)]
    pub edge_removal: f64,
    #[serde(default = "one")]
    pub label_ratio: f64,
}

fn default_phi() -> f64 {
    PerturbationConfig::default().phi
}
fn default_sigma() -> f64 {
    PerturbationConfig::default().sigma
}
fn one() -> f64 {
    1.0
}

impl Default for PerturbationSection {
    fn default() -> Self {
        PerturbationSection {
            phi: default_phi(),
            sigma: default_sigma(),
            edge_removal: 0.0,
            label_ratio: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitSection {
    #[serde(default = "default_train_ratio")]
    pub train_ratio: f64,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
}

fn default_train_ratio() -> f64 {
    SplitSpec::default().train_ratio
}
fn default_repeats() -> usize {
    SplitSpec::default().repeats
}

impl Default for SplitSection {
    fn default() -> Self {
        SplitSection {
            train_ratio: default_train_ratio(),
            repeats: default_repeats(),
        }
    }
}

/// Values swept by `evaluate`; each list replaces the single value of the
/// corresponding perturbation key.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub phi: Option<Vec<f64>>,
    pub sigma: Option<Vec<f64>>,
    pub edge_removal: Option<Vec<f64>>,
    pub label_ratio: Option<Vec<f64>>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub phi: Option<f64>,
    pub sigma: Option<f64>,
    pub edge_removal: Option<f64>,
    pub label_ratio: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Config {
    pub fn parse(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, base).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Flags replace single values; a flag for a swept key also replaces
    /// the sweep.
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.seed = s;
        }
        let p = &mut self.perturbation;
        let sw = &mut self.sweep;
        if let Some(v) = o.phi {
            p.phi = v;
            sw.phi = None;
        }
        if let Some(v) = o.sigma {
            p.sigma = v;
            sw.sigma = None;
        }
        if let Some(v) = o.edge_removal {
            p.edge_removal = v;
            sw.edge_removal = None;
        }
        if let Some(v) = o.label_ratio {
            p.label_ratio = v;
            sw.label_ratio = None;
        }
        if let Some(out) = &o.out {
            // Flags are relative to the working directory, not the config.
            self.output.dir = std::env::current_dir().map(|d| d.join(out)).unwrap_or_else(|_| out.clone());
        }
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.base_dir.join(path)
        }
    }

    fn required(&self, value: &Option<PathBuf>, key: &str) -> Result<PathBuf> {
        value
            .as_deref()
            .map(|p| self.resolve(p))
            .ok_or_else(|| Error::Config(format!("missing key {key}")))
    }

    pub fn graph_path(&self) -> Result<PathBuf> {
        self.required(&self.input.graph, "input.graph")
    }

    pub fn labels_path(&self) -> Result<PathBuf> {
        self.required(&self.input.labels, "input.labels")
    }

    pub fn records_path(&self) -> Result<PathBuf> {
        self.required(&self.input.records, "input.records")
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.output.dir)
    }

    pub fn classifier_names(&self) -> Vec<String> {
        match &self.classifier.name {
            OneOrMany::One(n) => vec![n.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }

    pub fn classifiers(&self) -> Result<Vec<ClassifierSpec>> {
        let names = self.classifier_names();
        if names.is_empty() {
            return Err(Error::Config("classifier.name lists no classifier".into()));
        }
        names.iter().map(|n| self.classifier(n)).collect()
    }

    /// The classifier called `name`, parameterized from the `[classifier]`
    /// section. `wvrn-<k>` caps relaxation at `k` sweeps.
    pub fn classifier(&self, name: &str) -> Result<ClassifierSpec> {
        let c = &self.classifier;
        let budget = match c.time_budget_secs {
            Some(s) if !(s > 0.0 && s.is_finite()) => {
                return Err(Error::Config(format!("time_budget_secs must be positive, got {s}")))
            }
            s => s.map(Duration::from_secs_f64),
        };
        let plus = UBayesPlusParams {
            alpha: c.alpha,
            beta: c.beta,
            theta_grid: c.theta_grid.clone(),
            seed: self.seed,
            delta_s: c.delta_s,
        };
        let spec = match name {
            "ubayes" => ClassifierSpec::UBayes(UBayesParams {
                delta_s: c.delta_s,
                max_iterations: c.max_iterations,
                ..Default::default()
            }),
            "ubayes_plus" => ClassifierSpec::UBayesPlus(plus),
            "ubayes_plus_rn" => ClassifierSpec::UBayesPlusRn {
                params: plus,
                delta_e: c.delta_e,
            },
            "rn" => ClassifierSpec::Rn,
            "wvrn" => ClassifierSpec::Wvrn(WvrnParams {
                max_iterations: c.max_iterations.unwrap_or(WvrnParams::default().max_iterations),
                time_budget: budget,
            }),
            "sampling" => ClassifierSpec::Sampling(SamplingParams {
                num_worlds: c.num_worlds,
                time_budget: budget,
                seed: self.seed,
            }),
            other => match other.strip_prefix("wvrn-").map(str::parse::<usize>) {
                Some(Ok(k)) if k > 0 => ClassifierSpec::Wvrn(WvrnParams {
                    max_iterations: k,
                    time_budget: budget,
                }),
                _ => return Err(Error::Config(format!("unknown classifier {other:?}"))),
            },
        };
        if let ClassifierSpec::UBayesPlus(p) | ClassifierSpec::UBayesPlusRn { params: p, .. } = &spec {
            p.validate()?;
        }
        if !(c.delta_e >= 0.0) {
            return Err(Error::Config(format!("delta_e must be >= 0, got {}", c.delta_e)));
        }
        Ok(spec)
    }

    pub fn perturbation(&self) -> PerturbationConfig {
        let p = &self.perturbation;
        PerturbationConfig {
            phi: p.phi,
            sigma: p.sigma,
            edge_removal: p.edge_removal,
            label_ratio: p.label_ratio,
            seed: self.seed,
        }
    }

    /// Every perturbation setting of the sweep, phi varying slowest.
    pub fn sweep_points(&self) -> Vec<PerturbationConfig> {
        let base = self.perturbation();
        let s = &self.sweep;
        let list = |v: &Option<Vec<f64>>, d: f64| v.clone().unwrap_or_else(|| vec![d]);
        let mut out = Vec::new();
        for &phi in &list(&s.phi, base.phi) {
            for &sigma in &list(&s.sigma, base.sigma) {
                for &edge_removal in &list(&s.edge_removal, base.edge_removal) {
                    for &label_ratio in &list(&s.label_ratio, base.label_ratio) {
                        out.push(PerturbationConfig {
                            phi,
                            sigma,
                            edge_removal,
                            label_ratio,
                            ..base.clone()
                        });
                    }
                }
            }
        }
        out
    }

    pub fn split(&self) -> SplitSpec {
        SplitSpec {
            train_ratio: self.split.train_ratio,
            repeats: self.split.repeats,
            seed: self.seed,
        }
    }
}
