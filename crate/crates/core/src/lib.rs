//! Collective node classification on uncertain graphs.
//!
//! Edges carry existence probabilities. The main classifiers are
//! [`ubayes::ubayes_run`], an iterative naive-Bayes labeler that weighs
//! label co-occurrence by edge probability, and
//! [`ubayes_plus::ubayes_plus_run`], which first picks the fraction of most
//! probable edges to keep by validating on a node sample. RN, wvRN and
//! possible-worlds sampling are available as baselines, together with the
//! perturbation generators and the repeated sub-sampling evaluation used to
//! compare them.

pub mod baselines;
pub mod bayes;
pub mod commands;
pub mod config;
pub mod error;
pub mod eval;
pub mod graph;
pub mod ingest;
pub mod io;
pub mod labels;
pub mod perturb;
pub mod rng;
pub mod synth;
pub mod ubayes;
pub mod ubayes_plus;
mod util;

pub use error::{Error, Result};
pub use graph::{EdgeActivationView, NodeId, Topology, UncertainGraph};
pub use labels::{Label, LabelAssignment};
