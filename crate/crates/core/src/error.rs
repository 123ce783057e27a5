use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge ({src}, {dst}) has probability {prob} outside (0, 1]")]
    ProbabilityOutOfRange { src: u32, dst: u32, prob: f64 },
    #[error("self-loop on node {0}")]
    SelfLoop(u32),
    #[error("edge ({src}, {dst}) listed twice with probabilities {first} and {second}")]
    ConflictingDuplicateEdge {
        src: u32,
        dst: u32,
        first: f64,
        second: f64,
    },
    #[error("unknown node {0}")]
    UnknownNode(u32),
    #[error("theta {0} outside (0, 1]")]
    ThetaOutOfRange(f64),
    #[error("no labeled nodes")]
    NoLabeledNodes,
    #[error("empty score vector")]
    EmptyScores,
    #[error("score vectors cover {0} and {1} labels")]
    MismatchedLabelSets(usize, usize),
    #[error("sampling ratio {0} over {1} nodes selects no node")]
    EmptySample(f64, usize),
    #[error("need at least 2 labeled nodes, found {0}")]
    TooFewLabels(usize),
    #[error("cannot place {requested} new edges ({placed} placed)")]
    GraphTooDense { requested: usize, placed: usize },
    #[error("validation node {0} lacks a truth label or prediction")]
    UnlabeledValidationNode(u32),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("co-events for pair ({0}, {1}) fall outside their activity periods")]
    InconsistentEvents(String, String),
    #[error("citation counts of {0} exceed its total of {1}")]
    InconsistentCounts(String, u64),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("{path}: {msg}")]
    Io { path: PathBuf, msg: String },
    #[error("config: {0}")]
    Config(String),
    #[error("run {run}: {source}")]
    Run {
        run: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            msg: err.to_string(),
        }
    }
}
