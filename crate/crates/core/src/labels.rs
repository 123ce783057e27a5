//! Node labels and label assignments.
//!
//! Labels are positive integers `1..=l`; `0` marks an unlabeled node.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Label(pub u32);

impl Label {
    pub const UNLABELED: Label = Label(0);

    pub fn is_unlabeled(self) -> bool {
        self.0 == 0
    }

    /// Zero-based class index; only meaningful for labeled values.
    pub fn index(self) -> usize {
        debug_assert!(self.0 > 0);
        self.0 as usize - 1
    }

    pub fn from_index(idx: usize) -> Label {
        Label(idx as u32 + 1)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Per-node labels plus the size of the label universe.
///
/// Labeled nodes are exactly the fixed set `T`: classifiers never change a
/// nonzero label they were given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelAssignment {
    labels: Vec<Label>,
    num_classes: usize,
}

impl LabelAssignment {
    /// Infers the number of classes from the largest label present.
    pub fn new(labels: Vec<Label>) -> Self {
        let num_classes = labels.iter().map(|l| l.0 as usize).max().unwrap_or(0);
        LabelAssignment {
            labels,
            num_classes,
        }
    }

    pub fn with_num_classes(labels: Vec<Label>, num_classes: usize) -> Result<Self> {
        if let Some(bad) = labels.iter().find(|l| l.0 as usize > num_classes) {
            return Err(Error::InvalidParameter(format!(
                "label {bad} exceeds class count {num_classes}"
            )));
        }
        Ok(LabelAssignment {
            labels,
            num_classes,
        })
    }

    pub fn unlabeled(node_count: usize, num_classes: usize) -> Self {
        LabelAssignment {
            labels: vec![Label::UNLABELED; node_count],
            num_classes,
        }
    }

    pub fn from_raw(raw: &[u32]) -> Self {
        Self::new(raw.iter().copied().map(Label).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn get(&self, node: NodeId) -> Label {
        self.labels[node.index()]
    }

    pub fn is_labeled(&self, node: NodeId) -> bool {
        !self.labels[node.index()].is_unlabeled()
    }

    pub fn set(&mut self, node: NodeId, label: Label) {
        debug_assert!(label.0 as usize <= self.num_classes);
        self.labels[node.index()] = label;
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.labels
    }

    pub fn labeled_nodes(&self) -> Vec<NodeId> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_unlabeled())
            .map(|(i, _)| NodeId(i as u32))
            .collect()
    }

    pub fn labeled_count(&self) -> usize {
        self.labels.iter().filter(|l| !l.is_unlabeled()).count()
    }

    pub fn is_total(&self) -> bool {
        self.labels.iter().all(|l| !l.is_unlabeled())
    }

    /// Keeps labels only on `keep`; every other node becomes unlabeled.
    pub fn restricted_to(&self, keep: &[NodeId]) -> Self {
        let mut out = Self::unlabeled(self.len(), self.num_classes);
        for &n in keep {
            out.labels[n.index()] = self.labels[n.index()];
        }
        out
    }

    /// Unlabels every node in `hide`.
    pub fn hiding(&self, hide: &[NodeId]) -> Self {
        let mut out = self.clone();
        for &n in hide {
            out.labels[n.index()] = Label::UNLABELED;
        }
        out
    }

    pub(crate) fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.num_classes];
        for l in self.labels.iter().filter(|l| !l.is_unlabeled()) {
            counts[l.index()] += 1;
        }
        counts
    }
}
