//! Tab-separated edge and label files.
//!
//! Edge files hold one `src<TAB>dst<TAB>probability` line per edge, label
//! files one `node<TAB>label` line per labeled node. Lines starting with `#`
//! and blank lines are skipped. Node names are arbitrary strings without tabs;
//! a [`NodeDict`] maps them to dense ids in sorted name order.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{NodeId, UncertainGraph};
use crate::labels::{Label, LabelAssignment};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeDict {
    names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NodeDict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Returns the id of `name`, assigning the next free id if unseen.
    pub fn intern(&mut self, name: &str) -> NodeId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = NodeId(self.names.len() as u32);
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<NodeId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: NodeId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// A graph together with the names of its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedGraph {
    pub graph: UncertainGraph,
    pub dict: NodeDict,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

// Yields (1-based line number, fields) for every content line.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').collect()))
        }
    })
}

fn check_name(path: &Path, line: usize, name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(parse_err(path, line, "empty node id"));
    }
    Ok(())
}

/// Parses edge-file text into `dict`, which must be empty. Ids follow the
/// sorted order of node names, so reloading a written file reproduces the
/// same graph.
pub fn parse_graph(text: &str, path: &Path, dict: &mut NodeDict) -> Result<UncertainGraph> {
    let mut raw = Vec::new();
    for (line, fields) in records(text) {
        let [src, dst, prob] = fields[..] else {
            return Err(parse_err(
                path,
                line,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            ));
        };
        check_name(path, line, src)?;
        check_name(path, line, dst)?;
        let p: f64 = prob
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad probability {prob:?}")))?;
        if !(p > 0.0 && p <= 1.0) {
            return Err(parse_err(path, line, format!("probability {p} outside (0, 1]")));
        }
        if src == dst {
            return Err(parse_err(path, line, format!("self-loop on {src}")));
        }
        raw.push((line, src, dst, p));
    }
    let mut names: Vec<&str> = raw.iter().flat_map(|r| [r.1, r.2]).collect();
    names.sort_unstable();
    names.dedup();
    for name in names {
        dict.intern(name);
    }
    let mut first: HashMap<(NodeId, NodeId), f64> = HashMap::with_capacity(raw.len());
    let mut edges = Vec::with_capacity(raw.len());
    for &(line, src, dst, p) in &raw {
        let (a, b) = (dict.intern(src), dict.intern(dst));
        let key = (a.min(b), a.max(b));
        match first.get(&key) {
            Some(&q) if q != p => {
                return Err(parse_err(
                    path,
                    line,
                    format!("{src}-{dst} listed earlier with probability {q}, now {p}"),
                ))
            }
            Some(_) => {}
            None => {
                first.insert(key, p);
                edges.push((a, b, p));
            }
        }
    }
    UncertainGraph::from_edges(dict.len(), edges)
}

pub fn load_graph(path: impl AsRef<Path>) -> Result<NamedGraph> {
    let path = path.as_ref();
    let mut dict = NodeDict::new();
    let graph = parse_graph(&read(path)?, path, &mut dict)?;
    Ok(NamedGraph { graph, dict })
}

/// Parses label-file text against `dict`. Names not yet in the dictionary
/// are added as new nodes.
pub fn parse_labels(text: &str, path: &Path, dict: &mut NodeDict) -> Result<Vec<(NodeId, Label)>> {
    let mut seen = HashMap::new();
    let mut out = Vec::new();
    for (line, fields) in records(text) {
        let [node, label] = fields[..] else {
            return Err(parse_err(
                path,
                line,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        };
        check_name(path, line, node)?;
        let value: u32 = label
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line, format!("bad label {label:?}")))?;
        if value == 0 {
            return Err(parse_err(path, line, "labels must be positive"));
        }
        if let Some(first) = seen.insert(node.to_string(), line) {
            return Err(parse_err(path, line, format!("{node} already labeled on line {first}")));
        }
        out.push((dict.intern(node), Label(value)));
    }
    Ok(out)
}

/// Loads a graph and its label file. Nodes that only appear in the label
/// file become isolated nodes.
pub fn load_dataset(graph_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<(NamedGraph, LabelAssignment)> {
    let NamedGraph { graph, mut dict } = load_graph(graph_path)?;
    let labels_path = labels_path.as_ref();
    let pairs = parse_labels(&read(labels_path)?, labels_path, &mut dict)?;
    let graph = if dict.len() > crate::Topology::node_count(&graph) {
        UncertainGraph::from_edges(dict.len(), graph.edges().iter().map(|e| (e.src, e.dst, e.prob)))?
    } else {
        graph
    };
    let mut raw = vec![Label::UNLABELED; dict.len()];
    for (node, label) in pairs {
        raw[node.index()] = label;
    }
    let labels = LabelAssignment::new(raw);
    Ok((NamedGraph { graph, dict }, labels))
}

/// Edge-file text, one line per edge in canonical edge order. Probabilities
/// use the shortest representation that parses back to the same value.
pub fn format_graph(graph: &UncertainGraph, dict: &NodeDict) -> String {
    let mut out = String::with_capacity(graph.edges().len() * 16);
    for e in graph.edges() {
        let _ = writeln!(out, "{}\t{}\t{}", dict.name(e.src), dict.name(e.dst), e.prob);
    }
    out
}

/// Label-file text covering every labeled node, sorted by node name.
pub fn format_labels(labels: &LabelAssignment, dict: &NodeDict) -> String {
    let mut rows: Vec<(&str, u32)> = labels
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.is_unlabeled())
        .map(|(i, l)| (dict.name(NodeId(i as u32)), l.0))
        .collect();
    rows.sort_unstable();
    let mut out = String::new();
    for (name, label) in rows {
        let _ = writeln!(out, "{name}\t{label}");
    }
    out
}

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place.
pub fn write_atomic(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| Error::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_graph(path: impl AsRef<Path>, graph: &UncertainGraph, dict: &NodeDict) -> Result<()> {
    write_atomic(path, &format_graph(graph, dict))
}

pub fn write_labels(path: impl AsRef<Path>, labels: &LabelAssignment, dict: &NodeDict) -> Result<()> {
    write_atomic(path, &format_labels(labels, dict))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<NamedGraph> {
        let mut dict = NodeDict::new();
        let graph = parse_graph(text, Path::new("g.tsv"), &mut dict)?;
        Ok(NamedGraph { graph, dict })
    }

    #[test]
    fn three_lines() {
        let g = parse("# header\na\tb\t0.3\nb\tc\t0.9\n\nc\td\t0.2\n").unwrap();
        assert_eq!(g.graph.edges().len(), 3);
        assert_eq!(g.dict.names(), ["a", "b", "c", "d"]);
    }

    #[test]
    fn bad_probability_names_line() {
        let err = parse("a\tb\t0.5\na\tb\t1.5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse("x\ty\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn duplicates() {
        let g = parse("a\tb\t0.5\nb\ta\t0.5\n").unwrap();
        assert_eq!(g.graph.edges().len(), 1);
        let err = parse("a\tb\t0.5\nc\td\t0.1\nb\ta\t0.4\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }

    #[test]
    fn round_trip() {
        let g = parse("n1\tn2\t0.1\nn2\tn3\t0.30000000000000004\nn3\tn1\t1\n").unwrap();
        let text = format_graph(&g.graph, &g.dict);
        let back = parse(&text).unwrap();
        assert_eq!(back.graph, g.graph);
        assert_eq!(format_graph(&back.graph, &back.dict), text);
    }

    #[test]
    fn labels_reject_zero_and_repeats() {
        let mut dict = NodeDict::new();
        let p = Path::new("l.tsv");
        assert!(parse_labels("a\t0\n", p, &mut dict).is_err());
        let err = parse_labels("a\t1\na\t2\n", p, &mut dict).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let ok = parse_labels("a\t1\nb\t2\n", p, &mut dict).unwrap();
        assert_eq!(ok, vec![(NodeId(0), Label(1)), (NodeId(1), Label(2))]);
    }
}
