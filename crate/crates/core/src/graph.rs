//! Uncertain graphs: undirected edges carrying existence probabilities.
//!
//! [`UncertainGraph`] is immutable after construction and stores adjacency in
//! compressed sparse rows, so neighbor scans are a slice walk. An
//! [`EdgeActivationView`] overlays a boolean mask on the edge array and
//! exposes only the active edges; algorithms are written against the
//! [`Topology`] trait and accept either.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge stored with `src < dst`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub prob: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct AdjEntry {
    node: NodeId,
    prob: f64,
    edge: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertainGraph {
    node_count: usize,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    adj: Vec<AdjEntry>,
}

/// Read access shared by full graphs and activation views.
pub trait Topology: Sync {
    fn node_count(&self) -> usize;

    /// Number of edges visible through this topology.
    fn edge_count(&self) -> usize;

    /// Visible neighbors of `node` in ascending id order.
    ///
    /// Panics if `node` is out of range.
    fn adjacent(&self, node: NodeId) -> Neighbors<'_>;

    /// Visible edges in canonical `(src, dst)` order.
    fn visible_edges(&self) -> Box<dyn Iterator<Item = Edge> + '_>;

    fn degree(&self, node: NodeId) -> usize {
        self.adjacent(node).count()
    }
}

/// Iterator over `(neighbor, probability)` pairs.
pub struct Neighbors<'a> {
    entries: std::slice::Iter<'a, AdjEntry>,
    mask: Option<&'a [bool]>,
}

impl Iterator for Neighbors<'_> {
    type Item = (NodeId, f64);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        match self.mask {
            None => self.entries.next().map(|e| (e.node, e.prob)),
            Some(mask) => self
                .entries
                .by_ref()
                .find(|e| mask[e.edge as usize])
                .map(|e| (e.node, e.prob)),
        }
    }
}

fn valid_probability(p: f64) -> bool {
    p > 0.0 && p <= 1.0
}

impl UncertainGraph {
    /// Builds a graph over nodes `0..node_count`.
    ///
    /// Each unordered pair may appear more than once only with an identical
    /// probability; the copies collapse into one edge.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId, f64)>,
    {
        let mut canon = Vec::new();
        for (a, b, prob) in edges {
            if a == b {
                return Err(Error::SelfLoop(a.0));
            }
            if !valid_probability(prob) {
                return Err(Error::ProbabilityOutOfRange {
                    src: a.0,
                    dst: b.0,
                    prob,
                });
            }
            for n in [a, b] {
                if n.index() >= node_count {
                    return Err(Error::UnknownNode(n.0));
                }
            }
            let (src, dst) = if a < b { (a, b) } else { (b, a) };
            canon.push(Edge { src, dst, prob });
        }
        canon.sort_by(|x, y| (x.src, x.dst).cmp(&(y.src, y.dst)));

        let mut edges: Vec<Edge> = Vec::with_capacity(canon.len());
        for e in canon {
            match edges.last() {
                Some(last) if last.src == e.src && last.dst == e.dst => {
                    if last.prob != e.prob {
                        return Err(Error::ConflictingDuplicateEdge {
                            src: e.src.0,
                            dst: e.dst.0,
                            first: last.prob,
                            second: e.prob,
                        });
                    }
                }
                _ => edges.push(e),
            }
        }
        Ok(Self::from_canonical(node_count, edges))
    }

    /// Builds a graph from raw `(u, v, p)` triples; the node count is one past
    /// the largest endpoint.
    pub fn from_triples(triples: &[(u32, u32, f64)]) -> Result<Self> {
        let node_count = triples
            .iter()
            .map(|&(a, b, _)| a.max(b) as usize + 1)
            .max()
            .unwrap_or(0);
        Self::from_edges(
            node_count,
            triples.iter().map(|&(a, b, p)| (NodeId(a), NodeId(b), p)),
        )
    }

    // `edges` must be sorted, deduplicated and validated.
    fn from_canonical(node_count: usize, edges: Vec<Edge>) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        for e in &edges {
            offsets[e.src.index() + 1] += 1;
            offsets[e.dst.index() + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut adj = vec![
            AdjEntry {
                node: NodeId(0),
                prob: 0.0,
                edge: 0,
            };
            edges.len() * 2
        ];
        for (idx, e) in edges.iter().enumerate() {
            let idx = idx as u32;
            adj[fill[e.src.index()]] = AdjEntry {
                node: e.dst,
                prob: e.prob,
                edge: idx,
            };
            fill[e.src.index()] += 1;
            adj[fill[e.dst.index()]] = AdjEntry {
                node: e.src,
                prob: e.prob,
                edge: idx,
            };
            fill[e.dst.index()] += 1;
        }
        for n in 0..node_count {
            adj[offsets[n]..offsets[n + 1]].sort_unstable_by_key(|e| e.node);
        }
        UncertainGraph {
            node_count,
            edges,
            offsets,
            adj,
        }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Probability of the edge between `a` and `b`, if any.
    pub fn probability(&self, a: NodeId, b: NodeId) -> Option<f64> {
        if a.index() >= self.node_count {
            return None;
        }
        let row = &self.adj[self.offsets[a.index()]..self.offsets[a.index() + 1]];
        row.binary_search_by_key(&b, |e| e.node)
            .ok()
            .map(|i| row[i].prob)
    }

    /// Incident edges of `node`, ascending by neighbor id.
    pub fn neighbors(&self, node: NodeId) -> Result<Vec<(NodeId, f64)>> {
        if node.index() >= self.node_count {
            return Err(Error::UnknownNode(node.0));
        }
        Ok(self.adjacent(node).collect())
    }

    /// Edge indices ordered by descending probability, ties by ascending
    /// `(src, dst)`.
    pub fn edge_ranking(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.edges.len() as u32).collect();
        order.sort_by(|&a, &b| {
            let (ea, eb) = (&self.edges[a as usize], &self.edges[b as usize]);
            eb.prob
                .partial_cmp(&ea.prob)
                .unwrap_or(Ordering::Equal)
                .then_with(|| (ea.src, ea.dst).cmp(&(eb.src, eb.dst)))
        });
        order
    }

    /// View over the `⌈theta·|A|⌉` most probable edges.
    pub fn top_edges_by_prob(&self, theta: f64) -> Result<EdgeActivationView<'_>> {
        let k = activation_count(theta, self.edges.len())?;
        Ok(EdgeActivationView::top_k(self, &self.edge_ranking(), k))
    }

    /// Graph over `nodes` with every edge whose endpoints are both retained.
    ///
    /// New ids follow the ascending order of the retained original ids.
    pub fn induced_subgraph(&self, nodes: &[NodeId]) -> Result<Subgraph> {
        let mut kept: Vec<NodeId> = nodes.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let mut remap = vec![u32::MAX; self.node_count];
        for (new, &old) in kept.iter().enumerate() {
            if old.index() >= self.node_count {
                return Err(Error::UnknownNode(old.0));
            }
            remap[old.index()] = new as u32;
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (s, d) = (remap[e.src.index()], remap[e.dst.index()]);
                (s != u32::MAX && d != u32::MAX).then_some(Edge {
                    src: NodeId(s),
                    dst: NodeId(d),
                    prob: e.prob,
                })
            })
            .collect();
        // Remapping is monotone, so canonical order survives.
        let graph = Self::from_canonical(kept.len(), edges);
        Ok(Subgraph {
            graph,
            original_ids: kept,
        })
    }

    /// Keeps only the edges at the given indices; node set unchanged.
    pub fn retain_edges(&self, keep: &[bool]) -> UncertainGraph {
        let edges = self
            .edges
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(e, _)| *e)
            .collect();
        Self::from_canonical(self.node_count, edges)
    }

    /// Copy of this graph with every probability replaced by 1.
    pub fn with_unit_weights(&self) -> UncertainGraph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { prob: 1.0, ..*e })
            .collect();
        Self::from_canonical(self.node_count, edges)
    }
}

impl Topology for UncertainGraph {
    fn node_count(&self) -> usize {
        self.node_count
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    fn adjacent(&self, node: NodeId) -> Neighbors<'_> {
        let n = node.index();
        Neighbors {
            entries: self.adj[self.offsets[n]..self.offsets[n + 1]].iter(),
            mask: None,
        }
    }

    fn visible_edges(&self) -> Box<dyn Iterator<Item = Edge> + '_> {
        Box::new(self.edges.iter().copied())
    }

    fn degree(&self, node: NodeId) -> usize {
        self.offsets[node.index() + 1] - self.offsets[node.index()]
    }
}

/// Result of [`UncertainGraph::induced_subgraph`].
#[derive(Debug, Clone, PartialEq)]
pub struct Subgraph {
    pub graph: UncertainGraph,
    /// `original_ids[new]` is the id of that node in the parent graph.
    pub original_ids: Vec<NodeId>,
}

/// `⌈theta·m⌉`, at least one edge for a non-empty graph.
pub fn activation_count(theta: f64, edge_count: usize) -> Result<usize> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    if edge_count == 0 {
        return Ok(0);
    }
    // Absorb representation error such as 0.3 * 10 = 3.0000000000000004.
    let k = (theta * edge_count as f64 - 1e-9).ceil();
    Ok((k.max(1.0) as usize).min(edge_count))
}

/// Read-only overlay that exposes a subset `F` of a graph's edges.
#[derive(Debug, Clone)]
pub struct EdgeActivationView<'g> {
    base: &'g UncertainGraph,
    active: Vec<bool>,
    active_count: usize,
}

impl<'g> EdgeActivationView<'g> {
    pub fn new(base: &'g UncertainGraph, active: Vec<bool>) -> Self {
        assert_eq!(active.len(), base.edges.len());
        let active_count = active.iter().filter(|&&a| a).count();
        EdgeActivationView {
            base,
            active,
            active_count,
        }
    }

    /// Activates the first `k` edges of `ranking` (see
    /// [`UncertainGraph::edge_ranking`]).
    pub fn top_k(base: &'g UncertainGraph, ranking: &[u32], k: usize) -> Self {
        let mut active = vec![false; base.edges.len()];
        for &e in &ranking[..k.min(ranking.len())] {
            active[e as usize] = true;
        }
        EdgeActivationView {
            base,
            active,
            active_count: k.min(ranking.len()),
        }
    }

    pub fn base(&self) -> &'g UncertainGraph {
        self.base
    }

    pub fn is_active(&self, edge_index: usize) -> bool {
        self.active[edge_index]
    }

    pub fn active_edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.base
            .edges
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(e, _)| e)
    }

    /// Materializes the view as a standalone graph.
    pub fn to_graph(&self) -> UncertainGraph {
        self.base.retain_edges(&self.active)
    }
}

impl Topology for EdgeActivationView<'_> {
    fn node_count(&self) -> usize {
        self.base.node_count
    }

    fn edge_count(&self) -> usize {
        self.active_count
    }

    #[inline]
    fn adjacent(&self, node: NodeId) -> Neighbors<'_> {
        let n = node.index();
        Neighbors {
            entries: self.base.adj[self.base.offsets[n]..self.base.offsets[n + 1]].iter(),
            mask: Some(&self.active),
        }
    }

    fn visible_edges(&self) -> Box<dyn Iterator<Item = Edge> + '_> {
        Box::new(self.active_edges().copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_node_path() -> UncertainGraph {
        UncertainGraph::from_triples(&[(0, 1, 0.3), (1, 2, 0.9), (2, 3, 0.2)]).unwrap()
    }

    #[test]
    fn builds_worked_example() {
        let g = three_node_path();
        assert_eq!(g.node_count(), 4);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn empty_graph() {
        let g = UncertainGraph::from_triples(&[]).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            UncertainGraph::from_triples(&[(0, 1, 1.2)]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(
            UncertainGraph::from_triples(&[(0, 1, 0.0)]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert!(matches!(
            UncertainGraph::from_triples(&[(0, 1, f64::NAN)]),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
        assert_eq!(
            UncertainGraph::from_triples(&[(2, 2, 0.5)]),
            Err(Error::SelfLoop(2))
        );
        assert!(matches!(
            UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 0, 0.6)]),
            Err(Error::ConflictingDuplicateEdge { .. })
        ));
    }

    #[test]
    fn equal_duplicates_collapse() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 0, 0.5)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.probability(NodeId(1), NodeId(0)), Some(0.5));
    }

    #[test]
    fn neighbors_sorted_and_checked() {
        let g = three_node_path();
        assert_eq!(
            g.neighbors(NodeId(1)).unwrap(),
            vec![(NodeId(0), 0.3), (NodeId(2), 0.9)]
        );
        let iso = UncertainGraph::from_edges(3, [(NodeId(0), NodeId(1), 0.4)]).unwrap();
        assert!(iso.neighbors(NodeId(2)).unwrap().is_empty());
        assert_eq!(g.neighbors(NodeId(4)), Err(Error::UnknownNode(4)));
    }

    #[test]
    fn top_edges_order_statistic() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.4), (1, 2, 0.9), (2, 3, 0.1), (3, 4, 0.7)])
            .unwrap();
        let half = g.top_edges_by_prob(0.5).unwrap();
        let mut probs: Vec<f64> = half.active_edges().map(|e| e.prob).collect();
        probs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(probs, vec![0.9, 0.7]);
        assert_eq!(g.top_edges_by_prob(1.0).unwrap().edge_count(), 4);
        assert_eq!(
            g.top_edges_by_prob(0.0).unwrap_err(),
            Error::ThetaOutOfRange(0.0)
        );
        assert!(g.top_edges_by_prob(1.5).is_err());
    }

    #[test]
    fn top_edges_ties_by_id_pair() {
        // Ten equal-probability edges on a cycle; canonical pairs sorted:
        // (0,1) (0,9) (1,2) (2,3) ... so the three smallest are (0,1),(0,9),(1,2).
        let triples: Vec<(u32, u32, f64)> =
            (0..10).map(|i| (i, (i + 1) % 10, 0.5)).collect();
        let g = UncertainGraph::from_triples(&triples).unwrap();
        let view = g.top_edges_by_prob(0.3).unwrap();
        let pairs: Vec<(u32, u32)> = view.active_edges().map(|e| (e.src.0, e.dst.0)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 9), (1, 2)]);
    }

    #[test]
    fn view_hides_inactive_edges() {
        let g = three_node_path();
        let view = g.top_edges_by_prob(0.34).unwrap(); // ceil(1.02) = 2 edges: 0.9, 0.3
        assert_eq!(view.edge_count(), 2);
        assert_eq!(view.adjacent(NodeId(2)).collect::<Vec<_>>(), vec![(NodeId(1), 0.9)]);
        assert_eq!(view.degree(NodeId(3)), 0);
    }

    #[test]
    fn induced_path() {
        let g = UncertainGraph::from_triples(&[(0, 1, 0.5), (1, 2, 0.6)]).unwrap();
        let sub = g.induced_subgraph(&[NodeId(0), NodeId(1)]).unwrap();
        assert_eq!(sub.graph.edges(), &[Edge { src: NodeId(0), dst: NodeId(1), prob: 0.5 }]);
        let all = g
            .induced_subgraph(&[NodeId(0), NodeId(1), NodeId(2)])
            .unwrap();
        assert_eq!(all.graph, g);
        assert_eq!(
            g.induced_subgraph(&[NodeId(7)]).unwrap_err(),
            Error::UnknownNode(7)
        );
    }

    #[test]
    fn activation_count_rounding() {
        assert_eq!(activation_count(0.3, 10).unwrap(), 3);
        assert_eq!(activation_count(0.05, 10).unwrap(), 1);
        assert_eq!(activation_count(1e-12, 10).unwrap(), 1);
        assert_eq!(activation_count(0.5, 0).unwrap(), 0);
        assert_eq!(activation_count(0.25, 401).unwrap(), 101);
    }
}
