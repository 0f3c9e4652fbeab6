//! Immutable sparse graphs in compressed adjacency form.
//!
//! Self-loops are always removed when a [`Graph`] is built from an
//! [`EdgeList`]. Repeated edges are removed under [`EdgePolicy::Simple`] (the
//! default) and kept as parallel edges under [`EdgePolicy::Multi`], in which
//! case neighbor lists hold one entry per parallel edge and degrees count
//! multiplicity. Undirected graphs expose symmetric neighbor lists; directed
//! graphs keep both an out-neighbor and an in-neighbor view so that transport
//! kernels can pull mass along in-edges.

mod component;
mod io;

pub use component::{largest_component, Component};
pub use io::{read_edge_list, write_edge_list, parse_edge_list, format_edge_list};

use crate::error::{Error, Result};

pub type NodeId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Directedness {
    Undirected,
    Directed,
}

/// Treatment of repeated edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum EdgePolicy {
    /// Repeats are dropped; adjacency is 0/1.
    #[default]
    Simple,
    /// Repeats are parallel edges; adjacency counts multiplicity.
    Multi,
}

/// Ordered `(source, target)` pairs over node-ids `0..node_count`.
///
/// Ids that do not appear in any edge are isolated nodes; `node_count`
/// makes them explicit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub node_count: usize,
    pub edges: Vec<(NodeId, NodeId)>,
    /// Graph kind declared by the file header, if any.
    pub declared: Option<(Directedness, EdgePolicy)>,
}

impl EdgeList {
    /// Edge list whose node count is one past the largest id seen.
    pub fn from_pairs(edges: Vec<(NodeId, NodeId)>) -> Self {
        let node_count = edges
            .iter()
            .map(|&(s, t)| s.max(t) as usize + 1)
            .max()
            .unwrap_or(0);
        EdgeList {
            node_count,
            edges,
            declared: None,
        }
    }

    pub fn with_node_count(node_count: usize, edges: Vec<(NodeId, NodeId)>) -> Self {
        EdgeList {
            node_count,
            edges,
            declared: None,
        }
    }
}

/// Counts of entries dropped while enforcing the simple-graph policy.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub self_loops_removed: usize,
    pub duplicates_removed: usize,
}

/// Compressed sparse row adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
}

impl Csr {
    /// Builds from pairs that are already sorted and deduplicated.
    fn from_sorted(node_count: usize, pairs: &[(NodeId, NodeId)]) -> Self {
        let mut offsets = vec![0usize; node_count + 1];
        for &(s, _) in pairs {
            offsets[s as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets = pairs.iter().map(|&(_, t)| t).collect();
        Csr { offsets, targets }
    }

    #[inline]
    fn row(&self, u: usize) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    fn len(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    directedness: Directedness,
    policy: EdgePolicy,
    out: Csr,
    // `None` for undirected graphs, where in- and out-neighbors coincide.
    inc: Option<Csr>,
}

impl Graph {
    /// Builds a simple graph from `edges`, dropping self-loops and repeats.
    ///
    /// For undirected graphs `(u, v)` and `(v, u)` are the same edge.
    pub fn build(edges: &EdgeList, directedness: Directedness) -> Result<(Graph, BuildReport)> {
        Graph::build_with(edges, directedness, EdgePolicy::Simple)
    }

    pub fn build_with(
        edges: &EdgeList,
        directedness: Directedness,
        policy: EdgePolicy,
    ) -> Result<(Graph, BuildReport)> {
        if edges.edges.is_empty() {
            return Err(Error::EmptyEdgeList);
        }
        let n = edges.node_count;
        if let Some(&(s, t)) = edges
            .edges
            .iter()
            .find(|&&(s, t)| s as usize >= n || t as usize >= n)
        {
            return Err(Error::InvalidParameter(format!(
                "edge ({s}, {t}) references a node outside 0..{n}"
            )));
        }
        let mut report = BuildReport::default();
        let mut pairs: Vec<(NodeId, NodeId)> = Vec::with_capacity(edges.edges.len());
        for &(s, t) in &edges.edges {
            if s == t {
                report.self_loops_removed += 1;
                continue;
            }
            pairs.push(match directedness {
                Directedness::Directed => (s, t),
                Directedness::Undirected => (s.min(t), s.max(t)),
            });
        }
        pairs.sort_unstable();
        if policy == EdgePolicy::Simple {
            let before = pairs.len();
            pairs.dedup();
            report.duplicates_removed = before - pairs.len();
        }

        let graph = match directedness {
            Directedness::Undirected => Graph::from_undirected_sorted(n, &pairs, policy),
            Directedness::Directed => Graph::from_directed_sorted(n, pairs, policy),
        };
        Ok((graph, report))
    }

    /// `pairs` holds each undirected edge once as `(min, max)`, sorted.
    pub(crate) fn from_undirected_sorted(
        n: usize,
        pairs: &[(NodeId, NodeId)],
        policy: EdgePolicy,
    ) -> Graph {
        let mut both = Vec::with_capacity(pairs.len() * 2);
        for &(u, v) in pairs {
            both.push((u, v));
            both.push((v, u));
        }
        both.sort_unstable();
        Graph {
            directedness: Directedness::Undirected,
            policy,
            out: Csr::from_sorted(n, &both),
            inc: None,
        }
    }

    /// `arcs` is sorted.
    pub(crate) fn from_directed_sorted(
        n: usize,
        mut arcs: Vec<(NodeId, NodeId)>,
        policy: EdgePolicy,
    ) -> Graph {
        let out = Csr::from_sorted(n, &arcs);
        for a in arcs.iter_mut() {
            *a = (a.1, a.0);
        }
        arcs.sort_unstable();
        let inc = Csr::from_sorted(n, &arcs);
        Graph {
            directedness: Directedness::Directed,
            policy,
            out,
            inc: Some(inc),
        }
    }

    pub fn directedness(&self) -> Directedness {
        self.directedness
    }

    pub fn policy(&self) -> EdgePolicy {
        self.policy
    }

    pub fn is_multigraph(&self) -> bool {
        self.policy == EdgePolicy::Multi
    }

    pub fn is_directed(&self) -> bool {
        self.directedness == Directedness::Directed
    }

    pub fn node_count(&self) -> usize {
        self.out.offsets.len() - 1
    }

    /// Number of logical edges (each undirected edge counted once).
    pub fn edge_count(&self) -> usize {
        match self.directedness {
            Directedness::Undirected => self.out.targets.len() / 2,
            Directedness::Directed => self.out.targets.len(),
        }
    }

    /// Out-neighbors of `u`, sorted ascending, one entry per parallel edge.
    /// Equal to all neighbors when undirected.
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[NodeId] {
        self.out.row(u)
    }

    /// In-neighbors of `u`, sorted ascending.
    #[inline]
    pub fn in_neighbors(&self, u: usize) -> &[NodeId] {
        match &self.inc {
            Some(inc) => inc.row(u),
            None => self.out.row(u),
        }
    }

    #[inline]
    pub fn out_degree(&self, u: usize) -> usize {
        self.out.len(u)
    }

    #[inline]
    pub fn in_degree(&self, u: usize) -> usize {
        match &self.inc {
            Some(inc) => inc.len(u),
            None => self.out.len(u),
        }
    }

    /// Degree for undirected graphs; out-degree for directed graphs.
    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.out.len(u)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.degree(u)).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.in_degree(u)).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.node_count()).map(|u| self.out_degree(u)).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as NodeId)).is_ok()
    }

    /// Logical edges in ascending order; undirected edges appear once (per
    /// parallel copy) as `(min, max)`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        let undirected = !self.is_directed();
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .filter(move |&&v| !undirected || (u as NodeId) < v)
                .map(move |&v| (u as NodeId, v))
        })
    }

    pub fn to_edge_list(&self) -> EdgeList {
        EdgeList {
            node_count: self.node_count(),
            edges: self.edges().collect(),
            declared: Some((self.directedness, self.policy)),
        }
    }

    /// Number of parallel edges from `u` to `v`.
    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let row = self.neighbors(u);
        let v = v as NodeId;
        row.partition_point(|&x| x <= v) - row.partition_point(|&x| x < v)
    }

    /// Checks the structural invariants: degree sums, no self-loops, no repeats
    /// (simple graphs), and symmetric adjacency for undirected graphs.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let n = self.node_count();
        for u in 0..n {
            let row = self.neighbors(u);
            let ordered = match self.policy {
                EdgePolicy::Simple => row.windows(2).all(|w| w[0] < w[1]),
                EdgePolicy::Multi => row.windows(2).all(|w| w[0] <= w[1]),
            };
            if !ordered {
                return Err(format!("node {u}: neighbor list out of order or repeated"));
            }
            if row.iter().any(|&v| v as usize == u) {
                return Err(format!("node {u}: self-loop"));
            }
        }
        let out_sum: usize = (0..n).map(|u| self.out_degree(u)).sum();
        match self.directedness {
            Directedness::Undirected => {
                if out_sum != 2 * self.edge_count() {
                    return Err("degree sum differs from twice the edge count".into());
                }
                for u in 0..n {
                    for &v in self.neighbors(u) {
                        if self.multiplicity(v as usize, u) != self.multiplicity(u, v as usize) {
                            return Err(format!("edge {u}-{v} is not symmetric"));
                        }
                    }
                }
            }
            Directedness::Directed => {
                let in_sum: usize = (0..n).map(|u| self.in_degree(u)).sum();
                if in_sum != out_sum || out_sum != self.edge_count() {
                    return Err("in-degree and out-degree sums disagree".into());
                }
                for u in 0..n {
                    for &v in self.in_neighbors(u) {
                        if !self.has_edge(v as usize, u) {
                            return Err(format!("in-edge {v}->{u} missing from out view"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Convenience wrapper around [`Graph::build`].
pub fn build_graph(edges: &EdgeList, directedness: Directedness) -> Result<(Graph, BuildReport)> {
    Graph::build(edges, directedness)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(pairs: &[(u32, u32)]) -> (Graph, BuildReport) {
        build_graph(&EdgeList::from_pairs(pairs.to_vec()), Directedness::Undirected).unwrap()
    }

    #[test]
    fn path_graph_degrees() {
        let (g, report) = undirected(&[(0, 1), (1, 2)]);
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.degrees(), vec![1, 2, 1]);
        assert_eq!(report, BuildReport::default());
        g.check_invariants().unwrap();
    }

    #[test]
    fn duplicates_and_self_loops_removed() {
        let (g, report) = undirected(&[(0, 1), (0, 1), (1, 1)]);
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.degrees(), vec![1, 1]);
        assert_eq!(report.duplicates_removed, 1);
        assert_eq!(report.self_loops_removed, 1);
    }

    #[test]
    fn reversed_pair_is_a_duplicate_when_undirected() {
        let (g, report) = undirected(&[(0, 1), (1, 0)]);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(report.duplicates_removed, 1);
    }

    #[test]
    fn directed_cycle_degrees() {
        let edges = EdgeList::from_pairs(vec![(0, 1), (1, 2), (2, 0)]);
        let (g, _) = build_graph(&edges, Directedness::Directed).unwrap();
        assert_eq!(g.in_degrees(), vec![1, 1, 1]);
        assert_eq!(g.out_degrees(), vec![1, 1, 1]);
        assert_eq!(g.in_neighbors(0), &[2]);
        g.check_invariants().unwrap();
    }

    #[test]
    fn empty_edge_list_rejected() {
        let err = build_graph(&EdgeList::default(), Directedness::Undirected).unwrap_err();
        assert!(matches!(err, Error::EmptyEdgeList));
    }

    #[test]
    fn isolated_nodes_are_kept() {
        let edges = EdgeList::with_node_count(4, vec![(0, 1)]);
        let (g, _) = build_graph(&edges, Directedness::Undirected).unwrap();
        assert_eq!(g.degrees(), vec![1, 1, 0, 0]);
    }

    #[test]
    fn multigraph_keeps_parallel_edges() {
        let edges = EdgeList::from_pairs(vec![(0, 1), (1, 0), (1, 2), (2, 2)]);
        let (g, report) =
            Graph::build_with(&edges, Directedness::Undirected, EdgePolicy::Multi).unwrap();
        assert_eq!(report.self_loops_removed, 1);
        assert_eq!(report.duplicates_removed, 0);
        assert_eq!(g.degrees(), vec![2, 3, 1]);
        assert_eq!(g.multiplicity(0, 1), 2);
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 1), (1, 2)]);
        g.check_invariants().unwrap();
    }

    #[test]
    fn edges_iterates_each_undirected_edge_once() {
        let (g, _) = undirected(&[(2, 0), (1, 2), (0, 1)]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
    }
}
