//! Finite simple undirected graphs with optional node attributes, and
//! labeled samples of them.

mod generate;
mod jsonl;
mod tu;

pub use generate::{generate_sample, GraphFamily, RandomSampleSpec};
pub use jsonl::{parse_jsonl, read_jsonl, to_jsonl, write_jsonl};
pub use tu::{parse_tu_dataset, TuDataset};

use std::collections::HashSet;

use crate::{Error, Result};

/// A graph label in `{-1, +1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Negative,
    Positive,
}

impl Label {
    pub fn from_sign(value: i64) -> Option<Self> {
        match value {
            -1 => Some(Label::Negative),
            1 => Some(Label::Positive),
            _ => None,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Label::Negative => -1,
            Label::Positive => 1,
        }
    }
}

/// A finite, simple, undirected graph on nodes `0..node_count`.
///
/// Edges are stored normalized as `(u, v)` with `u < v`, sorted. Attribute
/// vectors, when present, are one per node and share a dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributedGraph {
    node_count: usize,
    edges: Vec<(u32, u32)>,
    attributes: Option<Vec<Vec<f64>>>,
}

impl AttributedGraph {
    /// Builds a graph, rejecting self-loops, duplicate edges (in either
    /// orientation) and out-of-range endpoints.
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        attributes: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        if node_count > u32::MAX as usize {
            return Err(Error::InvalidGraph(format!("node count {node_count} too large")));
        }
        let mut normalized = Vec::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {node_count} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
            }
            normalized.push((u.min(v) as u32, u.max(v) as u32));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        if let Some(attrs) = &attributes {
            if attrs.len() != node_count {
                return Err(Error::InvalidGraph(format!(
                    "{} attribute vectors for {node_count} nodes",
                    attrs.len()
                )));
            }
            if let Some(first) = attrs.first() {
                if attrs.iter().any(|a| a.len() != first.len()) {
                    return Err(Error::InvalidGraph(
                        "attribute vectors differ in dimension".into(),
                    ));
                }
            }
        }
        Ok(Self {
            node_count,
            edges: normalized,
            attributes,
        })
    }

    /// Same as [`AttributedGraph::new`] but silently merges an edge listed in
    /// both orientations, as in formats that store each direction.
    pub fn from_symmetric_edges(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        attributes: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        let deduped: Vec<_> = edges
            .into_iter()
            .filter(|&(u, v)| seen.insert((u.min(v), u.max(v))))
            .collect();
        Self::new(node_count, deduped, attributes)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn attributes(&self) -> Option<&[Vec<f64>]> {
        self.attributes.as_deref()
    }

    pub fn attribute_dim(&self) -> Option<usize> {
        self.attributes
            .as_ref()
            .map(|a| a.first().map_or(0, Vec::len))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut degrees = vec![0; self.node_count];
        for &(u, v) in &self.edges {
            degrees[u as usize] += 1;
            degrees[v as usize] += 1;
        }
        degrees
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    /// Relabels node `i` as `permutation[i]`. Attributes follow their nodes.
    pub fn permute_nodes(&self, permutation: &[usize]) -> Result<Self> {
        let n = self.node_count;
        if permutation.len() != n {
            return Err(Error::InvalidArgument(format!(
                "permutation has length {} for {n} nodes",
                permutation.len()
            )));
        }
        let mut hit = vec![false; n];
        for &target in permutation {
            if target >= n || std::mem::replace(&mut hit[target], true) {
                return Err(Error::InvalidArgument("permutation is not a bijection".into()));
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v)| (permutation[u as usize], permutation[v as usize]));
        let attributes = self.attributes.as_ref().map(|attrs| {
            let mut moved = vec![Vec::new(); n];
            for (i, a) in attrs.iter().enumerate() {
                moved[permutation[i]] = a.clone();
            }
            moved
        });
        Self::new(n, edges, attributes)
    }
}

/// An ordered sample of graphs with optional `{-1, +1}` labels.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphSample {
    graphs: Vec<AttributedGraph>,
    labels: Option<Vec<Label>>,
}

impl GraphSample {
    pub fn new(graphs: Vec<AttributedGraph>, labels: Option<Vec<Label>>) -> Result<Self> {
        if graphs.is_empty() {
            return Err(Error::InvalidSample("sample must contain at least one graph".into()));
        }
        if let Some(labels) = &labels {
            if labels.len() != graphs.len() {
                return Err(Error::InvalidSample(format!(
                    "{} labels for {} graphs",
                    labels.len(),
                    graphs.len()
                )));
            }
        }
        let dims: HashSet<Option<usize>> = graphs.iter().map(|g| g.attribute_dim()).collect();
        if dims.len() > 1 {
            return Err(Error::InvalidSample(
                "graphs disagree on attribute presence or dimension".into(),
            ));
        }
        Ok(Self { graphs, labels })
    }

    pub fn unlabeled(graphs: Vec<AttributedGraph>) -> Result<Self> {
        Self::new(graphs, None)
    }

    pub fn graphs(&self) -> &[AttributedGraph] {
        &self.graphs
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    pub fn total_nodes(&self) -> usize {
        self.graphs.iter().map(AttributedGraph::node_count).sum()
    }

    pub fn has_attributes(&self) -> bool {
        self.graphs.first().is_some_and(|g| g.attributes.is_some())
    }

    /// Concatenates two samples; labels survive only if both carry them.
    pub fn concat(&self, other: &GraphSample) -> Result<GraphSample> {
        let graphs = self.graphs.iter().chain(&other.graphs).cloned().collect();
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        GraphSample::new(graphs, labels)
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_self_loops_and_duplicates() {
        assert!(matches!(
            AttributedGraph::new(2, [(0, 0)], None),
            Err(Error::InvalidGraph(msg)) if msg.contains("self-loop")
        ));
        assert!(AttributedGraph::new(2, [(0, 1), (1, 0)], None).is_err());
        assert!(AttributedGraph::new(2, [(0, 2)], None).is_err());
        assert!(AttributedGraph::from_symmetric_edges(2, [(0, 1), (1, 0)], None).is_ok());
    }

    #[test]
    fn attribute_shape_is_checked() {
        assert!(AttributedGraph::new(2, [], Some(vec![vec![1.0]])).is_err());
        assert!(AttributedGraph::new(2, [], Some(vec![vec![1.0], vec![1.0, 2.0]])).is_err());
        let a = AttributedGraph::new(1, [], Some(vec![vec![1.0]])).unwrap();
        let b = AttributedGraph::new(1, [], Some(vec![vec![1.0, 2.0]])).unwrap();
        assert!(GraphSample::unlabeled(vec![a.clone(), path(2)]).is_err());
        assert!(GraphSample::unlabeled(vec![a, b]).is_err());
    }

    #[test]
    fn sample_requires_graphs_and_matching_labels() {
        assert!(GraphSample::unlabeled(vec![]).is_err());
        assert!(GraphSample::new(vec![path(2)], Some(vec![])).is_err());
        assert!(GraphSample::new(vec![path(2)], Some(vec![Label::Positive])).is_ok());
    }

    #[test]
    fn permute_identity_and_reversal() {
        let p3 = path(3);
        assert_eq!(p3.permute_nodes(&[0, 1, 2]).unwrap(), p3);
        assert_eq!(p3.permute_nodes(&[2, 1, 0]).unwrap().edges(), p3.edges());
        assert!(p3.permute_nodes(&[0, 0, 1]).is_err());
        assert!(p3.permute_nodes(&[0, 1]).is_err());
    }

    #[test]
    fn attributes_follow_nodes() {
        let g = AttributedGraph::new(2, [(0, 1)], Some(vec![vec![1.0], vec![2.0]])).unwrap();
        let h = g.permute_nodes(&[1, 0]).unwrap();
        assert_eq!(h.attributes().unwrap(), &[vec![2.0], vec![1.0]]);
    }

    #[test]
    fn star_degrees() {
        let mut d = star(3).degrees();
        d.sort();
        assert_eq!(d, vec![1, 1, 1, 3]);
    }

    fn arb_graph() -> impl Strategy<Value = AttributedGraph> {
        (1usize..12).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for v in 0..n {
                    for u in 0..v {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                AttributedGraph::new(n, edges, None).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn degree_sum_is_twice_edge_count(g in arb_graph()) {
            prop_assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        }

        #[test]
        fn permutation_preserves_degree_multiset(
            (g, perm) in arb_graph().prop_flat_map(|g| {
                let n = g.node_count();
                (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
            })
        ) {
            let h = g.permute_nodes(&perm).unwrap();
            let mut a = g.degrees();
            let mut b = h.degrees();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(g.edge_count(), h.edge_count());
        }
    }
}
