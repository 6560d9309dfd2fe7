use super::{attribute_key, intern_sorted, ColorHistogram};
use crate::{AttributedGraph, Error, GraphSample, Result};

/// Largest graph accepted by [`exact_iso_coloring`] (8! = 40320 orderings).
pub const EXACT_ISO_NODE_LIMIT: usize = 8;

/// Adjacency bits must fit in a `u128`.
const HARD_NODE_LIMIT: usize = 16;

/// Per-node invariant used to restrict the orderings that are searched:
/// attribute bits, degree, and sorted neighbor degrees. Any isomorphism maps
/// nodes onto nodes with equal invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct NodeInvariant {
    attribute: Vec<u64>,
    degree: usize,
    neighbor_degrees: Vec<usize>,
}

/// Canonical form: the sorted invariant sequence plus the lexicographically
/// smallest upper-triangle adjacency string over all orderings that list the
/// nodes in invariant order. Equal iff the graphs are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct CanonicalForm {
    invariants: Vec<NodeInvariant>,
    adjacency: u128,
}

fn canonical_form(graph: &AttributedGraph) -> CanonicalForm {
    let n = graph.node_count();
    let adj_lists = graph.adjacency_lists();
    let degrees = graph.degrees();
    let mut adjacent = vec![vec![false; n]; n];
    for &(u, v) in graph.edges() {
        adjacent[u as usize][v as usize] = true;
        adjacent[v as usize][u as usize] = true;
    }
    let invariants: Vec<NodeInvariant> = (0..n)
        .map(|v| {
            let mut neighbor_degrees: Vec<usize> =
                adj_lists[v].iter().map(|&u| degrees[u as usize]).collect();
            neighbor_degrees.sort_unstable();
            NodeInvariant {
                attribute: graph
                    .attributes()
                    .map(|a| attribute_key(&a[v]))
                    .unwrap_or_default(),
                degree: degrees[v],
                neighbor_degrees,
            }
        })
        .collect();

    let mut sorted = invariants.clone();
    sorted.sort();

    let mut search = Search {
        n,
        total_bits: n * n.saturating_sub(1) / 2,
        adjacent: &adjacent,
        invariants: &invariants,
        slot_invariants: &sorted,
        placed: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    search.extend(0, false);
    let adjacency = search.best.unwrap_or(0);

    CanonicalForm {
        invariants: sorted,
        adjacency,
    }
}

struct Search<'a> {
    n: usize,
    total_bits: usize,
    adjacent: &'a [Vec<bool>],
    invariants: &'a [NodeInvariant],
    slot_invariants: &'a [NodeInvariant],
    placed: Vec<usize>,
    used: Vec<bool>,
    best: Option<u128>,
}

impl Search<'_> {
    /// `prefix` holds the adjacency bits among the placed nodes, column by
    /// column (bit (i, k) for i < k appended when slot k is filled).
    /// `below` is set once `prefix` is already strictly smaller than the
    /// corresponding prefix of `best`.
    fn extend(&mut self, prefix: u128, below: bool) {
        let k = self.placed.len();
        if k == self.n {
            if self.best.map_or(true, |b| prefix < b) {
                self.best = Some(prefix);
            }
            return;
        }
        for v in 0..self.n {
            if self.used[v] || self.invariants[v] != self.slot_invariants[k] {
                continue;
            }
            let mut next = prefix;
            for &u in &self.placed {
                next = next << 1 | u128::from(self.adjacent[u][v]);
            }
            let mut next_below = below;
            if !below {
                if let Some(best) = self.best {
                    let bits = (k + 1) * k / 2;
                    let best_prefix = best >> (self.total_bits - bits);
                    if next > best_prefix {
                        continue;
                    }
                    next_below = next < best_prefix;
                }
            }
            self.used[v] = true;
            self.placed.push(v);
            self.extend(next, next_below);
            self.placed.pop();
            self.used[v] = false;
        }
    }
}

/// One color per isomorphism class: each graph's histogram is the single
/// interned canonical form with count equal to its node count. Graphs larger
/// than [`EXACT_ISO_NODE_LIMIT`] are rejected.
pub fn exact_iso_coloring(sample: &GraphSample) -> Result<Vec<ColorHistogram>> {
    exact_iso_coloring_with_limit(sample, EXACT_ISO_NODE_LIMIT)
}

pub fn exact_iso_coloring_with_limit(
    sample: &GraphSample,
    node_limit: usize,
) -> Result<Vec<ColorHistogram>> {
    let limit = node_limit.min(HARD_NODE_LIMIT);
    if let Some((index, g)) = sample
        .graphs()
        .iter()
        .enumerate()
        .find(|(_, g)| g.node_count() > limit)
    {
        return Err(Error::ExactColoringInfeasible {
            index,
            nodes: g.node_count(),
            limit,
        });
    }
    let forms: Vec<CanonicalForm> = sample.graphs().iter().map(canonical_form).collect();
    let (ids, _) = intern_sorted(&forms);
    Ok(ids
        .into_iter()
        .zip(sample.graphs())
        .map(|(id, g)| ColorHistogram::single(id, g.node_count()))
        .collect())
}
