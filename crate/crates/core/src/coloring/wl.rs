use rayon::prelude::*;

use super::{attribute_key, intern_sorted, ColorHistogram, ColorId, NodeColoring};
use crate::GraphSample;

/// The disjoint union of all graphs in a sample in CSR form.
struct Union {
    /// First global node id of each graph, plus the total at the end.
    graph_start: Vec<usize>,
    adj_start: Vec<usize>,
    adj: Vec<u32>,
}

impl Union {
    fn new(sample: &GraphSample) -> Self {
        let total = sample.total_nodes();
        let mut graph_start = Vec::with_capacity(sample.len() + 1);
        let mut degree = vec![0usize; total];
        let mut base = 0;
        for g in sample.graphs() {
            graph_start.push(base);
            for &(u, v) in g.edges() {
                degree[base + u as usize] += 1;
                degree[base + v as usize] += 1;
            }
            base += g.node_count();
        }
        graph_start.push(base);

        let mut adj_start = Vec::with_capacity(total + 1);
        let mut acc = 0;
        for d in &degree {
            adj_start.push(acc);
            acc += d;
        }
        adj_start.push(acc);

        let mut fill = adj_start.clone();
        let mut adj = vec![0u32; acc];
        for (gi, g) in sample.graphs().iter().enumerate() {
            let base = graph_start[gi];
            for &(u, v) in g.edges() {
                let (u, v) = (base + u as usize, base + v as usize);
                adj[fill[u]] = v as u32;
                fill[u] += 1;
                adj[fill[v]] = u as u32;
                fill[v] += 1;
            }
        }
        Union {
            graph_start,
            adj_start,
            adj,
        }
    }

    fn node_count(&self) -> usize {
        self.adj_start.len() - 1
    }

    fn degree(&self, v: usize) -> usize {
        self.adj_start[v + 1] - self.adj_start[v]
    }

    fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[self.adj_start[v]..self.adj_start[v + 1]]
    }

    fn split(&self, colors: &[u32]) -> Vec<Vec<ColorId>> {
        self.graph_start
            .windows(2)
            .map(|w| colors[w[0]..w[1]].iter().map(|&c| ColorId(c)).collect())
            .collect()
    }

    fn histograms(&self, colors: &[u32]) -> Vec<ColorHistogram> {
        self.graph_start
            .par_windows(2)
            .map(|w| {
                let ids: Vec<ColorId> = colors[w[0]..w[1]].iter().map(|&c| ColorId(c)).collect();
                ColorHistogram::from_colors(&ids)
            })
            .collect()
    }
}

/// Round-0 colors: interned attribute vectors, or one shared color.
fn initial_colors(sample: &GraphSample) -> (Vec<u32>, usize) {
    if !sample.has_attributes() {
        let n = sample.total_nodes();
        return (vec![0; n], usize::from(n > 0));
    }
    let keys: Vec<Vec<u64>> = sample
        .graphs()
        .iter()
        .flat_map(|g| g.attributes().unwrap_or_default().iter().map(|a| attribute_key(a)))
        .collect();
    let (ids, distinct) = intern_sorted(&keys);
    (ids.into_iter().map(|c| c.0).collect(), distinct)
}

/// One refinement round. Each node's signature is its color followed by the
/// sorted colors of its neighbors; distinct signatures get dense ids in
/// lexicographic order, so the map is injective and deterministic.
fn refine_round(union: &Union, colors: &[u32]) -> (Vec<u32>, usize) {
    let n = union.node_count();
    // Signature of v lives at sig[adj_start[v] + v ..][..degree(v) + 1].
    let mut sig = vec![0u32; n + union.adj.len()];
    let sig_start = |v: usize| union.adj_start[v] + v;
    for v in 0..n {
        let start = sig_start(v);
        let seg = &mut sig[start..start + union.degree(v) + 1];
        seg[0] = colors[v];
        for (slot, &u) in seg[1..].iter_mut().zip(union.neighbors(v)) {
            *slot = colors[u as usize];
        }
        seg[1..].sort_unstable();
    }
    let signature = |v: u32| {
        let v = v as usize;
        &sig[sig_start(v)..sig_start(v) + union.degree(v) + 1]
    };

    let mut order: Vec<u32> = (0..n as u32).collect();
    order.par_sort_unstable_by(|&a, &b| signature(a).cmp(signature(b)));

    let mut next = vec![0u32; n];
    let mut id = 0u32;
    for (pos, &v) in order.iter().enumerate() {
        if pos > 0 && signature(order[pos - 1]) != signature(v) {
            id += 1;
        }
        next[v as usize] = id;
    }
    (next, if n == 0 { 0 } else { id as usize + 1 })
}

/// Joint 1-WL refinement over the disjoint union of all graphs in `sample`.
///
/// Colors are shared across graphs, so equal histograms mean WL-equivalent
/// graphs. Refinement stops at the first round that leaves the partition of
/// the union node set unchanged; since each round refines the previous one,
/// that is exactly the first round that does not increase the number of
/// colors. Terminates within `total_nodes + 1` rounds.
pub fn wl_refine(sample: &GraphSample) -> (NodeColoring, Vec<ColorHistogram>) {
    let union = Union::new(sample);
    let (mut colors, mut distinct) = initial_colors(sample);
    let mut rounds = 0;
    loop {
        let (next, next_distinct) = refine_round(&union, &colors);
        rounds += 1;
        colors = next;
        if next_distinct == distinct {
            break;
        }
        distinct = next_distinct;
    }
    let histograms = union.histograms(&colors);
    (
        NodeColoring {
            colors: union.split(&colors),
            iteration_count: rounds,
        },
        histograms,
    )
}

/// Runs exactly `rounds` refinement rounds with no convergence check.
pub fn wl_refine_rounds(sample: &GraphSample, rounds: usize) -> (NodeColoring, Vec<ColorHistogram>) {
    let union = Union::new(sample);
    let (mut colors, _) = initial_colors(sample);
    for _ in 0..rounds {
        colors = refine_round(&union, &colors).0;
    }
    let histograms = union.histograms(&colors);
    (
        NodeColoring {
            colors: union.split(&colors),
            iteration_count: rounds,
        },
        histograms,
    )
}

/// Every node gets color 0, so graphs are separated only by node count.
pub fn trivial_coloring(sample: &GraphSample) -> Vec<ColorHistogram> {
    sample
        .graphs()
        .iter()
        .map(|g| ColorHistogram::single(ColorId(0), g.node_count()))
        .collect()
}

/// Color = interned (attribute, degree) pair, shared across the sample.
pub fn degree_coloring(sample: &GraphSample) -> Vec<ColorHistogram> {
    let union = Union::new(sample);
    let (initial, _) = initial_colors(sample);
    let keys: Vec<(u32, usize)> = (0..union.node_count())
        .map(|v| (initial[v], union.degree(v)))
        .collect();
    let (ids, _) = intern_sorted(&keys);
    let colors: Vec<u32> = ids.into_iter().map(|c| c.0).collect();
    union.histograms(&colors)
}
