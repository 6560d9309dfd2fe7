use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{AttributedGraph, GraphSample};
use crate::{Error, Result};

const MAX_PAIRING_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family")]
pub enum GraphFamily {
    ErdosRenyi { n: usize, edge_probability: f64 },
    DRegular { n: usize, degree: usize },
    Cycle { n: usize },
    DisjointCycles { lengths: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSampleSpec {
    pub family: GraphFamily,
    pub count: usize,
    pub seed: u64,
}

impl RandomSampleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InfeasibleSpec("count must be positive".into()));
        }
        match &self.family {
            GraphFamily::ErdosRenyi { edge_probability, .. } => {
                if !(0.0..=1.0).contains(edge_probability) {
                    return Err(Error::InfeasibleSpec(format!(
                        "edge probability {edge_probability} outside [0, 1]"
                    )));
                }
            }
            &GraphFamily::DRegular { n, degree } => {
                if degree >= n.max(1) || (n * degree) % 2 != 0 {
                    return Err(Error::InfeasibleSpec(format!(
                        "no simple {degree}-regular graph on {n} nodes (need degree < n and n*degree even)"
                    )));
                }
            }
            &GraphFamily::Cycle { n } => {
                if n < 3 {
                    return Err(Error::InfeasibleSpec(format!("cycle length {n} < 3")));
                }
            }
            GraphFamily::DisjointCycles { lengths } => {
                if lengths.is_empty() || lengths.iter().any(|&l| l < 3) {
                    return Err(Error::InfeasibleSpec(
                        "disjoint cycles need at least one cycle, each of length >= 3".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Generates `spec.count` graphs. The output is a pure function of `spec`.
pub fn generate_sample(spec: &RandomSampleSpec) -> Result<GraphSample> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graphs = (0..spec.count)
        .map(|_| generate_one(&spec.family, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    GraphSample::unlabeled(graphs)
}

fn generate_one(family: &GraphFamily, rng: &mut ChaCha8Rng) -> Result<AttributedGraph> {
    match family {
        &GraphFamily::ErdosRenyi { n, edge_probability } => {
            let mut edges = Vec::new();
            for v in 0..n {
                for u in 0..v {
                    if rng.gen_bool(edge_probability) {
                        edges.push((u, v));
                    }
                }
            }
            AttributedGraph::new(n, edges, None)
        }
        &GraphFamily::DRegular { n, degree } => d_regular(n, degree, rng),
        &GraphFamily::Cycle { n } => cycles(&[n]),
        GraphFamily::DisjointCycles { lengths } => cycles(lengths),
    }
}

fn cycles(lengths: &[usize]) -> Result<AttributedGraph> {
    let mut edges = Vec::new();
    let mut offset = 0;
    for &len in lengths {
        edges.extend((0..len).map(|i| (offset + i, offset + (i + 1) % len)));
        offset += len;
    }
    AttributedGraph::new(offset, edges, None)
}

/// Configuration model: shuffle `n * degree` stubs, pair them up, and retry
/// whenever the pairing produces a loop or a repeated edge.
fn d_regular(n: usize, degree: usize, rng: &mut ChaCha8Rng) -> Result<AttributedGraph> {
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(degree)).collect();
    let mut seen = std::collections::HashSet::new();
    'attempt: for _ in 0..MAX_PAIRING_ATTEMPTS {
        stubs.shuffle(rng);
        seen.clear();
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
        }
        return AttributedGraph::new(n, seen.iter().copied(), None);
    }
    Err(Error::InfeasibleSpec(format!(
        "no simple pairing found for {degree}-regular graph on {n} nodes after {MAX_PAIRING_ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::to_jsonl;

    fn spec(family: GraphFamily, count: usize, seed: u64) -> RandomSampleSpec {
        RandomSampleSpec { family, count, seed }
    }

    #[test]
    fn cycle_and_two_triangles() {
        let s = generate_sample(&spec(GraphFamily::Cycle { n: 6 }, 1, 0)).unwrap();
        assert_eq!(s.graphs(), &[cycle(6)]);
        let s = generate_sample(&spec(GraphFamily::DisjointCycles { lengths: vec![3, 3] }, 1, 0))
            .unwrap();
        assert_eq!(s.graphs(), &[two_triangles()]);
    }

    #[test]
    fn erdos_renyi_is_deterministic() {
        let sp = spec(GraphFamily::ErdosRenyi { n: 10, edge_probability: 0.3 }, 5, 7);
        let a = generate_sample(&sp).unwrap();
        let b = generate_sample(&sp).unwrap();
        assert_eq!(to_jsonl(&a), to_jsonl(&b));
        assert_eq!(a.len(), 5);
        let other = generate_sample(&RandomSampleSpec { seed: 8, ..sp }).unwrap();
        assert_ne!(to_jsonl(&a), to_jsonl(&other));
    }

    #[test]
    fn d_regular_degrees() {
        let s = generate_sample(&spec(GraphFamily::DRegular { n: 10, degree: 3 }, 20, 1)).unwrap();
        for g in s.graphs() {
            assert!(g.degrees().iter().all(|&d| d == 3));
        }
    }

    #[test]
    fn infeasible_specs() {
        for family in [
            GraphFamily::DRegular { n: 5, degree: 3 },
            GraphFamily::DRegular { n: 4, degree: 4 },
            GraphFamily::Cycle { n: 2 },
            GraphFamily::DisjointCycles { lengths: vec![] },
            GraphFamily::ErdosRenyi { n: 3, edge_probability: 1.5 },
        ] {
            assert!(matches!(
                generate_sample(&spec(family, 1, 0)),
                Err(Error::InfeasibleSpec(_))
            ));
        }
        assert!(generate_sample(&spec(GraphFamily::Cycle { n: 3 }, 0, 0)).is_err());
    }
}
