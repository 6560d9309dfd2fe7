use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use super::{AttributedGraph, GraphSample, Label};
use crate::{Error, Result};

/// A sample loaded from a TU-format directory together with the dataset name
/// and any non-fatal warnings (e.g. graph labels that were not binary).
#[derive(Debug, Clone)]
pub struct TuDataset {
    pub name: String,
    pub sample: GraphSample,
    pub warnings: Vec<String>,
}

/// Loads a dataset in the TU graph-classification layout:
///
/// - `<DS>_A.txt`: one `row, col` pair of 1-indexed global node ids per line
/// - `<DS>_graph_indicator.txt`: 1-indexed graph id of each node
/// - `<DS>_node_labels.txt` (optional): one numeric label per node
/// - `<DS>_graph_labels.txt` (optional): one label per graph
///
/// Node labels become 1-dimensional attributes. Graph labels are mapped to
/// `{-1, +1}` (smaller value first) when exactly two distinct values occur;
/// otherwise they are dropped and a warning is recorded.
pub fn parse_tu_dataset(dir: impl AsRef<Path>) -> Result<TuDataset> {
    let dir = dir.as_ref();
    let name = dataset_name(dir)?;
    let file = |suffix: &str| dir.join(format!("{name}_{suffix}.txt"));

    let indicator_path = file("graph_indicator");
    let indicator: Vec<(usize, usize)> = read_lines(&indicator_path)?
        .into_iter()
        .map(|(line, text)| Ok((line, parse_int::<usize>(&indicator_path, line, &text)?)))
        .collect::<Result<_>>()?;

    let graph_labels_path = file("graph_labels");
    let raw_graph_labels = match read_lines(&graph_labels_path) {
        Ok(lines) => Some(
            lines
                .into_iter()
                .map(|(line, text)| parse_int::<i64>(&graph_labels_path, line, &text))
                .collect::<Result<Vec<_>>>()?,
        ),
        Err(Error::MissingFile(_)) => None,
        Err(e) => return Err(e),
    };

    let graph_count = match &raw_graph_labels {
        Some(labels) => labels.len(),
        None => indicator.iter().map(|&(_, g)| g).max().unwrap_or(0),
    };
    if graph_count == 0 {
        return Err(Error::parse(&indicator_path, 0, "dataset declares no graphs"));
    }

    // global node id (0-based) -> (graph, local index)
    let mut placement = Vec::with_capacity(indicator.len());
    let mut node_counts = vec![0usize; graph_count];
    for &(line, graph_id) in &indicator {
        if graph_id == 0 || graph_id > graph_count {
            return Err(Error::parse(
                &indicator_path,
                line,
                format!("indicator out of range: graph id {graph_id} with {graph_count} graphs"),
            ));
        }
        let g = graph_id - 1;
        placement.push((g, node_counts[g]));
        node_counts[g] += 1;
    }

    let node_labels_path = file("node_labels");
    let mut attributes: Option<Vec<Vec<Vec<f64>>>> = match read_lines(&node_labels_path) {
        Ok(lines) => {
            if lines.len() != placement.len() {
                return Err(Error::parse(
                    &node_labels_path,
                    lines.len(),
                    format!("{} node labels for {} nodes", lines.len(), placement.len()),
                ));
            }
            let mut attrs: Vec<Vec<Vec<f64>>> =
                node_counts.iter().map(|&n| Vec::with_capacity(n)).collect();
            for ((line, text), &(g, _)) in lines.into_iter().zip(&placement) {
                let value: f64 = text.trim().parse().map_err(|_| {
                    Error::parse(&node_labels_path, line, format!("invalid node label {text:?}"))
                })?;
                attrs[g].push(vec![value]);
            }
            Some(attrs)
        }
        Err(Error::MissingFile(_)) => None,
        Err(e) => return Err(e),
    };

    let adjacency_path = file("A");
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); graph_count];
    for (line, text) in read_lines(&adjacency_path)? {
        let (a, b) = text
            .split_once(',')
            .ok_or_else(|| Error::parse(&adjacency_path, line, "expected `row, col`"))?;
        let a = parse_int::<usize>(&adjacency_path, line, a)?;
        let b = parse_int::<usize>(&adjacency_path, line, b)?;
        let locate = |id: usize| {
            id.checked_sub(1)
                .and_then(|i| placement.get(i).copied())
                .ok_or_else(|| {
                    Error::parse(&adjacency_path, line, format!("node {id} has no graph"))
                })
        };
        let (ga, la) = locate(a)?;
        let (gb, lb) = locate(b)?;
        if ga != gb {
            return Err(Error::parse(
                &adjacency_path,
                line,
                format!("edge ({a}, {b}) joins graphs {} and {}", ga + 1, gb + 1),
            ));
        }
        if la == lb {
            return Err(Error::parse(&adjacency_path, line, format!("self-loop at node {a}")));
        }
        edges[ga].push((la, lb));
    }

    let graphs = edges
        .into_iter()
        .enumerate()
        .map(|(g, e)| {
            let attrs = attributes.as_mut().map(|a| std::mem::take(&mut a[g]));
            AttributedGraph::from_symmetric_edges(node_counts[g], e, attrs)
                .map_err(|err| Error::parse(&adjacency_path, 0, format!("graph {}: {err}", g + 1)))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let labels = raw_graph_labels.and_then(|raw| {
        let distinct: BTreeSet<i64> = raw.iter().copied().collect();
        if distinct.len() == 2 {
            let negative = *distinct.first().unwrap();
            Some(
                raw.iter()
                    .map(|&v| if v == negative { Label::Negative } else { Label::Positive })
                    .collect(),
            )
        } else {
            warnings.push(format!(
                "graph labels dropped: {} distinct values, expected exactly 2",
                distinct.len()
            ));
            None
        }
    });

    Ok(TuDataset {
        name,
        sample: GraphSample::new(graphs, labels)?,
        warnings,
    })
}

fn dataset_name(dir: &Path) -> Result<String> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| {
            e.file_name()
                .to_str()
                .and_then(|f| f.strip_suffix("_A.txt"))
                .map(str::to_owned)
        })
        .collect();
    names.sort();
    match names.len() {
        0 => Err(Error::MissingFile(dir.join("<DS>_A.txt"))),
        1 => Ok(names.pop().unwrap()),
        _ => Err(Error::InvalidArgument(format!(
            "{}: several datasets found ({})",
            dir.display(),
            names.join(", ")
        ))),
    }
}

/// Non-blank lines with their 1-based line numbers.
fn read_lines(path: &PathBuf) -> Result<Vec<(usize, String)>> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingFile(path.clone()))
        }
        Err(e) => return Err(Error::io(path, e)),
    };
    Ok(text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.to_owned()))
        .collect())
}

fn parse_int<T: std::str::FromStr>(path: &Path, line: usize, text: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::parse(path, line, format!("malformed integer {:?}", text.trim())))
}
