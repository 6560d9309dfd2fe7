use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AttributedGraph, GraphSample, Label};
use crate::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attrs: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<i64>,
}

/// Reads a sample stored as one JSON object per line:
/// `{"n": 3, "edges": [[0, 1], [1, 2]], "attrs": [[..], ..], "label": 1}`.
/// `attrs` and `label` are optional; blank lines are skipped.
pub fn parse_jsonl(path: impl AsRef<Path>) -> Result<GraphSample> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_jsonl(BufReader::new(file), path)
}

/// Like [`parse_jsonl`], reading from any buffered source. `origin` is only
/// used in error messages.
pub fn read_jsonl(reader: impl BufRead, origin: impl AsRef<Path>) -> Result<GraphSample> {
    let origin = origin.as_ref();
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    let mut first_labeled_line: Option<(usize, bool)> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record: Record = serde_json::from_str(&line)
            .map_err(|e| Error::parse(origin, lineno, format!("malformed JSON: {e}")))?;
        let edges = record.edges.iter().map(|&[u, v]| (u, v));
        let graph = AttributedGraph::new(record.n, edges, record.attrs)
            .map_err(|e| Error::parse(origin, lineno, e.to_string()))?;

        let labeled = record.label.is_some();
        match first_labeled_line {
            None => first_labeled_line = Some((lineno, labeled)),
            Some((first, was_labeled)) if was_labeled != labeled => {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("label presence differs from line {first}"),
                ));
            }
            _ => {}
        }
        if let Some(value) = record.label {
            let label = Label::from_sign(value).ok_or_else(|| {
                Error::parse(origin, lineno, format!("label {value} is not -1 or +1"))
            })?;
            labels.push(label);
        }
        graphs.push(graph);
    }

    let labels = matches!(first_labeled_line, Some((_, true))).then_some(labels);
    GraphSample::new(graphs, labels).map_err(|e| Error::parse(origin, 0, e.to_string()))
}

/// Serializes a sample in the line-delimited format read by [`parse_jsonl`].
pub fn to_jsonl(sample: &GraphSample) -> String {
    let mut out = String::new();
    for (i, g) in sample.graphs().iter().enumerate() {
        let record = Record {
            n: g.node_count(),
            edges: g.edges().iter().map(|&(u, v)| [u as usize, v as usize]).collect(),
            attrs: g.attributes().map(<[_]>::to_vec),
            label: sample.labels().map(|l| l[i].sign()),
        };
        out.push_str(&serde_json::to_string(&record).expect("records always serialize"));
        out.push('\n');
    }
    out
}

pub fn write_jsonl(sample: &GraphSample, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(to_jsonl(sample).as_bytes())
        .map_err(|e| Error::io(path, e))
}
