//! Coloring functions over graph samples.
//!
//! A coloring assigns each graph a [`ColorHistogram`]; graphs with equal
//! histograms are indistinguishable to any model whose expressivity is bounded
//! by that coloring. The provided colorings form a chain from coarse to fine:
//! [`trivial_coloring`], [`degree_coloring`], [`wl_refine`] (1-WL) and
//! [`exact_iso_coloring`] (a complete invariant for small graphs).

mod canonical;
mod wl;

pub use canonical::{exact_iso_coloring, exact_iso_coloring_with_limit, EXACT_ISO_NODE_LIMIT};
pub use wl::{degree_coloring, trivial_coloring, wl_refine, wl_refine_rounds};

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::partition::SamplePartition;
use crate::{Error, GraphSample, Result};

/// Interned color. Dense from 0 within one coloring run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorId(pub u32);

/// Stable node colors of every graph in a sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeColoring {
    pub colors: Vec<Vec<ColorId>>,
    pub iteration_count: usize,
}

/// Multiset of node colors of one graph, stored as `(color, count)` pairs
/// sorted by color. Serializes as `[[color, count], ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ColorHistogram(Vec<(ColorId, u32)>);

impl ColorHistogram {
    pub fn from_colors(colors: &[ColorId]) -> Self {
        let mut sorted = colors.to_vec();
        sorted.sort_unstable();
        let mut entries: Vec<(ColorId, u32)> = Vec::new();
        for c in sorted {
            match entries.last_mut() {
                Some((last, count)) if *last == c => *count += 1,
                _ => entries.push((c, 1)),
            }
        }
        ColorHistogram(entries)
    }

    pub fn single(color: ColorId, count: usize) -> Self {
        if count == 0 {
            ColorHistogram(Vec::new())
        } else {
            ColorHistogram(vec![(color, count as u32)])
        }
    }

    pub fn entries(&self) -> &[(ColorId, u32)] {
        &self.0
    }

    pub fn distinct_colors(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&(_, c)| c as usize).sum()
    }
}

impl Serialize for ColorHistogram {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &(color, count) in &self.0 {
            seq.serialize_element(&[color.0, count])?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ColorHistogram {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let mut pairs = Vec::<[u32; 2]>::deserialize(deserializer)?;
        pairs.sort_unstable();
        Ok(ColorHistogram(
            pairs.into_iter().map(|[c, n]| (ColorId(c), n)).collect(),
        ))
    }
}

/// Anything that maps a sample to one histogram per graph, invariant under
/// node relabeling.
pub trait ColoringFunction {
    fn name(&self) -> &'static str;
    fn histograms(&self, sample: &GraphSample) -> Result<Vec<ColorHistogram>>;
}

/// The built-in colorings, ordered from least to most expressive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringKind {
    Trivial,
    Degree,
    Wl,
    ExactIso,
}

impl ColoringKind {
    pub const HIERARCHY: [ColoringKind; 4] = [
        ColoringKind::Trivial,
        ColoringKind::Degree,
        ColoringKind::Wl,
        ColoringKind::ExactIso,
    ];
}

impl ColoringFunction for ColoringKind {
    fn name(&self) -> &'static str {
        match self {
            ColoringKind::Trivial => "trivial",
            ColoringKind::Degree => "degree",
            ColoringKind::Wl => "wl",
            ColoringKind::ExactIso => "exact_iso",
        }
    }

    fn histograms(&self, sample: &GraphSample) -> Result<Vec<ColorHistogram>> {
        Ok(match self {
            ColoringKind::Trivial => trivial_coloring(sample),
            ColoringKind::Degree => degree_coloring(sample),
            ColoringKind::Wl => wl_refine(sample).1,
            ColoringKind::ExactIso => exact_iso_coloring(sample)?,
        })
    }
}

impl fmt::Display for ColoringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColoringKind {
    type Err = Error;

    /// `order` is accepted as an alias of `trivial`: a single shared node
    /// color separates graphs exactly by their number of nodes.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trivial" | "order" => Ok(ColoringKind::Trivial),
            "degree" => Ok(ColoringKind::Degree),
            "wl" | "1-wl" => Ok(ColoringKind::Wl),
            "exact_iso" | "exact-iso" => Ok(ColoringKind::ExactIso),
            other => Err(Error::InvalidArgument(format!("unknown coloring {other:?}"))),
        }
    }
}

/// True iff every class of `finer` lies inside a single class of `coarser`.
pub fn is_finer(finer: &SamplePartition, coarser: &SamplePartition) -> Result<bool> {
    if finer.m() != coarser.m() {
        return Err(Error::SizeMismatch {
            left: finer.m(),
            right: coarser.m(),
        });
    }
    let owner: HashMap<usize, usize> = coarser
        .classes()
        .iter()
        .enumerate()
        .flat_map(|(j, class)| class.members.iter().map(move |&i| (i, j)))
        .collect();
    Ok(finer.classes().iter().all(|class| {
        let mut owners = class.members.iter().map(|i| owner[i]);
        let first = owners.next();
        owners.all(|o| Some(o) == first)
    }))
}

/// Builds dense ids for a set of keys in sorted key order.
pub(crate) fn intern_sorted<K: Ord + Clone>(keys: &[K]) -> (Vec<ColorId>, usize) {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ids = vec![ColorId(0); keys.len()];
    let mut next = 0u32;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 && keys[order[pos - 1]] != keys[i] {
            next += 1;
        }
        ids[i] = ColorId(next);
    }
    let distinct = if keys.is_empty() { 0 } else { next as usize + 1 };
    (ids, distinct)
}

/// Total-order key for an attribute vector: exact bit patterns.
pub(crate) fn attribute_key(attr: &[f64]) -> Vec<u64> {
    attr.iter().map(|x| x.to_bits()).collect()
}
