//! Grouping a sample into classes of graphs with equal color histograms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coloring::{ColorHistogram, ColorId};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionClass {
    pub key: ColorHistogram,
    pub members: Vec<usize>,
    pub multiplicity: usize,
}

/// Disjoint classes covering `0..m`, ordered by class key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePartition {
    m: usize,
    p: usize,
    classes: Vec<PartitionClass>,
}

impl SamplePartition {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn classes(&self) -> &[PartitionClass] {
        &self.classes
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.multiplicity).collect()
    }

    /// True when every class has the same size.
    pub fn is_uniform(&self) -> bool {
        self.classes
            .windows(2)
            .all(|w| w[0].multiplicity == w[1].multiplicity)
    }

    /// Class index of every sample position.
    pub fn class_index(&self) -> Vec<usize> {
        let mut owner = vec![0; self.m];
        for (j, class) in self.classes.iter().enumerate() {
            for &i in &class.members {
                owner[i] = j;
            }
        }
        owner
    }

    /// A partition of `0..sum(multiplicities)` into consecutive blocks of the
    /// given sizes, keyed by synthetic single-color histograms.
    pub fn from_multiplicities(multiplicities: &[usize]) -> Result<Self> {
        if multiplicities.is_empty() || multiplicities.contains(&0) {
            return Err(Error::InvalidArgument(
                "multiplicities must be non-empty and positive".into(),
            ));
        }
        let labels: Vec<usize> = multiplicities
            .iter()
            .enumerate()
            .flat_map(|(j, &mu)| std::iter::repeat(j).take(mu))
            .collect();
        Self::from_class_labels(&labels)
    }

    /// A partition where position `i` belongs to class `labels[i]`.
    pub fn from_class_labels(labels: &[usize]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("empty sample".into()));
        }
        let hists: Vec<ColorHistogram> = labels
            .iter()
            .map(|&j| ColorHistogram::single(ColorId(j as u32), 1))
            .collect();
        Ok(partition_sample(&hists))
    }
}

/// Groups sample positions by histogram. Classes are ordered by key, and
/// members within a class are increasing.
///
/// # Panics
///
/// If `histograms` is empty.
pub fn partition_sample(histograms: &[ColorHistogram]) -> SamplePartition {
    assert!(!histograms.is_empty(), "cannot partition an empty sample");
    let mut groups: BTreeMap<&ColorHistogram, Vec<usize>> = BTreeMap::new();
    for (i, h) in histograms.iter().enumerate() {
        groups.entry(h).or_default().push(i);
    }
    let classes: Vec<PartitionClass> = groups
        .into_iter()
        .map(|(key, members)| PartitionClass {
            key: key.clone(),
            multiplicity: members.len(),
            members,
        })
        .collect();
    SamplePartition {
        m: histograms.len(),
        p: classes.len(),
        classes,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityEntry {
    pub key: ColorHistogram,
    pub mu: usize,
    pub mu_prime: usize,
    pub epsilon: usize,
}

/// Per-color multiplicity differences between two equal-size samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplicityDiff {
    pub m: usize,
    pub entries: Vec<MultiplicityEntry>,
}

impl MultiplicityDiff {
    pub fn total_epsilon(&self) -> usize {
        self.entries.iter().map(|e| e.epsilon).sum()
    }
}

/// Matches classes of the two partitions by key. Keys are only comparable
/// when both partitions come from one coloring run over the union of the two
/// samples.
pub fn multiplicity_diff(a: &SamplePartition, b: &SamplePartition) -> Result<MultiplicityDiff> {
    if a.m != b.m {
        return Err(Error::SizeMismatch {
            left: a.m,
            right: b.m,
        });
    }
    let mut table: BTreeMap<&ColorHistogram, (usize, usize)> = BTreeMap::new();
    for c in &a.classes {
        table.entry(&c.key).or_default().0 = c.multiplicity;
    }
    for c in &b.classes {
        table.entry(&c.key).or_default().1 = c.multiplicity;
    }
    Ok(MultiplicityDiff {
        m: a.m,
        entries: table
            .into_iter()
            .map(|(key, (mu, mu_prime))| MultiplicityEntry {
                key: key.clone(),
                mu,
                mu_prime,
                epsilon: mu.abs_diff(mu_prime),
            })
            .collect(),
    })
}
