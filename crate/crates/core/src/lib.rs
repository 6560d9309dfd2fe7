//! Weisfeiler-Leman colorings of graph samples and the Rademacher-complexity
//! bounds of hypothesis classes that are constant on color classes.
//!
//! The pipeline is: load or generate a [`GraphSample`], color it with one of
//! the [`ColoringKind`] evaluators, group graphs with equal color histograms
//! into a [`SamplePartition`], then evaluate the complexity of the class of
//! `[-1, 1]`-valued functions that are constant on each class, either exactly
//! ([`rademacher::exact_rademacher`]), by enumeration, or by Monte Carlo, and
//! compare against the closed-form bounds in [`bounds`].

pub mod bounds;
pub mod coloring;
mod error;
pub mod graph;
pub mod partition;
pub mod rademacher;

pub use coloring::{ColorHistogram, ColorId, ColoringKind, NodeColoring};
pub use error::{Error, Result};
pub use graph::{AttributedGraph, GraphSample};
pub use partition::{MultiplicityDiff, SamplePartition};
pub use rademacher::{EstimateMethod, RademacherEstimate};
