//! Core value types shared by every other module.
//!
//! Vertices of a multipartite shape are labeled part-major: part 0 owns flat
//! indices `0..v_0`, part 1 the next `v_1`, and so on. [`VertexId`] is the
//! `(part, slot)` view of the same labeling.

mod counts;
mod graph;
mod matching;
mod shape;
mod strata;

pub use counts::{pair_count, pair_index, pairs, EdgeCountVector, MatchingProfile};
pub use graph::GeneralGraph;
pub use matching::LabeledMatching;
pub use shape::{MultipartiteShape, VertexId};
pub use strata::{Strata, StratumTable};

/// A simple undirected graph the oracle, switching audits and chain sampler
/// can run on.
pub trait Host: Sync {
    fn vertex_count(&self) -> usize;

    fn adjacent(&self, u: usize, v: usize) -> bool;

    /// Part index of `v` when the host is complete multipartite.
    fn part_of(&self, _v: usize) -> Option<usize> {
        None
    }

    fn describe(&self) -> String;
}
