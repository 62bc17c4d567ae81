//! Neighbour-sum-distinguishing (NSD) proper total colourings.
//!
//! A total colouring assigns colours to vertices and edges so that adjacent
//! vertices, adjacent edges and incident vertex/edge pairs differ. It is
//! *neighbour sum distinguishing* when adjacent vertices also differ in their
//! weighted degree `s(v) = c(v) + Σ_{e∋v} c(e)`.

pub mod colouring;
pub mod construct;
pub mod exact;
pub mod experiment;
pub mod graph;
pub mod lemma;
pub mod rng;
