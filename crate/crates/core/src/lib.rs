//! Uniform triangle sampling from graph streams.
//!
//! A graph arrives as a stream of edges (edge arrival), of vertices with
//! their back-edges (vertex arrival), or of vertices with their full
//! neighbor lists (adjacency list). The samplers here return a triangle
//! whose distribution is uniform, or close to uniform, over all triangles
//! while storing far fewer items than the graph has edges.
//!
//! * [`ea`]: one-pass and three-pass samplers for edge-arrival streams.
//! * [`al`]: three-pass and one-pass samplers for adjacency-list streams.
//! * [`eval`]: trial harness, oracles, and statistics for checking the
//!   output distributions.

pub mod al;
pub mod charge;
pub mod ea;
pub mod error;
pub mod eval;
pub mod gen;
pub mod graph;
pub mod reservoir;
pub mod rng;
pub mod sample;
pub mod space;
pub mod stream;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, Triangle};
pub use sample::{Outcome, SampleResult};
pub use stream::{Model, Stream};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/streams.md")]
    mod streams {}
    #[doc = include_str!("../../../book/src/charging.md")]
    mod charging {}
    #[doc = include_str!("../../../book/src/edge-arrival.md")]
    mod edge_arrival {}
    #[doc = include_str!("../../../book/src/adjacency-list.md")]
    mod adjacency_list {}
    #[doc = include_str!("../../../book/src/evaluation.md")]
    mod evaluation {}
}
