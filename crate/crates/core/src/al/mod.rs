//! Triangle samplers for adjacency-list streams.
//!
//! In an adjacency-list stream every vertex `u` is exposed once, followed by
//! all of its incident edges, so each edge arrives twice. Write `a ≺ b` when
//! `a` is exposed before `b`.
//!
//! * [`al3_run`] makes three passes: a uniform edge multiset, then per-edge
//!   triangle counts λ and a uniform incident triangle, then λ for the other
//!   two edges of that triangle. τ-heavy edges are ignored and the rest are
//!   accepted with probability `λ_e/(iτ)`, which makes every light triangle
//!   equally likely.
//! * [`al1_run`] makes one pass. A triangle `a ≺ b ≺ c` is *charged* to
//!   `{a,c}`, and every triangle charged to `{a,c}` shows up between the two
//!   arrivals of that edge. [`LightHelper`] samples edges at their first
//!   arrival and counts their charged triangles exactly. [`HeavyHelper`]
//!   estimates the charge of heavy edges from a Bernoulli edge sample. The
//!   combiner mixes the light and heavy samples by the heavy estimate.

mod heavy;
mod light;
mod one_pass;
mod params;
mod three_pass;
mod tracker;

pub use heavy::{sample_heavy_triangle, HeavyHelper, HeavyRecord, HeavySummary, HeavyVariant};
pub use light::{sample_light_triangle, LightHelper, LightRecord};
pub use one_pass::{al1_run, select_branch, Al1Config, Branch};
pub use params::AlgoParams;
pub use three_pass::al3_run;

use crate::error::{Error, Result};
use crate::stream::{Model, Stream, StreamItem};

fn require_al(stream: &Stream, algo: &'static str) -> Result<()> {
    match stream.model() {
        Model::Al => Ok(()),
        other => Err(Error::ModelMismatch { algo, model: other.name() }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BlockEvent {
    Vertex(u32),
    /// Arrival `(u, v)` inside `u`'s block.
    Edge(u32, u32),
    /// The block of this vertex has closed.
    End(u32),
}

/// Replays one pass of an AL stream as vertex, edge and end-of-block events.
pub(crate) fn for_each_block(stream: &Stream, mut on: impl FnMut(BlockEvent)) {
    let mut open: Option<u32> = None;
    for item in stream.pass() {
        match *item {
            StreamItem::Vertex(u) => {
                if let Some(prev) = open.replace(u) {
                    on(BlockEvent::End(prev));
                }
                on(BlockEvent::Vertex(u));
            }
            StreamItem::Edge(u, v) => on(BlockEvent::Edge(u, v)),
        }
    }
    if let Some(last) = open {
        on(BlockEvent::End(last));
    }
}
