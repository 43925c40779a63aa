use std::path::PathBuf;

use thiserror::Error;

use crate::graph::{Edge, Triangle};

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on vertex {0}")]
    SelfLoop(u64),

    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(u64, u64),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: u32, n: usize },

    #[error("vertex order is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },

    #[error("unknown edge {0}")]
    UnknownEdge(Edge),

    #[error("algorithm {algo} cannot consume a {model} stream")]
    ModelMismatch { algo: &'static str, model: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sampler reported {0}, which is not a triangle of the input graph")]
    ForeignTriangle(Triangle),

    #[error("no successful samples to compute a distribution from")]
    NoSuccesses,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
