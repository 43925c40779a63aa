//! Edge-arrival (EA), vertex-arrival (VA) and adjacency-list (AL) streams.
//!
//! A [`Stream`] is materialized once and then read through one-way [`Pass`]
//! cursors. Every cursor opened is counted, so tests can assert how many
//! passes an algorithm actually made.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::charge::positions;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Ea,
    Va,
    Al,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Ea => "EA",
            Model::Va => "VA",
            Model::Al => "AL",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "EA" => Ok(Model::Ea),
            "VA" => Ok(Model::Va),
            "AL" => Ok(Model::Al),
            _ => Err(Error::InvalidParameter(format!("unknown stream model {s:?}"))),
        }
    }
}

/// One arrival event. For AL and VA streams the first coordinate of an edge
/// is the vertex whose block is currently open.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StreamItem {
    Vertex(u32),
    Edge(u32, u32),
}

#[derive(Debug)]
pub struct Stream {
    model: Model,
    n: usize,
    m: usize,
    items: Vec<StreamItem>,
    vertex_order: Option<Vec<u32>>,
    passes: AtomicUsize,
}

impl Clone for Stream {
    /// Clones the items; the pass counter of the copy starts at zero.
    fn clone(&self) -> Self {
        Stream::from_parts(self.model, self.n, self.m, self.items.clone())
    }
}

impl PartialEq for Stream {
    fn eq(&self, other: &Self) -> bool {
        (self.model, self.n, self.m) == (other.model, other.n, other.m) && self.items == other.items
    }
}

impl Stream {
    fn from_parts(model: Model, n: usize, m: usize, items: Vec<StreamItem>) -> Self {
        let vertex_order = match model {
            Model::Ea => None,
            Model::Va | Model::Al => Some(
                items
                    .iter()
                    .filter_map(|it| match *it {
                        StreamItem::Vertex(v) => Some(v),
                        StreamItem::Edge(..) => None,
                    })
                    .collect(),
            ),
        };
        Stream {
            model,
            n,
            m,
            items,
            vertex_order,
            passes: AtomicUsize::new(0),
        }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Exposure order `≺_s` for VA and AL streams.
    pub fn vertex_order(&self) -> Option<&[u32]> {
        self.vertex_order.as_deref()
    }

    /// Opens a new one-way pass over the stream.
    pub fn pass(&self) -> Pass<'_> {
        self.passes.fetch_add(1, Ordering::Relaxed);
        Pass { inner: self.items.iter() }
    }

    pub fn passes_opened(&self) -> usize {
        self.passes.load(Ordering::Relaxed)
    }

    /// Items without opening a pass. For validation and serialization only.
    pub fn items(&self) -> &[StreamItem] {
        &self.items
    }

    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# model={} n={} m={}", self.model, self.n, self.m)?;
        for item in &self.items {
            match *item {
                StreamItem::Vertex(v) => writeln!(out, "V {v}")?,
                StreamItem::Edge(u, v) => writeln!(out, "E {u} {v}")?,
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("stream text is ASCII")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing stream header".into(),
        })?;
        let bad_header = || Error::Parse {
            line: 1,
            message: format!("malformed stream header {header:?}"),
        };
        let fields: HashMap<&str, &str> = header
            .strip_prefix('#')
            .ok_or_else(bad_header)?
            .split_whitespace()
            .filter_map(|kv| kv.split_once('='))
            .collect();
        let model: Model = fields.get("model").ok_or_else(bad_header)?.parse()?;
        let n: usize = fields.get("n").and_then(|x| x.parse().ok()).ok_or_else(bad_header)?;
        let m: usize = fields.get("m").and_then(|x| x.parse().ok()).ok_or_else(bad_header)?;

        let mut items = Vec::new();
        for (idx, line) in lines {
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let id = |t: &str| t.parse::<u32>().map_err(|_| err(format!("invalid vertex id {t:?}")));
            let item = match toks.as_slice() {
                ["V", v] => StreamItem::Vertex(id(v)?),
                ["E", u, v] => StreamItem::Edge(id(u)?, id(v)?),
                [t, ..] if t.starts_with('#') => continue,
                _ => return Err(err(format!("malformed stream item {line:?}"))),
            };
            items.push(item);
        }
        Ok(Stream::from_parts(model, n, m, items))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }
}

/// One-way cursor over a stream.
#[derive(Debug)]
pub struct Pass<'a> {
    inner: std::slice::Iter<'a, StreamItem>,
}

impl<'a> Iterator for Pass<'a> {
    type Item = &'a StreamItem;

    fn next(&mut self) -> Option<Self::Item> {
        self.inner.next()
    }
}

impl<'a> Pass<'a> {
    /// Edge arrivals only, as canonical edges.
    pub fn edges(self) -> impl Iterator<Item = Edge> + 'a {
        self.filter_map(|item| match *item {
            StreamItem::Edge(u, v) => Some(Edge::new(u, v)),
            StreamItem::Vertex(_) => None,
        })
    }
}

/// EA stream with edges in the given order.
pub fn ea_stream_in_order(g: &Graph, edges: &[Edge]) -> Stream {
    let items = edges.iter().map(|e| StreamItem::Edge(e.lo(), e.hi())).collect();
    Stream::from_parts(Model::Ea, g.n(), g.m(), items)
}

pub fn make_ea_stream<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Stream {
    let mut edges = g.edges().to_vec();
    edges.shuffle(rng);
    ea_stream_in_order(g, &edges)
}

fn random_order<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<u32> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    order
}

fn al_items<R: Rng + ?Sized>(g: &Graph, order: &[u32], mut rng: Option<&mut R>) -> Vec<StreamItem> {
    let mut items = Vec::with_capacity(g.n() + 2 * g.m());
    for &u in order {
        items.push(StreamItem::Vertex(u));
        let mut nbrs = g.neighbors(u).to_vec();
        if let Some(rng) = rng.as_deref_mut() {
            nbrs.shuffle(rng);
        }
        items.extend(nbrs.into_iter().map(|v| StreamItem::Edge(u, v)));
    }
    items
}

/// AL stream exposing vertices in `order`, neighbours ascending within each block.
pub fn al_stream_in_order(g: &Graph, order: &[u32]) -> Result<Stream> {
    positions(g.n(), order)?;
    let items = al_items::<rand_chacha::ChaCha8Rng>(g, order, None);
    Ok(Stream::from_parts(Model::Al, g.n(), g.m(), items))
}

/// AL stream with a random exposure order and random within-block order.
pub fn make_al_stream<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Stream {
    let order = random_order(g.n(), rng);
    let items = al_items(g, &order, Some(rng));
    Stream::from_parts(Model::Al, g.n(), g.m(), items)
}

fn va_items<R: Rng + ?Sized>(g: &Graph, order: &[u32], mut rng: Option<&mut R>) -> Vec<StreamItem> {
    let pos = positions(g.n(), order).expect("caller validated the order");
    let mut items = Vec::with_capacity(g.n() + g.m());
    for &u in order {
        items.push(StreamItem::Vertex(u));
        let mut earlier: Vec<u32> = g
            .neighbors(u)
            .iter()
            .copied()
            .filter(|&v| pos[v as usize] < pos[u as usize])
            .collect();
        if let Some(rng) = rng.as_deref_mut() {
            earlier.shuffle(rng);
        }
        items.extend(earlier.into_iter().map(|v| StreamItem::Edge(u, v)));
    }
    items
}

/// VA stream: each edge arrives once, in the block of its later-exposed endpoint.
pub fn va_stream_in_order(g: &Graph, order: &[u32]) -> Result<Stream> {
    positions(g.n(), order)?;
    let items = va_items::<rand_chacha::ChaCha8Rng>(g, order, None);
    Ok(Stream::from_parts(Model::Va, g.n(), g.m(), items))
}

pub fn make_va_stream<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Stream {
    let order = random_order(g.n(), rng);
    let items = va_items(g, &order, Some(rng));
    Stream::from_parts(Model::Va, g.n(), g.m(), items)
}

pub fn make_stream<R: Rng + ?Sized>(g: &Graph, model: Model, rng: &mut R) -> Stream {
    match model {
        Model::Ea => make_ea_stream(g, rng),
        Model::Va => make_va_stream(g, rng),
        Model::Al => make_al_stream(g, rng),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamViolation {
    HeaderMismatch { expected: (usize, usize), found: (usize, usize) },
    UnknownEdge(Edge),
    EdgeCount { edge: Edge, seen: usize, expected: usize },
    VertexInEaStream(u32),
    EdgeOutsideBlock { u: u32, v: u32 },
    VertexExposedTwice(u32),
    VertexNeverExposed(u32),
    NeighborNotYetExposed { u: u32, v: u32 },
    UnknownVertex(u32),
    SelfLoop(u32),
}

impl fmt::Display for StreamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StreamViolation::HeaderMismatch { expected, found } => write!(
                f,
                "header says n={} m={}, graph has n={} m={}",
                found.0, found.1, expected.0, expected.1
            ),
            StreamViolation::UnknownEdge(e) => write!(f, "unknown edge {e}"),
            StreamViolation::EdgeCount { edge, seen, expected } => {
                write!(f, "edge {edge} appeared {seen} time(s), expected {expected}")
            }
            StreamViolation::VertexInEaStream(v) => write!(f, "vertex exposure V {v} in an EA stream"),
            StreamViolation::EdgeOutsideBlock { u, v } => {
                write!(f, "out-of-block arrival E {u} {v}")
            }
            StreamViolation::VertexExposedTwice(v) => write!(f, "vertex {v} exposed twice"),
            StreamViolation::VertexNeverExposed(v) => write!(f, "vertex {v} never exposed"),
            StreamViolation::NeighborNotYetExposed { u, v } => {
                write!(f, "VA arrival E {u} {v} before {v} was exposed")
            }
            StreamViolation::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            StreamViolation::SelfLoop(v) => write!(f, "self-loop arrival E {v} {v}"),
        }
    }
}

impl std::error::Error for StreamViolation {}

/// Checks `s` against `g` and the invariants of its model; reports the first violation.
pub fn validate_stream(s: &Stream, g: &Graph) -> Result<(), StreamViolation> {
    if (s.n, s.m) != (g.n(), g.m()) {
        return Err(StreamViolation::HeaderMismatch {
            expected: (g.n(), g.m()),
            found: (s.n, s.m),
        });
    }
    let mut seen: HashMap<Edge, usize> = HashMap::new();
    let mut exposed = vec![false; g.n()];
    let mut block: Option<u32> = None;

    for item in &s.items {
        match *item {
            StreamItem::Vertex(v) => {
                if s.model == Model::Ea {
                    return Err(StreamViolation::VertexInEaStream(v));
                }
                let flag = exposed
                    .get_mut(v as usize)
                    .ok_or(StreamViolation::UnknownVertex(v))?;
                if *flag {
                    return Err(StreamViolation::VertexExposedTwice(v));
                }
                *flag = true;
                block = Some(v);
            }
            StreamItem::Edge(u, v) => {
                if u == v {
                    return Err(StreamViolation::SelfLoop(u));
                }
                if !g.has_edge(u, v) {
                    return Err(StreamViolation::UnknownEdge(Edge::new(u, v)));
                }
                if s.model != Model::Ea && block != Some(u) {
                    return Err(StreamViolation::EdgeOutsideBlock { u, v });
                }
                if s.model == Model::Va && !exposed[v as usize] {
                    return Err(StreamViolation::NeighborNotYetExposed { u, v });
                }
                *seen.entry(Edge::new(u, v)).or_default() += 1;
            }
        }
    }

    let expected = if s.model == Model::Al { 2 } else { 1 };
    for &e in g.edges() {
        let count = seen.get(&e).copied().unwrap_or(0);
        if count != expected {
            return Err(StreamViolation::EdgeCount { edge: e, seen: count, expected });
        }
    }
    if s.model != Model::Ea {
        if let Some(v) = exposed.iter().position(|&x| !x) {
            return Err(StreamViolation::VertexNeverExposed(v as u32));
        }
    }
    Ok(())
}
