//! Simple undirected graphs and the brute-force triangle oracle.
//!
//! Vertices are dense ids `0..n`. Graph files may use arbitrary base-10
//! labels; they are remapped in order of first appearance and the original
//! labels are kept in [`Graph::labels`] for output.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// Unordered vertex pair stored as `(min, max)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(u32, u32);

impl Edge {
    /// Canonical edge between `a` and `b`. Panics on a self-loop.
    pub fn new(a: u32, b: u32) -> Self {
        assert_ne!(a, b, "self-loop {a}");
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn lo(self) -> u32 {
        self.0
    }

    pub fn hi(self) -> u32 {
        self.1
    }

    pub fn contains(self, v: u32) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`, if `v` is an endpoint.
    pub fn other(self, v: u32) -> Option<u32> {
        if self.0 == v {
            Some(self.1)
        } else if self.1 == v {
            Some(self.0)
        } else {
            None
        }
    }

    /// The vertex shared with `other`, when the two edges meet in exactly one vertex.
    pub fn shared_vertex(self, other: Edge) -> Option<u32> {
        if self == other {
            return None;
        }
        [self.0, self.1].into_iter().find(|&v| other.contains(v))
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// Vertex triple sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle([u32; 3]);

impl Triangle {
    pub fn new(a: u32, b: u32, c: u32) -> Self {
        let mut v = [a, b, c];
        v.sort_unstable();
        assert!(v[0] != v[1] && v[1] != v[2], "degenerate triangle {v:?}");
        Triangle(v)
    }

    /// Triangle spanned by `edge` and the apex `w`.
    pub fn from_edge(edge: Edge, w: u32) -> Self {
        Triangle::new(edge.lo(), edge.hi(), w)
    }

    pub fn vertices(self) -> [u32; 3] {
        self.0
    }

    pub fn edges(self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge(a, b), Edge(a, c), Edge(b, c)]
    }

    pub fn contains(self, v: u32) -> bool {
        self.0.contains(&v)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Immutable simple undirected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    edges: Vec<Edge>,
    adjacency: Vec<Vec<u32>>,
    labels: Vec<u64>,
}

impl Graph {
    /// Builds a graph on vertices `0..n`, rejecting self-loops and duplicates.
    pub fn from_edges(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let labels = (0..n as u64).collect();
        Self::build(labels, pairs)
    }

    fn build(labels: Vec<u64>, pairs: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let n = labels.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = Vec::new();
        for (a, b) in pairs {
            for v in [a, b] {
                if v as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(labels[a as usize]));
            }
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
            edges.push(Edge::new(a, b));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let e = w[0];
            return Err(Error::DuplicateEdge(labels[e.lo() as usize], labels[e.hi() as usize]));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { edges, adjacency, labels })
    }

    /// Parses the whitespace-separated edge-list format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut remap: HashMap<u64, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut next_id = || -> Result<u64> {
                let tok = fields.next().ok_or_else(|| Error::Parse {
                    line: idx + 1,
                    message: format!("expected two vertex ids, got {line:?}"),
                })?;
                tok.parse::<u64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("invalid vertex id {tok:?}"),
                })
            };
            let (a, b) = (next_id()?, next_id()?);
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("trailing fields in {line:?}"),
                });
            }
            let mut intern = |label: u64| {
                *remap.entry(label).or_insert_with(|| {
                    labels.push(label);
                    (labels.len() - 1) as u32
                })
            };
            let (ia, ib) = (intern(a), intern(b));
            if ia == ib {
                return Err(Error::SelfLoop(a));
            }
            pairs.push((ia, ib));
        }
        Self::build(labels, pairs)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Writes the graph in edge-list format using the original labels.
    pub fn write_to(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "# n={} m={}", self.n(), self.m())?;
        for e in &self.edges {
            writeln!(out, "{} {}", self.label(e.lo()), self.label(e.hi()))?;
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        a != b
            && (a as usize) < self.n()
            && self.adjacency[a as usize].binary_search(&b).is_ok()
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Original file label of a dense vertex id.
    pub fn label(&self, v: u32) -> u64 {
        self.labels[v as usize]
    }

    pub fn is_triangle(&self, t: Triangle) -> bool {
        t.edges().iter().all(|e| self.has_edge(e.lo(), e.hi()))
    }
}

/// Common neighbours of `u` and `v` strictly greater than `floor`.
fn common_neighbors_above<'a>(
    g: &'a Graph,
    u: u32,
    v: u32,
    floor: Option<u32>,
) -> impl Iterator<Item = u32> + 'a {
    let (mut a, mut b) = (g.neighbors(u).iter().peekable(), g.neighbors(v).iter().peekable());
    std::iter::from_fn(move || loop {
        let (&&x, &&y) = (a.peek()?, b.peek()?);
        match x.cmp(&y) {
            std::cmp::Ordering::Less => {
                a.next();
            }
            std::cmp::Ordering::Greater => {
                b.next();
            }
            std::cmp::Ordering::Equal => {
                a.next();
                b.next();
                if floor.is_none_or(|f| x > f) {
                    return Some(x);
                }
            }
        }
    })
}

/// Every triangle of `g`, sorted ascending.
pub fn enumerate_triangles(g: &Graph) -> Vec<Triangle> {
    let mut out = Vec::new();
    for &e in g.edges() {
        for w in common_neighbors_above(g, e.lo(), e.hi(), Some(e.hi())) {
            out.push(Triangle::new(e.lo(), e.hi(), w));
        }
    }
    out.sort_unstable();
    out
}

/// Per-edge incident triangle counts (λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeTriangleStats {
    pub lambda: BTreeMap<Edge, u64>,
}

impl EdgeTriangleStats {
    pub fn get(&self, e: Edge) -> u64 {
        self.lambda.get(&e).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.lambda.values().sum()
    }
}

pub fn triangles_per_edge(g: &Graph) -> EdgeTriangleStats {
    let lambda = g
        .edges()
        .iter()
        .map(|&e| (e, common_neighbors_above(g, e.lo(), e.hi(), None).count() as u64))
        .collect();
    EdgeTriangleStats { lambda }
}
