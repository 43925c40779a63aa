//! Graph generators used by the CLI, the tests, and the guide.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

fn clique_pairs(offset: u32, k: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..k).flat_map(move |a| (a + 1..k).map(move |b| (offset + a, offset + b)))
}

/// The complete graph `K_n`.
pub fn complete(n: u32) -> Graph {
    Graph::from_edges(n as usize, clique_pairs(0, n)).expect("clique is simple")
}

/// Erdős–Rényi `G(n, p)`; pairs are visited in lexicographic order.
pub fn gnp<R: Rng + ?Sized>(n: u32, p: f64, rng: &mut R) -> Graph {
    let pairs: Vec<_> = clique_pairs(0, n)
        .filter(|_| crate::reservoir::bernoulli(p, rng))
        .collect();
    Graph::from_edges(n as usize, pairs).expect("G(n,p) is simple")
}

/// `G(n, p)` on `0..n` plus a disjoint `K_k` on the fresh vertices `n..n+k`.
pub fn planted<R: Rng + ?Sized>(n: u32, p: f64, k: u32, rng: &mut R) -> Graph {
    let base = gnp(n, p, rng);
    let pairs: Vec<_> = base
        .edges()
        .iter()
        .map(|e| (e.lo(), e.hi()))
        .chain(clique_pairs(n, k))
        .collect();
    Graph::from_edges((n + k) as usize, pairs).expect("planted graph is simple")
}

/// Two triangles `{0,1,2}` and `{0,3,4}` sharing vertex 0.
pub fn bowtie() -> Graph {
    Graph::from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
}

/// The path `0 - 1 - ... - (n-1)`.
pub fn path(n: u32) -> Graph {
    Graph::from_edges(n as usize, (1..n).map(|v| (v - 1, v))).unwrap()
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: u32) -> Graph {
    Graph::from_edges(leaves as usize + 1, (1..=leaves).map(|v| (0, v))).unwrap()
}

/// `K_k` where every clique vertex also carries `pendants` leaves.
///
/// With `k = 4, pendants = 4` every clique vertex has degree 7 > √(2m) = √44,
/// which drives the three-pass edge-arrival sampler through its high-degree branch.
pub fn clique_with_pendants(k: u32, pendants: u32) -> Graph {
    let mut pairs: Vec<_> = clique_pairs(0, k).collect();
    let mut next = k;
    for v in 0..k {
        for _ in 0..pendants {
            pairs.push((v, next));
            next += 1;
        }
    }
    Graph::from_edges(next as usize, pairs).unwrap()
}

/// Generator selector in `kind:args` form: `complete:n`, `gnp:n:p`, `planted:n:p:k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphKind {
    Complete { n: u32 },
    Gnp { n: u32, p: f64 },
    Planted { n: u32, p: f64, k: u32 },
}

impl GraphKind {
    pub fn generate<R: Rng + ?Sized>(self, rng: &mut R) -> Graph {
        match self {
            GraphKind::Complete { n } => complete(n),
            GraphKind::Gnp { n, p } => gnp(n, p, rng),
            GraphKind::Planted { n, p, k } => planted(n, p, k, rng),
        }
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad graph kind {s:?}"));
        let parts: Vec<&str> = s.split(':').collect();
        let int = |x: &str| x.parse::<u32>().map_err(|_| bad());
        let prob = |x: &str| {
            x.parse::<f64>()
                .ok()
                .filter(|p| (0.0..=1.0).contains(p))
                .ok_or_else(bad)
        };
        let kind = match parts.as_slice() {
            ["complete", n] => GraphKind::Complete { n: int(n)? },
            ["gnp", n, p] => GraphKind::Gnp { n: int(n)?, p: prob(p)? },
            ["planted", n, p, k] => GraphKind::Planted {
                n: int(n)?,
                p: prob(p)?,
                k: int(k)?,
            },
            _ => return Err(bad()),
        };
        Ok(kind)
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphKind::Complete { n } => write!(f, "complete:{n}"),
            GraphKind::Gnp { n, p } => write!(f, "gnp:{n}:{p}"),
            GraphKind::Planted { n, p, k } => write!(f, "planted:{n}:{p}:{k}"),
        }
    }
}
