//! Triangle charging rules and τ-heaviness classification.
//!
//! Each triangle is charged to exactly one of its edges, so per-edge charge
//! counts always sum to the triangle count. Two rules are provided:
//!
//! * stream order: with `a ≺ b ≺ c` by exposure time, `{a,b,c}` is charged to
//!   `{a,c}` (the one-pass adjacency-list sampler);
//! * degree order: with `u ≺ v ≺ w` by `(degree, id)`, `{u,v,w}` is charged to
//!   `{u,v}` (the three-pass edge-arrival sampler).

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{enumerate_triangles, Edge, EdgeTriangleStats, Graph, Triangle};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChargeMap {
    pub charged_edge: BTreeMap<Triangle, Edge>,
    /// `t_e` for every edge with at least one charged triangle.
    pub per_edge: BTreeMap<Edge, u64>,
}

impl ChargeMap {
    fn from_assignments(pairs: impl IntoIterator<Item = (Triangle, Edge)>) -> Self {
        let mut map = ChargeMap::default();
        for (t, e) in pairs {
            map.charged_edge.insert(t, e);
            *map.per_edge.entry(e).or_default() += 1;
        }
        map
    }

    pub fn t(&self, e: Edge) -> u64 {
        self.per_edge.get(&e).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.per_edge.values().sum()
    }
}

/// Position of each vertex in `order`, or an error if it is not a permutation.
pub fn positions(n: usize, order: &[u32]) -> Result<Vec<usize>> {
    let mut pos = vec![usize::MAX; n];
    if order.len() != n {
        return Err(Error::NotAPermutation { n });
    }
    for (i, &v) in order.iter().enumerate() {
        match pos.get_mut(v as usize) {
            Some(slot) if *slot == usize::MAX => *slot = i,
            _ => return Err(Error::NotAPermutation { n }),
        }
    }
    Ok(pos)
}

pub fn charge_by_stream_order(g: &Graph, vertex_order: &[u32]) -> Result<ChargeMap> {
    let pos = positions(g.n(), vertex_order)?;
    Ok(ChargeMap::from_assignments(enumerate_triangles(g).into_iter().map(|t| {
        let mut v = t.vertices();
        v.sort_unstable_by_key(|&x| pos[x as usize]);
        (t, Edge::new(v[0], v[2]))
    })))
}

/// Total order by ascending `(degree, id)`.
pub fn degree_rank(g: &Graph, v: u32) -> (usize, u32) {
    (g.degree(v), v)
}

pub fn charge_by_degree_order(g: &Graph) -> ChargeMap {
    ChargeMap::from_assignments(enumerate_triangles(g).into_iter().map(|t| {
        let mut v = t.vertices();
        v.sort_unstable_by_key(|&x| degree_rank(g, x));
        (t, Edge::new(v[0], v[1]))
    }))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TauClassification {
    pub tau: f64,
    pub heavy_edges: BTreeSet<Edge>,
    /// Number of τ-light edges of each triangle; 0 means the triangle is heavy.
    pub light_count: BTreeMap<Triangle, u8>,
}

impl TauClassification {
    pub fn is_heavy(&self, e: Edge) -> bool {
        self.heavy_edges.contains(&e)
    }

    pub fn heavy_triangles(&self) -> usize {
        self.light_count.values().filter(|&&i| i == 0).count()
    }
}

/// Classifies edges as τ-heavy (`λ_e ≥ τ`) and counts light edges per triangle.
pub fn classify_tau(g: &Graph, stats: &EdgeTriangleStats, tau: f64) -> Result<TauClassification> {
    if !(tau >= 1.0) {
        return Err(Error::InvalidParameter(format!("tau must be >= 1, got {tau}")));
    }
    let heavy_edges: BTreeSet<Edge> = stats
        .lambda
        .iter()
        .filter(|&(_, &l)| l as f64 >= tau)
        .map(|(&e, _)| e)
        .collect();
    let light_count = enumerate_triangles(g)
        .into_iter()
        .map(|t| {
            let light = t.edges().iter().filter(|e| !heavy_edges.contains(e)).count();
            (t, light as u8)
        })
        .collect();
    Ok(TauClassification { tau, heavy_edges, light_count })
}
