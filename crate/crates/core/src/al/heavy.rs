use std::collections::{BTreeMap, HashMap, HashSet};

use rand::Rng;

use super::tracker::Presence;
use super::AlgoParams;
use crate::graph::{Edge, Triangle};
use crate::reservoir::{bernoulli, WeightedReservoir};

/// How promoted heavy edges are stored.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HeavyVariant {
    /// Keep every promoted edge with its counter and triangle.
    #[default]
    Explicit,
    /// Keep one weighted-reservoir slot and the running total only.
    Weighted,
}

/// A promoted edge: charged edge `(first, second)` with `first ≺ second`.
#[derive(Clone, Debug, PartialEq)]
pub struct HeavyRecord {
    pub first: u32,
    pub second: u32,
    pub x: u64,
    pub delta: Triangle,
}

impl HeavyRecord {
    pub fn edge(&self) -> Edge {
        Edge::new(self.first, self.second)
    }
}

#[derive(Clone, Debug)]
pub enum HeavySummary {
    Explicit {
        records: Vec<HeavyRecord>,
        p: f64,
    },
    Weighted {
        reservoir: WeightedReservoir<Triangle>,
        total_x: u64,
        p: f64,
    },
}

impl HeavySummary {
    /// Estimated number of heavy triangles, `Σx/p`.
    pub fn t_hat(&self) -> f64 {
        match self {
            HeavySummary::Explicit { records, p } => records.iter().map(|r| r.x).sum::<u64>() as f64 / p,
            HeavySummary::Weighted { total_x, p, .. } => *total_x as f64 / p,
        }
    }

    /// Membership in the explicit heavy set; always false for the weighted variant.
    pub fn contains(&self, e: Edge) -> bool {
        match self {
            HeavySummary::Explicit { records, .. } => records.iter().any(|r| r.edge() == e),
            HeavySummary::Weighted { .. } => false,
        }
    }

    pub fn records(&self) -> &[HeavyRecord] {
        match self {
            HeavySummary::Explicit { records, .. } => records,
            HeavySummary::Weighted { .. } => &[],
        }
    }
}

#[derive(Clone, Debug)]
struct Entry {
    first: u32,
    second: u32,
    flag: bool,
    presence: Presence,
}

#[derive(Clone, Debug)]
struct Counter {
    x: u64,
    delta: Triangle,
}

/// Streaming state of the heavy-edge estimator.
#[derive(Clone, Debug)]
pub struct HeavyHelper {
    p: f64,
    kappa: f64,
    entries: Vec<Entry>,
    index: HashMap<Edge, usize>,
    /// Flagged entries by endpoint.
    by_vertex: HashMap<u32, Vec<usize>>,
    /// Counters for edges `(a, current)`, keyed by `a`.
    counters: BTreeMap<u32, Counter>,
    store: Store,
    block: u32,
    current: u32,
}

#[derive(Clone, Debug)]
enum Store {
    Explicit { records: Vec<HeavyRecord>, members: HashSet<Edge> },
    Weighted { reservoir: WeightedReservoir<Triangle>, total_x: u64 },
}

impl HeavyHelper {
    pub fn new(params: &AlgoParams, variant: HeavyVariant) -> Self {
        let store = match variant {
            HeavyVariant::Explicit => Store::Explicit { records: Vec::new(), members: HashSet::new() },
            HeavyVariant::Weighted => Store::Weighted { reservoir: WeightedReservoir::new(), total_x: 0 },
        };
        HeavyHelper {
            p: params.p(),
            kappa: params.kappa(),
            entries: Vec::new(),
            index: HashMap::new(),
            by_vertex: HashMap::new(),
            counters: BTreeMap::new(),
            store,
            block: 0,
            current: 0,
        }
    }

    pub fn vertex(&mut self, u: u32) {
        self.block += 1;
        self.current = u;
    }

    /// Processes arrival `(u, v)` inside `u`'s block.
    pub fn edge<R: Rng + ?Sized>(&mut self, v: u32, rng: &mut R) {
        let u = self.current;
        let e = Edge::new(u, v);
        if let Store::Explicit { records, members } = &mut self.store {
            if members.remove(&e) {
                records.retain(|r| r.edge() != e);
            }
        }
        match self.index.get(&e) {
            Some(&i) => {
                let entry = &mut self.entries[i];
                if !entry.flag && entry.first == v {
                    entry.flag = true;
                    self.by_vertex.entry(entry.first).or_default().push(i);
                    self.by_vertex.entry(entry.second).or_default().push(i);
                }
            }
            None => {
                if bernoulli(self.p, rng) {
                    self.index.insert(e, self.entries.len());
                    self.entries.push(Entry { first: u, second: v, flag: false, presence: Presence::default() });
                }
            }
        }
        let Some(list) = self.by_vertex.get(&v) else { return };
        for &i in list {
            let entry = &mut self.entries[i];
            if entry.first == u || entry.second == u {
                continue;
            }
            let side = u8::from(entry.second == v);
            if entry.presence.mark(self.block, side) {
                let delta = Triangle::new(entry.first, entry.second, u);
                let c = self.counters.entry(entry.first).or_insert(Counter { x: 0, delta });
                c.x += 1;
                if rng.random_range(0..c.x) == 0 {
                    c.delta = delta;
                }
            }
        }
    }

    /// Closes the current block; returns the edges promoted to heavy.
    pub fn end_block<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<Edge> {
        let u = self.current;
        let mut promoted = Vec::new();
        for (a, c) in std::mem::take(&mut self.counters) {
            if (c.x as f64) < self.kappa {
                continue;
            }
            let e = Edge::new(a, u);
            promoted.push(e);
            match &mut self.store {
                Store::Explicit { records, members } => {
                    members.insert(e);
                    records.push(HeavyRecord { first: a, second: u, x: c.x, delta: c.delta });
                }
                Store::Weighted { reservoir, total_x } => {
                    *total_x += c.x;
                    reservoir
                        .offer(c.delta, c.x as f64 / self.p, rng)
                        .expect("positive weight");
                }
            }
        }
        promoted
    }

    pub fn is_heavy(&self, e: Edge) -> bool {
        match &self.store {
            Store::Explicit { members, .. } => members.contains(&e),
            Store::Weighted { .. } => false,
        }
    }

    pub fn sampled_edges(&self) -> usize {
        self.entries.len()
    }

    pub fn live_counters(&self) -> usize {
        self.counters.len()
    }

    /// Items held by the heavy store: three per record, or a constant for
    /// the weighted variant.
    pub fn store_items(&self) -> usize {
        match &self.store {
            Store::Explicit { records, .. } => 3 * records.len(),
            Store::Weighted { .. } => 3,
        }
    }

    pub fn finish(self) -> HeavySummary {
        match self.store {
            Store::Explicit { records, .. } => HeavySummary::Explicit { records, p: self.p },
            Store::Weighted { reservoir, total_x } => HeavySummary::Weighted { reservoir, total_x, p: self.p },
        }
    }
}

/// Draws a heavy triangle with probability proportional to its edge's counter.
pub fn sample_heavy_triangle<R: Rng + ?Sized>(summary: &HeavySummary, rng: &mut R) -> Option<Triangle> {
    match summary {
        HeavySummary::Explicit { records, .. } => {
            let total: u64 = records.iter().map(|r| r.x).sum();
            if total == 0 {
                return None;
            }
            let mut pick = rng.random_range(0..total);
            for r in records {
                if pick < r.x {
                    return Some(r.delta);
                }
                pick -= r.x;
            }
            unreachable!("pick below total")
        }
        HeavySummary::Weighted { reservoir, .. } => reservoir.get().copied(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::charge_by_stream_order;
    use crate::gen::{bowtie, complete};
    use crate::graph::Graph;
    use crate::rng::substream;
    use crate::stream::{al_stream_in_order, StreamItem};

    fn params(p: f64, kappa: f64) -> AlgoParams {
        let mut a = AlgoParams::new(0.5, 2.0, 5).unwrap();
        a.p = Some(p);
        a.kappa = Some(kappa);
        a
    }

    fn run(g: &Graph, order: &[u32], a: &AlgoParams, variant: HeavyVariant) -> HeavySummary {
        let s = al_stream_in_order(g, order).unwrap();
        let mut rng = substream(9, 0);
        let mut h = HeavyHelper::new(a, variant);
        let mut open = false;
        for item in s.pass() {
            match *item {
                StreamItem::Vertex(u) => {
                    if open {
                        h.end_block(&mut rng);
                    }
                    open = true;
                    h.vertex(u);
                }
                StreamItem::Edge(_, v) => h.edge(v, &mut rng),
            }
        }
        h.end_block(&mut rng);
        h.finish()
    }

    #[test]
    fn bowtie_exhaustive() {
        let s = run(&bowtie(), &[0, 1, 2, 3, 4], &params(1.0, 1.0), HeavyVariant::Explicit);
        let recs = s.records();
        assert_eq!(recs.len(), 2);
        assert_eq!((recs[0].edge(), recs[0].x, recs[0].delta), (Edge::new(0, 2), 1, Triangle::new(0, 1, 2)));
        assert_eq!((recs[1].edge(), recs[1].x, recs[1].delta), (Edge::new(0, 4), 1, Triangle::new(0, 3, 4)));
        assert_eq!(s.t_hat(), 2.0);
    }

    #[test]
    fn bowtie_high_threshold_is_empty() {
        let s = run(&bowtie(), &[0, 1, 2, 3, 4], &params(1.0, 3.0), HeavyVariant::Explicit);
        assert!(s.records().is_empty());
        assert_eq!(s.t_hat(), 0.0);
        assert_eq!(sample_heavy_triangle(&s, &mut substream(0, 0)), None);
    }

    #[test]
    fn full_sampling_matches_charges() {
        let g = complete(7);
        let order = [4, 0, 6, 2, 1, 5, 3];
        let s = run(&g, &order, &params(1.0, 1.0), HeavyVariant::Explicit);
        let charges = charge_by_stream_order(&g, &order).unwrap();
        let nonzero = charges.per_edge.values().filter(|&&t| t > 0).count();
        assert_eq!(s.records().len(), nonzero);
        for r in s.records() {
            assert_eq!(r.x, charges.t(r.edge()));
        }
        assert_eq!(s.t_hat(), 35.0);
        let w = run(&g, &order, &params(1.0, 1.0), HeavyVariant::Weighted);
        assert_eq!(w.t_hat(), 35.0);
    }

    #[test]
    fn weighted_pick() {
        let t1 = Triangle::new(0, 1, 2);
        let t2 = Triangle::new(0, 3, 4);
        let s = HeavySummary::Explicit {
            records: vec![
                HeavyRecord { first: 0, second: 2, x: 3, delta: t1 },
                HeavyRecord { first: 0, second: 4, x: 1, delta: t2 },
            ],
            p: 1.0,
        };
        let mut rng = substream(5, 5);
        let n = 40_000;
        let hits = (0..n).filter(|_| sample_heavy_triangle(&s, &mut rng) == Some(t1)).count();
        assert!((hits as f64 / n as f64 - 0.75).abs() < 0.02);
    }
}
