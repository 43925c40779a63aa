use rand::Rng;

use super::tracker::Presence;
use crate::graph::{Edge, Triangle};
use crate::reservoir::{bernoulli, Reservoir, ReservoirMode};

/// One slot of the light-edge sample.
#[derive(Clone, Debug, PartialEq)]
pub struct LightRecord {
    /// Endpoint whose block offered this entry.
    pub first: u32,
    pub second: u32,
    /// Set when the entry was taken at the edge's first arrival and has now
    /// seen its second one.
    pub flag: bool,
    /// Triangles found between the two arrivals.
    pub t_prime: u64,
    /// Uniform choice among those triangles.
    pub delta: Option<Triangle>,
    presence: Presence,
}

impl LightRecord {
    fn fresh(first: u32, second: u32) -> Self {
        LightRecord {
            first,
            second,
            flag: false,
            t_prime: 0,
            delta: None,
            presence: Presence::default(),
        }
    }

    pub fn edge(&self) -> Edge {
        Edge::new(self.first, self.second)
    }

    /// Items held: the edge, its counter word, and the kept triangle.
    fn items(&self) -> usize {
        2 + usize::from(self.delta.is_some())
    }
}

/// Streaming state of the light-edge sampler.
#[derive(Clone, Debug)]
pub struct LightHelper {
    slots: Reservoir<LightRecord>,
    block: u32,
    current: u32,
}

impl LightHelper {
    pub fn new(mode: ReservoirMode, slots: usize) -> Self {
        LightHelper {
            slots: Reservoir::new(mode, slots),
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
        for s in self.slots.slots_mut() {
            if s.first == v && s.second == u {
                s.flag = true;
            }
        }
        self.slots.offer(LightRecord::fresh(u, v), rng);
        for s in self.slots.slots_mut() {
            if s.flag || s.first == u || s.second == u {
                continue;
            }
            let side = if s.first == v {
                0
            } else if s.second == v {
                1
            } else {
                continue;
            };
            if s.presence.mark(self.block, side) {
                s.t_prime += 1;
                if rng.random_range(0..s.t_prime) == 0 {
                    s.delta = Some(Triangle::new(s.first, s.second, u));
                }
            }
        }
    }

    /// Clears the flag of every slot holding `e`.
    pub fn clear_flag(&mut self, e: Edge) {
        for s in self.slots.slots_mut() {
            if s.edge() == e {
                s.flag = false;
            }
        }
    }

    pub fn items(&self) -> usize {
        self.slots.slots().iter().map(LightRecord::items).sum()
    }

    pub fn slot_count(&self) -> usize {
        self.slots.slots().len()
    }

    pub fn finish(self) -> Vec<LightRecord> {
        self.slots.into_slots()
    }
}

/// Keeps each flagged, non-heavy slot's triangle with probability
/// `min(t'/τ, 1)` and returns the first one kept.
pub fn sample_light_triangle<R: Rng + ?Sized>(
    slots: &[LightRecord],
    is_heavy: impl Fn(Edge) -> bool,
    tau: f64,
    rng: &mut R,
) -> Option<Triangle> {
    for s in slots {
        if !s.flag || is_heavy(s.edge()) {
            continue;
        }
        let Some(delta) = s.delta else { continue };
        if bernoulli(s.t_prime as f64 / tau, rng) {
            return Some(delta);
        }
    }
    None
}
