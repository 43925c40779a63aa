use std::collections::{BTreeMap, HashMap};

use crate::graph::Edge;

/// Two presence bits for a tracked edge, valid only within block `block`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Presence {
    block: u32,
    bits: u8,
}

impl Presence {
    /// Marks endpoint `side` (0 or 1) as seen in `block`; true when this
    /// completes the pair.
    pub(crate) fn mark(&mut self, block: u32, side: u8) -> bool {
        if self.block != block {
            self.block = block;
            self.bits = 0;
        }
        let bit = 1 << side;
        if self.bits & bit != 0 {
            return false;
        }
        self.bits |= bit;
        self.bits == 3
    }
}

/// Counts, for a fixed set of edges, the number of blocks that contain both
/// endpoints. Over a whole AL pass this is λ for every tracked edge.
#[derive(Debug, Default)]
pub(crate) struct EdgeTracker {
    entries: BTreeMap<Edge, (u64, Presence)>,
    by_vertex: HashMap<u32, Vec<Edge>>,
    block: u32,
    current: u32,
}

impl EdgeTracker {
    pub(crate) fn new(edges: impl IntoIterator<Item = Edge>) -> Self {
        let mut t = EdgeTracker::default();
        for e in edges {
            if t.entries.insert(e, (0, Presence::default())).is_none() {
                t.by_vertex.entry(e.lo()).or_default().push(e);
                t.by_vertex.entry(e.hi()).or_default().push(e);
            }
        }
        t
    }

    pub(crate) fn len(&self) -> usize {
        self.entries.len()
    }

    pub(crate) fn vertex(&mut self, u: u32) {
        self.block += 1;
        self.current = u;
    }

    /// Processes arrival `(u, v)` in `u`'s block; calls `fire(e, w)` for
    /// every tracked edge `e` that now has both endpoints in the block.
    pub(crate) fn edge(&mut self, v: u32, mut fire: impl FnMut(Edge, u64, u32)) {
        let Some(list) = self.by_vertex.get(&v) else { return };
        let u = self.current;
        for e in list {
            if e.contains(u) {
                continue;
            }
            let (count, presence) = self.entries.get_mut(e).expect("indexed edge");
            let side = u8::from(e.hi() == v);
            if presence.mark(self.block, side) {
                *count += 1;
                fire(*e, *count, u);
            }
        }
    }

    pub(crate) fn lambda(&self, e: Edge) -> Option<u64> {
        self.entries.get(&e).map(|(c, _)| *c)
    }
}
