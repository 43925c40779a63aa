//! Peak-memory accounting in stored items (edges, triangles, counters).

use std::collections::BTreeMap;

/// Peak simultaneous item counts observed during one run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpaceStats {
    pub peak_items: usize,
    /// Peak per store, keyed by store name.
    pub per_kind: BTreeMap<&'static str, usize>,
}

impl SpaceStats {
    pub fn kind(&self, name: &str) -> usize {
        self.per_kind.get(name).copied().unwrap_or(0)
    }
}

/// Tracks the current size of named stores and their peaks.
#[derive(Clone, Debug, Default)]
pub struct SpaceMeter {
    current: Vec<(&'static str, usize)>,
    total: usize,
    stats: SpaceStats,
}

impl SpaceMeter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records that store `kind` now holds `items` items.
    pub fn set(&mut self, kind: &'static str, items: usize) {
        let idx = match self.current.iter().position(|(k, _)| *k == kind) {
            Some(i) => i,
            None => {
                self.current.push((kind, 0));
                self.current.len() - 1
            }
        };
        let old = std::mem::replace(&mut self.current[idx].1, items);
        self.total = self.total + items - old;
        self.stats.peak_items = self.stats.peak_items.max(self.total);
        let peak = self.stats.per_kind.entry(kind).or_default();
        *peak = (*peak).max(items);
    }

    pub fn current_total(&self) -> usize {
        self.total
    }

    pub fn finish(self) -> SpaceStats {
        self.stats
    }
}
