//! Reservoir samplers shared by every streaming algorithm.

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReservoirMode {
    /// `k` independent single-slot reservoirs; each slot is uniform over all offers.
    WithReplacement,
    /// A uniform `k`-subset of the offers (Algorithm R).
    WithoutReplacement,
    /// Retains every offer in arrival order. Test and oracle use only.
    KeepAll,
}

#[derive(Clone, Debug)]
pub struct Reservoir<T> {
    mode: ReservoirMode,
    capacity: usize,
    slots: Vec<T>,
    seen: u64,
}

impl<T: Clone> Reservoir<T> {
    pub fn new(mode: ReservoirMode, capacity: usize) -> Self {
        Reservoir {
            mode,
            capacity,
            slots: Vec::with_capacity(if mode == ReservoirMode::KeepAll { 0 } else { capacity }),
            seen: 0,
        }
    }

    pub fn with_replacement(capacity: usize) -> Self {
        Self::new(ReservoirMode::WithReplacement, capacity)
    }

    /// Offers one item; returns how many slots now hold it.
    pub fn offer<R: Rng + ?Sized>(&mut self, item: T, rng: &mut R) -> usize {
        self.seen += 1;
        match self.mode {
            ReservoirMode::KeepAll => {
                self.slots.push(item);
                1
            }
            ReservoirMode::WithReplacement if self.seen == 1 => {
                self.slots = vec![item; self.capacity];
                self.capacity
            }
            ReservoirMode::WithReplacement => {
                let seen = self.seen;
                let mut replaced = 0;
                for slot in &mut self.slots {
                    if rng.random_range(0..seen) == 0 {
                        *slot = item.clone();
                        replaced += 1;
                    }
                }
                replaced
            }
            ReservoirMode::WithoutReplacement => {
                if self.slots.len() < self.capacity {
                    self.slots.push(item);
                    return 1;
                }
                let j = rng.random_range(0..self.seen);
                match self.slots.get_mut(j as usize) {
                    Some(slot) => {
                        *slot = item;
                        1
                    }
                    None => 0,
                }
            }
        }
    }
}

impl<T> Reservoir<T> {
    pub fn mode(&self) -> ReservoirMode {
        self.mode
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn offers_seen(&self) -> u64 {
        self.seen
    }

    pub fn slots(&self) -> &[T] {
        &self.slots
    }

    pub fn slots_mut(&mut self) -> &mut [T] {
        &mut self.slots
    }

    pub fn into_slots(self) -> Vec<T> {
        self.slots
    }
}

/// Single-slot reservoir that keeps an item with probability proportional to its weight.
#[derive(Clone, Debug)]
pub struct WeightedReservoir<T> {
    slot: Option<(T, f64)>,
    total_weight: f64,
}

impl<T> Default for WeightedReservoir<T> {
    fn default() -> Self {
        WeightedReservoir { slot: None, total_weight: 0.0 }
    }
}

impl<T> WeightedReservoir<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn offer<R: Rng + ?Sized>(&mut self, item: T, weight: f64, rng: &mut R) -> Result<()> {
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "reservoir weight must be positive and finite, got {weight}"
            )));
        }
        self.total_weight += weight;
        if bernoulli(weight / self.total_weight, rng) {
            self.slot = Some((item, weight));
        }
        Ok(())
    }

    pub fn get(&self) -> Option<&T> {
        self.slot.as_ref().map(|(item, _)| item)
    }

    pub fn slot(&self) -> Option<&(T, f64)> {
        self.slot.as_ref()
    }

    pub fn into_item(self) -> Option<T> {
        self.slot.map(|(item, _)| item)
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }
}

/// Coin with success probability `p` clamped to `[0, 1]`; NaN counts as 0.
pub fn bernoulli<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    if p >= 1.0 {
        true
    } else if p > 0.0 {
        rng.random::<f64>() < p
    } else {
        false
    }
}
