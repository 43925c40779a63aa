//! Triangle counting from a sampler's success rate.
//!
//! If one instance reports each triangle with known probability `q`, it
//! succeeds with probability `T·q`, so `successes/(N·q)` estimates `T`.

use rayon::prelude::*;

use super::stats::relative_delta_for;
use super::trials::with_pool;
use crate::ea::{ea1_instances, ea3_instances};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{algorithm_rng, stream_order_rng};
use crate::stream::{make_stream, Model};

/// Instances sharing one stream before a fresh order is drawn.
const BATCH: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountingAlgo {
    Ea1,
    Ea3,
}

impl CountingAlgo {
    /// Per-instance, per-triangle reporting probability on a graph with `m` edges.
    pub fn per_triangle_probability(self, m: usize) -> f64 {
        let m = m as f64;
        match self {
            CountingAlgo::Ea1 => 2.0 / (m * m),
            CountingAlgo::Ea3 => 1.0 / (2f64.sqrt() * m.powf(1.5)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountEstimate {
    pub estimate: f64,
    pub successes: u64,
    pub instances: u64,
    pub q: f64,
    /// Interval holding `T` except with probability `beta`.
    pub lower: f64,
    pub upper: f64,
    /// True when too few successes were seen for the relative bound to apply.
    pub widened: bool,
}

impl CountEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Builds the estimate and its interval from raw counts.
pub fn estimate_from_successes(successes: u64, instances: u64, q: f64, beta: f64) -> Result<CountEstimate> {
    if instances == 0 || !(q > 0.0 && q <= 1.0) || !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter("need instances > 0, q in (0, 1], beta in (0, 1)".into()));
    }
    let scale = instances as f64 * q;
    let estimate = successes as f64 / scale;
    if successes == 0 {
        // With mean μ the chance of no success is at most e^{-μ}.
        let upper = (1.0 / beta).ln() / scale;
        return Ok(CountEstimate { estimate, successes, instances, q, lower: 0.0, upper, widened: true });
    }
    let delta = relative_delta_for(successes as f64, beta);
    let widened = delta >= 1.0;
    let lower = if widened { 0.0 } else { estimate * (1.0 - delta) };
    Ok(CountEstimate {
        estimate,
        successes,
        instances,
        q,
        lower,
        upper: estimate * (1.0 + delta),
        widened,
    })
}

/// Runs `instances` independent instances of `algo` on random edge orders of
/// `g` and converts the success count into an estimate of `T`.
pub fn estimate_t_by_sampling(
    algo: CountingAlgo,
    g: &Graph,
    q: f64,
    instances: usize,
    seed: u64,
    beta: f64,
) -> Result<CountEstimate> {
    let batches = instances.div_ceil(BATCH);
    let per_batch = |b: usize| -> Result<u64> {
        let size = BATCH.min(instances - b * BATCH);
        let stream = make_stream(g, Model::Ea, &mut stream_order_rng(seed, b as u64));
        let mut rng = algorithm_rng(seed, b as u64);
        let results = match algo {
            CountingAlgo::Ea1 => ea1_instances(&stream, size, &mut rng)?.0,
            CountingAlgo::Ea3 => ea3_instances(&stream, size, &mut rng)?.0,
        };
        Ok(results.iter().filter(|r| r.is_some()).count() as u64)
    };
    let successes: u64 = with_pool(|| {
        (0..batches)
            .into_par_iter()
            .map(per_batch)
            .collect::<Result<Vec<u64>>>()
    })??
    .into_iter()
    .sum();
    estimate_from_successes(successes, instances as u64, q, beta)
}
