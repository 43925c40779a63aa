use std::fmt;

use crate::al::Branch;
use crate::graph::Triangle;
use crate::space::SpaceStats;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Sampled(Triangle),
    Fail,
}

impl Outcome {
    pub fn triangle(self) -> Option<Triangle> {
        match self {
            Outcome::Sampled(t) => Some(t),
            Outcome::Fail => None,
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, Outcome::Sampled(_))
    }
}

impl From<Option<Triangle>> for Outcome {
    fn from(t: Option<Triangle>) -> Self {
        t.map_or(Outcome::Fail, Outcome::Sampled)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Sampled(t) => write!(f, "{t}"),
            Outcome::Fail => f.write_str("FAIL"),
        }
    }
}

/// Result of one execution of a sampler.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleResult {
    pub outcome: Outcome,
    pub space: SpaceStats,
    /// Independent instances (or reservoir slots) the run used.
    pub instances_used: usize,
    /// Combiner branch taken by the one-pass adjacency-list sampler.
    pub branch: Option<Branch>,
    /// Heavy-triangle estimate of the one-pass adjacency-list sampler.
    pub heavy_estimate: Option<f64>,
}

impl SampleResult {
    pub(crate) fn new(outcome: Outcome, space: SpaceStats, instances_used: usize) -> Self {
        SampleResult {
            outcome,
            space,
            instances_used,
            branch: None,
            heavy_estimate: None,
        }
    }
}
