use std::collections::HashMap;

use rand::Rng;

use super::tracker::EdgeTracker;
use super::{for_each_block, require_al, AlgoParams, BlockEvent};
use crate::error::Result;
use crate::graph::{Edge, Triangle};
use crate::reservoir::{bernoulli, Reservoir};
use crate::sample::{Outcome, SampleResult};
use crate::space::SpaceMeter;
use crate::stream::Stream;

/// Three-pass sampler over an adjacency-list stream.
///
/// Conditional on success the output is uniform over triangles with at least
/// one edge of λ below `params.tau3()`.
pub fn al3_run<R: Rng + ?Sized>(stream: &Stream, params: &AlgoParams, rng: &mut R) -> Result<SampleResult> {
    require_al(stream, "al3")?;
    params.validate()?;
    let k = params.al3_slots(stream.m());
    let mut meter = SpaceMeter::new();

    // Pass 1: k uniform draws over the 2m edge arrivals.
    let mut f = Reservoir::with_replacement(k);
    for e in stream.pass().edges() {
        f.offer(e, rng);
    }
    let slots: Vec<Edge> = f.into_slots();
    meter.set("sampled_edges", slots.len());
    if slots.is_empty() {
        return Ok(SampleResult::new(Outcome::Fail, meter.finish(), k));
    }

    // Pass 2: λ for each sampled edge and a uniform incident triangle per slot.
    let mut slot_index: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (i, &e) in slots.iter().enumerate() {
        slot_index.entry(e).or_default().push(i);
    }
    let mut tracker = EdgeTracker::new(slots.iter().copied());
    meter.set("lambda_counters", tracker.len());
    let mut picked: Vec<Option<Triangle>> = vec![None; slots.len()];
    let mut held = 0;
    for_each_block(stream, |ev| match ev {
        BlockEvent::Vertex(u) => tracker.vertex(u),
        BlockEvent::Edge(_, v) => {
            tracker.edge(v, |e, lambda, w| {
                for &i in &slot_index[&e] {
                    if rng.random_range(0..lambda) == 0 {
                        held += usize::from(picked[i].is_none());
                        picked[i] = Some(Triangle::from_edge(e, w));
                    }
                }
            });
            meter.set("sampled_triangles", held);
        }
        BlockEvent::End(_) => {}
    });
    let lambda_first: Vec<u64> = slots.iter().map(|&e| tracker.lambda(e).unwrap_or(0)).collect();
    drop(tracker);

    // Pass 3: λ for the other two edges of every sampled triangle.
    let others = slots.iter().zip(&picked).filter_map(|(&e, t)| {
        t.map(|t| t.edges().into_iter().filter(move |&f| f != e))
    });
    let mut tracker = EdgeTracker::new(others.flatten());
    meter.set("pass3_counters", tracker.len());
    for_each_block(stream, |ev| match ev {
        BlockEvent::Vertex(u) => tracker.vertex(u),
        BlockEvent::Edge(_, v) => tracker.edge(v, |_, _, _| {}),
        BlockEvent::End(_) => {}
    });

    let tau = params.tau3();
    let light = |lambda: u64| (lambda as f64) < tau;
    let mut outcome = Outcome::Fail;
    for (i, &e) in slots.iter().enumerate() {
        let Some(t) = picked[i] else { continue };
        let lambda = lambda_first[i];
        if !light(lambda) {
            continue;
        }
        let light_edges = t
            .edges()
            .into_iter()
            .filter(|&f| {
                let l = if f == e { lambda } else { tracker.lambda(f).unwrap_or(0) };
                light(l)
            })
            .count();
        if bernoulli(lambda as f64 / (light_edges as f64 * tau), rng) {
            outcome = Outcome::Sampled(t);
            break;
        }
    }
    Ok(SampleResult::new(outcome, meter.finish(), k))
}
