//! Triangle samplers for edge-arrival (and vertex-arrival) streams.
//!
//! Both samplers are built from many cheap independent instances that share
//! the stream: every instance advances on every arriving edge, so a run
//! reads each pass exactly once no matter how many instances it holds.
//!
//! * [`ea1_run`]: one pass. Each instance keeps two edges in independent
//!   single-slot reservoirs and records a triangle when the closing edge of
//!   the stored wedge arrives. Every triangle is reported by one instance
//!   with probability `2/m²`.
//! * [`ea3_run`]: three passes. Each instance samples an edge `{u,v}` with
//!   `u ≺ v` in `(degree, id)` order, picks a third vertex `w` through a
//!   low-degree or high-degree route, and accepts `{u,v,w}` only when
//!   `u ≺ v ≺ w`. Every triangle is reported with probability
//!   `1/(√2·m^{3/2})`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Edge, Triangle};
use crate::reservoir::bernoulli;
use crate::sample::{Outcome, SampleResult};
use crate::space::{SpaceMeter, SpaceStats};
use crate::stream::{Model, Stream};

fn require_edge_model(stream: &Stream, algo: &'static str) -> Result<()> {
    match stream.model() {
        Model::Ea | Model::Va => Ok(()),
        Model::Al => Err(Error::ModelMismatch { algo, model: "AL" }),
    }
}

/// `ceil(c · bound · ln(max(n, 3)))`, at least 1.
pub fn instance_count(c: f64, bound: f64, n: usize) -> usize {
    let ln_n = (n.max(3) as f64).ln();
    (c * bound * ln_n).ceil().max(1.0) as usize
}

/// Default one-pass instance count `c · m²/T · ln n`.
pub fn ea1_default_instances(c: f64, n: usize, m: usize, triangles: f64) -> usize {
    let m = m as f64;
    instance_count(c, m * m / triangles.max(1.0), n)
}

/// Default three-pass instance count `c · m^{3/2}/T · ln n`.
pub fn ea3_default_instances(c: f64, n: usize, m: usize, triangles: f64) -> usize {
    instance_count(c, (m as f64).powf(1.5) / triangles.max(1.0), n)
}

#[derive(Clone, Copy, Debug, Default)]
struct WedgeSampler {
    first: Option<Edge>,
    second: Option<Edge>,
    recorded: Option<Triangle>,
}

impl WedgeSampler {
    /// Processes the `seen`-th arriving edge.
    fn offer<R: Rng + ?Sized>(&mut self, e: Edge, seen: u64, rng: &mut R) {
        let mut replaced = false;
        for slot in [&mut self.first, &mut self.second] {
            if rng.random_range(0..seen) == 0 {
                *slot = Some(e);
                replaced = true;
            }
        }
        if replaced {
            self.recorded = None;
            return;
        }
        let (Some(a), Some(b)) = (self.first, self.second) else {
            return;
        };
        if let Some(apex) = a.shared_vertex(b) {
            let (x, y) = (a.other(apex).unwrap(), b.other(apex).unwrap());
            if e == Edge::new(x, y) {
                self.recorded = Some(Triangle::new(apex, x, y));
            }
        }
    }
}

/// Runs `t` one-pass instances side by side and returns each instance's result.
pub fn ea1_instances<R: Rng + ?Sized>(
    stream: &Stream,
    t: usize,
    rng: &mut R,
) -> Result<(Vec<Option<Triangle>>, SpaceStats)> {
    require_edge_model(stream, "ea1")?;
    let mut instances = vec![WedgeSampler::default(); t];
    let mut meter = SpaceMeter::new();
    let mut recorded = 0usize;
    for (i, e) in stream.pass().edges().enumerate() {
        let seen = i as u64 + 1;
        for inst in &mut instances {
            let before = inst.recorded.is_some();
            inst.offer(e, seen, rng);
            match (before, inst.recorded.is_some()) {
                (false, true) => recorded += 1,
                (true, false) => recorded -= 1,
                _ => {}
            }
        }
        meter.set("reservoir_edges", 2 * t);
        meter.set("recorded_triangles", recorded);
    }
    Ok((instances.into_iter().map(|i| i.recorded).collect(), meter.finish()))
}

/// A single one-pass instance.
pub fn ea1_instance<R: Rng + ?Sized>(stream: &Stream, rng: &mut R) -> Result<SampleResult> {
    ea1_run(stream, 1, rng)
}

/// One pass with `t` interleaved instances; reports the first instance that succeeded.
pub fn ea1_run<R: Rng + ?Sized>(stream: &Stream, t: usize, rng: &mut R) -> Result<SampleResult> {
    if t == 0 {
        return Err(Error::InvalidParameter("instance count must be >= 1".into()));
    }
    let (results, space) = ea1_instances(stream, t, rng)?;
    let outcome = results.into_iter().flatten().next().into();
    Ok(SampleResult::new(outcome, space, t))
}

/// Two independent uniform edges drawn in pass 1.
#[derive(Clone, Copy, Debug, Default)]
struct EdgePair {
    first: Option<Edge>,
    second: Option<Edge>,
}

/// Pass-2 state: degrees of `u, v, x, y` and a uniform neighbour of `u` and of `v`.
#[derive(Clone, Copy, Debug)]
struct DegreeProbe {
    u: u32,
    v: u32,
    x: u32,
    y: u32,
    deg: [u64; 4],
    nbr: [Option<u32>; 2],
}

impl DegreeProbe {
    fn new(first: Edge, second: Edge) -> Self {
        DegreeProbe {
            u: first.lo(),
            v: first.hi(),
            x: second.lo(),
            y: second.hi(),
            deg: [0; 4],
            nbr: [None; 2],
        }
    }

    fn observe<R: Rng + ?Sized>(&mut self, e: Edge, rng: &mut R) {
        let verts = [self.u, self.v, self.x, self.y];
        for (i, &z) in verts.iter().enumerate() {
            let Some(other) = e.other(z) else { continue };
            self.deg[i] += 1;
            if i < 2 && rng.random_range(0..self.deg[i]) == 0 {
                self.nbr[i] = Some(other);
            }
        }
    }
}

/// Candidate `{u, v, w}` carried into pass 3 with `u ≺ v` already established.
#[derive(Clone, Copy, Debug)]
struct Candidate {
    u: u32,
    v: u32,
    w: u32,
    rank_v: (u64, u32),
    deg_w: u64,
    uw: bool,
    vw: bool,
}

/// `deg² ≤ 2m` in exact integer arithmetic.
fn is_low_degree(deg: u64, m: u64) -> bool {
    deg * deg <= 2 * m
}

fn process<R: Rng + ?Sized>(probe: &DegreeProbe, m: u64, rng: &mut R) -> Option<Candidate> {
    let sqrt_2m = ((2 * m) as f64).sqrt();
    let (mut a, mut b) = ((probe.deg[0], probe.u, probe.nbr[0]), (probe.deg[1], probe.v, probe.nbr[1]));
    if (b.0, b.1) < (a.0, a.1) {
        std::mem::swap(&mut a, &mut b);
    }
    let (deg_u, u, nbr_u) = a;
    let (deg_v, v, _) = b;
    let w = if is_low_degree(deg_u, m) {
        let w = nbr_u?;
        if !bernoulli(deg_u as f64 / sqrt_2m, rng) {
            return None;
        }
        w
    } else {
        let (w, deg_w) = if rng.random_bool(0.5) {
            (probe.x, probe.deg[2])
        } else {
            (probe.y, probe.deg[3])
        };
        if is_low_degree(deg_w, m) || !bernoulli(sqrt_2m / deg_w as f64, rng) {
            return None;
        }
        w
    };
    Some(Candidate {
        u,
        v,
        w,
        rank_v: (deg_v, v),
        deg_w: 0,
        uw: false,
        vw: false,
    })
}

/// Runs `t` three-pass instances side by side and returns each instance's result.
pub fn ea3_instances<R: Rng + ?Sized>(
    stream: &Stream,
    t: usize,
    rng: &mut R,
) -> Result<(Vec<Option<Triangle>>, SpaceStats)> {
    require_edge_model(stream, "ea3")?;
    let mut meter = SpaceMeter::new();

    // Pass 1: two uniform edges per instance, with replacement.
    let mut pairs = vec![EdgePair::default(); t];
    let mut m = 0u64;
    for e in stream.pass().edges() {
        m += 1;
        for p in &mut pairs {
            if rng.random_range(0..m) == 0 {
                p.first = Some(e);
            }
            if rng.random_range(0..m) == 0 {
                p.second = Some(e);
            }
        }
        meter.set("sampled_edges", 2 * t);
    }

    // Pass 2: degrees and random neighbours.
    let mut probes: Vec<Option<DegreeProbe>> = pairs
        .iter()
        .map(|p| Some(DegreeProbe::new(p.first?, p.second?)))
        .collect();
    let live = probes.iter().flatten().count();
    meter.set("degree_counters", 4 * live);
    meter.set("neighbor_slots", 2 * live);
    for e in stream.pass().edges() {
        for probe in probes.iter_mut().flatten() {
            probe.observe(e, rng);
        }
    }

    let mut candidates: Vec<Option<Candidate>> = probes
        .iter()
        .map(|p| p.as_ref().and_then(|p| process(p, m, rng)))
        .collect();
    drop(probes);
    meter.set("neighbor_slots", 0);
    let live = candidates.iter().flatten().count();
    meter.set("candidates", 2 * live);

    // Pass 3: degree of w and presence of {u,w}, {v,w}.
    for e in stream.pass().edges() {
        for c in candidates.iter_mut().flatten() {
            if e.contains(c.w) {
                c.deg_w += 1;
                c.uw |= e.contains(c.u);
                c.vw |= e.contains(c.v);
            }
        }
    }

    let results = candidates
        .into_iter()
        .map(|c| {
            let c = c?;
            let ordered = c.w != c.u && c.w != c.v && c.rank_v < (c.deg_w, c.w);
            (c.uw && c.vw && ordered).then(|| Triangle::new(c.u, c.v, c.w))
        })
        .collect();
    Ok((results, meter.finish()))
}

/// A single three-pass instance.
pub fn ea3_instance<R: Rng + ?Sized>(stream: &Stream, rng: &mut R) -> Result<SampleResult> {
    ea3_run(stream, 1, rng)
}

/// Three passes with `t` interleaved instances; reports the first instance that succeeded.
pub fn ea3_run<R: Rng + ?Sized>(stream: &Stream, t: usize, rng: &mut R) -> Result<SampleResult> {
    if t == 0 {
        return Err(Error::InvalidParameter("instance count must be >= 1".into()));
    }
    let (results, space) = ea3_instances(stream, t, rng)?;
    let outcome: Outcome = results.into_iter().flatten().next().into();
    Ok(SampleResult::new(outcome, space, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{complete, path};
    use crate::rng::substream;
    use crate::stream::{ea_stream_in_order, make_al_stream, make_ea_stream};

    #[test]
    fn triangle_free_and_single_edge_never_sample() {
        let mut rng = substream(4, 4);
        for g in [path(5), path(2)] {
            let s = make_ea_stream(&g, &mut rng);
            let (r, space) = ea1_instances(&s, 200, &mut rng).unwrap();
            assert!(r.iter().all(Option::is_none));
            assert!(space.peak_items <= 3 * 200);
            assert_eq!(ea3_run(&s, 50, &mut rng).unwrap().outcome, Outcome::Fail);
        }
    }

    #[test]
    fn rejects_al_streams() {
        let g = complete(3);
        let s = make_al_stream(&g, &mut substream(0, 0));
        assert!(matches!(ea1_run(&s, 1, &mut substream(0, 1)), Err(Error::ModelMismatch { .. })));
        assert!(matches!(ea3_run(&s, 1, &mut substream(0, 1)), Err(Error::ModelMismatch { .. })));
        assert!(ea1_run(&make_ea_stream(&g, &mut substream(0, 0)), 0, &mut substream(0, 1)).is_err());
    }

    #[test]
    fn pass_discipline() {
        let g = complete(4);
        let s = ea_stream_in_order(&g, g.edges());
        ea1_run(&s, 30, &mut substream(1, 1)).unwrap();
        assert_eq!(s.passes_opened(), 1);
        let s = ea_stream_in_order(&g, g.edges());
        ea3_run(&s, 30, &mut substream(1, 1)).unwrap();
        assert_eq!(s.passes_opened(), 3);
    }

    #[test]
    fn per_instance_space_is_constant() {
        let g = complete(6);
        let s = ea_stream_in_order(&g, g.edges());
        let (_, space) = ea1_instances(&s, 1, &mut substream(2, 2)).unwrap();
        assert!(space.peak_items <= 3);
        let (_, space) = ea3_instances(&s, 1, &mut substream(2, 2)).unwrap();
        assert!(space.peak_items <= 10, "{space:?}");
    }

    #[test]
    fn more_instances_than_edges_is_fine() {
        let g = complete(3);
        let s = ea_stream_in_order(&g, g.edges());
        let r = ea1_run(&s, 500, &mut substream(3, 3)).unwrap();
        assert_eq!(r.outcome, Outcome::Sampled(Triangle::new(0, 1, 2)));
        assert!(r.space.peak_items <= 3 * 500);
    }

    #[test]
    fn default_instance_counts() {
        // K6: m = 15, T = 20, ln 6 = 1.79.
        assert_eq!(ea3_default_instances(4.0, 6, 15, 20.0), (4.0 * 15f64.powf(1.5) / 20.0 * 6f64.ln()).ceil() as usize);
        assert_eq!(ea1_default_instances(1.0, 3, 3, 1.0), (9.0 * 3f64.ln()).ceil() as usize);
        assert_eq!(instance_count(0.0, 5.0, 10), 1);
    }
}
