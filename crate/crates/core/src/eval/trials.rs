use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;

use super::stats::l1_to_uniform;
use crate::al::{al1_run, al3_run, Al1Config, AlgoParams, Branch, HeavyVariant};
use crate::ea::{ea1_run, ea3_run};
use crate::error::{Error, Result};
use crate::graph::{enumerate_triangles, Graph, Triangle};
use crate::rng::{algorithm_rng, stream_order_rng};
use crate::sample::SampleResult;
use crate::stream::{make_stream, Model, Stream};

/// Environment variable that fixes the worker-pool size.
pub const WORKERS_ENV: &str = "TRISAMPLE_WORKERS";

/// A sampler together with everything it needs except the stream.
#[derive(Clone, Debug, PartialEq)]
pub enum AlgoSpec {
    Ea1 { instances: usize, model: Model },
    Ea3 { instances: usize, model: Model },
    Al3 { params: AlgoParams },
    Al1 { config: Al1Config },
}

impl AlgoSpec {
    pub fn id(&self) -> &'static str {
        match self {
            AlgoSpec::Ea1 { .. } => "ea1",
            AlgoSpec::Ea3 { .. } => "ea3",
            AlgoSpec::Al3 { .. } => "al3",
            AlgoSpec::Al1 { config } if config.variant == HeavyVariant::Weighted => "al1-wrs",
            AlgoSpec::Al1 { .. } => "al1",
        }
    }

    /// Stream model the sampler consumes.
    pub fn model(&self) -> Model {
        match self {
            AlgoSpec::Ea1 { model, .. } | AlgoSpec::Ea3 { model, .. } => *model,
            AlgoSpec::Al3 { .. } | AlgoSpec::Al1 { .. } => Model::Al,
        }
    }

    /// Passes one run reads.
    pub fn passes(&self) -> usize {
        match self {
            AlgoSpec::Ea1 { .. } | AlgoSpec::Al1 { .. } => 1,
            AlgoSpec::Ea3 { .. } | AlgoSpec::Al3 { .. } => 3,
        }
    }

    /// Parameters as `key=value` pairs, in a fixed order.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let al = |p: &AlgoParams| {
            vec![
                ("epsilon", p.epsilon.to_string()),
                ("promised_triangles", p.triangles.to_string()),
                ("tau3", p.tau3().to_string()),
                ("tau1", p.tau1().to_string()),
                ("kappa", p.kappa().to_string()),
                ("p", p.p().to_string()),
            ]
        };
        match self {
            AlgoSpec::Ea1 { instances, .. } | AlgoSpec::Ea3 { instances, .. } => {
                vec![("instances", instances.to_string())]
            }
            AlgoSpec::Al3 { params } => al(params),
            AlgoSpec::Al1 { config } => {
                let mut v = al(&config.params);
                v.push(("strict", config.strict.to_string()));
                v
            }
        }
    }

    fn check_model(&self, model: Model) -> Result<()> {
        let ok = match self {
            AlgoSpec::Ea1 { .. } | AlgoSpec::Ea3 { .. } => model != Model::Al,
            _ => model == Model::Al,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::ModelMismatch { algo: self.id(), model: model.name() })
        }
    }

    /// One run over `stream`.
    pub fn run<R: rand::Rng + ?Sized>(&self, stream: &Stream, rng: &mut R) -> Result<SampleResult> {
        match self {
            AlgoSpec::Ea1 { instances, .. } => ea1_run(stream, *instances, rng),
            AlgoSpec::Ea3 { instances, .. } => ea3_run(stream, *instances, rng),
            AlgoSpec::Al3 { params } => al3_run(stream, params, rng),
            AlgoSpec::Al1 { config } => al1_run(stream, config, rng),
        }
    }
}

/// Where each trial's stream comes from.
#[derive(Clone, Debug)]
pub enum SeedPolicy {
    /// A new random order for every trial.
    Fresh,
    /// One random order, drawn from the master seed, reused by every trial.
    Frozen,
    /// A caller-supplied stream reused by every trial.
    Given(Stream),
}

impl SeedPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            SeedPolicy::Fresh => "fresh",
            SeedPolicy::Frozen => "frozen",
            SeedPolicy::Given(_) => "given",
        }
    }
}

/// Aggregate of `trials` independent runs.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialReport {
    pub algo: String,
    pub model: Model,
    pub params: Vec<(&'static str, String)>,
    pub n: usize,
    pub m: usize,
    pub triangles: usize,
    pub policy: String,
    pub trials: usize,
    pub seed: u64,
    pub successes: u64,
    /// Distance of the empirical output distribution from uniform, when
    /// there was at least one success.
    pub empirical_l1: Option<f64>,
    pub space_min: usize,
    pub space_mean: f64,
    pub space_max: usize,
    /// Largest per-store peak across trials.
    pub space_by_kind: BTreeMap<&'static str, usize>,
    /// Passes a single run opened; `None` if runs disagreed.
    pub passes_per_run: Option<usize>,
    pub branches: BTreeMap<Branch, u64>,
    /// Output counts for every triangle of the graph, by vertex label.
    pub counts: Vec<([u64; 3], u64)>,
}

impl TrialReport {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Counts in support order, for distance computations.
    pub fn count_vector(&self) -> Vec<u64> {
        self.counts.iter().map(|(_, c)| *c).collect()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(s, "{k}={v}").unwrap();
        kv("algo", &self.algo);
        kv("model", &self.model);
        for (k, v) in &self.params {
            kv(k, v);
        }
        kv("n", &self.n);
        kv("m", &self.m);
        kv("triangles", &self.triangles);
        kv("policy", &self.policy);
        kv("trials", &self.trials);
        kv("seed", &self.seed);
        kv("successes", &self.successes);
        kv("success_rate", &self.success_rate());
        match self.empirical_l1 {
            Some(l1) => kv("empirical_l1", &l1),
            None => kv("empirical_l1", &"none"),
        }
        kv("space_min", &self.space_min);
        kv("space_mean", &self.space_mean);
        kv("space_max", &self.space_max);
        for (k, v) in &self.space_by_kind {
            kv(&format!("space.{k}"), v);
        }
        match self.passes_per_run {
            Some(p) => kv("passes_per_run", &p),
            None => kv("passes_per_run", &"mixed"),
        }
        for (b, c) in &self.branches {
            kv(&format!("branch.{b}"), c);
        }
        for ([a, b, c], n) in &self.counts {
            writeln!(s, "count {a} {b} {c} {n}").unwrap();
        }
        s
    }
}

struct TrialOutcome {
    result: SampleResult,
    passes: usize,
}

/// Runs `trials` independent executions of `algo` on `g`.
///
/// Trial `i` draws its stream order from substream `2i` and its algorithm
/// randomness from substream `2i+1` of `seed`, so the report is the same
/// whatever the worker count. A reported triangle that is not in `g` is an
/// error.
pub fn run_trials(algo: &AlgoSpec, g: &Graph, policy: &SeedPolicy, trials: usize, seed: u64) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trial count must be >= 1".into()));
    }
    let model = match policy {
        SeedPolicy::Given(s) => s.model(),
        _ => algo.model(),
    };
    algo.check_model(model)?;
    let shared = match policy {
        SeedPolicy::Fresh => None,
        SeedPolicy::Frozen => Some(make_stream(g, model, &mut stream_order_rng(seed, 0))),
        SeedPolicy::Given(s) => Some(s.clone()),
    };

    let one = |i: usize| -> Result<TrialOutcome> {
        let i = i as u64;
        let mut rng = algorithm_rng(seed, i);
        // Each trial reads its own copy so the pass counter is per run.
        let s = match &shared {
            Some(s) => s.clone(),
            None => make_stream(g, model, &mut stream_order_rng(seed, i)),
        };
        let result = algo.run(&s, &mut rng)?;
        Ok(TrialOutcome { result, passes: s.passes_opened() })
    };
    let outcomes: Vec<TrialOutcome> = with_pool(|| (0..trials).into_par_iter().map(one).collect::<Result<_>>())??;

    let support = enumerate_triangles(g);
    let slot: HashMap<Triangle, usize> = support.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut counts = vec![0u64; support.len()];
    let mut successes = 0;
    let mut branches = BTreeMap::new();
    let mut space_by_kind: BTreeMap<&'static str, usize> = BTreeMap::new();
    let (mut space_min, mut space_max, mut space_sum) = (usize::MAX, 0, 0u128);
    let mut passes = Some(outcomes[0].passes);
    for o in &outcomes {
        let r = &o.result;
        if let Some(t) = r.outcome.triangle() {
            let i = *slot.get(&t).ok_or(Error::ForeignTriangle(t))?;
            counts[i] += 1;
            successes += 1;
        }
        if let Some(b) = r.branch {
            *branches.entry(b).or_insert(0) += 1;
        }
        let peak = r.space.peak_items;
        space_min = space_min.min(peak);
        space_max = space_max.max(peak);
        space_sum += peak as u128;
        for (k, v) in &r.space.per_kind {
            let e = space_by_kind.entry(*k).or_insert(0);
            *e = (*e).max(*v);
        }
        if passes != Some(o.passes) {
            passes = None;
        }
    }
    let empirical_l1 = if successes > 0 { Some(l1_to_uniform(&counts, support.len())?) } else { None };
    let mut labeled: Vec<([u64; 3], u64)> = support
        .iter()
        .zip(&counts)
        .map(|(t, &c)| {
            let mut l = t.vertices().map(|v| g.label(v));
            l.sort_unstable();
            (l, c)
        })
        .collect();
    labeled.sort_unstable();

    Ok(TrialReport {
        algo: algo.id().to_string(),
        model,
        params: algo.echo(),
        n: g.n(),
        m: g.m(),
        triangles: support.len(),
        policy: policy.name().to_string(),
        trials,
        seed,
        successes,
        empirical_l1,
        space_min,
        space_mean: space_sum as f64 / trials as f64,
        space_max,
        space_by_kind,
        passes_per_run: passes,
        branches,
        counts: labeled,
    })
}

/// Runs `f` on a pool sized by [`WORKERS_ENV`] when it is set.
pub fn with_pool<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    match std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(e.to_string()))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}
