use std::fmt;

use rand::Rng;

use super::heavy::{sample_heavy_triangle, HeavyHelper, HeavyVariant};
use super::light::{sample_light_triangle, LightHelper};
use super::{for_each_block, require_al, AlgoParams, BlockEvent};
use crate::error::Result;
use crate::reservoir::{bernoulli, ReservoirMode};
use crate::sample::{Outcome, SampleResult};
use crate::space::SpaceMeter;
use crate::stream::Stream;

/// Which case of the combiner produced the output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// Heavy estimate negligible: the light sample is reported.
    Light,
    /// Heavy estimate covers almost everything: the heavy sample is reported.
    Heavy,
    /// Coin weighted by the heavy estimate.
    Mixed,
}

impl Branch {
    pub fn name(self) -> &'static str {
        match self {
            Branch::Light => "light",
            Branch::Heavy => "heavy",
            Branch::Mixed => "mixed",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Branch taken for heavy estimate `t_hat` with promised count `triangles`.
pub fn select_branch(t_hat: f64, epsilon: f64, triangles: f64) -> Branch {
    if t_hat <= epsilon * triangles / 10.0 {
        Branch::Light
    } else if t_hat >= (1.0 - epsilon / 10.0) * triangles {
        Branch::Heavy
    } else {
        Branch::Mixed
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Al1Config {
    pub params: AlgoParams,
    pub variant: HeavyVariant,
    /// Fail whenever either sampler comes back empty, whatever the branch.
    pub strict: bool,
    pub light_mode: ReservoirMode,
}

impl Al1Config {
    pub fn new(params: AlgoParams) -> Self {
        Al1Config {
            params,
            variant: HeavyVariant::Explicit,
            strict: false,
            light_mode: ReservoirMode::WithReplacement,
        }
    }

    pub fn weighted(mut self) -> Self {
        self.variant = HeavyVariant::Weighted;
        self
    }
}

/// One-pass sampler over an adjacency-list stream.
pub fn al1_run<R: Rng + ?Sized>(stream: &Stream, config: &Al1Config, rng: &mut R) -> Result<SampleResult> {
    require_al(stream, "al1")?;
    let params = &config.params;
    params.validate()?;
    let k = params.al1_slots(stream.m());
    let mut light = LightHelper::new(config.light_mode, k);
    let mut heavy = HeavyHelper::new(params, config.variant);
    let mut meter = SpaceMeter::new();
    let weighted = config.variant == HeavyVariant::Weighted;

    for_each_block(stream, |ev| match ev {
        BlockEvent::Vertex(u) => {
            light.vertex(u);
            heavy.vertex(u);
        }
        BlockEvent::Edge(_, v) => {
            light.edge(v, rng);
            heavy.edge(v, rng);
            meter.set("light_slots", light.items());
            meter.set("heavy_sample", heavy.sampled_edges());
            meter.set("heavy_counters", 2 * heavy.live_counters());
        }
        BlockEvent::End(_) => {
            for e in heavy.end_block(rng) {
                if weighted {
                    light.clear_flag(e);
                }
            }
            meter.set("heavy_counters", 0);
            meter.set("heavy_store", heavy.store_items());
        }
    });

    let records = light.finish();
    let delta_light = sample_light_triangle(&records, |e| heavy.is_heavy(e), params.tau1(), rng);
    let summary = heavy.finish();
    let t_hat = summary.t_hat();
    let delta_heavy = sample_heavy_triangle(&summary, rng);

    let branch = select_branch(t_hat, params.epsilon, params.triangles);
    let chosen = match branch {
        Branch::Light => delta_light,
        Branch::Heavy => delta_heavy,
        Branch::Mixed => {
            if bernoulli(t_hat / params.triangles, rng) {
                delta_heavy
            } else {
                delta_light
            }
        }
    };
    let outcome = if config.strict && (delta_light.is_none() || delta_heavy.is_none()) {
        Outcome::Fail
    } else {
        Outcome::from(chosen)
    };
    let mut result = SampleResult::new(outcome, meter.finish(), k);
    result.branch = Some(branch);
    result.heavy_estimate = Some(t_hat);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{bowtie, complete, path};
    use crate::graph::Triangle;
    use crate::rng::substream;
    use crate::stream::{al_stream_in_order, make_al_stream, make_ea_stream};

    #[test]
    fn branch_thresholds() {
        assert_eq!(select_branch(0.0, 0.5, 20.0), Branch::Light);
        assert_eq!(select_branch(1.0, 0.5, 20.0), Branch::Light);
        assert_eq!(select_branch(1.01, 0.5, 20.0), Branch::Mixed);
        assert_eq!(select_branch(18.99, 0.5, 20.0), Branch::Mixed);
        assert_eq!(select_branch(19.0, 0.5, 20.0), Branch::Heavy);
        assert_eq!(select_branch(40.0, 0.5, 20.0), Branch::Heavy);
    }

    #[test]
    fn bowtie_forced_heavy() {
        let g = bowtie();
        let s = al_stream_in_order(&g, &[0, 1, 2, 3, 4]).unwrap();
        let mut p = AlgoParams::new(0.5, 2.0, 5).unwrap();
        p.p = Some(1.0);
        p.kappa = Some(1.0);
        let cfg = Al1Config::new(p);
        let mut rng = substream(1, 1);
        for _ in 0..20 {
            let r = al1_run(&s, &cfg, &mut rng).unwrap();
            assert_eq!(r.branch, Some(Branch::Heavy));
            assert_eq!(r.heavy_estimate, Some(2.0));
            let t = r.outcome.triangle().unwrap();
            assert!(t == Triangle::new(0, 1, 2) || t == Triangle::new(0, 3, 4));
        }
        assert_eq!(s.passes_opened(), 20);
    }

    #[test]
    fn no_heavy_edges_takes_light_branch() {
        let g = complete(6);
        let mut p = AlgoParams::new(0.5, 20.0, 6).unwrap();
        p.kappa = Some(1e9);
        p.tau1 = Some(4.0);
        let cfg = Al1Config::new(p);
        let mut rng = substream(2, 1);
        let mut successes = 0;
        for trial in 0..100 {
            let s = make_al_stream(&g, &mut substream(2, trial));
            let r = al1_run(&s, &cfg, &mut rng).unwrap();
            assert_eq!(r.branch, Some(Branch::Light));
            if let Some(t) = r.outcome.triangle() {
                assert!(g.is_triangle(t));
                successes += 1;
            }
        }
        assert!(successes > 50);
    }

    #[test]
    fn strict_mode_fails_without_heavy_sample() {
        let g = complete(6);
        let mut p = AlgoParams::new(0.5, 20.0, 6).unwrap();
        p.kappa = Some(1e9);
        p.tau1 = Some(4.0);
        let mut cfg = Al1Config::new(p);
        cfg.strict = true;
        let s = make_al_stream(&g, &mut substream(3, 0));
        let r = al1_run(&s, &cfg, &mut substream(3, 1)).unwrap();
        assert_eq!(r.outcome, Outcome::Fail);
    }

    #[test]
    fn triangle_free_and_model_checks() {
        let g = path(5);
        let p = AlgoParams::new(0.5, 1.0, 5).unwrap();
        let cfg = Al1Config::new(p);
        let s = make_al_stream(&g, &mut substream(4, 0));
        assert_eq!(al1_run(&s, &cfg, &mut substream(4, 1)).unwrap().outcome, Outcome::Fail);
        let ea = make_ea_stream(&g, &mut substream(4, 0));
        assert!(al1_run(&ea, &cfg, &mut substream(4, 1)).is_err());
    }

    #[test]
    fn weighted_variant_space_is_constant_on_heavy_side() {
        let g = complete(7);
        let mut p = AlgoParams::new(0.5, 35.0, 7).unwrap();
        p.p = Some(1.0);
        p.kappa = Some(1.0);
        let cfg = Al1Config::new(p).weighted();
        let s = make_al_stream(&g, &mut substream(5, 0));
        let r = al1_run(&s, &cfg, &mut substream(5, 1)).unwrap();
        assert_eq!(r.space.kind("heavy_store"), 3);
        assert_eq!(r.heavy_estimate, Some(35.0));
        assert!(r.outcome.is_success());
    }
}
