//! Acceptance suite: twelve end-to-end checks, one PASS/FAIL line each.
//! Exits non-zero if any check fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use trisample::al::{Al1Config, AlgoParams, Branch, HeavyHelper, HeavyVariant, LightHelper};
use trisample::charge::{charge_by_degree_order, charge_by_stream_order};
use trisample::ea::{ea1_default_instances, ea1_instances, ea3_default_instances, ea3_instances};
use trisample::eval::{
    cells_within_bounds, chernoff_tolerance, chi_square, estimate_t_by_sampling, l1_between, run_trials,
    space_budget_check, AlgoSpec, CountingAlgo, SeedPolicy, SpaceBound, ToleranceSpec, TrialReport,
    DEFAULT_SPACE_CONSTANT, WORKERS_ENV,
};
use trisample::gen::{complete, gnp, planted};
use trisample::graph::{enumerate_triangles, triangles_per_edge, Graph};
use trisample::reservoir::{Reservoir, ReservoirMode, WeightedReservoir};
use trisample::rng::substream;
use trisample::stream::{al_stream_in_order, make_stream, Model, StreamItem};

const SEED: u64 = 20_240_601;
const BETA: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

/// A recorded trial run, replayed by the determinism check.
struct Recorded {
    label: String,
    spec: AlgoSpec,
    graph: Graph,
    policy: SeedPolicy,
    trials: usize,
    seed: u64,
    report: TrialReport,
}

#[derive(Default)]
struct Suite {
    runs: Vec<Recorded>,
}

impl Suite {
    fn run(&mut self, label: &str, spec: AlgoSpec, g: &Graph, policy: SeedPolicy, trials: usize, seed: u64) -> TrialReport {
        let report = run_trials(&spec, g, &policy, trials, seed).expect("trial run");
        self.runs.push(Recorded {
            label: label.to_string(),
            spec,
            graph: g.clone(),
            policy,
            trials,
            seed,
            report: report.clone(),
        });
        report
    }
}

fn planted_instance() -> Graph {
    planted(8, 0.3, 4, &mut substream(SEED, 1000))
}

fn exact_t(g: &Graph) -> f64 {
    enumerate_triangles(g).len() as f64
}

fn ea_spec(algo: &str, g: &Graph) -> AlgoSpec {
    let (n, m, t) = (g.n(), g.m(), exact_t(g));
    match algo {
        "ea1" => AlgoSpec::Ea1 { instances: ea1_default_instances(4.0, n, m, t), model: Model::Ea },
        _ => AlgoSpec::Ea3 { instances: ea3_default_instances(4.0, n, m, t), model: Model::Ea },
    }
}

fn c1_oracles() -> Outcome {
    let mut rng = substream(SEED, 1);
    for i in 0..200 {
        let n = rng.random_range(3..=12u32);
        let p = rng.random_range(0.1..0.95);
        let g = gnp(n, p, &mut rng);
        let t = enumerate_triangles(&g).len() as u64;
        let mut brute = 0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    brute += u64::from(g.has_edge(a, b) && g.has_edge(b, c) && g.has_edge(a, c));
                }
            }
        }
        let mut order: Vec<u32> = (0..n).collect();
        order.shuffle(&mut rng);
        let ok = brute == t
            && triangles_per_edge(&g).total() == 3 * t
            && charge_by_stream_order(&g, &order).unwrap().total() == t
            && charge_by_degree_order(&g).total() == t
            && (t as f64) <= (g.m() as f64).powf(1.5);
        if !ok {
            return Outcome::new(false, format!("graph {i} (n={n}, m={}) broke an identity", g.m()));
        }
    }
    Outcome::new(true, "200 graphs: sum(lambda)=3T, both charge maps sum to T, T <= m^1.5")
}

fn c2_reservoirs() -> Outcome {
    let reps = 100_000;
    // Seven multinomial checks share the failure budget.
    let beta = BETA / 7.0;
    let mut rng = substream(SEED, 2);
    let mut lines = Vec::new();
    let mut all = true;
    let mut check = |name: &str, counts: &[u64], probs: &[f64]| {
        let ok = cells_within_bounds(counts, probs, beta).unwrap();
        let chi = chi_square(counts, probs).unwrap();
        lines.push(format!("{name}: chi2={:.2} p={:.3}", chi.statistic, chi.p_value));
        all &= ok;
    };

    let mut c = [0u64; 2];
    for _ in 0..reps {
        let mut r = Reservoir::with_replacement(1);
        r.offer(0usize, &mut rng);
        r.offer(1usize, &mut rng);
        c[r.slots()[0]] += 1;
    }
    check("with-replacement k=1 (a,b)", &c, &[0.5, 0.5]);

    let mut c = [0u64; 10];
    for _ in 0..reps {
        let mut r = Reservoir::with_replacement(3);
        for i in 0..10usize {
            r.offer(i, &mut rng);
        }
        c[r.slots()[1]] += 1;
    }
    check("with-replacement k=3 over 1..10", &c, &[0.1; 10]);

    let mut c = [0u64; 3];
    for _ in 0..reps {
        let mut r = Reservoir::new(ReservoirMode::WithoutReplacement, 2);
        for i in 0..3usize {
            r.offer(i, &mut rng);
        }
        let missing = 3 - r.slots().iter().sum::<usize>();
        c[missing] += 1;
    }
    check("without-replacement k=2 (a,b,c)", &c, &[1.0 / 3.0; 3]);

    let mut c = [0u64; 10];
    for _ in 0..reps {
        let mut r = Reservoir::new(ReservoirMode::WithoutReplacement, 3);
        for i in 0..10usize {
            r.offer(i, &mut rng);
        }
        for &i in r.slots() {
            c[i] += 1;
        }
    }
    check("without-replacement k=3 over 1..10", &c, &[0.1; 10]);

    for (name, weights, probs) in [
        ("weighted (a,1),(b,1)", vec![1.0, 1.0], vec![0.5, 0.5]),
        ("weighted (a,1),(b,3)", vec![1.0, 3.0], vec![0.25, 0.75]),
        ("weighted (a,2),(b,1),(c,1)", vec![2.0, 1.0, 1.0], vec![0.5, 0.25, 0.25]),
    ] {
        let mut c = vec![0u64; weights.len()];
        for _ in 0..reps {
            let mut w = WeightedReservoir::new();
            for (i, &x) in weights.iter().enumerate() {
                w.offer(i, x, &mut rng).unwrap();
            }
            c[*w.get().unwrap()] += 1;
        }
        check(name, &c, &probs);
    }
    Outcome::new(all, lines.join("; "))
}

/// Counts successes of `total` independent instances on fresh streams of `g`.
fn instance_successes(g: &Graph, three_pass: bool, total: usize, seed: u64) -> u64 {
    let batch = 10_000;
    (0..total.div_ceil(batch))
        .into_par_iter()
        .map(|b| {
            let s = make_stream(g, Model::Ea, &mut substream(seed, 2 * b as u64));
            let mut rng = substream(seed, 2 * b as u64 + 1);
            let size = batch.min(total - b * batch);
            let res = if three_pass {
                ea3_instances(&s, size, &mut rng).unwrap().0
            } else {
                ea1_instances(&s, size, &mut rng).unwrap().0
            };
            res.iter().filter(|r| r.is_some()).count() as u64
        })
        .sum()
}

fn rate_check(name: &str, three_pass: bool, expected: f64, seed: u64) -> Outcome {
    let n = 1_000_000;
    let hits = instance_successes(&complete(3), three_pass, n, seed);
    let mu = expected * n as f64;
    let delta = 0.02;
    let bound = chernoff_tolerance(ToleranceSpec::ChernoffRelative { mu, delta }).unwrap();
    let rate = hits as f64 / n as f64;
    Outcome::new(
        (hits as f64 - mu).abs() <= delta * mu,
        format!("{name}: {hits}/{n} = {rate:.5} vs {expected:.5} (+/-2%, miss probability <= {bound:.1e})"),
    )
}

fn c3_ea1_rate() -> Outcome {
    rate_check("ea1 on K3", false, 2.0 / 9.0, SEED + 3)
}

fn c4_ea3_rate() -> Outcome {
    rate_check("ea3 on K3", true, 1.0 / (3.0 * 6f64.sqrt()), SEED + 4)
}

fn c5_ea_uniformity(suite: &mut Suite) -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for (gname, g) in [("K5", complete(5)), ("planted", planted_instance())] {
        for algo in ["ea1", "ea3"] {
            let spec = ea_spec(algo, &g);
            let r = suite.run(&format!("c5 {algo} {gname}"), spec, &g, SeedPolicy::Fresh, 60_000, SEED + 5);
            let l1 = r.empirical_l1.unwrap_or(f64::INFINITY);
            let ok = r.successes >= 50_000 && l1 <= 0.1;
            pass &= ok;
            lines.push(format!("{algo}/{gname} T={} successes={} l1={l1:.4}", r.triangles, r.successes));
        }
    }
    Outcome::new(pass, lines.join("; "))
}

fn c6_degenerate_exactness() -> Outcome {
    let mut rng = substream(SEED, 6);
    for i in 0..100 {
        let n = rng.random_range(3..=12u32);
        let g = gnp(n, rng.random_range(0.2..0.95), &mut rng);
        let mut order: Vec<u32> = (0..n).collect();
        order.shuffle(&mut rng);
        let s = al_stream_in_order(&g, &order).unwrap();
        let charges = charge_by_stream_order(&g, &order).unwrap();
        let mut params = AlgoParams::new(0.5, exact_t(&g).max(1.0), g.n()).unwrap();
        params.p = Some(1.0);
        params.kappa = Some(1.0);
        let mut light = LightHelper::new(ReservoirMode::KeepAll, 0);
        let mut heavy = HeavyHelper::new(&params, HeavyVariant::Explicit);
        let mut open = false;
        for item in s.pass() {
            match *item {
                StreamItem::Vertex(u) => {
                    if open {
                        heavy.end_block(&mut rng);
                    }
                    open = true;
                    light.vertex(u);
                    heavy.vertex(u);
                }
                StreamItem::Edge(_, v) => {
                    light.edge(v, &mut rng);
                    heavy.edge(v, &mut rng);
                }
            }
        }
        heavy.end_block(&mut rng);
        let light = light.finish();
        let summary = heavy.finish();
        let light_ok = light.iter().filter(|r| r.flag).all(|r| r.t_prime == charges.t(r.edge()));
        let heavy_ok = summary.records().iter().all(|r| r.x == charges.t(r.edge()))
            && summary.records().len() == charges.per_edge.values().filter(|&&t| t > 0).count();
        let total_ok = summary.t_hat() == exact_t(&g);
        if !(light_ok && heavy_ok && total_ok) {
            return Outcome::new(false, format!("pair {i}: light={light_ok} heavy={heavy_ok} total={total_ok}"));
        }
    }
    Outcome::new(true, "100 (graph, order) pairs: t' = t, x = t, heavy estimate = T exactly")
}

fn c7_al3(suite: &mut Suite) -> Outcome {
    let g = complete(6);
    let eps = 0.5;
    let params = AlgoParams::new(eps, 20.0, 6).unwrap();
    let tau = params.tau3();
    let r = suite.run("c7 al3 K6", AlgoSpec::Al3 { params }, &g, SeedPolicy::Fresh, 80_000, SEED + 7);
    let l1 = r.empirical_l1.unwrap_or(f64::INFINITY);
    Outcome::new(
        r.successes >= 20_000 && l1 <= eps / 2.0 + 0.05,
        format!("tau={tau:.1} successes={} l1={l1:.4} (limit {:.2})", r.successes, eps / 2.0 + 0.05),
    )
}

fn al1_spec(g: &Graph, tweak: impl Fn(&mut AlgoParams), weighted: bool) -> AlgoSpec {
    let mut params = AlgoParams::new(0.5, exact_t(g), g.n()).unwrap();
    tweak(&mut params);
    let mut config = Al1Config::new(params);
    if weighted {
        config.variant = HeavyVariant::Weighted;
    }
    AlgoSpec::Al1 { config }
}

fn max_lambda(g: &Graph) -> f64 {
    triangles_per_edge(g).lambda.values().copied().max().unwrap_or(1) as f64
}

fn c8_al1(suite: &mut Suite) -> Outcome {
    let eps = 0.5;
    let mut pass = true;
    let mut lines = Vec::new();
    for (gname, g) in [("K6", complete(6)), ("planted", planted_instance())] {
        // (a) no edge reaches the promotion threshold; the acceptance
        // threshold is the largest possible charge so light sampling is exact.
        let top = max_lambda(&g);
        let spec = al1_spec(&g, |p| {
            p.kappa = Some(1e12);
            p.tau1 = Some(top);
        }, false);
        let r = suite.run(&format!("c8a al1 {gname}"), spec, &g, SeedPolicy::Fresh, 30_000, SEED + 8);
        let l1 = r.empirical_l1.unwrap_or(f64::INFINITY);
        let light_only = r.branches.keys().all(|&b| b == Branch::Light);
        let ok = l1 <= 0.1 && light_only && r.successes >= 10_000;
        pass &= ok;
        lines.push(format!("(a) {gname} all-light successes={} l1={l1:.4}", r.successes));

        // (b) every charged edge is promoted and counted exactly.
        let spec = al1_spec(&g, |p| {
            p.p = Some(1.0);
            p.kappa = Some(1.0);
        }, false);
        let r = suite.run(&format!("c8b al1 {gname}"), spec, &g, SeedPolicy::Fresh, 30_000, SEED + 9);
        let l1 = r.empirical_l1.unwrap_or(f64::INFINITY);
        let ok = l1 <= eps + 0.1 && r.branches.get(&Branch::Heavy).copied() == Some(30_000);
        pass &= ok;
        lines.push(format!("(b) {gname} heavy-dominant successes={} l1={l1:.4}", r.successes));
    }

    // (c) on K6 edges charged two or more triangles are promoted, which puts
    // 16 of the 20 triangles on the heavy side for every order.
    let g = complete(6);
    let spec = al1_spec(&g, |p| {
        p.p = Some(1.0);
        p.kappa = Some(2.0);
        p.tau1 = Some(4.0);
    }, false);
    let r = suite.run("c8c al1 K6 mixed", spec, &g, SeedPolicy::Fresh, 30_000, SEED + 10);
    let mixed = r.branches.get(&Branch::Mixed).copied().unwrap_or(0);
    let l1 = r.empirical_l1.unwrap_or(f64::INFINITY);
    pass &= mixed >= 1;
    lines.push(format!("(c) K6 mixed branch taken {mixed} times, l1={l1:.4}"));
    Outcome::new(pass, lines.join("; "))
}

fn c9_weighted_equivalence(suite: &mut Suite) -> Outcome {
    let g = complete(6);
    let tweak = |p: &mut AlgoParams| {
        p.p = Some(1.0);
        p.kappa = Some(2.0);
        p.tau1 = Some(4.0);
    };
    let trials = 60_000;
    let a = suite.run("c9 al1 explicit", al1_spec(&g, tweak, false), &g, SeedPolicy::Fresh, trials, SEED + 11);
    let b = suite.run("c9 al1 weighted", al1_spec(&g, tweak, true), &g, SeedPolicy::Fresh, trials, SEED + 11);
    let d = l1_between(&a.count_vector(), &b.count_vector()).unwrap_or(f64::INFINITY);
    let heavy_side = b.space_by_kind.get("heavy_store").copied().unwrap_or(0);
    let explicit_side = a.space_by_kind.get("heavy_store").copied().unwrap_or(0);
    Outcome::new(
        a.successes >= 50_000 && b.successes >= 50_000 && d <= 0.1 && heavy_side <= 3,
        format!(
            "successes {}/{}; l1 between variants={d:.4}; heavy store peak: weighted {heavy_side}, explicit {explicit_side}",
            a.successes, b.successes
        ),
    )
}

fn c10_counting() -> Outcome {
    let mut pass = true;
    let mut lines = Vec::new();
    for (name, g, algo) in [("ea1/K5", complete(5), CountingAlgo::Ea1), ("ea3/K6", complete(6), CountingAlgo::Ea3)] {
        let q = algo.per_triangle_probability(g.m());
        let est = estimate_t_by_sampling(algo, &g, q, 100_000, SEED + 12, BETA).unwrap();
        let t = exact_t(&g);
        let ok = (est.estimate - t).abs() <= 0.2 * t;
        pass &= ok;
        lines.push(format!(
            "{name}: estimate {:.3} vs T={t} (interval {:.3}..{:.3})",
            est.estimate, est.lower, est.upper
        ));
    }
    Outcome::new(pass, lines.join("; "))
}

fn c11_space(suite: &Suite) -> Outcome {
    let mut pass = true;
    let mut worst = String::new();
    let mut worst_ratio = 0.0;
    for run in &suite.runs {
        let r = &run.report;
        let bound = SpaceBound::for_algo(&r.algo).unwrap();
        let check = space_budget_check(r, bound, r.triangles as f64, DEFAULT_SPACE_CONSTANT);
        let passes_ok = r.passes_per_run == Some(run.spec.passes());
        if !check.pass || !passes_ok {
            pass = false;
            worst = format!("{} peak {} limit {:.0} passes {:?}", run.label, check.peak, check.limit, r.passes_per_run);
            break;
        }
        let ratio = check.peak as f64 / check.limit;
        if ratio > worst_ratio {
            worst_ratio = ratio;
            worst = format!("{} peak {} of limit {:.0}", run.label, check.peak, check.limit);
        }
    }
    Outcome::new(
        pass,
        format!("{} runs within {DEFAULT_SPACE_CONSTANT}*bound*ln n with exact pass counts; tightest: {worst}", suite.runs.len()),
    )
}

fn c12_determinism(suite: &Suite) -> Outcome {
    // Replay on a different worker count; reports must match byte for byte.
    std::env::set_var(WORKERS_ENV, "3");
    let mut mismatches = Vec::new();
    for run in &suite.runs {
        let again = run_trials(&run.spec, &run.graph, &run.policy, run.trials, run.seed).unwrap();
        if again.to_text() != run.report.to_text() {
            mismatches.push(run.label.clone());
        }
    }
    let g = complete(5);
    let frozen = |s| run_trials(&ea_spec("ea1", &g), &g, &SeedPolicy::Frozen, 2000, s).unwrap().to_text();
    let frozen_ok = frozen(SEED) == frozen(SEED);
    std::env::remove_var(WORKERS_ENV);
    Outcome::new(
        mismatches.is_empty() && frozen_ok,
        format!("{} recorded runs replayed, mismatches: {mismatches:?}, frozen policy stable: {frozen_ok}", suite.runs.len()),
    )
}

fn main() -> ExitCode {
    let mut suite = Suite::default();
    let mut results: BTreeMap<u32, (&str, Outcome, f64)> = BTreeMap::new();
    let mut time = |id: u32, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {id:>2} {:<4} {name} ({secs:.1}s): {}",
            if out.pass { "PASS" } else { "FAIL" },
            out.detail
        );
        results.insert(id, (name, out, secs));
    };
    time(1, "oracle identities", &mut c1_oracles);
    time(2, "reservoir uniformity", &mut c2_reservoirs);
    time(3, "ea1 per-instance rate", &mut c3_ea1_rate);
    time(4, "ea3 per-instance rate", &mut c4_ea3_rate);
    time(5, "edge-arrival uniformity", &mut || c5_ea_uniformity(&mut suite));
    time(6, "degenerate-parameter exactness", &mut c6_degenerate_exactness);
    time(7, "three-pass adjacency-list distribution", &mut || c7_al3(&mut suite));
    time(8, "one-pass adjacency-list distribution", &mut || c8_al1(&mut suite));
    time(9, "weighted-reservoir variant equivalence", &mut || c9_weighted_equivalence(&mut suite));
    time(10, "sampling to counting", &mut c10_counting);
    time(11, "space and pass discipline", &mut || c11_space(&suite));
    time(12, "determinism", &mut || c12_determinism(&suite));

    let failed: Vec<u32> = results.iter().filter(|(_, (_, o, _))| !o.pass).map(|(id, _)| *id).collect();
    println!("acceptance: {} of {} criteria passed", results.len() - failed.len(), results.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
