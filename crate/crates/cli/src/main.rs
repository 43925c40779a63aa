use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use trisample::al::{Al1Config, AlgoParams, HeavyVariant};
use trisample::ea::{ea1_default_instances, ea3_default_instances};
use trisample::eval::{run_trials, space_budget_check, AlgoSpec, SeedPolicy, SpaceBound, DEFAULT_SPACE_CONSTANT};
use trisample::gen::GraphKind;
use trisample::graph::{enumerate_triangles, triangles_per_edge};
use trisample::rng::substream;
use trisample::stream::{make_stream, validate_stream};
use trisample::{Graph, Model, Stream};

#[derive(Parser, Debug)]
#[command(name = "trisample", version, about = "Uniform triangle sampling from graph streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and print its size and triangle count.
    Gen {
        /// complete:N, gnp:N:P or planted:N:P:K
        kind: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a random stream of a graph in the given model.
    Stream {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run repeated trials of a sampler and report the output distribution.
    Run(RunArgs),
    /// Print exact triangle statistics and optionally validate a stream file.
    Check {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        stream: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Ea,
    Va,
    Al,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Ea => Model::Ea,
            ModelArg::Va => Model::Va,
            ModelArg::Al => Model::Al,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AlgoArg {
    Ea1,
    Ea3,
    Al1,
    #[value(name = "al1-wrs")]
    Al1Wrs,
    Al3,
}

/// `exact` or `promised:VALUE`.
#[derive(Clone, Copy, Debug, PartialEq)]
enum TriangleMode {
    Exact,
    Promised(f64),
}

impl FromStr for TriangleMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            None if s == "exact" => Ok(TriangleMode::Exact),
            Some(("promised", v)) => v
                .parse::<f64>()
                .ok()
                .filter(|v| *v >= 1.0 && v.is_finite())
                .map(TriangleMode::Promised)
                .ok_or_else(|| format!("promised count must be a number >= 1, got {v:?}")),
            _ => Err(format!("expected `exact` or `promised:VALUE`, got {s:?}")),
        }
    }
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum)]
    algo: AlgoArg,
    /// Stream model; defaults to ea for ea1/ea3 and al otherwise.
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// How the triangle count is supplied to the sampler.
    #[arg(long, default_value = "exact")]
    triangles: TriangleMode,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Replay this stream file in every trial.
    #[arg(long, conflicts_with = "frozen")]
    stream: Option<PathBuf>,
    /// Draw one stream order from the seed and reuse it in every trial.
    #[arg(long)]
    frozen: bool,
    /// One-pass adjacency-list sampler: fail whenever either half fails.
    #[arg(long)]
    strict: bool,
    /// Explicit instance count for ea1/ea3.
    #[arg(long)]
    instances: Option<usize>,
    /// Multiplier on the default instance count.
    #[arg(long, default_value_t = 4.0)]
    c_inst: f64,
    /// Multiplier on the default reservoir slot count.
    #[arg(long, default_value_t = 4.0)]
    c_f: f64,
    #[arg(long)]
    slots: Option<usize>,
    #[arg(long)]
    tau3: Option<f64>,
    #[arg(long)]
    tau1: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Refuse to run when a single run would hold more instances or slots.
    #[arg(long, default_value_t = 5_000_000)]
    max_instances: usize,
}

/// Bad input rather than a failed operation; exits with status 3.
#[derive(Debug)]
struct Invalid(String);

impl std::fmt::Display for Invalid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Invalid {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Invalid(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let validation = e.downcast_ref::<Invalid>().is_some()
                || matches!(
                    e.downcast_ref::<trisample::Error>(),
                    Some(err) if !matches!(err, trisample::Error::Io { .. })
                );
            ExitCode::from(if validation { 3 } else { 1 })
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Gen { kind, seed, out } => cmd_gen(&kind, seed, &out),
        Command::Stream { graph, model, seed, out } => cmd_stream(&graph, model.into(), seed, &out),
        Command::Run(args) => cmd_run(&args),
        Command::Check { graph, stream } => cmd_check(&graph, stream.as_deref()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn cmd_gen(kind: &str, seed: u64, out: &Path) -> Result<()> {
    let kind: GraphKind = kind.parse().map_err(|e: trisample::Error| invalid(e.to_string()))?;
    let g = kind.generate(&mut substream(seed, 0));
    let mut buf = Vec::new();
    g.write_to(&mut buf)?;
    fs::write(out, buf).with_context(|| format!("writing {}", out.display()))?;
    println!("kind={kind} n={} m={} triangles={}", g.n(), g.m(), enumerate_triangles(&g).len());
    Ok(())
}

fn cmd_stream(graph: &Path, model: Model, seed: u64, out: &Path) -> Result<()> {
    let g = Graph::load(graph)?;
    let s = make_stream(&g, model, &mut substream(seed, 0));
    write_file(out, &s.to_text())?;
    println!("model={model} items={}", s.len());
    Ok(())
}

fn cmd_check(graph: &Path, stream: Option<&Path>) -> Result<()> {
    let g = Graph::load(graph)?;
    let t = enumerate_triangles(&g).len();
    let lambda = triangles_per_edge(&g);
    println!("n={} m={} triangles={} lambda_sum={} max_lambda={}", g.n(), g.m(), t, lambda.total(),
        lambda.lambda.values().max().copied().unwrap_or(0));
    if let Some(path) = stream {
        let s = Stream::load(path)?;
        validate_stream(&s, &g).map_err(|v| invalid(format!("stream {}: {v}", path.display())))?;
        println!("stream={} model={} items={} valid", path.display(), s.model(), s.len());
    }
    Ok(())
}

fn cmd_run(args: &RunArgs) -> Result<()> {
    let default_model = match args.algo {
        AlgoArg::Ea1 | AlgoArg::Ea3 => ModelArg::Ea,
        _ => ModelArg::Al,
    };
    let mut model: Model = args.model.unwrap_or(default_model).into();
    let g = Graph::load(&args.graph)?;
    let exact = enumerate_triangles(&g).len();
    let promised = match args.triangles {
        TriangleMode::Exact => exact.max(1) as f64,
        TriangleMode::Promised(v) => v,
    };

    let policy = match (&args.stream, args.frozen) {
        (Some(path), _) => {
            let s = Stream::load(path)?;
            validate_stream(&s, &g).map_err(|v| invalid(format!("stream {}: {v}", path.display())))?;
            if args.model.is_some() && s.model() != model {
                return Err(invalid(format!("--model {model} disagrees with the {} stream file", s.model())));
            }
            model = s.model();
            SeedPolicy::Given(s)
        }
        (None, true) => SeedPolicy::Frozen,
        (None, false) => SeedPolicy::Fresh,
    };

    let is_ea = matches!(args.algo, AlgoArg::Ea1 | AlgoArg::Ea3);
    if is_ea == (model == Model::Al) {
        return Err(invalid(format!(
            "{} cannot consume {model} streams; use {}",
            algo_name(args.algo),
            if is_ea { "--model ea or --model va" } else { "--model al" }
        )));
    }

    let (n, m) = (g.n(), g.m());
    let spec = match args.algo {
        AlgoArg::Ea1 | AlgoArg::Ea3 => {
            let (formula, default) = if args.algo == AlgoArg::Ea1 {
                ("m^2/T", ea1_default_instances(args.c_inst, n, m, promised))
            } else {
                ("m^1.5/T", ea3_default_instances(args.c_inst, n, m, promised))
            };
            let instances = match args.instances {
                Some(0) => return Err(invalid("--instances must be positive")),
                Some(t) => {
                    println!("instances={t} (fixed)");
                    t
                }
                None => {
                    println!(
                        "instances={default} = ceil({} * {formula} * ln n) with m={m} T={promised} n={n}",
                        args.c_inst
                    );
                    default
                }
            };
            check_ceiling(instances, args.max_instances)?;
            if args.algo == AlgoArg::Ea1 {
                AlgoSpec::Ea1 { instances, model }
            } else {
                AlgoSpec::Ea3 { instances, model }
            }
        }
        AlgoArg::Al1 | AlgoArg::Al1Wrs | AlgoArg::Al3 => {
            let mut params = AlgoParams::new(args.epsilon, promised, n).map_err(|e| invalid(e.to_string()))?;
            params.slot_const = args.c_f;
            params.slots = args.slots;
            params.tau3 = args.tau3;
            params.tau1 = args.tau1;
            params.kappa = args.kappa;
            params.p = args.p;
            params.validate().map_err(|e| invalid(e.to_string()))?;
            if args.algo == AlgoArg::Al3 {
                let k = params.al3_slots(m);
                println!("slots={k} = ceil({} * m/T^(2/3) * ln n) with m={m} T={promised} n={n}", args.c_f);
                check_ceiling(k, args.max_instances)?;
                AlgoSpec::Al3 { params }
            } else {
                let k = params.al1_slots(m);
                println!("slots={k} = ceil({} * m/sqrt(T) * ln n) with m={m} T={promised} n={n}", args.c_f);
                check_ceiling(k, args.max_instances)?;
                let mut config = Al1Config::new(params);
                config.strict = args.strict;
                if args.algo == AlgoArg::Al1Wrs {
                    config.variant = HeavyVariant::Weighted;
                }
                AlgoSpec::Al1 { config }
            }
        }
    };
    if args.trials == 0 {
        return Err(invalid("--trials must be positive"));
    }

    let report = run_trials(&spec, &g, &policy, args.trials, args.seed)?;
    let text = report.to_text();
    match &args.out {
        Some(path) => write_file(path, &text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }

    let mut out = std::io::stdout().lock();
    writeln!(out, "{}: {} of {} trials succeeded", report.algo, report.successes, report.trials)?;
    if let Some(l1) = report.empirical_l1 {
        writeln!(out, "l1 distance to uniform over {} triangles: {l1:.4}", report.triangles)?;
    } else if exact > 0 {
        writeln!(out, "warning: no successes; the distribution is undefined for these parameters")?;
    }
    if let Some(bound) = SpaceBound::for_algo(&report.algo) {
        let check = space_budget_check(&report, bound, promised, DEFAULT_SPACE_CONSTANT);
        writeln!(
            out,
            "peak space {} items, budget {:.0} ({})",
            check.peak,
            check.limit,
            if check.pass { "within" } else { "exceeded" }
        )?;
    }
    Ok(())
}

fn algo_name(a: AlgoArg) -> &'static str {
    match a {
        AlgoArg::Ea1 => "ea1",
        AlgoArg::Ea3 => "ea3",
        AlgoArg::Al1 => "al1",
        AlgoArg::Al1Wrs => "al1-wrs",
        AlgoArg::Al3 => "al3",
    }
}

fn check_ceiling(count: usize, ceiling: usize) -> Result<()> {
    if count > ceiling {
        return Err(invalid(format!(
            "a run would hold {count} instances, above the ceiling of {ceiling} (raise --max-instances)"
        )));
    }
    Ok(())
}
