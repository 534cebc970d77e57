use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use jordan_cover::diffusion::{draw_instance, simulate_sir, sample_snapshot, DiffusionParams, InstanceSpec};
use jordan_cover::graph::{generate_er, load_edge_list, write_edge_list, LoadedGraph};
use jordan_cover::harness::{
    compute_theory_bounds, preset, read_snapshot, run_experiment, write_snapshot, ExperimentConfig,
    ExperimentOutput, GraphSpec, SnapshotFile, TPolicy, PRESETS,
};
use jordan_cover::localization::{localize, Algorithm, KMeansOptions, LocalizeOptions};
use jordan_cover::metrics::evaluate;
use jordan_cover::seed::rng_from;
use jordan_cover::NodeSet;

#[derive(Parser)]
#[command(name = "jcover", version, about = "Locate multiple epidemic sources from a partial snapshot")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an Erdos-Renyi graph as an edge list.
    GenGraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate one outbreak and write its snapshot.
    Simulate(SimulateArgs),
    /// Estimate sources from a snapshot file.
    Localize(LocalizeArgs),
    /// Run an experiment from a config file.
    Bench {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Print the asymptotic bounds for an ER setup.
    Theory {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        y: u32,
        /// Graph and snapshot files; the snapshot's sources give D.
        #[arg(long, requires = "snapshot")]
        graph: Option<PathBuf>,
        #[arg(long, requires = "graph")]
        snapshot: Option<PathBuf>,
    },
    /// Run a named experiment preset.
    Fig {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(PRESETS))]
        name: String,
        /// Edge list for presets that need one.
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Print the effective config and exit.
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct SimulateArgs {
    /// Edge list; with no file an ER graph is generated from --n and --p.
    #[arg(long, conflicts_with_all = ["n", "p"])]
    graph: Option<PathBuf>,
    #[arg(long, requires = "p")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    p: Option<f64>,
    #[arg(long, default_value_t = 0.8)]
    q: f64,
    #[arg(long, default_value_t = 0.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long)]
    t: u32,
    /// Accepted outbreak size, `lo,hi`.
    #[arg(long, value_parser = parse_range, num_args = 1, value_name = "LO,HI")]
    size: Option<(usize, usize)>,
    #[arg(long, default_value_t = 10_000)]
    max_attempts: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LocalizeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    snapshot: PathBuf,
    #[arg(long, default_value = "AJC")]
    algorithm: Algorithm,
    #[arg(long)]
    m: usize,
    #[arg(long = "threshold", short = 'y', default_value_t = 1)]
    threshold: u32,
    #[arg(long, default_value_t = 100)]
    restarts: usize,
    #[arg(long, default_value_t = 32)]
    max_iters: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    restarts: Option<usize>,
    /// Comma-separated thresholds.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<u32>>,
    /// Comma-separated report probabilities.
    #[arg(long, value_delimiter = ',')]
    thetas: Option<Vec<f64>>,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',')]
    algorithms: Option<Vec<Algorithm>>,
    /// Fixed observation horizon instead of the size scan.
    #[arg(long)]
    t: Option<u32>,
    /// Write `-` for wall times.
    #[arg(long)]
    omit_wall_time: bool,
    /// Per-trial CSV; the summary and effective config go next to it.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(v) = self.trials {
            config.trials = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.restarts {
            config.restarts = v;
        }
        if let Some(v) = &self.thresholds {
            config.thresholds = v.clone();
        }
        if let Some(v) = &self.thetas {
            config.thetas = v.clone();
        }
        if let Some(v) = &self.algorithms {
            config.algorithms = v.clone();
        }
        if let Some(t) = self.t {
            config.t_policy = TPolicy::Fixed { t };
        }
        config.omit_wall_time |= self.omit_wall_time;
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected lo,hi")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(lo)?, parse(hi)?))
}

fn load_graph(path: &Path) -> Result<LoadedGraph> {
    let file = File::open(path).with_context(|| format!("cannot open graph {}", path.display()))?;
    load_edge_list(BufReader::new(file)).with_context(|| format!("cannot parse graph {}", path.display()))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_stem().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

fn run(config: ExperimentConfig, out: &Option<PathBuf>) -> Result<()> {
    config.validate()?;
    let result = run_experiment(&config)?;
    report(&result);
    match out {
        Some(path) => {
            result.write_csv(output(out)?)?;
            result.write_summary(File::create(sidecar(path, ".summary.csv"))?)?;
            std::fs::write(sidecar(path, ".config.toml"), config.to_toml())?;
        }
        None => result.write_csv(output(out)?)?,
    }
    if !result.violations.is_empty() {
        bail!("{} invariant violations", result.violations.len());
    }
    Ok(())
}

fn report(result: &ExperimentOutput) {
    eprintln!(
        "graph: {} nodes, {} edges; t = {}; {} records, {} skipped trials, {} failed runs",
        result.node_count,
        result.edge_count,
        result.t,
        result.records.len(),
        result.skipped_trials,
        result.failed_runs
    );
    for v in result.violations.iter().take(20) {
        eprintln!("violation: {v}");
    }
    for c in &result.summary {
        eprintln!(
            "{:>3} Y={} theta={}: det {:.3} +- {:.3}, err {:.3}, median {:.1} ms",
            c.algorithm.name(),
            c.threshold,
            c.theta,
            c.detection_mean,
            c.detection_stderr,
            c.error_mean,
            c.wall_ms_median
        );
    }
}

fn to_original(loaded: &LoadedGraph, set: &NodeSet) -> NodeSet {
    set.iter().map(|v| loaded.original_ids[v] as usize).collect()
}

fn to_compact(loaded: &LoadedGraph, set: &NodeSet, what: &str) -> Result<NodeSet> {
    set.iter()
        .map(|v| {
            loaded
                .compact_id(v as u64)
                .with_context(|| format!("{what} node {v} is not in the graph"))
        })
        .collect()
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let loaded = match (&args.graph, args.n, args.p) {
        (Some(path), _, _) => load_graph(path)?,
        (None, Some(n), Some(p)) => LoadedGraph {
            graph: generate_er(n, p, &mut rng_from(args.seed)),
            original_ids: (0..n as u64).collect(),
            stats: Default::default(),
        },
        _ => bail!("give either --graph or both --n and --p"),
    };
    let g = &loaded.graph;
    let params = DiffusionParams::homogeneous(args.q, args.r, args.theta)?;
    let mut rng = rng_from(args.seed.wrapping_add(1));
    let (outcome, snapshot) = match args.size {
        Some(size) => {
            let spec = InstanceSpec {
                sources: args.m,
                duration: args.t,
                size_range: size,
                max_attempts: args.max_attempts,
                min_source_distance: None,
            };
            draw_instance(g, &params, &spec, &mut rng)?
        }
        None => {
            let sources = rand::seq::index::sample(&mut rng, g.node_count(), args.m).into_vec();
            let outcome = simulate_sir(g, &params, &sources, args.t, &mut rng)?;
            let snapshot = sample_snapshot(&outcome, &params, &mut rng);
            (outcome, snapshot)
        }
    };
    eprintln!(
        "{} infected, {} observed",
        outcome.infected_count(),
        snapshot.len()
    );
    let file = SnapshotFile {
        t: args.t,
        sources: to_original(&loaded, &outcome.sources),
        observed: to_original(&loaded, &snapshot.observed),
    };
    let mut out = output(&args.out)?;
    write_snapshot(&file, &mut out)?;
    out.flush()?;
    Ok(())
}

fn localize_cmd(args: LocalizeArgs) -> Result<()> {
    let loaded = load_graph(&args.graph)?;
    let file = File::open(&args.snapshot)
        .with_context(|| format!("cannot open snapshot {}", args.snapshot.display()))?;
    let snap = read_snapshot(BufReader::new(file))?;
    let observed = to_compact(&loaded, &snap.observed, "observed")?;
    let opts = LocalizeOptions {
        kmeans: KMeansOptions {
            restarts: args.restarts,
            max_iters: args.max_iters,
        },
        ..LocalizeOptions::new(args.threshold, args.m)
    };
    let snapshot = jordan_cover::diffusion::Snapshot::new(observed);
    let result = localize(&loaded.graph, &snapshot, args.algorithm, &opts, &mut rng_from(args.seed))?;
    println!("algorithm {}", result.algorithm);
    println!("sources {}", to_original(&loaded, &result.sources));
    println!("eccentricity {}", result.score.eccentricity);
    println!("total {}", result.score.total);
    println!("candidates {}", result.candidate_count);
    println!("subgraph_nodes {}", result.subgraph_nodes);
    println!("wall_ms {:.3}", result.wall_time.as_secs_f64() * 1e3);
    if snap.sources.len() == args.m {
        let truth = to_compact(&loaded, &snap.sources, "source")?;
        let metrics = evaluate(&loaded.graph, &truth, &result.sources)?;
        println!("error_distance {}", metrics.error_distance);
        println!("detection_rate {}", metrics.detection_rate);
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::GenGraph { n, p, seed, out } => {
            if !(0.0..=1.0).contains(&p) {
                bail!("p = {p} must be in [0, 1]");
            }
            let g = generate_er(n, p, &mut rng_from(seed));
            let mut w = output(&out)?;
            write_edge_list(&g, &mut w)?;
            w.flush()?;
        }
        Command::Simulate(args) => simulate(args)?,
        Command::Localize(args) => localize_cmd(args)?,
        Command::Bench { config, run: args } => {
            let mut config = ExperimentConfig::load(&config)?;
            args.apply(&mut config);
            run(config, &args.out)?;
        }
        Command::Theory { n, p, q, theta, y, graph, snapshot } => {
            let extra = match (graph, snapshot) {
                (Some(g), Some(s)) => {
                    let loaded = load_graph(&g)?;
                    let snap = read_snapshot(BufReader::new(File::open(&s)?))?;
                    let sources = to_compact(&loaded, &snap.sources, "source")?;
                    Some((loaded, sources))
                }
                _ => None,
            };
            let bounds = compute_theory_bounds(n, p, q, theta, y, extra.as_ref().map(|(l, s)| (&l.graph, s)))?;
            print!("{bounds}");
        }
        Command::Fig { name, graph, print_config, run: args } => {
            let mut config = preset(&name).expect("name validated by clap");
            if let Some(path) = graph {
                config.graph = GraphSpec::EdgeList { path };
            }
            args.apply(&mut config);
            if print_config {
                print!("{}", config.to_toml());
                return Ok(());
            }
            run(config, &args.out)?;
        }
    }
    Ok(())
}
