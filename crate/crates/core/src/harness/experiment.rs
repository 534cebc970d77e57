use std::collections::{BTreeMap, VecDeque};
use std::io::Write;
use std::time::Duration;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;

use crate::diffusion::{
    draw_outbreak, sample_snapshot, DiffusionError, DiffusionOutcome, DiffusionParams,
    InstanceSpec, NodeRates, SirProcess, Snapshot,
};
use crate::graph::{Graph, Hops, LoadedGraph, NodeSet, UNREACHABLE};
use crate::localization::{
    build_distance_table, localize_with, score_set, select_candidates, Algorithm,
    LocalizationError, LocalizationResult, LocalizeOptions, Score,
};
use crate::metrics::{evaluate, ErrorDistance};
use crate::seed::{derive, derive_path, rng_from};

use super::config::{DcCcMode, ExperimentConfig, GraphSpec, TPolicy};
use super::theory::{compute_theory_bounds, TheoryBounds};
use super::HarnessError;

const TRIAL_STREAM: u64 = 1;
const SCAN_STREAM: u64 = 2;
const SNAPSHOT_STREAM: u64 = 1;
const SELECTION_STREAM: u64 = 2;
const SEARCH_STREAM: u64 = 3;

pub const CSV_HEADER: &str = "trial,algorithm,Y,theta,m,t,infected,observed,candidates,subgraph_nodes,ecc,total,err_dist,det_rate,exact,wall_ms,fallback_Y";

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub algorithm: Algorithm,
    /// Configured threshold of the cell.
    pub threshold: u32,
    pub theta: f64,
    pub m: usize,
    pub t: u32,
    pub infected: usize,
    pub observed: usize,
    pub candidates: usize,
    pub subgraph_nodes: usize,
    pub score: Score,
    pub error_distance: ErrorDistance,
    pub detection_rate: f64,
    pub exact: bool,
    pub wall_time: Duration,
    /// Threshold actually used when the configured one left too few
    /// candidates.
    pub fallback_threshold: Option<u32>,
    pub sources: NodeSet,
    pub estimate: NodeSet,
}

impl TrialRecord {
    pub fn wall_ms(&self) -> f64 {
        self.wall_time.as_secs_f64() * 1e3
    }

    pub fn csv_line(&self, omit_wall_time: bool) -> String {
        let ecc = if self.score.eccentricity == UNREACHABLE {
            "unreachable".to_string()
        } else {
            self.score.eccentricity.to_string()
        };
        let wall = if omit_wall_time {
            "-".to_string()
        } else {
            format!("{:.3}", self.wall_ms())
        };
        let fallback = self.fallback_threshold.map(|y| y.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.algorithm,
            self.threshold,
            self.theta,
            self.m,
            self.t,
            self.infected,
            self.observed,
            self.candidates,
            self.subgraph_nodes,
            ecc,
            self.score.total,
            self.error_distance,
            self.detection_rate,
            self.exact,
            wall,
            fallback
        )
    }
}

/// Aggregates over one (algorithm, threshold, theta) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub algorithm: Algorithm,
    pub threshold: u32,
    pub theta: f64,
    pub runs: usize,
    pub detection_mean: f64,
    pub detection_stderr: f64,
    /// Over runs with a finite error distance.
    pub error_mean: f64,
    pub error_stderr: f64,
    pub unreachable: usize,
    pub exact_rate: f64,
    pub wall_ms_mean: f64,
    pub wall_ms_median: f64,
    pub fallbacks: usize,
}

pub const SUMMARY_HEADER: &str = "algorithm,Y,theta,runs,det_mean,det_stderr,err_mean,err_stderr,unreachable,exact_rate,wall_ms_mean,wall_ms_median,fallbacks";

impl CellSummary {
    pub fn csv_line(&self, omit_wall_time: bool) -> String {
        let (mean, median) = if omit_wall_time {
            ("-".to_string(), "-".to_string())
        } else {
            (format!("{:.3}", self.wall_ms_mean), format!("{:.3}", self.wall_ms_median))
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.algorithm,
            self.threshold,
            self.theta,
            self.runs,
            self.detection_mean,
            self.detection_stderr,
            self.error_mean,
            self.error_stderr,
            self.unreachable,
            self.exact_rate,
            mean,
            median,
            self.fallbacks
        )
    }
}

/// Mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

pub fn summarize(records: &[TrialRecord]) -> Vec<CellSummary> {
    let mut cells: BTreeMap<(Algorithm, u32, u64), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        cells
            .entry((r.algorithm, r.threshold, r.theta.to_bits()))
            .or_default()
            .push(r);
    }
    let mut out: Vec<CellSummary> = cells
        .into_iter()
        .map(|((algorithm, threshold, theta), rows)| {
            let det: Vec<f64> = rows.iter().map(|r| r.detection_rate).collect();
            let err: Vec<f64> = rows.iter().filter_map(|r| r.error_distance.value()).collect();
            let mut wall: Vec<f64> = rows.iter().map(|r| r.wall_ms()).collect();
            let (detection_mean, detection_stderr) = mean_stderr(&det);
            let (error_mean, error_stderr) = mean_stderr(&err);
            let (wall_ms_mean, _) = mean_stderr(&wall);
            CellSummary {
                algorithm,
                threshold,
                theta: f64::from_bits(theta),
                runs: rows.len(),
                detection_mean,
                detection_stderr,
                error_mean,
                error_stderr,
                unreachable: rows.len() - err.len(),
                exact_rate: rows.iter().filter(|r| r.exact).count() as f64 / rows.len() as f64,
                wall_ms_mean,
                wall_ms_median: median(&mut wall),
                fallbacks: rows.iter().filter(|r| r.fallback_threshold.is_some()).count(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        (a.theta.total_cmp(&b.theta))
            .then(a.threshold.cmp(&b.threshold))
            .then(a.algorithm.cmp(&b.algorithm))
    });
    out
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub t: u32,
    pub node_count: usize,
    pub edge_count: usize,
    pub theory: Option<TheoryBounds>,
    pub records: Vec<TrialRecord>,
    pub summary: Vec<CellSummary>,
    /// Trials whose outbreak never landed in the size range.
    pub skipped_trials: usize,
    /// Localization runs that failed even at threshold 0, or saw an empty
    /// snapshot.
    pub failed_runs: usize,
    /// Broken cross-module invariants; empty for a correct run.
    pub violations: Vec<String>,
}

impl ExperimentOutput {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.records {
            writeln!(out, "{}", r.csv_line(self.config.omit_wall_time))?;
        }
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{SUMMARY_HEADER}")?;
        for c in &self.summary {
            writeln!(out, "{}", c.csv_line(self.config.omit_wall_time))?;
        }
        Ok(())
    }

    pub fn cell(&self, algorithm: Algorithm, threshold: u32, theta: f64) -> Option<&CellSummary> {
        self.summary
            .iter()
            .find(|c| c.algorithm == algorithm && c.threshold == threshold && c.theta == theta)
    }
}

/// Smallest `t` in `1..=max_t` whose median pilot outbreak size (lower
/// median) lies in `[lo, hi]`.
pub fn scan_t_for_size<R: Rng + ?Sized>(
    g: &Graph,
    params: &DiffusionParams,
    m: usize,
    (lo, hi): (usize, usize),
    max_t: u32,
    pilots: usize,
    rng: &mut R,
) -> Result<u32, HarnessError> {
    let n = g.node_count();
    if m == 0 || m > n {
        return Err(DiffusionError::TooManySources { m, n }.into());
    }
    let max_t = max_t as usize;
    let mut sizes = vec![Vec::with_capacity(pilots); max_t + 1];
    for _ in 0..pilots {
        let mut sources = sample(rng, n, m).into_vec();
        sources.sort_unstable();
        let key = rng.random();
        let mut process = SirProcess::new(g, params, &sources, key)?;
        for slot_sizes in sizes.iter_mut().skip(1) {
            // Sizes never shrink, so anything above `hi` can stop early.
            if process.ever_infected() <= hi && !process.is_extinct() {
                process.step();
            }
            slot_sizes.push(process.ever_infected().min(hi.saturating_add(1)));
        }
    }
    for (t, slot_sizes) in sizes.iter_mut().enumerate().skip(1) {
        slot_sizes.sort_unstable();
        let med = slot_sizes[(slot_sizes.len() - 1) / 2];
        if (lo..=hi).contains(&med) {
            return Ok(t as u32);
        }
    }
    Err(HarnessError::NoFeasibleT {
        lo,
        hi,
        max_t: max_t as u32,
    })
}

fn is_si(params: &DiffusionParams) -> bool {
    match &params.recover {
        NodeRates::Uniform(r) => *r == 0.0,
        NodeRates::PerNode(rs) => rs.iter().all(|&r| r == 0.0),
    }
}

/// Hop distance from every node to the nearest source.
fn distance_to_sources(g: &Graph, sources: &NodeSet) -> Vec<Hops> {
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut queue = VecDeque::new();
    for s in sources.iter() {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &v in g.neighbors(u) {
            if dist[v] == UNREACHABLE {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

struct Context<'a> {
    config: &'a ExperimentConfig,
    g: &'a Graph,
    params: &'a DiffusionParams,
    t: u32,
    si: bool,
}

#[derive(Default)]
struct TrialOutput {
    records: Vec<TrialRecord>,
    skipped: bool,
    failed_runs: usize,
    violations: Vec<String>,
}

fn selection_seed(trial_seed: u64, theta_index: usize, threshold: u32) -> u64 {
    derive_path(trial_seed, &[SELECTION_STREAM, theta_index as u64, threshold as u64])
}

struct Run {
    algorithm: Algorithm,
    used: u32,
    result: LocalizationResult,
}

impl Context<'_> {
    fn localize(
        &self,
        snapshot: &Snapshot,
        algorithm: Algorithm,
        threshold: u32,
        trial_seed: u64,
        coords: [u64; 3],
    ) -> Result<(u32, LocalizationResult), LocalizationError> {
        let config = self.config;
        let mut used = match (algorithm, config.dc_cc_mode) {
            (Algorithm::Dc | Algorithm::Cc, DcCcMode::FullGraph) => 0,
            _ => threshold,
        };
        let mut search = rng_from(derive_path(
            trial_seed,
            &[SEARCH_STREAM, coords[0], coords[1], coords[2]],
        ));
        loop {
            let opts = LocalizeOptions {
                threshold: used,
                m: config.m,
                kmeans: config.kmeans(),
                parallel: config.parallel_search,
            };
            let mut selection = rng_from(selection_seed(trial_seed, coords[0] as usize, used));
            match localize_with(self.g, snapshot, algorithm, &opts, &mut selection, &mut search) {
                Err(LocalizationError::InsufficientCandidates { .. }) if used > 0 => used -= 1,
                other => return other.map(|r| (used, r)),
            }
        }
    }

    fn check_snapshot(
        &self,
        trial: usize,
        outcome: &DiffusionOutcome,
        snapshot: &Snapshot,
        source_dist: Option<&[Hops]>,
        out: &mut Vec<String>,
    ) {
        let infected = outcome.infected_nodes();
        if !snapshot.observed.is_subset(&infected) {
            out.push(format!("trial {trial}: snapshot contains uninfected nodes"));
        }
        if let Some(dist) = source_dist {
            if let Some(w) = snapshot.observed.iter().find(|&w| dist[w] > self.t) {
                out.push(format!(
                    "trial {trial}: observed node {w} is {} hops from the sources, t = {}",
                    dist[w], self.t
                ));
            }
        }
    }

    /// Re-derives the candidate subgraph of a cell and checks it, plus the
    /// scores reported for it.
    fn check_cell(
        &self,
        trial: usize,
        trial_seed: u64,
        theta_index: usize,
        snapshot: &Snapshot,
        runs: &[Run],
        out: &mut Vec<String>,
    ) {
        let mut thresholds: Vec<u32> = runs.iter().map(|r| r.used).collect();
        thresholds.sort_unstable();
        thresholds.dedup();
        for used in thresholds {
            let mut rng = rng_from(selection_seed(trial_seed, theta_index, used));
            let candidate = match select_candidates(self.g, snapshot, used, &mut rng) {
                Ok(c) => c,
                Err(e) => {
                    out.push(format!("trial {trial}: candidate selection failed: {e}"));
                    continue;
                }
            };
            if let Err(e) = candidate.check_invariants(snapshot) {
                out.push(format!("trial {trial} Y={used}: {e}"));
            }
            let table = match build_distance_table(&candidate, snapshot) {
                Ok(t) => t,
                Err(e) => {
                    out.push(format!("trial {trial} Y={used}: {e}"));
                    continue;
                }
            };
            for run in runs.iter().filter(|r| r.used == used) {
                let r = &run.result;
                if r.sources.len() != self.config.m || !r.sources.is_subset(&candidate.candidates) {
                    out.push(format!("trial {trial} {}: estimate is not an m-subset of the candidates", run.algorithm));
                }
                match score_set(&table, &r.sources) {
                    Ok(s) if s == r.score => {}
                    Ok(s) => out.push(format!(
                        "trial {trial} {}: reported score {:?}, recomputed {:?}",
                        run.algorithm, r.score, s
                    )),
                    Err(e) => out.push(format!("trial {trial} {}: {e}", run.algorithm)),
                }
                if r.score_increases > 0 {
                    out.push(format!(
                        "trial {trial} {}: score rose within {} restarts",
                        run.algorithm, r.score_increases
                    ));
                }
            }
            let find = |a: Algorithm| runs.iter().find(|r| r.algorithm == a && r.used == used);
            if let (Some(exact), Some(approx)) = (find(Algorithm::Ojc), find(Algorithm::Ajc)) {
                if approx.result.score < exact.result.score {
                    out.push(format!(
                        "trial {trial} Y={used}: AJC score {:?} beats exact {:?}",
                        approx.result.score, exact.result.score
                    ));
                }
            }
        }
    }

    fn run_trial(&self, trial: usize) -> Result<TrialOutput, HarnessError> {
        let config = self.config;
        let trial_seed = derive_path(config.seed, &[TRIAL_STREAM, trial as u64]);
        let spec = InstanceSpec {
            sources: config.m,
            duration: self.t,
            size_range: (config.size_range[0], config.size_range[1]),
            max_attempts: config.max_attempts,
            min_source_distance: config.min_source_distance,
        };
        let mut output = TrialOutput::default();
        let outbreak = match draw_outbreak(self.g, self.params, &spec, &mut rng_from(derive(trial_seed, 0))) {
            Ok(o) => o,
            Err(DiffusionError::InstanceGeneration { .. }) => {
                output.skipped = true;
                return Ok(output);
            }
            Err(e) => return Err(e.into()),
        };
        let outcome = &outbreak.outcome;
        let sources = &outcome.sources;
        let source_dist = (config.check_invariants && self.si).then(|| distance_to_sources(self.g, sources));
        if config.check_invariants {
            if let Err(e) = outcome.check_invariants(self.g) {
                output.violations.push(format!("trial {trial}: {e}"));
            }
        }

        for (ti, &theta) in config.thetas.iter().enumerate() {
            let params = self.params.with_report(theta)?;
            let mut rng = rng_from(derive_path(trial_seed, &[SNAPSHOT_STREAM, ti as u64]));
            let snapshot = sample_snapshot(outcome, &params, &mut rng);
            if config.check_invariants {
                self.check_snapshot(trial, outcome, &snapshot, source_dist.as_deref(), &mut output.violations);
            }
            for (yi, &threshold) in config.thresholds.iter().enumerate() {
                let mut runs = Vec::new();
                for (ai, &algorithm) in config.algorithms.iter().enumerate() {
                    let coords = [ti as u64, yi as u64, ai as u64];
                    match self.localize(&snapshot, algorithm, threshold, trial_seed, coords) {
                        Ok((used, result)) => runs.push(Run { algorithm, used, result }),
                        Err(LocalizationError::NoObservations | LocalizationError::InsufficientCandidates { .. }) => {
                            output.failed_runs += 1
                        }
                        Err(e) => return Err(e.into()),
                    }
                }
                if config.check_invariants {
                    self.check_cell(trial, trial_seed, ti, &snapshot, &runs, &mut output.violations);
                }
                for run in runs {
                    let metrics = evaluate(self.g, sources, &run.result.sources)?;
                    let nominal = match (run.algorithm, config.dc_cc_mode) {
                        (Algorithm::Dc | Algorithm::Cc, DcCcMode::FullGraph) => 0,
                        _ => threshold,
                    };
                    output.records.push(TrialRecord {
                        trial,
                        algorithm: run.algorithm,
                        threshold,
                        theta,
                        m: config.m,
                        t: self.t,
                        infected: outcome.infected_count(),
                        observed: snapshot.len(),
                        candidates: run.result.candidate_count,
                        subgraph_nodes: run.result.subgraph_nodes,
                        score: run.result.score,
                        error_distance: metrics.error_distance,
                        detection_rate: metrics.detection_rate,
                        exact: metrics.exact_match,
                        wall_time: run.result.wall_time,
                        fallback_threshold: (run.used != nominal).then_some(run.used),
                        sources: sources.clone(),
                        estimate: run.result.sources,
                    });
                }
            }
        }
        Ok(output)
    }
}

/// Thread count from `JL_THREADS`, else the machine's parallelism.
pub fn thread_count() -> usize {
    std::env::var("JL_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Observation horizon for `config` on `g`.
pub fn resolve_t(config: &ExperimentConfig, g: &Graph, params: &DiffusionParams) -> Result<u32, HarnessError> {
    match config.t_policy {
        TPolicy::Fixed { t } => Ok(t),
        TPolicy::Scan { max_t, pilots } => {
            let range = (config.size_range[0], config.size_range[1]);
            let mut rng = rng_from(derive(config.seed, SCAN_STREAM));
            scan_t_for_size(g, params, config.m, range, max_t, pilots, &mut rng)
        }
    }
}

/// Runs every trial of `config` on an already loaded graph.
pub fn run_on_graph(
    config: &ExperimentConfig,
    loaded: &LoadedGraph,
    params: &DiffusionParams,
) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let g = &loaded.graph;
    let t = resolve_t(config, g, params)?;
    let ctx = Context {
        config,
        g,
        params,
        t,
        si: is_si(params),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let trials: Vec<TrialOutput> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|i| ctx.run_trial(i))
            .collect::<Result<_, _>>()
    })?;

    let theory = match config.graph {
        GraphSpec::Er { n, p } if n >= 2 && p > 0.0 => compute_theory_bounds(
            n,
            p,
            params.infect.min(),
            config.thetas[0],
            config.thresholds[0],
            None,
        )
        .ok(),
        _ => None,
    };
    let mut out = ExperimentOutput {
        config: config.clone(),
        t,
        node_count: g.node_count(),
        edge_count: g.edge_count(),
        theory,
        records: Vec::new(),
        summary: Vec::new(),
        skipped_trials: 0,
        failed_runs: 0,
        violations: Vec::new(),
    };
    for trial in trials {
        out.records.extend(trial.records);
        out.skipped_trials += trial.skipped as usize;
        out.failed_runs += trial.failed_runs;
        out.violations.extend(trial.violations);
    }
    out.summary = summarize(&out.records);
    Ok(out)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput, HarnessError> {
    config.validate()?;
    let loaded = config.build_graph()?;
    let params = config.diffusion_params(&loaded)?;
    run_on_graph(config, &loaded, &params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::star;

    fn small_config() -> ExperimentConfig {
        ExperimentConfig::from_toml(
            r#"
seed = 11
trials = 6
m = 2
size_range = [20, 80]
thresholds = [0, 1]
thetas = [0.6, 1.0]
algorithms = ["OJC", "AJC", "DC", "CC"]
restarts = 5
omit_wall_time = true

[graph]
kind = "er"
n = 300
p = 0.02

[diffusion]
q = 0.8
"#,
        )
        .unwrap()
    }

    #[test]
    fn scan_on_star_needs_two_slots_for_leaf_sources() {
        let g = star(4);
        let params = DiffusionParams::si(1.0, 1.0).unwrap();
        let t = scan_t_for_size(&g, &params, 1, (5, 5), 64, 50, &mut rng_from(0)).unwrap();
        assert_eq!(t, 2);
        let err = scan_t_for_size(&g, &params, 1, (6, usize::MAX), 64, 50, &mut rng_from(0));
        assert!(matches!(err, Err(HarnessError::NoFeasibleT { .. })));
    }

    #[test]
    fn runs_clean_and_is_reproducible() {
        let config = small_config();
        let a = run_experiment(&config).unwrap();
        assert!(a.violations.is_empty(), "{:?}", a.violations);
        assert!(!a.records.is_empty());
        assert_eq!(a.summary.len(), 2 * 2 * 4);
        let mut csv_a = Vec::new();
        a.write_csv(&mut csv_a).unwrap();
        let b = run_experiment(&config).unwrap();
        let mut csv_b = Vec::new();
        b.write_csv(&mut csv_b).unwrap();
        assert_eq!(csv_a, csv_b);
        let text = String::from_utf8(csv_a).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        for r in &a.records {
            assert!(r.observed <= r.infected);
        }
    }

    #[test]
    fn summary_means_match_rows() {
        let out = run_experiment(&small_config()).unwrap();
        for cell in &out.summary {
            let rows: Vec<_> = out
                .records
                .iter()
                .filter(|r| r.algorithm == cell.algorithm && r.threshold == cell.threshold && r.theta == cell.theta)
                .collect();
            let mean = rows.iter().map(|r| r.detection_rate).sum::<f64>() / rows.len() as f64;
            assert!((mean - cell.detection_mean).abs() < 1e-12);
            assert_eq!(rows.len(), cell.runs);
        }
    }

    #[test]
    fn unsatisfiable_size_skips_trials() {
        let mut config = small_config();
        config.size_range = [1000, 1000];
        config.t_policy = TPolicy::Fixed { t: 2 };
        config.max_attempts = 3;
        let out = run_experiment(&config).unwrap();
        assert_eq!(out.skipped_trials, config.trials);
        assert!(out.records.is_empty());
    }

    #[test]
    fn full_graph_mode_runs_baselines_unfiltered() {
        let mut config = small_config();
        config.dc_cc_mode = DcCcMode::FullGraph;
        config.algorithms = vec![Algorithm::Dc];
        config.thresholds = vec![2];
        let out = run_experiment(&config).unwrap();
        assert!(out.records.iter().all(|r| r.candidates == 300 && r.fallback_threshold.is_none()));
    }

    #[test]
    fn stderr_of_constant_is_zero() {
        assert_eq!(mean_stderr(&[2.0, 2.0, 2.0]), (2.0, 0.0));
        let (m, s) = mean_stderr(&[0.0, 1.0]);
        assert_eq!(m, 0.5);
        assert!((s - 0.5).abs() < 1e-12);
    }
}
