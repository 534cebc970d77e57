//! Browser bindings for a small interactive demo: grow an outbreak on a
//! random graph, estimate its sources, and evaluate the asymptotic bounds.
//!
//! Every method returns a JSON string so the page needs no extra glue.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use jordan_cover::diffusion::{sample_snapshot, simulate_sir, DiffusionOutcome, DiffusionParams, Snapshot, NEVER};
use jordan_cover::graph::{generate_er, Graph};
use jordan_cover::harness::compute_theory_bounds;
use jordan_cover::localization::{localize, Algorithm, KMeansOptions, LocalizeOptions};
use jordan_cover::metrics::evaluate;
use jordan_cover::seed::rng_from;
use jordan_cover::UNREACHABLE;

#[derive(Serialize)]
struct GraphView {
    nodes: usize,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct OutbreakView {
    sources: Vec<usize>,
    infected: Vec<usize>,
    observed: Vec<usize>,
    infect_time: Vec<Option<u32>>,
}

#[derive(Serialize)]
struct EstimateView {
    algorithm: String,
    sources: Vec<usize>,
    eccentricity: Option<u32>,
    total: u64,
    candidates: usize,
    subgraph_nodes: usize,
    wall_ms: f64,
    detection_rate: f64,
    error_distance: Option<f64>,
}

#[derive(Serialize)]
struct TheoryView {
    mu: f64,
    t_u: Option<u32>,
    c1: f64,
    y_ratio: f64,
    t_upper: Option<f64>,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// A generated graph plus the most recent outbreak on it.
#[wasm_bindgen]
pub struct Demo {
    graph: Graph,
    outbreak: Option<(DiffusionOutcome, Snapshot)>,
}

#[wasm_bindgen]
impl Demo {
    /// Random graph with `n` nodes, each pair joined with probability `p`.
    #[wasm_bindgen(constructor)]
    pub fn new(n: usize, p: f64, seed: u32) -> Result<Demo, String> {
        if !(0.0..=1.0).contains(&p) || n == 0 || n > 5000 {
            return Err("need 1 <= n <= 5000 and 0 <= p <= 1".into());
        }
        Ok(Demo {
            graph: generate_er(n, p, &mut rng_from(seed as u64)),
            outbreak: None,
        })
    }

    /// `{nodes, edges}` for drawing.
    pub fn graph(&self) -> String {
        json(&GraphView {
            nodes: self.graph.node_count(),
            edges: self.graph.edges().map(|(u, v)| [u, v]).collect(),
        })
    }

    /// Runs `t` slots of SI diffusion from `m` random sources and samples
    /// which infected nodes report.
    pub fn simulate(&mut self, q: f64, theta: f64, m: usize, t: u32, seed: u32) -> Result<String, String> {
        let params = DiffusionParams::si(q, theta).map_err(|e| e.to_string())?;
        let n = self.graph.node_count();
        if m == 0 || m > n {
            return Err(format!("m must be in 1..={n}"));
        }
        let mut rng = rng_from(seed as u64);
        let sources = rand_sources(n, m, seed);
        let outcome = simulate_sir(&self.graph, &params, &sources, t, &mut rng).map_err(|e| e.to_string())?;
        let snapshot = sample_snapshot(&outcome, &params, &mut rng);
        let view = OutbreakView {
            sources: outcome.sources.iter().collect(),
            infected: outcome.infected_nodes().into_vec(),
            observed: snapshot.observed.iter().collect(),
            infect_time: outcome
                .infect_time
                .iter()
                .map(|&x| (x != NEVER).then_some(x))
                .collect(),
        };
        self.outbreak = Some((outcome, snapshot));
        Ok(json(&view))
    }

    /// Estimates the sources of the last outbreak with `algorithm` (OJC, AJC,
    /// DC or CC) and scores the estimate against the truth.
    pub fn localize(&self, algorithm: &str, threshold: u32, restarts: usize, seed: u32) -> Result<String, String> {
        let algorithm: Algorithm = algorithm.parse()?;
        let (outcome, snapshot) = self.outbreak.as_ref().ok_or("simulate an outbreak first")?;
        let m = outcome.sources.len();
        let opts = LocalizeOptions {
            kmeans: KMeansOptions {
                restarts: restarts.max(1),
                max_iters: 32,
            },
            ..LocalizeOptions::new(threshold, m)
        };
        let result = localize(&self.graph, snapshot, algorithm, &opts, &mut rng_from(seed as u64))
            .map_err(|e| e.to_string())?;
        let metrics = evaluate(&self.graph, &outcome.sources, &result.sources).map_err(|e| e.to_string())?;
        Ok(json(&EstimateView {
            algorithm: algorithm.to_string(),
            sources: result.sources.iter().collect(),
            eccentricity: (result.score.eccentricity != UNREACHABLE).then_some(result.score.eccentricity),
            total: result.score.total,
            candidates: result.candidate_count,
            subgraph_nodes: result.subgraph_nodes,
            wall_ms: result.wall_time.as_secs_f64() * 1e3,
            detection_rate: metrics.detection_rate,
            error_distance: metrics.error_distance.value(),
        }))
    }
}

fn rand_sources(n: usize, m: usize, seed: u32) -> Vec<usize> {
    let mut rng = rng_from(!(seed as u64));
    let mut v = rand::seq::index::sample(&mut rng, n, m).into_vec();
    v.sort_unstable();
    v
}

/// Asymptotic quantities for an ER graph with `n` nodes and edge
/// probability `p`.
#[wasm_bindgen]
pub fn theory(n: usize, p: f64, q: f64, theta: f64, y: u32) -> Result<String, String> {
    let b = compute_theory_bounds(n, p, q, theta, y, None).map_err(|e| e.to_string())?;
    Ok(json(&TheoryView {
        mu: b.mu,
        t_u: b.t_u,
        c1: b.c1,
        y_ratio: b.y_ratio,
        t_upper: b.t_upper,
    }))
}
