use std::collections::HashMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diffusion::{DiffusionParams, EdgeRates, NodeRates};
use crate::graph::{generate_er, load_edge_list, LoadedGraph};
use crate::localization::{Algorithm, KMeansOptions};
use crate::seed::{derive, rng_from};

use super::HarnessError;

/// Seed stream used for graph generation.
pub(crate) const GRAPH_STREAM: u64 = 0x6772_6170_68;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    Er { n: usize, p: f64 },
    EdgeList { path: PathBuf },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiffusionSpec {
    /// Homogeneous infection probability; also the fallback for edges
    /// missing from `q_file`.
    pub q: f64,
    #[serde(default)]
    pub r: f64,
    /// Optional per-edge rates, one `u v q` triple per line, ids as in the
    /// graph file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TPolicy {
    Fixed {
        t: u32,
    },
    /// Smallest t whose median pilot outbreak lands in `size_range`.
    Scan {
        #[serde(default = "default_max_t")]
        max_t: u32,
        #[serde(default = "default_pilots")]
        pilots: usize,
    },
}

impl Default for TPolicy {
    fn default() -> Self {
        TPolicy::Scan {
            max_t: default_max_t(),
            pilots: default_pilots(),
        }
    }
}

/// Where DC and CC look for centers.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DcCcMode {
    /// Same candidate subgraph as OJC and AJC.
    #[default]
    SharedSubgraph,
    /// No candidate filtering: threshold 0 on the whole graph.
    FullGraph,
}

fn default_max_t() -> u32 {
    64
}
fn default_pilots() -> usize {
    50
}
fn default_thresholds() -> Vec<u32> {
    vec![1]
}
fn default_thetas() -> Vec<f64> {
    vec![1.0]
}
fn default_algorithms() -> Vec<Algorithm> {
    vec![Algorithm::Ojc, Algorithm::Ajc]
}
fn default_restarts() -> usize {
    KMeansOptions::default().restarts
}
fn default_max_iters() -> usize {
    KMeansOptions::default().max_iters
}
fn default_max_attempts() -> usize {
    10_000
}
fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub trials: usize,
    /// Number of sources.
    pub m: usize,
    /// Inclusive bounds on the outbreak size (infected plus recovered).
    pub size_range: [usize; 2],
    #[serde(default = "default_thresholds")]
    pub thresholds: Vec<u32>,
    #[serde(default = "default_thetas")]
    pub thetas: Vec<f64>,
    #[serde(default = "default_algorithms")]
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_restarts")]
    pub restarts: usize,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default)]
    pub dc_cc_mode: DcCcMode,
    #[serde(default = "default_max_attempts")]
    pub max_attempts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_source_distance: Option<u32>,
    /// Write `-` instead of wall times so repeated runs give identical files.
    #[serde(default)]
    pub omit_wall_time: bool,
    /// Parallelize the exact search inside a trial instead of across trials.
    #[serde(default)]
    pub parallel_search: bool,
    #[serde(default = "default_true")]
    pub check_invariants: bool,
    pub graph: GraphSpec,
    pub diffusion: DiffusionSpec,
    #[serde(default)]
    pub t_policy: TPolicy,
}

fn check_prob(name: &str, v: f64, zero_ok: bool) -> Result<(), HarnessError> {
    let ok = v <= 1.0 && if zero_ok { v >= 0.0 } else { v > 0.0 };
    if ok {
        Ok(())
    } else {
        Err(HarnessError::Config(format!("{name} = {v} is out of range")))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |msg: &str| Err(HarnessError::Config(msg.to_string()));
        if self.trials == 0 {
            return fail("trials must be at least 1");
        }
        if self.m == 0 {
            return fail("m must be at least 1");
        }
        if self.size_range[0] > self.size_range[1] {
            return fail("size_range must satisfy lo <= hi");
        }
        if self.thresholds.is_empty() || self.thetas.is_empty() || self.algorithms.is_empty() {
            return fail("thresholds, thetas and algorithms must be non-empty");
        }
        if self.restarts == 0 || self.max_iters == 0 || self.max_attempts == 0 {
            return fail("restarts, max_iters and max_attempts must be at least 1");
        }
        for &theta in &self.thetas {
            check_prob("theta", theta, false)?;
        }
        check_prob("q", self.diffusion.q, false)?;
        check_prob("r", self.diffusion.r, true)?;
        if let GraphSpec::Er { p, .. } = self.graph {
            check_prob("p", p, true)?;
        }
        if let TPolicy::Scan { max_t, pilots } = self.t_policy {
            if max_t == 0 || pilots == 0 {
                return fail("t scan needs max_t and pilots of at least 1");
            }
        }
        Ok(())
    }

    pub fn kmeans(&self) -> KMeansOptions {
        KMeansOptions {
            restarts: self.restarts,
            max_iters: self.max_iters,
        }
    }

    /// Builds or loads the graph. Generated graphs depend only on the seed.
    pub fn build_graph(&self) -> Result<LoadedGraph, HarnessError> {
        match &self.graph {
            GraphSpec::Er { n, p } => {
                let graph = generate_er(*n, *p, &mut rng_from(derive(self.seed, GRAPH_STREAM)));
                Ok(LoadedGraph {
                    original_ids: (0..*n as u64).collect(),
                    graph,
                    stats: Default::default(),
                })
            }
            GraphSpec::EdgeList { path } => {
                let file = File::open(path).map_err(|e| {
                    HarnessError::Config(format!("cannot open graph {}: {e}", path.display()))
                })?;
                Ok(load_edge_list(BufReader::new(file))?)
            }
        }
    }

    /// Diffusion parameters for the first configured `theta`.
    pub fn diffusion_params(&self, loaded: &LoadedGraph) -> Result<DiffusionParams, HarnessError> {
        let infect = match &self.diffusion.q_file {
            None => EdgeRates::Uniform(self.diffusion.q),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    HarnessError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                let mut table = parse_edge_rates(&text, loaded)?;
                for e in loaded.graph.edges() {
                    table.entry(e).or_insert(self.diffusion.q);
                }
                EdgeRates::PerEdge(table)
            }
        };
        let params = DiffusionParams {
            infect,
            recover: NodeRates::Uniform(self.diffusion.r),
            report: NodeRates::Uniform(self.thetas[0]),
        };
        params.validate(&loaded.graph)?;
        Ok(params)
    }
}

fn parse_edge_rates(
    text: &str,
    loaded: &LoadedGraph,
) -> Result<HashMap<(usize, usize), f64>, HarnessError> {
    let mut table = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let bad = || HarnessError::Config(format!("edge rate line {}: expected `u v q`", i + 1));
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, q] = fields.as_slice() else {
            return Err(bad());
        };
        let lookup = |s: &str| {
            s.parse::<u64>()
                .ok()
                .and_then(|id| loaded.compact_id(id))
                .ok_or_else(bad)
        };
        let (u, v) = (lookup(u)?, lookup(v)?);
        let q: f64 = q.parse().map_err(|_| bad())?;
        table.insert((u.min(v), u.max(v)), q);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
seed = 3
trials = 2
m = 2
size_range = [10, 40]

[graph]
kind = "er"
n = 200
p = 0.03

[diffusion]
q = 0.8
"#;

    #[test]
    fn defaults_fill_in() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.restarts, 100);
        assert_eq!(c.max_iters, 32);
        assert_eq!(c.thresholds, vec![1]);
        assert_eq!(c.dc_cc_mode, DcCcMode::SharedSubgraph);
        assert!(matches!(c.t_policy, TPolicy::Scan { max_t: 64, pilots: 50 }));
    }

    #[test]
    fn round_trips_through_toml() {
        let mut c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        c.algorithms = Algorithm::ALL.to_vec();
        c.t_policy = TPolicy::Fixed { t: 3 };
        let back = ExperimentConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ExperimentConfig::from_toml(&MINIMAL.replace("q = 0.8", "q = 1.5")).is_err());
        assert!(ExperimentConfig::from_toml(&MINIMAL.replace("trials = 2", "trials = 0")).is_err());
        assert!(ExperimentConfig::from_toml(&MINIMAL.replace("[10, 40]", "[40, 10]")).is_err());
        assert!(ExperimentConfig::from_toml(&format!("{MINIMAL}\nbogus = 1")).is_err());
    }

    #[test]
    fn graph_depends_on_seed_only() {
        let c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(c.build_graph().unwrap().graph, c.build_graph().unwrap().graph);
    }

    #[test]
    fn per_edge_rates_from_file() {
        let dir = tempfile::tempdir().unwrap();
        let graph_path = dir.path().join("g.txt");
        std::fs::write(&graph_path, "10 20\n20 30\n").unwrap();
        let rates = dir.path().join("q.txt");
        std::fs::write(&rates, "30 20 0.25\n").unwrap();
        let mut c = ExperimentConfig::from_toml(MINIMAL).unwrap();
        c.graph = GraphSpec::EdgeList { path: graph_path };
        c.diffusion.q_file = Some(rates);
        let loaded = c.build_graph().unwrap();
        let params = c.diffusion_params(&loaded).unwrap();
        assert_eq!(params.infect.get(1, 2), 0.25);
        assert_eq!(params.infect.get(0, 1), 0.8);
    }
}
