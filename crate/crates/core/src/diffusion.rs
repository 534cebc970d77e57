//! Discrete-time heterogeneous SIR diffusion and partial snapshots.
//!
//! Slot `i` (1-based) runs in two phases. First every node that is Infected
//! at the start of the slot tries once to infect each Susceptible neighbor,
//! succeeding with the edge's infection probability. Then every node that was
//! Infected at the start of the slot recovers with its recovery probability.
//! Nodes infected during slot `i` neither spread nor recover until slot `i+1`.
//!
//! Infection and recovery coins are keyed by `(edge, slot)` and `(node, slot)`
//! under a per-run key drawn from the caller's rng. Two runs with the same key
//! therefore see the same coins, which couples runs that differ only in their
//! probabilities.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng;
use thiserror::Error;

use crate::graph::{bfs_distances, Graph, Hops, NodeId, NodeSet};
use crate::seed::keyed_uniform;

/// Infection time of nodes that were never infected.
pub const NEVER: u32 = u32::MAX;

#[derive(Debug, Error, PartialEq)]
pub enum DiffusionError {
    #[error("{what} probability {value} outside {range}")]
    InvalidProbability {
        what: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("no infection probability for edge ({0}, {1})")]
    MissingEdgeRate(NodeId, NodeId),
    #[error("{what} table has {len} entries, graph has {nodes} nodes")]
    NodeRateLength {
        what: &'static str,
        len: usize,
        nodes: usize,
    },
    #[error("at least one source is required")]
    NoSources,
    #[error("source {node} out of range for graph with {node_count} nodes")]
    SourceOutOfRange { node: NodeId, node_count: usize },
    #[error("source {0} listed twice")]
    DuplicateSource(NodeId),
    #[error("cannot draw {m} distinct sources from {n} nodes")]
    TooManySources { m: usize, n: usize },
    #[error("invalid outbreak size range [{lo}, {hi}]")]
    InvalidSizeRange { lo: usize, hi: usize },
    #[error("no outbreak with size in range after {attempts} attempts")]
    InstanceGeneration { attempts: usize },
}

/// Per-edge infection probabilities `q_uv`, symmetric in the endpoints.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeRates {
    Uniform(f64),
    /// Keyed by `(min(u, v), max(u, v))`.
    PerEdge(HashMap<(NodeId, NodeId), f64>),
}

/// Per-node probabilities (recovery `r_v` or reporting `theta_v`).
#[derive(Debug, Clone, PartialEq)]
pub enum NodeRates {
    Uniform(f64),
    PerNode(Vec<f64>),
}

impl NodeRates {
    #[inline]
    pub fn get(&self, v: NodeId) -> f64 {
        match self {
            NodeRates::Uniform(p) => *p,
            NodeRates::PerNode(table) => table[v],
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            NodeRates::Uniform(p) => *p,
            NodeRates::PerNode(table) => table.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }

    fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            NodeRates::Uniform(p) => Box::new(std::iter::once(*p)),
            NodeRates::PerNode(table) => Box::new(table.iter().copied()),
        }
    }
}

impl EdgeRates {
    #[inline]
    pub fn get(&self, u: NodeId, v: NodeId) -> f64 {
        match self {
            EdgeRates::Uniform(q) => *q,
            EdgeRates::PerEdge(table) => table
                .get(&(u.min(v), u.max(v)))
                .copied()
                .expect("edge rates validated against graph"),
        }
    }

    pub fn min(&self) -> f64 {
        match self {
            EdgeRates::Uniform(q) => *q,
            EdgeRates::PerEdge(table) => table.values().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionParams {
    pub infect: EdgeRates,
    pub recover: NodeRates,
    pub report: NodeRates,
}

fn check_prob(
    what: &'static str,
    value: f64,
    zero_ok: bool,
) -> Result<(), DiffusionError> {
    let ok = if zero_ok {
        (0.0..=1.0).contains(&value)
    } else {
        value > 0.0 && value <= 1.0
    };
    if ok {
        Ok(())
    } else {
        Err(DiffusionError::InvalidProbability {
            what,
            value,
            range: if zero_ok { "[0, 1]" } else { "(0, 1]" },
        })
    }
}

impl DiffusionParams {
    /// Same `q`, `r` and `theta` everywhere.
    pub fn homogeneous(q: f64, r: f64, theta: f64) -> Result<Self, DiffusionError> {
        let params = Self {
            infect: EdgeRates::Uniform(q),
            recover: NodeRates::Uniform(r),
            report: NodeRates::Uniform(theta),
        };
        params.check_ranges()?;
        Ok(params)
    }

    /// SI model: recovery probability 0.
    pub fn si(q: f64, theta: f64) -> Result<Self, DiffusionError> {
        Self::homogeneous(q, 0.0, theta)
    }

    pub fn with_report(&self, theta: f64) -> Result<Self, DiffusionError> {
        check_prob("report", theta, false)?;
        Ok(Self {
            report: NodeRates::Uniform(theta),
            ..self.clone()
        })
    }

    fn check_ranges(&self) -> Result<(), DiffusionError> {
        match &self.infect {
            EdgeRates::Uniform(q) => check_prob("infection", *q, false)?,
            EdgeRates::PerEdge(table) => {
                for &q in table.values() {
                    check_prob("infection", q, false)?;
                }
            }
        }
        for r in self.recover.values() {
            check_prob("recovery", r, true)?;
        }
        for theta in self.report.values() {
            check_prob("report", theta, false)?;
        }
        Ok(())
    }

    /// Checks probability ranges and that every table covers `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), DiffusionError> {
        self.check_ranges()?;
        if let EdgeRates::PerEdge(table) = &self.infect {
            if let Some((u, v)) = g.edges().find(|e| !table.contains_key(e)) {
                return Err(DiffusionError::MissingEdgeRate(u, v));
            }
        }
        for (what, rates) in [("recovery", &self.recover), ("report", &self.report)] {
            if let NodeRates::PerNode(table) = rates {
                if table.len() != g.node_count() {
                    return Err(DiffusionError::NodeRateLength {
                        what,
                        len: table.len(),
                        nodes: g.node_count(),
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeState {
    Susceptible,
    Infected,
    Recovered,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionOutcome {
    pub state: Vec<NodeState>,
    /// Slot in which each node was infected; `NEVER` if it was not.
    pub infect_time: Vec<u32>,
    pub sources: NodeSet,
    /// Number of slots simulated (the observation time `t`).
    pub duration: u32,
}

impl DiffusionOutcome {
    /// Infected and recovered nodes.
    pub fn infected_nodes(&self) -> NodeSet {
        NodeSet::from_sorted_unchecked(
            (0..self.state.len())
                .filter(|&v| self.state[v] != NodeState::Susceptible)
                .collect(),
        )
    }

    pub fn infected_count(&self) -> usize {
        self.state
            .iter()
            .filter(|&&s| s != NodeState::Susceptible)
            .count()
    }

    pub fn nodes_infected_at(&self, slot: u32) -> NodeSet {
        NodeSet::from_sorted_unchecked(
            (0..self.infect_time.len())
                .filter(|&v| self.infect_time[v] == slot)
                .collect(),
        )
    }

    /// Checks the structural invariants of an outcome simulated on `g`.
    pub fn check_invariants(&self, g: &Graph) -> Result<(), String> {
        for s in self.sources.iter() {
            if self.infect_time[s] != 0 {
                return Err(format!("source {s} has infection time {}", self.infect_time[s]));
            }
        }
        for v in 0..self.state.len() {
            let time = self.infect_time[v];
            let infected = self.state[v] != NodeState::Susceptible;
            if infected != (time <= self.duration) {
                return Err(format!("node {v}: state {:?} with time {time}", self.state[v]));
            }
            if infected && time > 0 {
                let has_parent = g
                    .neighbors(v)
                    .iter()
                    .any(|&u| self.infect_time[u] < time);
                if !has_parent {
                    return Err(format!("node {v} infected at {time} without an infector"));
                }
            }
            if time == 0 && !self.sources.contains(v) {
                return Err(format!("non-source {v} infected at time 0"));
            }
        }
        Ok(())
    }
}

/// The observed infected-or-recovered nodes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Snapshot {
    pub observed: NodeSet,
}

impl Snapshot {
    pub fn new(observed: NodeSet) -> Self {
        Self { observed }
    }

    pub fn len(&self) -> usize {
        self.observed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observed.is_empty()
    }
}

#[inline]
pub(crate) fn infection_coin(key: u64, u: NodeId, v: NodeId, slot: u32) -> f64 {
    keyed_uniform(key, u.min(v) as u64, u.max(v) as u64, 2 * slot as u64)
}

#[inline]
pub(crate) fn recovery_coin(key: u64, v: NodeId, slot: u32) -> f64 {
    keyed_uniform(key, v as u64, v as u64, 2 * slot as u64 + 1)
}

/// Slot-by-slot SIR process. Exposed so callers can watch the outbreak grow
/// without re-simulating from scratch for every horizon.
pub struct SirProcess<'a> {
    g: &'a Graph,
    params: &'a DiffusionParams,
    key: u64,
    state: Vec<NodeState>,
    infect_time: Vec<u32>,
    active: Vec<NodeId>,
    sources: NodeSet,
    slot: u32,
    ever_infected: usize,
}

impl<'a> SirProcess<'a> {
    pub fn new(
        g: &'a Graph,
        params: &'a DiffusionParams,
        sources: &[NodeId],
        key: u64,
    ) -> Result<Self, DiffusionError> {
        if sources.is_empty() {
            return Err(DiffusionError::NoSources);
        }
        let n = g.node_count();
        let mut state = vec![NodeState::Susceptible; n];
        let mut infect_time = vec![NEVER; n];
        for &s in sources {
            if s >= n {
                return Err(DiffusionError::SourceOutOfRange {
                    node: s,
                    node_count: n,
                });
            }
            if state[s] != NodeState::Susceptible {
                return Err(DiffusionError::DuplicateSource(s));
            }
            state[s] = NodeState::Infected;
            infect_time[s] = 0;
        }
        let source_set: NodeSet = sources.iter().copied().collect();
        Ok(Self {
            g,
            params,
            key,
            state,
            infect_time,
            active: source_set.as_slice().to_vec(),
            ever_infected: sources.len(),
            sources: source_set,
            slot: 0,
        })
    }

    pub fn slot(&self) -> u32 {
        self.slot
    }

    /// Infected plus recovered nodes so far.
    pub fn ever_infected(&self) -> usize {
        self.ever_infected
    }

    /// True once no node is in the Infected state; later slots change nothing.
    pub fn is_extinct(&self) -> bool {
        self.active.is_empty()
    }

    pub fn step(&mut self) {
        self.slot += 1;
        let slot = self.slot;
        let mut newly = Vec::new();
        for &u in &self.active {
            for &v in self.g.neighbors(u) {
                if self.state[v] != NodeState::Susceptible {
                    continue;
                }
                let q = self.params.infect.get(u, v);
                if infection_coin(self.key, u, v, slot) < q {
                    self.state[v] = NodeState::Infected;
                    self.infect_time[v] = slot;
                    newly.push(v);
                }
            }
        }
        self.ever_infected += newly.len();

        let key = self.key;
        let recover = &self.params.recover;
        let state = &mut self.state;
        self.active.retain(|&u| {
            let r = recover.get(u);
            if r > 0.0 && recovery_coin(key, u, slot) < r {
                state[u] = NodeState::Recovered;
                false
            } else {
                true
            }
        });
        self.active.extend(newly);
    }

    pub fn into_outcome(self) -> DiffusionOutcome {
        DiffusionOutcome {
            state: self.state,
            infect_time: self.infect_time,
            sources: self.sources,
            duration: self.slot,
        }
    }
}

/// Runs `t` slots of SIR diffusion from `sources`.
pub fn simulate_sir<R: Rng + ?Sized>(
    g: &Graph,
    params: &DiffusionParams,
    sources: &[NodeId],
    t: u32,
    rng: &mut R,
) -> Result<DiffusionOutcome, DiffusionError> {
    let key = rng.random::<u64>();
    simulate_with_key(g, params, sources, t, key)
}

/// [`simulate_sir`] with an explicit coin key.
pub fn simulate_with_key(
    g: &Graph,
    params: &DiffusionParams,
    sources: &[NodeId],
    t: u32,
    key: u64,
) -> Result<DiffusionOutcome, DiffusionError> {
    let mut process = SirProcess::new(g, params, sources, key)?;
    for _ in 0..t {
        process.step();
    }
    Ok(process.into_outcome())
}

/// Each infected or recovered node reports independently with its `theta_v`.
pub fn sample_snapshot<R: Rng + ?Sized>(
    outcome: &DiffusionOutcome,
    params: &DiffusionParams,
    rng: &mut R,
) -> Snapshot {
    let observed = (0..outcome.state.len())
        .filter(|&v| outcome.state[v] != NodeState::Susceptible)
        .filter(|&v| rng.random::<f64>() < params.report.get(v))
        .collect();
    Snapshot { observed }
}

/// What [`draw_outbreak`] should produce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstanceSpec {
    pub sources: usize,
    pub duration: u32,
    /// Inclusive bounds on the number of infected plus recovered nodes.
    pub size_range: (usize, usize),
    pub max_attempts: usize,
    /// Reject source sets with a pair closer than this many hops.
    pub min_source_distance: Option<Hops>,
}

/// An accepted outbreak and how many attempts it took.
#[derive(Debug, Clone)]
pub struct Outbreak {
    pub outcome: DiffusionOutcome,
    pub attempts: usize,
}

fn sources_far_enough(g: &Graph, sources: &[NodeId], min: Hops) -> bool {
    sources.iter().enumerate().all(|(i, &s)| {
        let dist = bfs_distances(g, s).expect("sampled source in range");
        sources[i + 1..].iter().all(|&o| dist[o] >= min)
    })
}

/// Re-draws uniformly random sources and re-simulates until the outbreak size
/// falls inside `spec.size_range`.
pub fn draw_outbreak<R: Rng + ?Sized>(
    g: &Graph,
    params: &DiffusionParams,
    spec: &InstanceSpec,
    rng: &mut R,
) -> Result<Outbreak, DiffusionError> {
    let n = g.node_count();
    let (lo, hi) = spec.size_range;
    if lo > hi {
        return Err(DiffusionError::InvalidSizeRange { lo, hi });
    }
    if spec.sources == 0 {
        return Err(DiffusionError::NoSources);
    }
    if spec.sources > n {
        return Err(DiffusionError::TooManySources {
            m: spec.sources,
            n,
        });
    }
    for attempt in 1..=spec.max_attempts {
        let mut sources = sample(rng, n, spec.sources).into_vec();
        sources.sort_unstable();
        if let Some(min) = spec.min_source_distance {
            if !sources_far_enough(g, &sources, min) {
                continue;
            }
        }
        let outcome = simulate_sir(g, params, &sources, spec.duration, rng)?;
        let size = outcome.infected_count();
        if (lo..=hi).contains(&size) {
            return Ok(Outbreak {
                outcome,
                attempts: attempt,
            });
        }
    }
    Err(DiffusionError::InstanceGeneration {
        attempts: spec.max_attempts,
    })
}

/// An accepted outbreak plus a snapshot sampled from it.
pub fn draw_instance<R: Rng + ?Sized>(
    g: &Graph,
    params: &DiffusionParams,
    spec: &InstanceSpec,
    rng: &mut R,
) -> Result<(DiffusionOutcome, Snapshot), DiffusionError> {
    let outbreak = draw_outbreak(g, params, spec, rng)?;
    let snapshot = sample_snapshot(&outbreak.outcome, params, rng);
    Ok((outbreak.outcome, snapshot))
}
