//! Closed-form quantities from the asymptotic analysis on ER graphs, with
//! natural logarithms throughout.

use std::fmt;

use crate::graph::{bfs_distances, Graph, Hops, NodeSet, UNREACHABLE};

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryBounds {
    pub n: usize,
    /// Mean degree `n p`.
    pub mu: f64,
    /// Slots after which the whole network is infected with high
    /// probability; `None` when `mu q <= 1`.
    pub t_u: Option<u32>,
    /// `mu q theta / ln n`; should grow without bound.
    pub c1: f64,
    /// `Y / (mu q theta)`; should stay a constant fraction below 1.
    pub y_ratio: f64,
    /// `(2/3) ln n / ln mu`, the horizon the sources' separation is compared
    /// against; `None` when `mu <= 1`.
    pub t_upper: Option<f64>,
    /// Largest hop distance between two sources, when sources are given.
    pub source_spread: Option<Hops>,
}

/// Evaluates the bounds for `ER(n, p)` with infection probability `q`,
/// report probability `theta` and threshold `y`. If `sources` is given, their
/// largest pairwise distance in the graph is included.
pub fn compute_theory_bounds(
    n: usize,
    p: f64,
    q: f64,
    theta: f64,
    y: u32,
    sources: Option<(&Graph, &NodeSet)>,
) -> Result<TheoryBounds, HarnessError> {
    if n < 2 {
        return Err(HarnessError::Config("n must be at least 2".into()));
    }
    for (name, v) in [("p", p), ("q", q), ("theta", theta)] {
        if !(v > 0.0 && v <= 1.0) {
            return Err(HarnessError::Config(format!("{name} = {v} must be in (0, 1]")));
        }
    }
    let ln_n = (n as f64).ln();
    let mu = n as f64 * p;
    let growth = mu.ln() + q.ln();
    let t_u = (growth > 0.0).then(|| (ln_n / growth).ceil() as u32 + 2);
    let t_upper = (mu > 1.0).then(|| 2.0 / 3.0 * ln_n / mu.ln());
    let source_spread = match sources {
        Some((g, set)) => Some(max_pairwise_distance(g, set)?),
        None => None,
    };
    Ok(TheoryBounds {
        n,
        mu,
        t_u,
        c1: mu * q * theta / ln_n,
        y_ratio: y as f64 / (mu * q * theta),
        t_upper,
        source_spread,
    })
}

/// `UNREACHABLE` if two members lie in different components; 0 for fewer
/// than two members.
pub fn max_pairwise_distance(g: &Graph, set: &NodeSet) -> Result<Hops, HarnessError> {
    let members = set.as_slice();
    let mut best = 0;
    for (i, &s) in members.iter().enumerate() {
        let dist = bfs_distances(g, s)?;
        for &o in &members[i + 1..] {
            best = best.max(dist[o]);
        }
    }
    Ok(best)
}

impl fmt::Display for TheoryBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "mu={:.4}", self.mu)?;
        match self.t_u {
            Some(t) => writeln!(f, "t_u={t}")?,
            None => writeln!(f, "t_u=n/a")?,
        }
        writeln!(f, "c1=mu*q*theta/ln(n)={:.4}", self.c1)?;
        writeln!(f, "c2=Y/(mu*q*theta)={:.4}", self.y_ratio)?;
        match self.t_upper {
            Some(x) => writeln!(f, "c3=(2/3)*ln(n)/ln(mu)={x:.4}")?,
            None => writeln!(f, "c3=n/a")?,
        }
        match self.source_spread {
            Some(UNREACHABLE) => writeln!(f, "D=unreachable"),
            Some(d) => writeln!(f, "D={d}"),
            None => writeln!(f, "D=n/a"),
        }
    }
}
