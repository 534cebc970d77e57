//! Locating multiple diffusion sources from a partial snapshot of an SIR
//! epidemic.
//!
//! The pipeline is: simulate an outbreak ([`diffusion`]), observe a random
//! subset of the infected nodes, select a candidate subgraph and search it
//! for the m-node set that covers every observation with the smallest radius
//! ([`localization`]), then score the estimate ([`metrics`]). The
//! [`harness`] module repeats this over many seeded trials.

pub mod diffusion;
pub mod graph;
pub mod harness;
pub mod localization;
pub mod metrics;
pub mod seed;

pub use graph::{Graph, Hops, NodeId, NodeSet, UNREACHABLE};
