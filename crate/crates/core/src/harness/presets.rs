//! Named experiment setups.

use std::path::PathBuf;

use crate::localization::Algorithm;

use super::config::{DcCcMode, DiffusionSpec, ExperimentConfig, GraphSpec, TPolicy};

pub const PRESETS: [&str; 5] = ["fig2", "fig3-m2", "fig3-m3", "fig3-m4", "power-grid"];

fn er_5000() -> GraphSpec {
    GraphSpec::Er { n: 5000, p: 0.002 }
}

fn base(m: usize, size_range: [usize; 2]) -> ExperimentConfig {
    ExperimentConfig {
        seed: 1,
        trials: 100,
        m,
        size_range,
        thresholds: vec![1],
        thetas: vec![0.5, 0.7, 0.9],
        algorithms: Algorithm::ALL.to_vec(),
        restarts: 100,
        max_iters: 32,
        dc_cc_mode: DcCcMode::SharedSubgraph,
        max_attempts: 10_000,
        min_source_distance: None,
        omit_wall_time: false,
        parallel_search: false,
        check_invariants: true,
        graph: er_5000(),
        diffusion: DiffusionSpec {
            q: 0.8,
            r: 0.0,
            q_file: None,
        },
        t_policy: TPolicy::default(),
    }
}

/// The configuration behind a preset name, or `None` if unknown.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let config = match name {
        // Exact search at three thresholds with full reporting.
        "fig2" => ExperimentConfig {
            trials: 50,
            thresholds: vec![0, 1, 2],
            thetas: vec![1.0],
            algorithms: vec![Algorithm::Ojc],
            ..base(2, [100, 300])
        },
        "fig3-m2" => base(2, [100, 300]),
        "fig3-m3" => base(3, [200, 400]),
        // Exact search is too slow for four sources.
        "fig3-m4" => ExperimentConfig {
            algorithms: vec![Algorithm::Ajc, Algorithm::Dc, Algorithm::Cc],
            ..base(4, [300, 500])
        },
        // Mean degree is close to 2, so the threshold stays at 2.
        "power-grid" => ExperimentConfig {
            thresholds: vec![2],
            graph: GraphSpec::EdgeList {
                path: PathBuf::from("power_grid.txt"),
            },
            ..base(2, [100, 300])
        },
        _ => return None,
    };
    Some(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for name in PRESETS {
            let c = preset(name).unwrap();
            c.validate().unwrap();
            assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c, "{name}");
        }
        assert!(preset("fig9").is_none());
    }
}
