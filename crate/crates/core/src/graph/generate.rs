use rand::Rng;

use super::{Graph, NodeId};

/// Erdős–Rényi G(n, p): every unordered pair is an edge independently with
/// probability `p`. Pairs are visited in lexicographic order, one uniform draw
/// each, so the output is a pure function of the rng state.
pub fn generate_er<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    assert!((0.0..=1.0).contains(&p), "wiring probability {p} outside [0, 1]");
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    if p > 0.0 {
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < p {
                    edges.push((u, v));
                }
            }
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extreme_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(generate_er(5, 0.0, &mut rng).edge_count(), 0);
        let k5 = generate_er(5, 1.0, &mut rng);
        assert_eq!(k5.edge_count(), 10);
        assert!((0..5).all(|v| k5.degree(v) == 4));
    }

    #[test]
    fn same_seed_same_graph() {
        let a = generate_er(300, 0.05, &mut ChaCha8Rng::seed_from_u64(9));
        let b = generate_er(300, 0.05, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        let c = generate_er(300, 0.05, &mut ChaCha8Rng::seed_from_u64(10));
        assert_ne!(a, c);
    }

    #[test]
    fn mean_degree_concentrates() {
        // Binomial(12_497_500, 0.002) edges: mean degree 9.996, sd about 0.063,
        // so [9, 11] is more than 15 standard deviations wide on each side.
        for seed in 0..5 {
            let g = generate_er(5000, 0.002, &mut ChaCha8Rng::seed_from_u64(seed));
            let mean = g.mean_degree();
            assert!((9.0..=11.0).contains(&mean), "seed {seed}: mean degree {mean}");
        }
    }
}
