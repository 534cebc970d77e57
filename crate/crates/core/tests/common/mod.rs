//! Slow but obviously correct reference implementations.

#![allow(dead_code)]

use jordan_cover::graph::Graph;
use jordan_cover::{Hops, NodeSet, UNREACHABLE};

/// All-pairs hop distances by Floyd-Warshall.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Hops>> {
    let n = g.node_count();
    let mut d = vec![vec![UNREACHABLE; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for &u in g.neighbors(v) {
            d[v][u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == UNREACHABLE {
                continue;
            }
            for j in 0..n {
                if d[k][j] != UNREACHABLE && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// (eccentricity, total) of `set` against `observed` under the matrix `d`,
/// with unreachable observations making the set worst.
pub fn score(d: &[Vec<Hops>], set: &[usize], observed: &[usize]) -> (Hops, u64) {
    let mut ecc = 0;
    let mut total = 0u64;
    for &w in observed {
        let best = set.iter().map(|&v| d[w][v]).min().unwrap();
        ecc = ecc.max(best);
        total = total.saturating_add(best as u64);
    }
    (ecc, total)
}

/// Every `m`-subset of `domain` in lexicographic order.
pub fn subsets(domain: &[usize], m: usize) -> Vec<Vec<usize>> {
    fn rec(domain: &[usize], m: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..domain.len() {
            cur.push(domain[i]);
            rec(domain, m, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(domain, m, 0, &mut Vec::new(), &mut out);
    out
}

/// Exhaustive minimum over all subsets of `domain` with the lexicographic
/// final tie-break.
pub fn exhaustive_cover(
    d: &[Vec<Hops>],
    domain: &[usize],
    observed: &[usize],
    m: usize,
) -> Option<(Vec<usize>, (Hops, u64))> {
    subsets(domain, m)
        .into_iter()
        .map(|s| {
            let sc = score(d, &s, observed);
            (s, sc)
        })
        .min_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)))
}

/// Minimum matching cost over every permutation, as a mean.
pub fn permutation_error(d: &[Vec<Hops>], truth: &NodeSet, estimate: &NodeSet) -> Option<f64> {
    let t = truth.as_slice();
    let e = estimate.as_slice();
    let mut idx: Vec<usize> = (0..e.len()).collect();
    let mut best: Option<u64> = None;
    loop {
        let mut cost = Some(0u64);
        for (i, &j) in idx.iter().enumerate() {
            let dist = d[t[i]][e[j]];
            cost = match (cost, dist) {
                (Some(c), x) if x != UNREACHABLE => Some(c + x as u64),
                _ => None,
            };
        }
        if let Some(c) = cost {
            best = Some(best.map_or(c, |b| b.min(c)));
        }
        if !next_permutation(&mut idx) {
            break;
        }
    }
    best.map(|b| b as f64 / t.len() as f64)
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}
