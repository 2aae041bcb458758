#![allow(dead_code)]

use sumsetkit::graph::WeightedGraph;

/// Heaviest crossing edge of the best balanced cut, by trying every cut.
pub fn exhaustive_bottleneck(g: &WeightedGraph) -> u64 {
    let n = g.vertex_count();
    let mut best = u64::MAX;
    for mask in 0u32..1 << n {
        if mask.count_ones() as usize != n / 2 || mask & 1 == 0 {
            continue;
        }
        let side = |v: usize| mask >> (v - 1) & 1 == 1;
        let w = g
            .edges()
            .iter()
            .filter(|e| side(e.a) != side(e.b))
            .map(|e| e.w)
            .max()
            .unwrap_or(0);
        best = best.min(w);
    }
    best
}

/// Swing counts by enumerating every coalition.
pub fn enumerate_swings(weights: &[u64], quota: u64) -> Vec<u64> {
    let n = weights.len();
    let mut swings = vec![0u64; n];
    for mask in 0u32..1 << n {
        let total: u64 = (0..n)
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| weights[b])
            .sum();
        for i in 0..n {
            if mask >> i & 1 == 0 && total < quota && total + weights[i] >= quota {
                swings[i] += 1;
            }
        }
    }
    swings
}

/// Subset counts by enumeration, indexed by sum up to `u`.
pub fn enumerate_counts(s: &[u64], u: u64) -> Vec<u64> {
    let mut c = vec![0u64; u as usize + 1];
    for mask in 0u32..1 << s.len() {
        let t: u64 = (0..s.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| s[b])
            .sum();
        if t <= u {
            c[t as usize] += 1;
        }
    }
    c
}

/// The `(sum, size)` pairs with sum at most `u`, sorted.
pub fn enumerate_card(s: &[u64], u: u64) -> Vec<(u64, u64)> {
    let mut out = std::collections::BTreeSet::new();
    for mask in 0u32..1 << s.len() {
        let t: u64 = (0..s.len())
            .filter(|&b| mask >> b & 1 == 1)
            .map(|b| s[b])
            .sum();
        if t <= u {
            out.insert((t, mask.count_ones() as u64));
        }
    }
    out.into_iter().collect()
}
