//! Balanced graph bisection minimizing the heaviest cut edge.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::integer::{all_subset_sums, all_subset_sums_traced, Strategy};
use crate::multiset::{parse_positive, parse_u64, Multiset};
use crate::witness::recover_subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub w: u64,
}

/// Undirected graph on vertices `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput(
                "graph needs at least one vertex".into(),
            ));
        }
        for e in &edges {
            if e.a < 1 || e.a > n || e.b < 1 || e.b > n {
                return Err(Error::InvalidInput(format!(
                    "edge {} {} has an endpoint outside 1..={n}",
                    e.a, e.b
                )));
            }
            if e.a == e.b {
                return Err(Error::InvalidInput(format!("self-loop at vertex {}", e.a)));
            }
            if e.w == 0 {
                return Err(Error::InvalidInput(format!(
                    "edge {} {} has weight 0",
                    e.a, e.b
                )));
            }
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }
}

/// Parses `n m` followed by `m` triples `a b w`.
pub fn parse_graph(text: &[u8]) -> Result<WeightedGraph> {
    let mut tokens = text
        .split(|b| b.is_ascii_whitespace())
        .filter(|t| !t.is_empty());
    let header = tokens.next().ok_or(Error::EmptyInput)?;
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| Error::InvalidInput(format!("graph ended before {what}")))
    };
    let n = parse_positive(header)?;
    let m = parse_u64(next("the edge count")?)?;
    let as_vertex = |v: u64| usize::try_from(v).map_err(|_| Error::TooLarge(format!("vertex {v}")));
    let n = as_vertex(n)?;
    let mut edges = Vec::new();
    for k in 0..m {
        let what = format!("edge {}", k + 1);
        let a = as_vertex(parse_u64(next(&what)?)?)?;
        let b = as_vertex(parse_u64(next(&what)?)?)?;
        let w = parse_positive(next(&what)?)?;
        edges.push(Edge { a, b, w });
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse {
            token: String::from_utf8_lossy(extra).into_owned(),
            reason: "trailing token after the last edge",
        });
    }
    WeightedGraph::new(n, edges)
}

/// A balanced bisection and its heaviest crossing edge (0 if none).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub bottleneck: u64,
    /// `side[v - 1]` is true for vertices on side one.
    pub side: Vec<bool>,
}

impl PartitionResult {
    /// Side-one vertices, ascending.
    pub fn side_one(&self) -> Vec<usize> {
        (1..=self.side.len())
            .filter(|&v| self.side[v - 1])
            .collect()
    }
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

/// Components after deleting every edge of weight at most `b`, each as an
/// ascending vertex list (0-based), ordered by smallest vertex.
fn components(g: &WeightedGraph, b: u64) -> Vec<Vec<usize>> {
    let mut dsu = Dsu::new(g.n);
    for e in g.edges.iter().filter(|e| e.w > b) {
        dsu.union(e.a - 1, e.b - 1);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut first: Vec<Option<usize>> = vec![None; g.n];
    for v in 0..g.n {
        let r = dsu.find(v);
        let key = *first[r].get_or_insert(v);
        groups.entry(key).or_default().push(v);
    }
    groups.into_values().collect()
}

fn size_multiset(comps: &[Vec<usize>]) -> Multiset {
    Multiset::from_values(&comps.iter().map(|c| c.len() as u64).collect::<Vec<_>>())
        .expect("component sizes are positive")
}

fn feasible(g: &WeightedGraph, b: u64) -> Result<bool> {
    let half = (g.n / 2) as u64;
    Ok(all_subset_sums(&size_multiset(&components(g, b)), half, Strategy::Sigma)?.contains(half))
}

/// Splits the vertices into halves so that the heaviest crossing edge is as
/// light as possible.
///
/// Threshold `B` deletes edges of weight `<= B`; a cut respecting the
/// remaining components exists iff their sizes have a subset summing to
/// `n / 2`. Feasibility is monotone in `B`, so the smallest feasible value
/// among `{0}` and the edge weights is found by binary search.
pub fn bottleneck_partition(g: &WeightedGraph) -> Result<PartitionResult> {
    if g.n % 2 == 1 {
        return Err(Error::InvalidInput(format!(
            "vertex count {} is odd; halves must be equal",
            g.n
        )));
    }
    let mut candidates: Vec<u64> = std::iter::once(0)
        .chain(g.edges.iter().map(|e| e.w))
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    if !feasible(g, candidates[hi])? {
        return Err(Error::contract("singleton components must always balance"));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(g, candidates[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let b = candidates[lo];

    let comps = components(g, b);
    let half = (g.n / 2) as u64;
    let trace = all_subset_sums_traced(&size_multiset(&comps), half, Strategy::Sigma)?;
    let sizes = recover_subset(&trace, half)?;
    let mut want: BTreeMap<u64, usize> = BTreeMap::new();
    for s in sizes {
        *want.entry(s).or_insert(0) += 1;
    }
    let mut side = vec![false; g.n];
    // comps are ordered by smallest vertex, so equal sizes go lowest-id first
    for c in &comps {
        if let Some(k) = want.get_mut(&(c.len() as u64)).filter(|k| **k > 0) {
            *k -= 1;
            for &v in c {
                side[v] = true;
            }
        }
    }
    let crossing = g
        .edges
        .iter()
        .filter(|e| side[e.a - 1] != side[e.b - 1])
        .map(|e| e.w)
        .max()
        .unwrap_or(0);
    assert_eq!(
        crossing, b,
        "reported bottleneck must be the heaviest cut edge"
    );
    assert_eq!(side.iter().filter(|&&s| s).count() as u64, half);
    Ok(PartitionResult {
        bottleneck: b,
        side,
    })
}
