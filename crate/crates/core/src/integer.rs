//! Subset sums over the integers, capped at `u`.

use crate::baselines;
use crate::build::{Built, BuiltGrid};
use crate::convolution::{bool_conv, bool_conv_2d};
use crate::error::{Error, Result};
use crate::multiset::{normalize_multiset, split_into_two_sets, Multiset};
use crate::sumset::{check_bound, CardSumSet, SumSet};
use crate::witness::Trace;

/// Leaves of the halving recursions are enumerated directly.
const LEAF_SIZE: usize = 4;

/// Sums at least this large run the two halves on separate threads.
const PAR_MIN_SUM: u64 = 1 << 14;

/// Per-set algorithm used by [`all_subset_sums`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Pick the cheapest of the others by predicted cost.
    Auto,
    /// Halving recursion bounded by the set's total.
    Sigma,
    /// Geometric layering with `r0 = u / sqrt(n)`.
    R0Sqrt,
    /// Geometric layering with `r0 = u^(2/3)`.
    R0TwoThirds,
    /// Geometric layering with whichever `r0` predicts cheaper.
    Main,
    /// Word-parallel dynamic program.
    Dp,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Auto,
        Strategy::Sigma,
        Strategy::R0Sqrt,
        Strategy::R0TwoThirds,
        Strategy::Main,
        Strategy::Dp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Auto => "auto",
            Strategy::Sigma => "sigma",
            Strategy::R0Sqrt => "r0-sqrt",
            Strategy::R0TwoThirds => "r0-twothirds",
            Strategy::Main => "main",
            Strategy::Dp => "dp",
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown algorithm {s:?}")))
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_set(s: &[u64]) -> Result<Vec<u64>> {
    let mut v = s.to_vec();
    v.sort_unstable();
    if v.first() == Some(&0) {
        return Err(Error::contract("set elements must be positive"));
    }
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::contract(format!("duplicate element {}", w[0])));
    }
    Ok(v)
}

/// All subset sums of a set, over `[0, σ]`.
pub fn all_sums_sigma(s: &[u64]) -> Result<SumSet> {
    let v = check_set(s)?;
    let sigma: u128 = v.iter().map(|&x| x as u128).sum();
    if sigma > crate::sumset::MAX_BOUND as u128 {
        return Err(Error::TooLarge(format!(
            "total {sigma} exceeds the sumset size limit"
        )));
    }
    Ok(sums_capped(&v, sigma as u64, false).into_sums())
}

/// Sums of the sorted set `v` capped at `cap`; each node caps at the smaller
/// of `cap` and its own total.
pub(crate) fn sums_capped(v: &[u64], cap: u64, record: bool) -> Built {
    let total = v.iter().fold(0u64, |acc, &x| acc.saturating_add(x));
    let node_cap = cap.min(total);
    if v.len() <= LEAF_SIZE {
        let mut sums = SumSet::empty_capped(node_cap);
        for mask in 0u32..1 << v.len() {
            let s: u64 = (0..v.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| v[b])
                .sum();
            if s <= node_cap {
                sums.insert(s);
            }
        }
        return Built::leaf(v, sums, record);
    }
    let (lv, rv) = v.split_at(v.len() / 2);
    let (l, r) = if node_cap >= PAR_MIN_SUM {
        rayon::join(
            || sums_capped(lv, cap, record),
            || sums_capped(rv, cap, record),
        )
    } else {
        (sums_capped(lv, cap, record), sums_capped(rv, cap, record))
    };
    let sums = bool_conv(l.sums(), r.sums(), node_cap);
    Built::combine(l, r, sums)
}

fn check_interval(s: &[u64], x: u64, len: u64) -> Result<Vec<u64>> {
    let v = check_set(s)?;
    if x == 0 {
        return Err(Error::contract("interval must start at 1 or later"));
    }
    if let Some(bad) = v.iter().find(|&&e| e < x || e - x > len) {
        return Err(Error::contract(format!(
            "element {bad} outside [{x}, {}]",
            x.saturating_add(len)
        )));
    }
    Ok(v)
}

/// All `(sum, cardinality)` pairs of subsets of `s ⊆ [x, x + len]` with at
/// most `alpha` elements.
pub fn capped_interval_sums(s: &[u64], x: u64, len: u64, alpha: u64) -> Result<CardSumSet> {
    let v = check_interval(s, x, len)?;
    if alpha == 0 {
        return Err(Error::contract("cardinality cap must be at least 1"));
    }
    let alpha_eff = alpha.min(v.len() as u64);
    let width = (x as u128 + len as u128) * alpha_eff as u128;
    if (width + 1) * (alpha_eff as u128 + 1) > crate::sumset::MAX_BOUND as u128 {
        return Err(Error::TooLarge(
            "cardinality grid exceeds the size limit".into(),
        ));
    }
    let mut out = CardSumSet::zero(width as u64, alpha_eff);
    if let Some(&x0) = v.first() {
        for (s, j) in sheared_sums(&v, alpha, u64::MAX, false).into_grid().pairs() {
            out.insert(s + x0 * j, j);
        }
    }
    Ok(out)
}

/// Grid of `(Σ (e - v[0]), |T|)` over subsets `T` of the non-empty sorted
/// set `v` with `|T| <= alpha` and true sum `Σ e <= limit`. Shearing by the
/// node's own minimum keeps each grid only as wide as the node's value range
/// times its cardinality.
fn sheared_sums(v: &[u64], alpha: u64, limit: u64, record: bool) -> BuiltGrid {
    let x = v[0];
    let card = alpha.min(v.len() as u64);
    let width = ((v[v.len() - 1] - x) * card).min(limit.saturating_sub(x));
    let fits = |s: u64, j: u64| s <= width && (x as u128 * j as u128 + s as u128) <= limit as u128;
    if v.len() <= LEAF_SIZE {
        let mut grid = CardSumSet::empty(width, card);
        for mask in 0u32..1 << v.len() {
            let j = mask.count_ones() as u64;
            if j <= card {
                let s = (0..v.len())
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| v[b] - x)
                    .sum();
                if fits(s, j) {
                    grid.insert(s, j);
                }
            }
        }
        return BuiltGrid::leaf(v, x, grid, record);
    }
    // lower median goes left
    let (lv, rv) = v.split_at((v.len() - 1) / 2 + 1);
    let (l, r) = if width >= PAR_MIN_SUM {
        rayon::join(
            || sheared_sums(lv, alpha, limit, record),
            || sheared_sums(rv, alpha, limit, record),
        )
    } else {
        (
            sheared_sums(lv, alpha, limit, record),
            sheared_sums(rv, alpha, limit, record),
        )
    };
    // move the right grid from its own minimum to ours
    let gap = rv[0] - x;
    let rg = r.grid();
    let mut shifted = CardSumSet::empty(rg.width() + gap * rg.alpha(), rg.alpha());
    for (s, j) in rg.pairs() {
        shifted.insert(s + gap * j, j);
    }
    let full = bool_conv_2d(l.grid(), &shifted, width, card);
    let mut grid = CardSumSet::empty(width, card);
    for (s, j) in full.pairs().filter(|&(s, j)| fits(s, j)) {
        grid.insert(s, j);
    }
    BuiltGrid::combine(l, r, x, grid)
}

/// Subset sums of `s ⊆ [x, x + len]` up to `u`: at most `u / x` elements fit.
pub fn interval_sums(s: &[u64], x: u64, len: u64, u: u64) -> Result<SumSet> {
    let v = check_interval(s, x, len)?;
    check_bound(u)?;
    Ok(interval_built(&v, x, u, false).into_sums())
}

fn interval_built(v: &[u64], x: u64, u: u64, record: bool) -> Built {
    let alpha = u / x;
    if alpha == 0 || v.is_empty() {
        return Built::leaf(&[], SumSet::zero_capped(u), record);
    }
    let grid = sheared_sums(v, alpha, u, record);
    let x0 = v[0];
    let mut sums = SumSet::empty_capped(u);
    for (s, j) in grid.grid().pairs() {
        let total = s + x0 * j;
        if total <= u {
            sums.insert(total);
        }
    }
    Built::projected(grid, sums)
}

/// One layer of a [`Layering`]: values in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub lo: u64,
    pub hi: u64,
    pub values: Vec<u64>,
}

/// Partition of `[1, u]` into `[1, r0]` and the doubling ranges
/// `[r_{i-1} + 1, r_i]` with `r_i = 2^i * r0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    pub r0: u64,
    pub layers: Vec<Layer>,
}

impl Layering {
    /// Number of layers.
    pub fn nu(&self) -> usize {
        self.layers.len()
    }
}

/// Buckets the set `s` into geometric layers covering `[1, u]`. Values above
/// `u` are dropped.
pub fn partition_geometric(s: &[u64], u: u64, r0: u64) -> Result<Layering> {
    if r0 < 1 || r0 > u {
        return Err(Error::contract(format!("r0 = {r0} outside [1, {u}]")));
    }
    let mut v = check_set(s)?;
    v.retain(|&e| e <= u);
    let mut layers = vec![Layer {
        lo: 1,
        hi: r0,
        values: Vec::new(),
    }];
    while layers.last().unwrap().hi < u {
        let prev = layers.last().unwrap().hi;
        layers.push(Layer {
            lo: prev + 1,
            hi: 2 * prev,
            values: Vec::new(),
        });
    }
    let mut k = 0;
    for e in v {
        while layers[k].hi < e {
            k += 1;
        }
        layers[k].values.push(e);
    }
    Ok(Layering { r0, layers })
}

/// `Σ_u` of every layer.
pub fn layer_sums(l: &Layering, u: u64) -> Result<Vec<SumSet>> {
    check_bound(u)?;
    Ok(layer_built(l, u, false)
        .into_iter()
        .map(Built::into_sums)
        .collect())
}

fn layer_built(l: &Layering, u: u64, record: bool) -> Vec<Built> {
    use rayon::prelude::*;
    l.layers
        .par_iter()
        .enumerate()
        .map(|(i, layer)| {
            if i == 0 {
                sums_capped(&layer.values, u, record)
            } else {
                interval_built(&layer.values, layer.lo, u, record)
            }
        })
        .collect()
}

/// `(P ⊕ T) ∩ [0, u]` folded over the layers in order.
fn chain(parts: Vec<Built>, u: u64) -> Built {
    let mut it = parts.into_iter();
    let mut acc = it.next().expect("at least one layer");
    for t in it {
        let sums = bool_conv(acc.sums(), t.sums(), u);
        acc = Built::combine(acc, t, sums);
    }
    acc
}

fn r0_sqrt(n: usize, u: u64) -> u64 {
    ((u as f64 / (n.max(1) as f64).sqrt()) as u64).clamp(1, u)
}

fn r0_two_thirds(u: u64) -> u64 {
    let mut r = (u as f64).powf(2.0 / 3.0) as u64;
    // r^3 <= u^2 < (r + 1)^3
    while r > 0 && (r as u128).pow(3) > (u as u128).pow(2) {
        r -= 1;
    }
    while ((r + 1) as u128).pow(3) <= (u as u128).pow(2) {
        r += 1;
    }
    r.clamp(1, u)
}

/// Predicted costs (unit constants) used for strategy selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    pub sqrt_layers: f64,
    pub two_thirds_layers: f64,
    pub sigma: f64,
    pub dp: f64,
}

impl CostModel {
    pub fn new(n: usize, u: u64, sigma: u128) -> Self {
        let n = n.max(1) as f64;
        let uf = u.max(2) as f64;
        let lu = uf.log2();
        let sf = (sigma.max(2)) as f64;
        CostModel {
            sqrt_layers: n.sqrt() * uf * lu.powf(2.5),
            two_thirds_layers: uf.powf(4.0 / 3.0) * lu * lu,
            sigma: sf * sf.log2() * (n * lu).max(2.0).log2(),
            dp: n * uf / 64.0,
        }
    }

    fn pick(&self, allowed: &[Strategy]) -> Strategy {
        let cost = |s: Strategy| match s {
            Strategy::Sigma => self.sigma,
            Strategy::R0Sqrt => self.sqrt_layers,
            Strategy::R0TwoThirds => self.two_thirds_layers,
            Strategy::Dp => self.dp,
            Strategy::Auto | Strategy::Main => f64::INFINITY,
        };
        allowed
            .iter()
            .copied()
            .min_by(|&a, &b| cost(a).total_cmp(&cost(b)))
            .expect("non-empty choice")
    }
}

fn set_built(v: &[u64], u: u64, strategy: Strategy, record: bool) -> Built {
    if v.is_empty() {
        return Built::leaf(&[], SumSet::zero_capped(u), record);
    }
    let sigma: u128 = v.iter().map(|&x| x as u128).sum();
    let costs = CostModel::new(v.len(), u, sigma);
    let strategy = match strategy {
        Strategy::Auto => costs.pick(&[
            Strategy::Sigma,
            Strategy::R0Sqrt,
            Strategy::R0TwoThirds,
            Strategy::Dp,
        ]),
        Strategy::Main => costs.pick(&[Strategy::R0Sqrt, Strategy::R0TwoThirds]),
        s => s,
    };
    let layered = |r0: u64| {
        let layering = partition_geometric(v, u, r0).expect("validated set");
        chain(layer_built(&layering, u, record), u)
    };
    match strategy {
        Strategy::Sigma => sums_capped(v, u, record),
        Strategy::R0Sqrt => layered(r0_sqrt(v.len(), u)),
        Strategy::R0TwoThirds => layered(r0_two_thirds(u)),
        Strategy::Dp => {
            let ms = Multiset::from_values(v).expect("validated set");
            Built::leaf(
                v,
                baselines::bellman_dp(&ms, u).expect("checked bound"),
                record,
            )
        }
        Strategy::Auto | Strategy::Main => unreachable!(),
    }
}

/// `Σ_u(S)`: every subset sum of the multiset `s` that is at most `u`.
pub fn all_subset_sums(s: &Multiset, u: u64, strategy: Strategy) -> Result<SumSet> {
    Ok(subset_sums_built(s, u, strategy, false)?.into_sums())
}

/// As [`all_subset_sums`], recording the combine tree for recovery.
pub fn all_subset_sums_traced(s: &Multiset, u: u64, strategy: Strategy) -> Result<Trace> {
    let root = subset_sums_built(s, u, strategy, true)?.into_node();
    Ok(Trace::new(root, Some(s.clone())))
}

fn subset_sums_built(s: &Multiset, u: u64, strategy: Strategy, record: bool) -> Result<Built> {
    check_bound(u)?;
    let t = normalize_multiset(s, u);
    if strategy == Strategy::Dp {
        let sums = baselines::bellman_dp(&t, u)?;
        return Ok(Built::leaf(&t.expanded(), sums, record));
    }
    let (p, q) = split_into_two_sets(&t)?;
    let (pb, qb) = rayon::join(
        || set_built(&p, u, strategy, record),
        || set_built(&q, u, strategy, record),
    );
    let sums = bool_conv(pb.sums(), qb.sums(), u);
    Ok(Built::combine(pb, qb, sums))
}
