//! Solution recovery.
//!
//! Engines can record their combine tree as a [`Trace`]; walking it top-down
//! yields a subset for any realizable target. The [`size_oracle`] /
//! [`sum_oracle`] pair and [`witness_function`] provide the independent,
//! polynomial-product route to witnesses of a single sumset.

use std::collections::{BTreeMap, HashMap};

use crate::bits::BitSet;
use crate::convolution::{count_conv, CountMode, CountVector, COUNT_MODULUS};
use crate::error::{Error, Result};
use crate::multiset::Multiset;
use crate::sumset::{CardSumSet, Mode, SumSet};

/// One node of a recorded combine tree. Each node stores the sumset it
/// produced; element values are expressed in the node's own coordinates.
#[derive(Debug, Clone)]
pub enum Node {
    /// Sums of an explicit element list.
    Leaf { elements: Vec<u64>, sums: SumSet },
    /// `sums = left + right` (capped or cyclic, per the mode of `sums`).
    Combine {
        left: Box<Node>,
        right: Box<Node>,
        sums: SumSet,
    },
    /// Integer sums of the child mapped by `s -> s * multiplier mod m`.
    Scaled {
        child: Box<Node>,
        multiplier: u64,
        sums: SumSet,
    },
    /// Residues mod `m / pivot` lifted to `Z_m` by multiplying with `pivot`.
    Lifted {
        child: Box<Node>,
        pivot: u64,
        sums: SumSet,
    },
    /// Sum-axis projection of a sheared cardinality grid.
    Projected { grid: Box<GridNode>, sums: SumSet },
}

/// Node of a recorded cardinality-grid recursion. Cell `(s, j)` of a node
/// stands for `j` of its elements summing to `s + offset * j`.
#[derive(Debug, Clone)]
pub enum GridNode {
    Leaf {
        elements: Vec<u64>,
        offset: u64,
        grid: CardSumSet,
    },
    Combine {
        left: Box<GridNode>,
        right: Box<GridNode>,
        offset: u64,
        grid: CardSumSet,
    },
}

impl Node {
    pub fn sums(&self) -> &SumSet {
        match self {
            Node::Leaf { sums, .. }
            | Node::Combine { sums, .. }
            | Node::Scaled { sums, .. }
            | Node::Lifted { sums, .. }
            | Node::Projected { sums, .. } => sums,
        }
    }

    fn recover(&self, t: u64, out: &mut Vec<u64>) -> Result<()> {
        let sums = self.sums();
        if !sums.contains(t) {
            return Err(Error::NotRealizable(t));
        }
        match self {
            Node::Leaf { elements, sums } => {
                out.extend(leaf_subset(elements, sums.modulus(), t)?);
                Ok(())
            }
            Node::Combine { left, right, sums } => {
                let m = sums.modulus();
                let (ls, rs) = (left.sums(), right.sums());
                let split = ls.members().find_map(|a| {
                    let b = match m {
                        Some(m) => (t + m - a % m) % m,
                        None if a <= t => t - a,
                        None => return None,
                    };
                    rs.contains(b).then_some((a, b))
                });
                let (a, b) = split
                    .ok_or_else(|| Error::contract(format!("combine node lost witness for {t}")))?;
                left.recover(a, out)?;
                right.recover(b, out)
            }
            Node::Scaled {
                child,
                multiplier,
                sums,
            } => {
                let m = sums.modulus().expect("scaled nodes are cyclic");
                let sigma = child
                    .sums()
                    .members()
                    .find(|&s| crate::number::mul_mod(s, *multiplier, m) == t)
                    .ok_or_else(|| Error::contract("scaled node lost witness"))?;
                let start = out.len();
                child.recover(sigma, out)?;
                for v in &mut out[start..] {
                    *v = crate::number::mul_mod(*v, *multiplier, m);
                }
                Ok(())
            }
            Node::Lifted { child, pivot, .. } => {
                debug_assert_eq!(t % pivot, 0);
                let start = out.len();
                child.recover(t / pivot, out)?;
                for v in &mut out[start..] {
                    *v *= pivot;
                }
                Ok(())
            }
            Node::Projected { grid, .. } => {
                let (g, offset) = (grid.grid(), grid.offset());
                let cell = (0..=g.alpha())
                    .take_while(|&j| offset * j <= t)
                    .map(|j| (t - offset * j, j))
                    .find(|&(s, j)| g.contains(s, j))
                    .ok_or_else(|| Error::contract("projection lost witness"))?;
                grid.recover(cell.0, cell.1, out)
            }
        }
    }
}

impl GridNode {
    pub fn grid(&self) -> &CardSumSet {
        match self {
            GridNode::Leaf { grid, .. } | GridNode::Combine { grid, .. } => grid,
        }
    }

    pub fn offset(&self) -> u64 {
        match self {
            GridNode::Leaf { offset, .. } | GridNode::Combine { offset, .. } => *offset,
        }
    }

    fn recover(&self, s: u64, j: u64, out: &mut Vec<u64>) -> Result<()> {
        match self {
            GridNode::Leaf {
                elements, offset, ..
            } => {
                let k = elements.len();
                let mask = (0u32..1 << k)
                    .filter(|mask| mask.count_ones() as u64 == j)
                    .find(|mask| {
                        (0..k)
                            .filter(|b| mask >> b & 1 == 1)
                            .map(|b| elements[b] - offset)
                            .sum::<u64>()
                            == s
                    })
                    .ok_or_else(|| Error::contract("grid leaf lost witness"))?;
                out.extend((0..k).filter(|b| mask >> b & 1 == 1).map(|b| elements[b]));
                Ok(())
            }
            GridNode::Combine {
                left,
                right,
                offset,
                ..
            } => {
                let rg = right.grid();
                let gap = right.offset() - offset;
                let (s1, j1, s2) = left
                    .grid()
                    .pairs()
                    .filter(|&(_, j1)| j1 <= j)
                    .find_map(|(s1, j1)| {
                        let used = s1 + gap * (j - j1);
                        (used <= s && rg.contains(s - used, j - j1)).then(|| (s1, j1, s - used))
                    })
                    .ok_or_else(|| Error::contract("grid combine lost witness"))?;
                left.recover(s1, j1, out)?;
                right.recover(s2, j - j1, out)
            }
        }
    }
}

/// A subset of `elements` reaching `t` (exactly, or modulo `m`).
fn leaf_subset(elements: &[u64], modulus: Option<u64>, t: u64) -> Result<Vec<u64>> {
    let hit = |sum: u128| match modulus {
        Some(m) => sum % m as u128 == t as u128,
        None => sum == t as u128,
    };
    if elements.len() <= 12 {
        let k = elements.len();
        let mask = (0u32..1 << k)
            .find(|mask| {
                hit((0..k)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| elements[b] as u128)
                    .sum())
            })
            .ok_or(Error::NotRealizable(t))?;
        return Ok((0..k)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| elements[b])
            .collect());
    }
    if modulus.is_some() {
        return Err(Error::contract("long cyclic leaves are never recorded"));
    }
    // Reachability DP remembering the first item that reached each sum; the
    // item recorded for s - w was processed strictly earlier, so the walk
    // back uses each item at most once.
    let len = t as usize + 1;
    let mut via = vec![u32::MAX; len];
    let mut reach = BitSet::new(len);
    reach.insert(0);
    for (k, &w) in elements.iter().enumerate() {
        if w > t {
            continue;
        }
        let mut next = reach.clone();
        next.or_shifted(&reach, w as usize);
        for s in next.ones() {
            if via[s] == u32::MAX && s != 0 && !reach.get(s) {
                via[s] = k as u32;
            }
        }
        reach = next;
        if reach.get(len - 1) {
            break;
        }
    }
    if !reach.get(len - 1) {
        return Err(Error::NotRealizable(t));
    }
    let mut out = Vec::new();
    let mut s = len - 1;
    while s != 0 {
        let w = elements[via[s] as usize];
        out.push(w);
        s -= w as usize;
    }
    Ok(out)
}

/// A recorded run of an engine, from which subsets can be recovered.
#[derive(Debug, Clone)]
pub struct Trace {
    root: Node,
    /// Input multiset before multiplicity normalization, when there was one.
    original: Option<Multiset>,
}

impl Trace {
    pub(crate) fn new(root: Node, original: Option<Multiset>) -> Self {
        Trace { root, original }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// The engine's final sumset.
    pub fn sums(&self) -> &SumSet {
        self.root.sums()
    }
}

/// A sub(multi)set of the traced input summing to `t` (modulo `m` for cyclic
/// traces), ascending. Errors with [`Error::NotRealizable`] when `t` is not
/// in the root sumset.
pub fn recover_subset(trace: &Trace, t: u64) -> Result<Vec<u64>> {
    let mut picked = Vec::new();
    trace.root.recover(t, &mut picked)?;
    if let Some(original) = &trace.original {
        picked = expand_to_original(original, &picked)?;
    }
    picked.sort_unstable();
    Ok(picked)
}

/// Rewrites normalized elements (each possibly a doubled merge of smaller
/// copies) as copies of the original input.
///
/// Every value belongs to the chain `b, 2b, 4b, ...` of its odd part. Walking
/// values from largest to smallest, the demand at a value is met with
/// original copies first; the shortfall is passed down as twice the demand at
/// half the value.
pub(crate) fn expand_to_original(original: &Multiset, used: &[u64]) -> Result<Vec<u64>> {
    let mut demand: BTreeMap<u64, u64> = BTreeMap::new();
    for &v in used {
        *demand.entry(v).or_insert(0) += 1;
    }
    let mut out = Vec::with_capacity(used.len());
    while let Some((v, d)) = demand.pop_last() {
        let take = d.min(original.multiplicity(v));
        out.extend(std::iter::repeat_n(v, take as usize));
        let short = d - take;
        if short > 0 {
            if v % 2 == 1 {
                return Err(Error::contract(format!("cannot expand value {v}")));
            }
            *demand.entry(v / 2).or_insert(0) += 2 * short;
        }
    }
    Ok(out)
}

/// Oracle query: hidden sets are `W_i = {x in X : i - x in Y}`; `q` is a
/// subset of the support of `X`.
#[derive(Debug, Clone)]
pub struct WitnessQuery<'a> {
    x: &'a SumSet,
    y: &'a SumSet,
    q: Vec<u64>,
}

impl<'a> WitnessQuery<'a> {
    pub fn new(x: &'a SumSet, y: &'a SumSet, q: Vec<u64>) -> Result<Self> {
        if x.mode() != Mode::Capped || y.mode() != Mode::Capped {
            return Err(Error::contract("witness queries need capped operands"));
        }
        if let Some(bad) = q.iter().find(|&&v| !x.contains(v)) {
            return Err(Error::contract(format!("query element {bad} not in X")));
        }
        Ok(WitnessQuery { x, y, q })
    }

    fn out_bound(&self) -> u64 {
        self.x.bound() + self.y.bound()
    }

    fn chi_y(&self, mode: CountMode) -> CountVector {
        let mut c = vec![0u64; self.y.bound() as usize + 1];
        for v in self.y.members() {
            c[v as usize] = 1;
        }
        CountVector::from_counts(&c, mode)
    }
}

/// `|W_i ∩ Q|` for every `i` in `[0, bound(X) + bound(Y)]`, from the
/// product `chi_Q * chi_Y`.
pub fn size_oracle(query: &WitnessQuery) -> Vec<u64> {
    let mut c = vec![0u64; query.x.bound() as usize + 1];
    for &v in &query.q {
        c[v as usize] = 1;
    }
    let chi_q = CountVector::from_counts(&c, CountMode::Modular);
    let prod = count_conv(&chi_q, &query.chi_y(CountMode::Modular), query.out_bound())
        .expect("same counting mode");
    prod.modular().expect("modular").to_vec()
}

/// `Σ_{x in W_i ∩ Q} x` for every `i`, from the product `I_Q * chi_Y` with
/// `I_Q(z) = Σ_{i in Q} i z^i`.
pub fn sum_oracle(query: &WitnessQuery) -> Vec<u128> {
    let max_total = query.q.iter().map(|&v| v as u128).sum::<u128>();
    let mode = if max_total < COUNT_MODULUS as u128 {
        CountMode::Modular
    } else {
        CountMode::Exact
    };
    let mut c = vec![0u64; query.x.bound() as usize + 1];
    for &v in &query.q {
        c[v as usize] = v;
    }
    let i_q = CountVector::from_counts(&c, mode);
    let prod = count_conv(&i_q, &query.chi_y(mode), query.out_bound()).expect("same counting mode");
    (0..=prod.bound())
        .map(|i| {
            let v = prod.get(i);
            let digits = v.to_u64_digits();
            digits.first().copied().unwrap_or(0) as u128
                | (digits.get(1).copied().unwrap_or(0) as u128) << 64
        })
        .collect()
}

/// For every `i` in `(X + Y) ∩ [0, cap]`, a witness `x in X` with
/// `i - x in Y` (index `i` of the result; `None` outside the sumset).
///
/// Targets with a unique witness read it off `Sum / Size` directly; the rest
/// are resolved by halving the query interval over the support of `X`, one
/// oracle pair per distinct active interval per round.
pub fn witness_function(x: &SumSet, y: &SumSet, cap: u64) -> Result<Vec<Option<u64>>> {
    let support: Vec<u64> = x.members().collect();
    let mut out = vec![None; cap as usize + 1];
    if support.is_empty() {
        return Ok(out);
    }
    let full = WitnessQuery::new(x, y, support.clone())?;
    let sizes = size_oracle(&full);
    let sums = sum_oracle(&full);

    // target -> (interval lo, interval hi, witnesses inside, their sum)
    let mut active: Vec<(u64, usize, usize, u64, u128)> = Vec::new();
    for i in 0..=cap.min(full.out_bound()) {
        let c = sizes[i as usize];
        match c {
            0 => {}
            1 => out[i as usize] = Some(sums[i as usize] as u64),
            _ => active.push((i, 0, support.len(), c, sums[i as usize])),
        }
    }
    while !active.is_empty() {
        let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, &(_, lo, hi, _, _)) in active.iter().enumerate() {
            groups.entry((lo, hi)).or_default().push(k);
        }
        let mut next = Vec::new();
        let mut keys: Vec<_> = groups.keys().copied().collect();
        keys.sort_unstable();
        for (lo, hi) in keys {
            let mid = lo + (hi - lo) / 2;
            let q = WitnessQuery::new(x, y, support[lo..mid].to_vec())?;
            let (ls, lsum) = (size_oracle(&q), sum_oracle(&q));
            for &k in &groups[&(lo, hi)] {
                let (i, _, _, c, s) = active[k];
                let (cl, sl) = (ls[i as usize], lsum[i as usize]);
                let state = if cl >= 1 {
                    (i, lo, mid, cl, sl)
                } else {
                    (i, mid, hi, c - cl, s - sl)
                };
                if state.3 == 1 {
                    out[i as usize] = Some(state.4 as u64);
                } else {
                    next.push(state);
                }
            }
        }
        active = next;
    }
    Ok(out)
}

/// The lexicographically smallest ascending sub-multiset of `s` summing to
/// exactly `t`.
///
/// Greedy over distinct values: take as many copies of the current value as
/// still leave the remainder reachable by larger values. Reachability by
/// suffixes is recomputed block-wise from sqrt-spaced checkpoints, so memory
/// stays at `O(sqrt(n') * t)` bits.
pub fn canonical_subset(s: &Multiset, t: u64) -> Result<Vec<u64>> {
    crate::sumset::check_bound(t)?;
    let groups: Vec<(u64, u64)> = s.entries().iter().copied().filter(|e| e.0 <= t).collect();
    let k = groups.len();
    let len = t as usize + 1;
    let add_group = |set: &BitSet, (v, c): (u64, u64)| {
        let mut cur = set.clone();
        let mut left = c;
        let mut chunk = 1u64;
        while left > 0 {
            let take = chunk.min(left);
            let shift = take.saturating_mul(v);
            if shift < len as u64 {
                let prev = cur.clone();
                cur.or_shifted(&prev, shift as usize);
            }
            left -= take;
            chunk = chunk.saturating_mul(2);
        }
        cur
    };
    let mut empty = BitSet::new(len);
    empty.insert(0);

    let block = ((k as f64).sqrt().ceil() as usize).max(1);
    // checkpoints[j] = sums of groups[j * block ..]
    let mut checkpoints: Vec<BitSet> = vec![BitSet::new(0); k / block + 1];
    let mut cur = empty.clone();
    for i in (0..k).rev() {
        cur = add_group(&cur, groups[i]);
        if i % block == 0 {
            checkpoints[i / block] = cur.clone();
        }
    }
    let whole = if k == 0 {
        empty.clone()
    } else {
        checkpoints[0].clone()
    };
    if !whole.get(t as usize) {
        return Err(Error::NotRealizable(t));
    }

    let mut out = Vec::new();
    let mut rem = t;
    let mut start = 0;
    while start < k && rem > 0 {
        let end = (start + block).min(k);
        // suffix[i] for i in start+1 ..= end, computed from the checkpoint at end
        let mut suffix: Vec<BitSet> = Vec::with_capacity(end - start);
        let mut cur = if end == k {
            empty.clone()
        } else {
            checkpoints[end / block].clone()
        };
        suffix.push(cur.clone());
        for i in (start + 1..end).rev() {
            cur = add_group(&cur, groups[i]);
            suffix.push(cur.clone());
        }
        suffix.reverse(); // suffix[i - start - 1] = sums of groups[i..]
        for i in start..end {
            let (v, c) = groups[i];
            let later = &suffix[i - start];
            let take = (0..=c.min(rem / v))
                .rev()
                .find(|&n| later.get((rem - n * v) as usize))
                .expect("remainder stays reachable");
            out.extend(std::iter::repeat_n(v, take as usize));
            rem -= take * v;
            if rem == 0 {
                break;
            }
        }
        start = end;
    }
    debug_assert_eq!(rem, 0);
    Ok(out)
}
