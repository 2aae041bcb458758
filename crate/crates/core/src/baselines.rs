//! Reference algorithms used to cross-check the engines.

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::multiset::{normalize_multiset, Multiset};
use crate::sumset::{check_bound, CardSumSet, Mode, SumSet};

/// Largest expanded input accepted by the enumeration oracles.
pub const BRUTE_FORCE_LIMIT: u64 = 24;

/// Reachability DP over the normalized multiset, one shift-or per copy.
pub fn bellman_dp(s: &Multiset, u: u64) -> Result<SumSet> {
    check_bound(u)?;
    let len = u as usize + 1;
    let mut reach = BitSet::new(len);
    reach.insert(0);
    for w in normalize_multiset(s, u).expanded() {
        let prev = reach.clone();
        reach.or_shifted(&prev, w as usize);
    }
    Ok(SumSet::from_bits(Mode::Capped, reach))
}

fn guard(s: &Multiset) -> Result<Vec<u64>> {
    if s.len() > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "{} elements exceed the enumeration limit of {BRUTE_FORCE_LIMIT}",
            s.len()
        )));
    }
    Ok(s.expanded())
}

/// Sum of every subset (as 128-bit integers), enumerated by Gray-code walk.
fn all_subset_totals(v: &[u64], mut visit: impl FnMut(u128)) {
    let mut total = 0u128;
    visit(0);
    for k in 1u32..1 << v.len() {
        let bit = k.trailing_zeros() as usize;
        let gray = k ^ (k >> 1);
        if gray >> bit & 1 == 1 {
            total += v[bit] as u128;
        } else {
            total -= v[bit] as u128;
        }
        visit(total);
    }
}

/// Every subset sum up to `u` by exhaustive enumeration.
pub fn brute_force(s: &Multiset, u: u64) -> Result<SumSet> {
    let v = guard(s)?;
    check_bound(u)?;
    let mut out = SumSet::empty_capped(u);
    all_subset_totals(&v, |t| {
        if t <= u as u128 {
            out.insert(t as u64);
        }
    });
    Ok(out)
}

/// Every subset sum modulo `m` by exhaustive enumeration.
pub fn brute_force_mod(s: &Multiset, m: u64) -> Result<SumSet> {
    let v = guard(s)?;
    let mut out = SumSet::empty_cyclic(m)?;
    all_subset_totals(&v, |t| out.insert((t % m as u128) as u64));
    Ok(out)
}

/// The `O(n^2 u)` table of reachable `(sum, cardinality)` pairs.
pub fn card_dp(s: &[u64], u: u64) -> Result<CardSumSet> {
    check_bound(u)?;
    let n = s.len();
    let len = u as usize + 1;
    let mut rows = vec![BitSet::new(len); n + 1];
    rows[0].insert(0);
    for (i, &w) in s.iter().enumerate() {
        for j in (0..=i).rev() {
            let (lo, hi) = rows.split_at_mut(j + 1);
            hi[0].or_shifted(&lo[j], w as usize);
        }
    }
    let mut out = CardSumSet::empty(u, n as u64);
    for (j, row) in rows.iter().enumerate() {
        for sum in row.ones() {
            out.insert(sum as u64, j as u64);
        }
    }
    Ok(out)
}
