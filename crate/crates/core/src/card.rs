//! Subset sums annotated with subset size.

use crate::convolution::bool_conv_2d;
use crate::error::{Error, Result};
use crate::sumset::{check_bound, CardSumSet, MAX_BOUND};

const LEAF_SIZE: usize = 4;

/// Every `(i, j)` with `i <= u` such that some `j`-element subset of the set
/// `s` sums to `i`.
pub fn card_sums(s: &[u64], u: u64) -> Result<CardSumSet> {
    check_bound(u)?;
    let mut v = s.to_vec();
    v.sort_unstable();
    if v.first() == Some(&0) {
        return Err(Error::contract("set elements must be positive"));
    }
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::contract(format!("duplicate element {}", w[0])));
    }
    let n = v.len() as u128;
    if (u as u128 + 1) * (n + 1) > MAX_BOUND as u128 {
        return Err(Error::TooLarge(
            "cardinality grid exceeds the size limit".into(),
        ));
    }
    let grid = card_rec(&v, u);
    let mut out = CardSumSet::empty(u, v.len() as u64);
    for (i, j) in grid.pairs() {
        out.insert(i, j);
    }
    Ok(out)
}

fn card_rec(v: &[u64], u: u64) -> CardSumSet {
    let total = v.iter().fold(0u64, |acc, &x| acc.saturating_add(x));
    let width = u.min(total);
    let card = v.len() as u64;
    if v.len() <= LEAF_SIZE {
        let mut grid = CardSumSet::empty(width, card);
        for mask in 0u32..1 << v.len() {
            let s: u64 = (0..v.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| v[b])
                .sum();
            if s <= width {
                grid.insert(s, mask.count_ones() as u64);
            }
        }
        return grid;
    }
    let (lv, rv) = v.split_at(v.len() / 2);
    let (l, r) = rayon::join(|| card_rec(lv, u), || card_rec(rv, u));
    bool_conv_2d(&l, &r, width, card)
}
