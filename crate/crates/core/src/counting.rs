//! Counting subsets per sum, and the Banzhaf index built on it.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::convolution::{count_conv, CountMode, CountVector};
use crate::error::{Error, Result};
use crate::sumset::check_bound;

const LEAF_SIZE: usize = 4;

/// `N(x)` = number of subsets of the set `s` summing to `x`, for `x <= u`.
pub fn count_sums(s: &[u64], u: u64, mode: CountMode) -> Result<CountVector> {
    let mut v = s.to_vec();
    v.sort_unstable();
    if v.first() == Some(&0) {
        return Err(Error::contract("set elements must be positive"));
    }
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::contract(format!("duplicate element {}", w[0])));
    }
    count_list(&v, u, mode)
}

/// As [`count_sums`], but repeated values count as distinct items.
pub(crate) fn count_list(v: &[u64], u: u64, mode: CountMode) -> Result<CountVector> {
    check_bound(u)?;
    Ok(count_rec(v, u, mode).recapped(u))
}

fn count_rec(v: &[u64], u: u64, mode: CountMode) -> CountVector {
    let total = v.iter().fold(0u64, |acc, &x| acc.saturating_add(x));
    let cap = u.min(total);
    if v.len() <= LEAF_SIZE {
        let mut counts = vec![0u64; cap as usize + 1];
        for mask in 0u32..1 << v.len() {
            let s: u64 = (0..v.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| v[b])
                .sum();
            if s <= cap {
                counts[s as usize] += 1;
            }
        }
        return CountVector::from_counts(&counts, mode);
    }
    let (lv, rv) = v.split_at(v.len() / 2);
    let (l, r) = rayon::join(|| count_rec(lv, u, mode), || count_rec(rv, u, mode));
    count_conv(&l, &r, cap).expect("children share a mode")
}

/// Banzhaf swing counts: for voter `i`, the number of coalitions `T` of the
/// other voters with `Σ T < quota <= Σ T + w_i`.
///
/// Counts for `S \ {i}` come from the counts for `S` by peeling one item:
/// `N'(x) = N(x) - N'(x - w_i)` in ascending `x`. Voters with equal weight
/// share the result.
pub fn banzhaf(weights: &[u64], quota: u64, mode: CountMode) -> Result<Vec<BigUint>> {
    if mode != CountMode::Exact {
        return Err(Error::InvalidInput(
            "swing counts need exact counting".into(),
        ));
    }
    if weights.contains(&0) {
        return Err(Error::contract("weights must be positive"));
    }
    let sigma: u128 = weights.iter().map(|&w| w as u128).sum();
    if quota < 1 || quota as u128 > sigma {
        return Err(Error::InvalidInput(format!(
            "quota {quota} outside [1, {sigma}]"
        )));
    }
    let u = quota - 1;
    let all = count_list(weights, u, CountMode::Exact)?;
    let n_all = all.exact().expect("exact mode");

    let mut distinct = weights.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let swings: Vec<(u64, BigUint)> = distinct
        .par_iter()
        .map(|&w| {
            let w_us = w as usize;
            let mut rest: Vec<BigUint> = Vec::with_capacity(n_all.len());
            for x in 0..n_all.len() {
                let v = if x >= w_us {
                    &n_all[x] - &rest[x - w_us]
                } else {
                    n_all[x].clone()
                };
                rest.push(v);
            }
            let lo = quota.saturating_sub(w) as usize;
            let swing = rest[lo..].iter().fold(BigUint::zero(), |acc, c| acc + c);
            (w, swing)
        })
        .collect();
    Ok(weights
        .iter()
        .map(|w| {
            let k = swings
                .binary_search_by_key(w, |e| e.0)
                .expect("weight listed");
            swings[k].1.clone()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(c: &CountVector) -> Vec<u64> {
        (0..=c.bound())
            .map(|x| c.get(x).try_into().unwrap())
            .collect()
    }

    #[test]
    fn count_examples() {
        let c = count_sums(&[1, 2, 3], 3, CountMode::Exact).unwrap();
        assert_eq!(exact(&c), vec![1, 1, 1, 2]);
        let c = count_sums(&[], 2, CountMode::Modular).unwrap();
        assert_eq!(exact(&c), vec![1, 0, 0]);
        assert!(count_sums(&[1, 1], 3, CountMode::Exact).is_err());
    }

    #[test]
    fn counts_sum_to_power_of_two() {
        let v: Vec<u64> = (1..=14).map(|i| i * 3 + 1).collect();
        let sigma: u64 = v.iter().sum();
        let c = count_sums(&v, sigma, CountMode::Exact).unwrap();
        let total = (0..=sigma).fold(BigUint::zero(), |acc, x| acc + c.get(x));
        assert_eq!(total, BigUint::from(1u64 << 14));
    }

    #[test]
    fn banzhaf_examples() {
        let sw = |w: &[u64], q| -> Vec<u64> {
            banzhaf(w, q, CountMode::Exact)
                .unwrap()
                .into_iter()
                .map(|c| c.try_into().unwrap())
                .collect()
        };
        assert_eq!(sw(&[1, 1, 2], 3), vec![1, 1, 3]);
        assert_eq!(sw(&[5], 3), vec![1]);
        assert_eq!(sw(&[1, 1], 2), vec![1, 1]);
        assert!(banzhaf(&[1, 2], 2, CountMode::Modular).is_err());
        assert!(banzhaf(&[1, 2], 4, CountMode::Exact).is_err());
        assert!(banzhaf(&[1, 2], 0, CountMode::Exact).is_err());
    }
}
