#![no_main]

//! Every strategy against the bit-vector DP on small instances.
//! Byte 0 picks the bound, the rest are values.

use libfuzzer_sys::fuzz_target;
use sumsetkit::baselines::bellman_dp;
use sumsetkit::integer::{all_subset_sums, Strategy};
use sumsetkit::multiset::Multiset;

fuzz_target!(|data: &[u8]| {
    let Some((&b, rest)) = data.split_first() else {
        return;
    };
    let u = b as u64 * 4;
    let values: Vec<u64> = rest.iter().take(40).map(|&x| x as u64 + 1).collect();
    let s = Multiset::from_values(&values).unwrap();
    let want = bellman_dp(&s, u).unwrap();
    for st in Strategy::ALL {
        assert_eq!(all_subset_sums(&s, u, st).unwrap(), want, "{st}");
    }
});
