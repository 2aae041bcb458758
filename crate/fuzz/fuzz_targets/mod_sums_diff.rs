#![no_main]

//! Residue engine against brute force. Byte 0 picks the modulus, the rest
//! are candidate residues (duplicates dropped).

use libfuzzer_sys::fuzz_target;
use sumsetkit::baselines::brute_force_mod;
use sumsetkit::cyclic::mod_subset_sums;
use sumsetkit::multiset::Multiset;

fuzz_target!(|data: &[u8]| {
    let Some((&b, rest)) = data.split_first() else {
        return;
    };
    let m = b as u64 + 1;
    let mut residues: Vec<u64> = rest
        .iter()
        .map(|&x| x as u64 % m)
        .filter(|&r| r != 0)
        .collect();
    residues.sort_unstable();
    residues.dedup();
    residues.truncate(16);
    let got = mod_subset_sums(&residues, m).unwrap();
    if residues.is_empty() {
        assert_eq!(got.to_vec(), vec![0]);
        return;
    }
    let want = brute_force_mod(&Multiset::from_values(&residues).unwrap(), m).unwrap();
    assert_eq!(got, want);
});
