mod common;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use sumsetkit::baselines::{bellman_dp, brute_force, brute_force_mod, card_dp};
use sumsetkit::card::card_sums;
use sumsetkit::convolution::CountMode;
use sumsetkit::counting::{banzhaf, count_sums};
use sumsetkit::cyclic::{
    cover_units, mod_subset_sums, mod_subset_sums_traced, recursion_leaf_moduli,
};
use sumsetkit::graph::{bottleneck_partition, Edge, WeightedGraph};
use sumsetkit::integer::{
    all_subset_sums, all_subset_sums_traced, capped_interval_sums, layer_sums, partition_geometric,
    Strategy as Algo,
};
use sumsetkit::multiset::{normalize_multiset, split_into_two_sets, Multiset};
use sumsetkit::number::{factorize, gcd};
use sumsetkit::sumset::SumSet;
use sumsetkit::witness::{canonical_subset, recover_subset, witness_function};
use sumsetkit::Error;

fn multiset() -> impl Strategy<Value = Multiset> {
    prop::collection::vec(1u64..=64, 0..=12).prop_map(|v| Multiset::from_values(&v).unwrap())
}

fn set(max: u64, len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::btree_set(1..=max, 0..=len).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn normalization_keeps_capped_sums(s in multiset(), u in 1u64..=128) {
        let t = normalize_multiset(&s, u);
        prop_assert!(t.max_multiplicity() <= 2);
        prop_assert!(t.len() <= s.len());
        let bound = 2 * s.distinct() as u64 * ((u as f64).log2() + 1.0).ceil() as u64;
        prop_assert!(t.len() <= bound);
        prop_assert_eq!(brute_force(&t, u).unwrap(), brute_force(&s, u).unwrap());
        let (p, q) = split_into_two_sets(&t).unwrap();
        let mut union = p.clone();
        union.extend(&q);
        prop_assert_eq!(Multiset::from_values(&union).unwrap(), t);
    }

    #[test]
    fn strategies_agree(s in multiset(), u in 1u64..=128) {
        let expect = brute_force(&s, u).unwrap();
        prop_assert_eq!(&bellman_dp(&s, u).unwrap(), &expect);
        for st in Algo::ALL {
            prop_assert_eq!(&all_subset_sums(&s, u, st).unwrap(), &expect, "strategy {}", st);
        }
    }

    #[test]
    fn larger_caps_only_add_sums(s in multiset(), u in 1u64..=100, extra in 0u64..=50) {
        let small = all_subset_sums(&s, u, Algo::Main).unwrap();
        let large = all_subset_sums(&s, u + extra, Algo::Main).unwrap();
        prop_assert!(small.members().all(|v| large.contains(v)));
    }

    #[test]
    fn sheared_grid_stays_in_range(
        x in 1u64..=20,
        len in 0u64..=12,
        picks in prop::collection::btree_set(0u64..=12, 0..=8),
        alpha in 1u64..=6,
    ) {
        let s: Vec<u64> = picks.into_iter().filter(|&d| d <= len).map(|d| x + d).collect();
        let g = capped_interval_sums(&s, x, len, alpha).unwrap();
        for (sum, j) in g.pairs() {
            prop_assert!(j <= alpha);
            prop_assert!(x * j <= sum && sum <= (x + len) * j);
        }
        let expect: Vec<(u64, u64)> = common::enumerate_card(&s, u64::MAX / 2)
            .into_iter()
            .filter(|&(_, j)| j <= alpha)
            .collect();
        prop_assert_eq!(g.sorted_pairs(), expect);
    }

    #[test]
    fn chained_layers_match(s in set(128, 14), u in 1u64..=128, r0 in 1u64..=128) {
        let r0 = r0.min(u);
        let l = partition_geometric(&s, u, r0).unwrap();
        prop_assert!(l.nu() as f64 <= ((u as f64 / r0 as f64).log2()).ceil() + 1.0);
        let covered: usize = l.layers.iter().map(|x| x.values.len()).sum();
        prop_assert_eq!(covered, s.iter().filter(|&&v| v <= u).count());
        let mut acc = SumSet::zero_capped(u);
        for t in layer_sums(&l, u).unwrap() {
            acc = sumsetkit::convolution::bool_conv(&acc, &t, u);
        }
        let ms = Multiset::from_values(&s).unwrap();
        prop_assert_eq!(acc, all_subset_sums(&ms, u, Algo::Sigma).unwrap());
    }

    #[test]
    fn cyclic_matches_enumeration(m in 1u64..=64, raw in prop::collection::btree_set(0u64..64, 0..=12)) {
        let s: Vec<u64> = raw.into_iter().filter(|&x| x < m).collect();
        let expect = brute_force_mod(&Multiset::from_values(
            &s.iter().copied().filter(|&x| x > 0).collect::<Vec<_>>()).unwrap(), m).unwrap();
        prop_assert_eq!(mod_subset_sums(&s, m).unwrap(), expect);
        let divisors = factorize(m).unwrap().divisors();
        prop_assert_eq!(recursion_leaf_moduli(&s, m).unwrap(), divisors);
    }

    #[test]
    fn unit_covers_are_valid(m in 2u64..=150, len in 1u64..=40, seed in any::<u64>()) {
        let units: Vec<u64> = (1..m).filter(|&x| gcd(x, m) == 1 && (x ^ seed) % 3 != 0).collect();
        let cover = cover_units(&units, m, len).unwrap();
        let mut covered = BTreeSet::new();
        for seg in &cover {
            prop_assert_eq!(gcd(seg.generator, m), 1);
            prop_assert_eq!(seg.length, len);
            covered.extend(seg.members());
        }
        prop_assert!(units.iter().all(|u| covered.contains(u)));
    }

    #[test]
    fn card_sums_match_dp(s in set(40, 12), u in 0u64..=64) {
        let c = card_sums(&s, u).unwrap();
        let d = card_dp(&s, u).unwrap();
        prop_assert_eq!(c.sorted_pairs(), d.sorted_pairs());
        let ms = Multiset::from_values(&s).unwrap();
        prop_assert_eq!(d.project(u), bellman_dp(&ms, u).unwrap());
    }

    #[test]
    fn counts_match_enumeration(s in set(50, 12), u in 0u64..=200) {
        let expect = common::enumerate_counts(&s, u);
        for mode in [CountMode::Exact, CountMode::Modular] {
            let c = count_sums(&s, u, mode).unwrap();
            let got: Vec<u64> = (0..=u).map(|x| c.get(x).try_into().unwrap()).collect();
            prop_assert_eq!(&got, &expect);
        }
        let ms = Multiset::from_values(&s).unwrap();
        let support = count_sums(&s, u, CountMode::Modular).unwrap().support();
        prop_assert_eq!(support, all_subset_sums(&ms, u, Algo::Auto).unwrap());
    }

    #[test]
    fn swings_match_enumeration(w in prop::collection::vec(1u64..=20, 1..=10), q in 1u64..=200) {
        let sigma: u64 = w.iter().sum();
        let q = q.min(sigma);
        let got: Vec<u64> = banzhaf(&w, q, CountMode::Exact)
            .unwrap()
            .into_iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        prop_assert_eq!(got, common::enumerate_swings(&w, q));
    }

    #[test]
    fn traced_recovery_is_valid(s in multiset(), u in 0u64..=128, st in 0usize..6) {
        let st = Algo::ALL[st];
        let trace = all_subset_sums_traced(&s, u, st).unwrap();
        prop_assert_eq!(trace.sums(), &all_subset_sums(&s, u, st).unwrap());
        for t in 0..=u {
            match recover_subset(&trace, t) {
                Ok(sub) => {
                    prop_assert!(trace.sums().contains(t));
                    prop_assert_eq!(sub.iter().sum::<u64>(), t);
                    let used = Multiset::from_values(&sub).unwrap();
                    prop_assert!(used.entries().iter().all(|&(v, c)| c <= s.multiplicity(v)));
                }
                Err(e) => {
                    prop_assert!(!trace.sums().contains(t));
                    prop_assert_eq!(e, Error::NotRealizable(t));
                }
            }
        }
    }

    #[test]
    fn cyclic_recovery_is_valid(m in 1u64..=60, raw in prop::collection::btree_set(1u64..60, 0..=10)) {
        let s: Vec<u64> = raw.into_iter().filter(|&x| x < m).collect();
        let trace = mod_subset_sums_traced(&s, m).unwrap();
        prop_assert_eq!(trace.sums(), &mod_subset_sums(&s, m).unwrap());
        for t in 0..m {
            if let Ok(sub) = recover_subset(&trace, t) {
                prop_assert_eq!(sub.iter().sum::<u64>() % m, t);
                let distinct: BTreeSet<u64> = sub.iter().copied().collect();
                prop_assert_eq!(distinct.len(), sub.len());
                prop_assert!(sub.iter().all(|x| s.contains(x)));
            } else {
                prop_assert!(!trace.sums().contains(t));
            }
        }
    }

    #[test]
    fn canonical_subset_is_least(s in prop::collection::vec(1u64..=20, 0..=10), t in 0u64..=60) {
        let ms = Multiset::from_values(&s).unwrap();
        let mut best: Option<Vec<u64>> = None;
        for mask in 0u32..1 << s.len() {
            let mut pick: Vec<u64> = (0..s.len()).filter(|&b| mask >> b & 1 == 1).map(|b| s[b]).collect();
            if pick.iter().sum::<u64>() == t {
                pick.sort_unstable();
                if best.as_ref().is_none_or(|b| pick < *b) {
                    best = Some(pick);
                }
            }
        }
        match best {
            Some(b) => prop_assert_eq!(canonical_subset(&ms, t).unwrap(), b),
            None => prop_assert_eq!(canonical_subset(&ms, t), Err(Error::NotRealizable(t))),
        }
    }

    #[test]
    fn witness_function_is_valid(
        x in prop::collection::btree_set(0u64..=30, 1..=10),
        y in prop::collection::btree_set(0u64..=30, 1..=10),
    ) {
        let xs = SumSet::capped_from(30, x.iter().copied());
        let ys = SumSet::capped_from(30, y.iter().copied());
        let w = witness_function(&xs, &ys, 60).unwrap();
        for i in 0..=60u64 {
            let reachable = x.iter().any(|&a| a <= i && y.contains(&(i - a)));
            match w[i as usize] {
                Some(a) => prop_assert!(x.contains(&a) && a <= i && y.contains(&(i - a))),
                None => prop_assert!(!reachable),
            }
        }
    }

    #[test]
    fn bottleneck_matches_exhaustive(
        half in 1usize..=6,
        raw in prop::collection::vec((1usize..=12, 1usize..=12, 1u64..=20), 0..=20),
    ) {
        let n = 2 * half;
        let edges: Vec<Edge> = raw
            .into_iter()
            .filter(|&(a, b, _)| a <= n && b <= n && a != b)
            .map(|(a, b, w)| Edge { a, b, w })
            .collect();
        let g = WeightedGraph::new(n, edges).unwrap();
        let r = bottleneck_partition(&g).unwrap();
        prop_assert_eq!(r.bottleneck, common::exhaustive_bottleneck(&g));
        prop_assert_eq!(r.side_one().len(), half);
    }
}

#[test]
fn zm_covers_are_complete() {
    for m in 1u64..=200 {
        let root = (m as f64).sqrt().ceil() as u64;
        for len in [root.max(1), m] {
            let cover = sumsetkit::cyclic::cover_zm(m, len).unwrap();
            let mut covered: BTreeSet<u64> = BTreeSet::from([0]);
            for seg in &cover {
                assert_eq!(seg.length, len);
                covered.extend(seg.members());
            }
            assert_eq!(covered.len() as u64, m, "m = {m}, len = {len}");
        }
    }
}

#[test]
fn early_exit_threshold_holds_for_primes() {
    for m in (2u64..=61).filter(|&m| sumsetkit::number::is_prime(m)) {
        let k = (2.0 * (m as f64).sqrt()).ceil() as usize;
        if k >= m as usize {
            continue;
        }
        // every k-subset of the units, sampled by stride
        for start in 1..m {
            let s: Vec<u64> = (0..k as u64)
                .map(|i| (start + i * 7 - 1) % (m - 1) + 1)
                .collect();
            let distinct: BTreeSet<u64> = s.iter().copied().collect();
            if distinct.len() < k {
                continue;
            }
            let brute = brute_force_mod(&Multiset::from_values(&s).unwrap(), m).unwrap();
            assert!(brute.is_full(), "m = {m}, S = {s:?}");
        }
    }
}

#[test]
fn exact_counts_exceed_word_size() {
    let s: Vec<u64> = (1..=70).collect();
    let sigma: u64 = s.iter().sum();
    let c = count_sums(&s, sigma, CountMode::Exact).unwrap();
    let total = (0..=sigma).fold(BigUint::from(0u32), |acc, x| acc + c.get(x));
    assert_eq!(total, BigUint::from(1u8) << 70);
}
