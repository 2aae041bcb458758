//! One line per acceptance criterion; the test fails if any gating
//! criterion fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sumsetkit::baselines::{bellman_dp, brute_force, brute_force_mod, card_dp};
use sumsetkit::card::card_sums;
use sumsetkit::convolution::CountMode;
use sumsetkit::counting::{banzhaf, count_sums};
use sumsetkit::cyclic::{cover_units, cover_zm, mod_subset_sums};
use sumsetkit::graph::{bottleneck_partition, Edge, WeightedGraph};
use sumsetkit::instance::checksum;
use sumsetkit::integer::{all_subset_sums, all_subset_sums_traced, Strategy};
use sumsetkit::multiset::Multiset;
use sumsetkit::number::{factorize, gcd, is_prime};
use sumsetkit::witness::recover_subset;
use sumsetkit::Error;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_multiset(r: &mut ChaCha8Rng, max_n: usize, max_v: u64) -> Multiset {
    let n = r.gen_range(0..=max_n);
    let v: Vec<u64> = (0..n).map(|_| r.gen_range(1..=max_v)).collect();
    Multiset::from_values(&v).unwrap()
}

fn random_set(r: &mut ChaCha8Rng, max_n: usize, max_v: u64) -> Vec<u64> {
    let n = r.gen_range(0..=max_n.min(max_v as usize));
    let mut pool: Vec<u64> = (1..=max_v).collect();
    pool.shuffle(r);
    pool.truncate(n);
    pool.sort_unstable();
    pool
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    if took < limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn integer_oracles() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    for case in 0..500 {
        let s = random_multiset(&mut r, 12, 64);
        let u = r.gen_range(1..=128);
        let brute = brute_force(&s, u).unwrap();
        if bellman_dp(&s, u).unwrap() != brute {
            return Err(format!("case {case}: dp differs from enumeration"));
        }
        for st in Strategy::ALL {
            if all_subset_sums(&s, u, st).unwrap() != brute {
                return Err(format!("case {case}: strategy {st} differs"));
            }
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "500 instances x {} strategies",
        Strategy::ALL.len()
    ))
}

fn cyclic_oracles() -> Outcome {
    let start = Instant::now();
    let moduli: Vec<u64> = (2..=64).chain([72, 96, 100, 128, 360]).collect();
    let mut r = rng(2);
    for case in 0..500 {
        let m = *moduli.choose(&mut r).unwrap();
        let n = r.gen_range(0..=12usize.min(m as usize));
        let mut pool: Vec<u64> = (0..m).collect();
        pool.shuffle(&mut r);
        let s = &pool[..n];
        let nonzero: Vec<u64> = s.iter().copied().filter(|&x| x > 0).collect();
        let brute = brute_force_mod(&Multiset::from_values(&nonzero).unwrap(), m).unwrap();
        if mod_subset_sums(s, m).unwrap() != brute {
            return Err(format!("case {case}: m = {m}, S = {s:?}"));
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok("500 instances".into())
}

fn early_exit() -> Outcome {
    let mut r = rng(3);
    let mut checked = 0;
    for m in (2u64..=61).filter(|&m| is_prime(m)) {
        let k = (2.0 * (m as f64).sqrt()).ceil() as usize;
        for _ in 0..20 {
            let mut units: Vec<u64> = (1..m).collect();
            units.shuffle(&mut r);
            // for m <= 3, ceil(2 sqrt m) exceeds the number of units
            units.truncate(k);
            let sums = brute_force_mod(&Multiset::from_values(&units).unwrap(), m).unwrap();
            if units.len() == k && !sums.is_full() {
                return Err(format!("m = {m}, S = {units:?} misses a residue"));
            }
            if units.len() == k {
                checked += 1;
            }
        }
    }
    Ok(format!(
        "{checked} full-size unit subsets reach every residue"
    ))
}

fn covers() -> Outcome {
    let mut r = rng(4);
    let primes: Vec<u64> = (2u64..=199).filter(|&m| is_prime(m)).collect();
    for case in 0..200 {
        let m = *primes.choose(&mut r).unwrap();
        let root = (m as f64).sqrt().ceil() as u64;
        let len = if r.gen_bool(0.5) { root } else { m.div_ceil(2) };
        let n = r.gen_range(0..m as usize);
        let mut units: Vec<u64> = (1..m).collect();
        units.shuffle(&mut r);
        units.truncate(n);
        let cover = cover_units(&units, m, len).unwrap();
        let covered: BTreeSet<u64> = cover.iter().flat_map(|s| s.members()).collect();
        if cover.iter().any(|s| gcd(s.generator, m) != 1) {
            return Err(format!("case {case}: non-unit generator"));
        }
        if units.iter().any(|u| !covered.contains(u)) {
            return Err(format!(
                "case {case}: m = {m}, len = {len} leaves a unit uncovered"
            ));
        }
    }
    let mut worst: f64 = 0.0;
    for m in 1u64..=200 {
        let len = (m as f64).sqrt().ceil() as u64;
        let cover = cover_zm(m, len).unwrap();
        let mut covered: BTreeSet<u64> = BTreeSet::from([0]);
        for seg in &cover {
            covered.extend(seg.members());
        }
        if covered.len() as u64 != m {
            return Err(format!("Z_{m} not covered at length {len}"));
        }
        let t = factorize(m).unwrap();
        let bound = 8.0 * t.sigma1 as f64 * (m as f64).ln() / len as f64 + t.sigma0 as f64;
        let ratio = cover.len() as f64 / bound;
        if ratio > 1.0 && worst <= 1.0 {
            println!(
                "    note: m = {m} uses {} segments, bound {bound:.1}",
                cover.len()
            );
        }
        worst = worst.max(ratio);
    }
    if worst > 2.0 {
        return Err(format!("segment count reached {worst:.2}x the bound"));
    }
    Ok(format!(
        "200 unit covers, Z_m for m <= 200, worst count/bound {worst:.3}"
    ))
}

fn witnesses() -> Outcome {
    let mut r = rng(5);
    let mut recovered = 0;
    for case in 0..100 {
        let s = random_multiset(&mut r, 14, 100);
        let u = r.gen_range(0..=200);
        let st = *Strategy::ALL.choose(&mut r).unwrap();
        let trace = all_subset_sums_traced(&s, u, st).unwrap();
        for t in 0..=u {
            match recover_subset(&trace, t) {
                Ok(sub) => {
                    let used = Multiset::from_values(&sub).unwrap();
                    let fits = used.entries().iter().all(|&(v, c)| c <= s.multiplicity(v));
                    if sub.iter().sum::<u64>() != t || !fits || !trace.sums().contains(t) {
                        return Err(format!("case {case}: bad subset {sub:?} for {t}"));
                    }
                    recovered += 1;
                }
                Err(e) => {
                    if trace.sums().contains(t)
                        || e != Error::NotRealizable(t)
                        || e.exit_code() != 3
                    {
                        return Err(format!("case {case}: target {t} gave {e:?}"));
                    }
                }
            }
        }
    }
    Ok(format!("{recovered} subsets recovered"))
}

fn counting() -> Outcome {
    let mut r = rng(6);
    for case in 0..100 {
        let s = random_set(&mut r, 16, 60);
        let sigma: u64 = s.iter().sum();
        let u = r.gen_range(0..=sigma + 10);
        let c = count_sums(&s, u, CountMode::Exact).unwrap();
        let got: Vec<u64> = (0..=u).map(|x| c.get(x).try_into().unwrap()).collect();
        if got != common::enumerate_counts(&s, u) {
            return Err(format!("case {case}: counts differ"));
        }
        if u >= sigma && got.iter().sum::<u64>() != 1 << s.len() {
            return Err(format!("case {case}: counts do not total 2^n"));
        }
    }
    let example: Vec<u64> = banzhaf(&[1, 1, 2], 3, CountMode::Exact)
        .unwrap()
        .into_iter()
        .map(|c| c.try_into().unwrap())
        .collect();
    if example != [1, 1, 3] {
        return Err(format!("weights 1 1 2, quota 3 gave {example:?}"));
    }
    for case in 0..100 {
        let n = r.gen_range(1..=12);
        let w: Vec<u64> = (0..n).map(|_| r.gen_range(1..=30)).collect();
        let q = r.gen_range(1..=w.iter().sum::<u64>());
        let got: Vec<u64> = banzhaf(&w, q, CountMode::Exact)
            .unwrap()
            .into_iter()
            .map(|c| c.try_into().unwrap())
            .collect();
        if got != common::enumerate_swings(&w, q) {
            return Err(format!("case {case}: swings differ for {w:?}, quota {q}"));
        }
    }
    Ok("100 count instances, 100 swing instances".into())
}

fn cardinality() -> Outcome {
    let mut r = rng(7);
    for case in 0..200 {
        let s = random_set(&mut r, 12, 40);
        let u = r.gen_range(0..=64);
        if card_sums(&s, u).unwrap().sorted_pairs() != card_dp(&s, u).unwrap().sorted_pairs() {
            return Err(format!("case {case}: S = {s:?}, u = {u}"));
        }
    }
    Ok("200 instances".into())
}

fn bottleneck() -> Outcome {
    let mut r = rng(8);
    for case in 0..100 {
        let n = 2 * r.gen_range(1..=6);
        let m = r.gen_range(0..=n * (n - 1) / 2);
        let edges: Vec<Edge> = (0..m)
            .filter_map(|_| {
                let (a, b) = (r.gen_range(1..=n), r.gen_range(1..=n));
                let w = r.gen_range(1..=20);
                (a != b).then_some(Edge { a, b, w })
            })
            .collect();
        let g = WeightedGraph::new(n, edges).unwrap();
        let got = bottleneck_partition(&g).unwrap();
        let expect = common::exhaustive_bottleneck(&g);
        if got.bottleneck != expect || got.side_one().len() != n / 2 {
            return Err(format!(
                "case {case}: got {}, expected {expect}",
                got.bottleneck
            ));
        }
    }
    Ok("100 graphs".into())
}

fn performance() -> Outcome {
    let mut r = rng(9);
    let mut values = BTreeSet::new();
    while values.len() < 2000 {
        values.insert(r.gen_range(1..=1_000_000u64));
    }
    let s = Multiset::from_values(&values.into_iter().collect::<Vec<_>>()).unwrap();
    let u = 1_000_000;
    println!(
        "    {:<14} {:>12} {:>18}",
        "algorithm", "seconds", "checksum"
    );
    let mut sums = Vec::new();
    for st in [
        Strategy::Dp,
        Strategy::Main,
        Strategy::R0Sqrt,
        Strategy::R0TwoThirds,
    ] {
        let start = Instant::now();
        let out = all_subset_sums(&s, u, st).unwrap();
        let took = start.elapsed();
        println!(
            "    {:<14} {:>12.3} {:>18x}",
            st.name(),
            took.as_secs_f64(),
            checksum(&out)
        );
        sums.push((st, checksum(&out), took));
    }
    if sums.iter().any(|e| e.1 != sums[0].1) {
        return Err("checksums differ between algorithms".into());
    }
    let main = sums.iter().find(|e| e.0 == Strategy::Main).unwrap().2;
    if main > Duration::from_secs(30) {
        println!("    note: main took {main:?}, above the 30 s target");
    }
    Ok(format!(
        "n = 2000, u = 10^6, main in {main:.2?}, checksums equal"
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("integer oracle equivalence", integer_oracles),
        ("cyclic oracle equivalence", cyclic_oracles),
        ("early exit validity", early_exit),
        ("cover validity", covers),
        ("witness validity", witnesses),
        ("counting and banzhaf", counting),
        ("cardinality sums", cardinality),
        ("bottleneck partition", bottleneck),
        ("performance sanity", performance),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name} ({detail})", k + 1),
            Err(why) => {
                println!("criterion {}: FAIL {name} ({why})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
