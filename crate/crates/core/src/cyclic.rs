//! Subset sums in `Z_m`.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::build::Built;
use crate::convolution::cyclic_bool_conv;
use crate::error::{Error, Result};
use crate::integer::sums_capped;
use crate::number::{factorize, gcd, mod_inverse, mul_mod, smallest_prime_factor, MAX_MODULUS};
use crate::sumset::SumSet;
use crate::witness::Trace;

/// The progression `{i * generator mod m : 1 <= i <= length}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub generator: u64,
    pub length: u64,
    pub modulus: u64,
}

impl Segment {
    pub fn new(generator: u64, length: u64, modulus: u64) -> Self {
        Segment {
            generator,
            length,
            modulus,
        }
    }

    /// Distinct members, ascending.
    pub fn members(&self) -> Vec<u64> {
        let mut seen = BTreeSet::new();
        let mut v = 0;
        for _ in 0..self.length.min(self.modulus) {
            v = (v + self.generator) % self.modulus;
            seen.insert(v);
        }
        seen.into_iter().collect()
    }

    /// Position `i` in `1..=length` with `i * generator = v`, for unit
    /// generators.
    fn index_of(&self, v: u64, inverse: u64) -> Option<u64> {
        let i = mul_mod(v % self.modulus, inverse, self.modulus);
        (1..=self.length).contains(&i).then_some(i)
    }
}

/// A node of the residue recursion: `gamma ⊆ Z_mu`, with `tau | mu` the
/// part of the modulus not yet split on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModInstance {
    pub gamma: Vec<u64>,
    pub mu: u64,
    pub tau: u64,
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 1 {
        return Err(Error::contract("modulus must be at least 1"));
    }
    if m > MAX_MODULUS {
        return Err(Error::TooLarge(format!(
            "modulus {m} exceeds the supported maximum {MAX_MODULUS}"
        )));
    }
    Ok(())
}

fn check_residues(s: &[u64], m: u64) -> Result<Vec<u64>> {
    check_modulus(m)?;
    let mut v = s.to_vec();
    v.sort_unstable();
    if let Some(bad) = v.iter().find(|&&x| x >= m) {
        return Err(Error::contract(format!(
            "{bad} is not a residue modulo {m}"
        )));
    }
    if let Some(w) = v.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::contract(format!("duplicate residue {}", w[0])));
    }
    Ok(v)
}

fn check_units(s: &[u64], m: u64) -> Result<Vec<u64>> {
    let v = check_residues(s, m)?;
    if let Some(bad) = v.iter().find(|&&x| gcd(x, m) != 1) {
        return Err(Error::contract(format!("{bad} is not a unit modulo {m}")));
    }
    Ok(v)
}

/// Subset sums of a set contained in one unit segment: the elements are
/// small multiples of the generator, so the problem reduces to integers.
pub fn segment_sums(s: &[u64], seg: &Segment) -> Result<SumSet> {
    Ok(segment_built(s, seg, false)?.into_sums())
}

fn segment_built(s: &[u64], seg: &Segment, record: bool) -> Result<Built> {
    let m = seg.modulus;
    let v = check_residues(s, m)?;
    let inverse = mod_inverse(seg.generator, m)
        .filter(|_| gcd(seg.generator, m) == 1)
        .ok_or_else(|| Error::contract(format!("generator {} is not a unit", seg.generator)))?;
    if m == 1 {
        return Ok(Built::leaf(&v, SumSet::zero_cyclic(1)?, record));
    }
    let mut idx = Vec::with_capacity(v.len());
    for &x in &v {
        idx.push(seg.index_of(x, inverse).ok_or_else(|| {
            Error::contract(format!(
                "{x} is not in seg({}, {})",
                seg.generator, seg.length
            ))
        })?);
    }
    idx.sort_unstable();
    let total: u64 = idx.iter().sum();
    let child = sums_capped(&idx, total, record);
    let mut sums = SumSet::empty_cyclic(m)?;
    for t in child.sums().members() {
        sums.insert(mul_mod(t, seg.generator, m));
    }
    Ok(Built::scaled(child, seg.generator, sums))
}

/// Greedy cover of the units in `s` by segments of length `len`, each
/// paired with the elements it was first to cover.
fn greedy_cover(s: &[u64], m: u64, len: u64) -> Vec<(Segment, Vec<u64>)> {
    if s.is_empty() {
        return Vec::new();
    }
    if m == 1 {
        return vec![(Segment::new(0, len, 1), s.to_vec())];
    }
    let inverses: Vec<u64> = (1..=len.min(m - 1))
        .filter(|&i| gcd(i, m) == 1)
        .map(|i| mod_inverse(i, m).expect("unit"))
        .collect();

    // candidate generators and the elements each would cover
    let mut ids: HashMap<u64, usize> = HashMap::new();
    let mut gens: Vec<u64> = Vec::new();
    let mut covers: Vec<Vec<usize>> = Vec::new();
    let mut cands: Vec<Vec<usize>> = vec![Vec::new(); s.len()];
    for (k, &b) in s.iter().enumerate() {
        for &inv in &inverses {
            let x = mul_mod(inv, b, m);
            let id = *ids.entry(x).or_insert_with(|| {
                gens.push(x);
                covers.push(Vec::new());
                gens.len() - 1
            });
            covers[id].push(k);
            cands[k].push(id);
        }
    }

    let mut count: Vec<usize> = covers.iter().map(Vec::len).collect();
    let top = count.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<BTreeSet<(u64, usize)>> = vec![BTreeSet::new(); top + 1];
    for (id, &c) in count.iter().enumerate() {
        buckets[c].insert((gens[id], id));
    }
    let mut covered = vec![false; s.len()];
    let mut left = s.len();
    let mut level = top;
    let mut out = Vec::new();
    while left > 0 {
        while buckets[level].is_empty() {
            level -= 1;
        }
        let (x, id) = buckets[level].pop_first().expect("non-empty bucket");
        let mut fresh = Vec::new();
        for &k in &covers[id] {
            if covered[k] {
                continue;
            }
            covered[k] = true;
            left -= 1;
            fresh.push(s[k]);
            for &other in &cands[k] {
                if other != id {
                    let c = count[other];
                    buckets[c].remove(&(gens[other], other));
                    count[other] = c - 1;
                    if c > 1 {
                        buckets[c - 1].insert((gens[other], other));
                    }
                }
            }
        }
        count[id] = 0;
        out.push((Segment::new(x, len, m), fresh));
    }
    out
}

/// Segments of length `len` with unit generators whose union contains the
/// units `s`.
pub fn cover_units(s: &[u64], m: u64, len: u64) -> Result<Vec<Segment>> {
    let v = check_units(s, m)?;
    if len < 1 {
        return Err(Error::contract("segment length must be at least 1"));
    }
    Ok(greedy_cover(&v, m, len)
        .into_iter()
        .map(|(seg, _)| seg)
        .collect())
}

/// Subset sums of a set of units modulo `m`.
pub fn unit_sums(s: &[u64], m: u64) -> Result<SumSet> {
    let v = check_units(s, m)?;
    Ok(unit_built(&v, m, false)?.into_sums())
}

fn ceil_sqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while r * r < x {
        r += 1;
    }
    r
}

/// Segment length for a unit set of size `n`: `max(ceil(sqrt m), ceil(m / sqrt n))`.
fn unit_segment_length(m: u64, n: usize) -> u64 {
    let n = n.max(1) as u128;
    let m2 = m as u128 * m as u128;
    // smallest l with l^2 * n >= m^2
    let by_count = ceil_sqrt(m2.div_ceil(n));
    let len = by_count.max(ceil_sqrt(m as u128));
    (len as u64).clamp(1, m)
}

fn unit_built(v: &[u64], m: u64, record: bool) -> Result<Built> {
    if v.is_empty() || m == 1 {
        return Ok(Built::leaf(v, SumSet::zero_cyclic(m)?, record));
    }
    let n = v.len() as u128;
    // any 2 sqrt(m) units already reach every residue
    if !record && n * n >= 4 * m as u128 {
        return Ok(Built::Plain(SumSet::full_cyclic(m)?));
    }
    let len = unit_segment_length(m, v.len());
    let groups = greedy_cover(v, m, len);
    let parts: Vec<Built> = groups
        .par_iter()
        .map(|(seg, members)| segment_built(members, seg, record))
        .collect::<Result<_>>()?;
    let mut it = parts.into_iter();
    let mut acc = it.next().expect("non-empty cover");
    for part in it {
        let sums = cyclic_bool_conv(acc.sums(), part.sums());
        acc = Built::combine(acc, part, sums);
    }
    Ok(acc)
}

/// All subset sums of the residue set `s` modulo `m`.
pub fn mod_subset_sums(s: &[u64], m: u64) -> Result<SumSet> {
    Ok(mod_built(s, m, false)?.0.into_sums())
}

/// As [`mod_subset_sums`], recording the combine tree for recovery.
pub fn mod_subset_sums_traced(s: &[u64], m: u64) -> Result<Trace> {
    Ok(Trace::new(mod_built(s, m, true)?.0.into_node(), None))
}

/// Moduli of the unit instances reached by the residue recursion, ascending.
pub fn recursion_leaf_moduli(s: &[u64], m: u64) -> Result<Vec<u64>> {
    let mut leaves = mod_built(s, m, false)?.1;
    leaves.sort_unstable();
    Ok(leaves)
}

fn mod_built(s: &[u64], m: u64, record: bool) -> Result<(Built, Vec<u64>)> {
    let mut v = check_residues(s, m)?;
    v.retain(|&x| x != 0);
    recurse(
        ModInstance {
            gamma: v,
            mu: m,
            tau: m,
        },
        record,
    )
}

/// Splits on the smallest prime `q` of `tau`: multiples of `q` are divided
/// down to `Z_{mu/q}`; the rest keep `mu` and drop every factor `q` from
/// `tau` at once.
fn recurse(inst: ModInstance, record: bool) -> Result<(Built, Vec<u64>)> {
    let ModInstance { gamma, mu, tau } = inst;
    if tau == 1 {
        return Ok((unit_built(&gamma, mu, record)?, vec![mu]));
    }
    let q = smallest_prime_factor(tau);
    let mut rest_tau = tau;
    while rest_tau % q == 0 {
        rest_tau /= q;
    }
    let (divisible, rest): (Vec<u64>, Vec<u64>) = gamma.into_iter().partition(|x| x % q == 0);
    let down = ModInstance {
        gamma: divisible.into_iter().map(|x| x / q).collect(),
        mu: mu / q,
        tau: tau / q,
    };
    let keep = ModInstance {
        gamma: rest,
        mu,
        tau: rest_tau,
    };
    let (a, b) = rayon::join(|| recurse(down, record), || recurse(keep, record));
    let ((down_built, mut leaves), (keep_built, keep_leaves)) = (a?, b?);
    leaves.extend(keep_leaves);

    let mut lifted = SumSet::empty_cyclic(mu)?;
    for x in down_built.sums().members() {
        let y = x * q;
        assert!(y < mu, "lifted residue {y} wraps modulo {mu}");
        lifted.insert(y);
    }
    let sums = cyclic_bool_conv(&lifted, keep_built.sums());
    let lifted = Built::lifted(down_built, q, lifted);
    Ok((Built::combine(lifted, keep_built, sums), leaves))
}

/// Segments of length `len` covering `Z_m \ {0}`, plus a marker segment
/// `seg(0, len)` standing for the residue 0.
///
/// Residues with `gcd(r, m) = m / d` are `m / d` times the units of `Z_d`;
/// that class is one segment when `d <= len`, otherwise a greedy unit cover
/// of `Z_d` with generators lifted by `m / d`.
pub fn cover_zm(m: u64, len: u64) -> Result<Vec<Segment>> {
    check_modulus(m)?;
    if len < 1 || len > m {
        return Err(Error::contract(format!(
            "segment length {len} outside [1, {m}]"
        )));
    }
    let table = factorize(m)?;
    let mut out = Vec::new();
    for d in table.divisors() {
        let lift = m / d;
        if d == 1 {
            out.push(Segment::new(0, len, m));
        } else if d <= len {
            out.push(Segment::new(lift, len, m));
        } else {
            let units: Vec<u64> = (1..d).filter(|&x| gcd(x, d) == 1).collect();
            for seg in cover_units(&units, d, len)? {
                out.push(Segment::new(seg.generator * lift, len, m));
            }
        }
    }
    Ok(out)
}
