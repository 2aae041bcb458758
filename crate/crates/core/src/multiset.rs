//! Input multisets: parsing, the multiplicity-reducing normalization and the
//! split of a normalized multiset into two duplicate-free sets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest accepted element value (values must fit in 63 bits).
pub const MAX_VALUE: u64 = i64::MAX as u64;

/// A multiset of positive integers, stored as `(value, multiplicity)` entries
/// sorted by value with no repeated values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Multiset {
    entries: Vec<(u64, u64)>,
}

impl Multiset {
    /// Builds a multiset from `(value, multiplicity)` pairs. Repeated values
    /// accumulate; zero multiplicities are skipped.
    pub fn from_entries(entries: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (v, mult) in entries {
            check_value(v)?;
            if mult > 0 {
                let slot = map.entry(v).or_insert(0u64);
                *slot = slot
                    .checked_add(mult)
                    .ok_or_else(|| Error::TooLarge(format!("multiplicity of {v} overflows")))?;
            }
        }
        Ok(Multiset {
            entries: map.into_iter().collect(),
        })
    }

    /// One copy per listed value (repeats accumulate).
    pub fn from_values(values: &[u64]) -> Result<Self> {
        Self::from_entries(values.iter().map(|&v| (v, 1)))
    }

    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    /// Total cardinality `n`, counting multiplicity.
    pub fn len(&self) -> u64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct values `n'`.
    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// Sum of all elements with multiplicity.
    pub fn sigma(&self) -> u128 {
        self.entries
            .iter()
            .map(|&(v, m)| v as u128 * m as u128)
            .sum()
    }

    pub fn multiplicity(&self, value: u64) -> u64 {
        self.entries
            .binary_search_by_key(&value, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// Every copy as a flat ascending list.
    pub fn expanded(&self) -> Vec<u64> {
        self.entries
            .iter()
            .flat_map(|&(v, m)| std::iter::repeat_n(v, m as usize))
            .collect()
    }

    /// The distinct values, ascending.
    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    /// True when every multiplicity is one.
    pub fn is_set(&self) -> bool {
        self.entries.iter().all(|e| e.1 == 1)
    }
}

fn check_value(v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::Parse {
            token: "0".into(),
            reason: "values must be positive",
        });
    }
    if v > MAX_VALUE {
        return Err(Error::TooLarge(format!(
            "value {v} does not fit in 63 bits"
        )));
    }
    Ok(())
}

/// Parses whitespace-separated positive decimal integers. Repeated tokens
/// encode multiplicity.
pub fn parse_multiset(text: &[u8]) -> Result<Multiset> {
    let mut values = Vec::new();
    for token in text
        .split(|b| b.is_ascii_whitespace())
        .filter(|t| !t.is_empty())
    {
        values.push(parse_positive(token)?);
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Multiset::from_values(&values)
}

/// Parses one positive decimal token that fits in 63 bits.
pub(crate) fn parse_positive(token: &[u8]) -> Result<u64> {
    let v = parse_u64(token)?;
    if v == 0 {
        return Err(Error::Parse {
            token: lossy(token),
            reason: "values must be positive",
        });
    }
    Ok(v)
}

/// Parses one non-negative decimal token that fits in 63 bits.
pub(crate) fn parse_u64(token: &[u8]) -> Result<u64> {
    let err = |reason| Error::Parse {
        token: lossy(token),
        reason,
    };
    if token.first() == Some(&b'-') && token.len() > 1 && token[1..].iter().all(u8::is_ascii_digit)
    {
        return Err(err("values must be positive"));
    }
    if token.is_empty() || !token.iter().all(u8::is_ascii_digit) {
        return Err(err("not a decimal integer"));
    }
    let mut v: u64 = 0;
    for &b in token {
        v = v
            .checked_mul(10)
            .and_then(|v| v.checked_add((b - b'0') as u64))
            .filter(|v| *v <= MAX_VALUE)
            .ok_or_else(|| err("value does not fit in 63 bits"))?;
    }
    Ok(v)
}

fn lossy(token: &[u8]) -> String {
    String::from_utf8_lossy(token).into_owned()
}

/// Reduces multiplicities to at most two without changing the subset sums
/// up to `u`.
///
/// Values are popped smallest first. A value with more than two copies keeps
/// one copy, sends `(mu - 1) / 2` doubled copies upward and retains
/// `mu - 1 - 2 * ((mu - 1) / 2)` copies, which are emitted on its next pop.
/// Values above `u` are dropped.
pub fn normalize_multiset(s: &Multiset, u: u64) -> Multiset {
    let mut work: BTreeMap<u64, u64> = s.entries.iter().copied().collect();
    let mut out: BTreeMap<u64, u64> = BTreeMap::new();
    while let Some((x, mu)) = work.pop_first() {
        if x > u {
            break;
        }
        if mu <= 2 {
            *out.entry(x).or_insert(0) += mu;
            continue;
        }
        *out.entry(x).or_insert(0) += 1;
        let doubled = (mu - 1) / 2;
        let rest = mu - 1 - 2 * doubled;
        // x <= u <= MAX_VALUE, so 2x fits in u64.
        *work.entry(2 * x).or_insert(0) += doubled;
        if rest > 0 {
            work.insert(x, rest);
        }
    }
    Multiset {
        entries: out.into_iter().collect(),
    }
}

/// Splits a multiset whose multiplicities are at most two into two sets `P`
/// and `Q`: every value goes to `P`, values with two copies also go to `Q`.
pub fn split_into_two_sets(t: &Multiset) -> Result<(Vec<u64>, Vec<u64>)> {
    let mut p = Vec::with_capacity(t.entries.len());
    let mut q = Vec::new();
    for &(v, m) in &t.entries {
        match m {
            1 => p.push(v),
            2 => {
                p.push(v);
                q.push(v);
            }
            _ => {
                return Err(Error::contract(format!(
                    "value {v} has multiplicity {m}; at most two allowed"
                )))
            }
        }
    }
    Ok((p, q))
}
