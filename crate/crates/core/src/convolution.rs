//! Sumset combination primitives: boolean 1-D, boolean 2-D, cyclic and
//! counting convolutions.
//!
//! Boolean products run through the exact transform in [`crate::ntt`] and
//! are thresholded at "coefficient != 0". A coefficient of a boolean product
//! never exceeds the smaller popcount; while that is below the 32-bit prime
//! the small transform is exact, otherwise the 62-bit prime is used. When
//! one operand has at most [`SPARSE_CUTOFF`] members the product is a direct
//! shift-or loop instead.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::ntt::{convolve_exact, NttPrime, SmallNtt, DEFAULT_PRIME, SMALL_PRIME};
use crate::sumset::{CardSumSet, Mode, SumSet};

/// Operands with at most this many members use the shift-or loop.
pub const SPARSE_CUTOFF: usize = 64;

/// Modulus of [`CountMode::Modular`] counts.
pub const COUNT_MODULUS: u64 = DEFAULT_PRIME;

fn ones_below(bits: &BitSet, len: usize) -> impl Iterator<Item = usize> + '_ {
    bits.ones().take_while(move |&i| i < len)
}

/// Boolean product of two bit-vectors, truncated to `out_len` positions.
pub(crate) fn bool_product(a: &BitSet, b: &BitSet, out_len: usize) -> BitSet {
    let (ca, cb) = (a.count_ones(), b.count_ones());
    let mut out = BitSet::new(out_len);
    if ca == 0 || cb == 0 || out_len == 0 {
        return out;
    }
    let (dense, sparse) = if ca >= cb { (a, b) } else { (b, a) };
    if ca.min(cb) <= SPARSE_CUTOFF {
        let dense = dense.resized(out_len);
        for shift in sparse.ones() {
            if shift >= out_len {
                break;
            }
            out.or_shifted(&dense, shift);
        }
        return out;
    }
    let la = a.last_one().unwrap().min(out_len - 1) + 1;
    let lb = b.last_one().unwrap().min(out_len - 1) + 1;
    if (ca.min(cb) as u64) < SMALL_PRIME as u64 {
        let to_vec = |bits: &BitSet, len: usize| {
            let mut v = vec![0u32; len];
            ones_below(bits, len).for_each(|i| v[i] = 1);
            v
        };
        let prod = SmallNtt::default().convolve(&to_vec(a, la), &to_vec(b, lb), out_len);
        for (i, c) in prod.into_iter().enumerate() {
            if c != 0 {
                out.insert(i);
            }
        }
        return out;
    }
    let to_vec = |bits: &BitSet, len: usize| {
        let mut v = vec![0u64; len];
        ones_below(bits, len).for_each(|i| v[i] = 1);
        v
    };
    let prod = NttPrime::default_prime().convolve(&to_vec(a, la), &to_vec(b, lb), out_len);
    for (i, c) in prod.into_iter().enumerate() {
        if c != 0 {
            out.insert(i);
        }
    }
    out
}

/// `(A + B) ∩ [0, cap]` for capped sets.
pub fn bool_conv(a: &SumSet, b: &SumSet, cap: u64) -> SumSet {
    assert!(
        a.mode() == Mode::Capped && b.mode() == Mode::Capped,
        "bool_conv needs capped operands"
    );
    let bits = bool_product(a.bits(), b.bits(), cap as usize + 1);
    SumSet::from_bits(Mode::Capped, bits)
}

/// `A + B` in `Z_m`; both operands must be cyclic with the same modulus.
pub fn cyclic_bool_conv(a: &SumSet, b: &SumSet) -> SumSet {
    let m = a.modulus().expect("cyclic_bool_conv needs cyclic operands");
    assert_eq!(Some(m), b.modulus(), "moduli differ");
    let m = m as usize;
    let linear = bool_product(a.bits(), b.bits(), 2 * m - 1);
    let mut bits = BitSet::new(m);
    for k in linear.ones() {
        bits.insert(if k >= m { k - m } else { k });
    }
    SumSet::from_bits(Mode::Cyclic, bits)
}

/// 2-D sumset `{(s1 + s2, j1 + j2)}` restricted to `s <= cap_sum`,
/// `j <= cap_card`.
///
/// Both grids are flattened row-major with a row stride exceeding the
/// largest possible row sum, so the 1-D product has no carries between rows.
pub fn bool_conv_2d(a: &CardSumSet, b: &CardSumSet, cap_sum: u64, cap_card: u64) -> CardSumSet {
    let mut out = CardSumSet::empty(cap_sum, cap_card);
    let extent = |g: &CardSumSet| {
        g.pairs()
            .filter(|&(s, j)| s <= cap_sum && j <= cap_card)
            .fold(None, |acc: Option<(u64, u64)>, (s, j)| {
                Some(acc.map_or((s, j), |(ms, mj)| (ms.max(s), mj.max(j))))
            })
    };
    let (Some((sa, ja)), Some((sb, jb))) = (extent(a), extent(b)) else {
        return out;
    };
    let stride = sa + sb + 1;
    let flatten = |g: &CardSumSet, rows: u64, width: u64| {
        let mut bits = BitSet::new((rows * stride + width + 1) as usize);
        for (s, j) in g.pairs() {
            if s <= width && j <= rows {
                bits.insert((s + j * stride) as usize);
            }
        }
        bits
    };
    let fa = flatten(a, ja, sa);
    let fb = flatten(b, jb, sb);
    let rows = (ja + jb).min(cap_card);
    let prod = bool_product(&fa, &fb, ((rows + 1) * stride) as usize);
    for idx in prod.ones() {
        let (s, j) = (idx as u64 % stride, idx as u64 / stride);
        if s <= cap_sum {
            out.insert(s, j);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CountMode {
    /// Arbitrary-precision counts.
    Exact,
    /// Counts reduced modulo [`COUNT_MODULUS`].
    Modular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Counts {
    Modular(Vec<u64>),
    Exact(Vec<BigUint>),
}

/// Counts indexed by sum over `[0, bound]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountVector {
    counts: Counts,
}

impl CountVector {
    /// `delta_0` over `[0, bound]`: one way (the empty subset) to reach 0.
    pub fn unit(bound: u64, mode: CountMode) -> Self {
        let len = bound as usize + 1;
        let counts = match mode {
            CountMode::Modular => {
                let mut v = vec![0u64; len];
                v[0] = 1;
                Counts::Modular(v)
            }
            CountMode::Exact => {
                let mut v = vec![BigUint::zero(); len];
                v[0] = BigUint::from(1u32);
                Counts::Exact(v)
            }
        };
        CountVector { counts }
    }

    /// Builds a vector from small counts (reduced when modular).
    pub fn from_counts(counts: &[u64], mode: CountMode) -> Self {
        assert!(!counts.is_empty(), "a count vector covers at least [0, 0]");
        let counts = match mode {
            CountMode::Modular => {
                Counts::Modular(counts.iter().map(|&c| c % COUNT_MODULUS).collect())
            }
            CountMode::Exact => Counts::Exact(counts.iter().map(|&c| BigUint::from(c)).collect()),
        };
        CountVector { counts }
    }

    pub fn from_exact(counts: Vec<BigUint>) -> Self {
        assert!(!counts.is_empty(), "a count vector covers at least [0, 0]");
        CountVector {
            counts: Counts::Exact(counts),
        }
    }

    pub fn mode(&self) -> CountMode {
        match self.counts {
            Counts::Modular(_) => CountMode::Modular,
            Counts::Exact(_) => CountMode::Exact,
        }
    }

    pub fn bound(&self) -> u64 {
        self.len() as u64 - 1
    }

    fn len(&self) -> usize {
        match &self.counts {
            Counts::Modular(v) => v.len(),
            Counts::Exact(v) => v.len(),
        }
    }

    pub fn exact(&self) -> Option<&[BigUint]> {
        match &self.counts {
            Counts::Exact(v) => Some(v),
            Counts::Modular(_) => None,
        }
    }

    pub fn modular(&self) -> Option<&[u64]> {
        match &self.counts {
            Counts::Modular(v) => Some(v),
            Counts::Exact(_) => None,
        }
    }

    /// Count at `x` as an exact integer (the residue in modular mode).
    pub fn get(&self, x: u64) -> BigUint {
        match &self.counts {
            Counts::Modular(v) => BigUint::from(v[x as usize]),
            Counts::Exact(v) => v[x as usize].clone(),
        }
    }

    pub fn is_nonzero(&self, x: u64) -> bool {
        match &self.counts {
            Counts::Modular(v) => v[x as usize] != 0,
            Counts::Exact(v) => !v[x as usize].is_zero(),
        }
    }

    /// The same counts over `[0, bound]`, zero-padded or truncated.
    pub fn recapped(&self, bound: u64) -> CountVector {
        let len = bound as usize + 1;
        let counts = match &self.counts {
            Counts::Modular(v) => {
                let mut v = v.clone();
                v.resize(len, 0);
                Counts::Modular(v)
            }
            Counts::Exact(v) => {
                let mut v = v.clone();
                v.resize(len, BigUint::zero());
                Counts::Exact(v)
            }
        };
        CountVector { counts }
    }

    /// Sums with a non-zero count.
    pub fn support(&self) -> SumSet {
        SumSet::capped_from(
            self.bound(),
            (0..=self.bound()).filter(|&x| self.is_nonzero(x)),
        )
    }
}

/// `(f ⊙ g)(x) = Σ_t f(t) g(x - t)` for `x <= cap`.
///
/// This is the ordinary convolution. The product written with `f(x)` in
/// place of `f(t)` would not compose subset counts, so it is not used.
pub fn count_conv(f: &CountVector, g: &CountVector, cap: u64) -> Result<CountVector> {
    let out_len = cap as usize + 1;
    let counts = match (&f.counts, &g.counts) {
        (Counts::Modular(a), Counts::Modular(b)) => {
            let mut v = NttPrime::default_prime().convolve(a, b, out_len);
            v.resize(out_len, 0);
            Counts::Modular(v)
        }
        (Counts::Exact(a), Counts::Exact(b)) => {
            let mut v = convolve_exact(a, b, out_len);
            v.resize(out_len, BigUint::zero());
            Counts::Exact(v)
        }
        _ => {
            return Err(Error::contract(
                "count vectors use different counting modes",
            ))
        }
    };
    Ok(CountVector { counts })
}
