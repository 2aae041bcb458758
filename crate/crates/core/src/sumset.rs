//! Membership sets of realizable sums.
//!
//! A [`SumSet`] is either *capped* (sums in `[0, bound]`) or *cyclic*
//! (residues in `Z_m`, with `bound = m - 1`). Every set produced by an
//! engine contains `0`, the sum of the empty subset; general sets without
//! `0` are still representable because the witness oracles need them.

use crate::bits::BitSet;
use crate::error::{Error, Result};

/// Largest bound (or modulus minus one) a bit-vector sumset may address.
pub const MAX_BOUND: u64 = 1 << 34;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Capped,
    Cyclic,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SumSet {
    mode: Mode,
    bound: u64,
    bits: BitSet,
}

pub(crate) fn check_bound(bound: u64) -> Result<()> {
    if bound > MAX_BOUND {
        return Err(Error::TooLarge(format!(
            "bound {bound} exceeds the supported maximum {MAX_BOUND}"
        )));
    }
    Ok(())
}

impl SumSet {
    /// The empty set over `[0, bound]`.
    pub fn empty_capped(bound: u64) -> Self {
        assert!(bound <= MAX_BOUND, "bound {bound} too large");
        SumSet {
            mode: Mode::Capped,
            bound,
            bits: BitSet::new(bound as usize + 1),
        }
    }

    /// `{0}` over `[0, bound]`.
    pub fn zero_capped(bound: u64) -> Self {
        let mut s = Self::empty_capped(bound);
        s.bits.insert(0);
        s
    }

    /// The empty set of residues modulo `m`.
    pub fn empty_cyclic(m: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::contract("modulus must be at least 1"));
        }
        check_bound(m - 1)?;
        Ok(SumSet {
            mode: Mode::Cyclic,
            bound: m - 1,
            bits: BitSet::new(m as usize),
        })
    }

    /// `{0}` in `Z_m`.
    pub fn zero_cyclic(m: u64) -> Result<Self> {
        let mut s = Self::empty_cyclic(m)?;
        s.bits.insert(0);
        Ok(s)
    }

    /// All of `Z_m`.
    pub fn full_cyclic(m: u64) -> Result<Self> {
        let mut s = Self::empty_cyclic(m)?;
        s.bits.set_all();
        Ok(s)
    }

    /// Capped set with the given members; panics if a member exceeds `bound`.
    pub fn capped_from(bound: u64, members: impl IntoIterator<Item = u64>) -> Self {
        let mut s = Self::empty_capped(bound);
        for v in members {
            s.insert(v);
        }
        s
    }

    /// Cyclic set with the given members; panics if a member is not below `m`.
    pub fn cyclic_from(m: u64, members: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut s = Self::empty_cyclic(m)?;
        for v in members {
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn from_bits(mode: Mode, bits: BitSet) -> Self {
        debug_assert!(!bits.is_empty());
        SumSet {
            mode,
            bound: bits.len() as u64 - 1,
            bits,
        }
    }

    #[inline]
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Largest addressable value: `u` when capped, `m - 1` when cyclic.
    #[inline]
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// The modulus of a cyclic set.
    pub fn modulus(&self) -> Option<u64> {
        match self.mode {
            Mode::Cyclic => Some(self.bound + 1),
            Mode::Capped => None,
        }
    }

    #[inline]
    pub fn contains(&self, v: u64) -> bool {
        v <= self.bound && self.bits.get(v as usize)
    }

    pub fn insert(&mut self, v: u64) {
        assert!(v <= self.bound, "{v} outside [0, {}]", self.bound);
        self.bits.insert(v as usize);
    }

    /// Members in ascending order.
    pub fn members(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.ones().map(|i| i as u64)
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.members().collect()
    }

    /// Number of members.
    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_member(&self) -> Option<u64> {
        self.bits.last_one().map(|i| i as u64)
    }

    /// True when a cyclic set covers the whole group.
    pub fn is_full(&self) -> bool {
        self.bits.is_all()
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    /// Same members intersected with `[0, bound]`, re-addressed to the new bound.
    pub fn recapped(&self, bound: u64) -> SumSet {
        assert_eq!(self.mode, Mode::Capped, "recapping a cyclic set");
        SumSet {
            mode: Mode::Capped,
            bound,
            bits: self.bits.resized(bound as usize + 1),
        }
    }
}

impl std::fmt::Debug for SumSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.mode {
            Mode::Capped => write!(f, "Capped[0..={}]", self.bound)?,
            Mode::Cyclic => write!(f, "Z_{}", self.bound + 1)?,
        }
        f.debug_set().entries(self.members()).finish()
    }
}

/// Membership grid over `(sum, cardinality)` pairs with `sum <= width` and
/// `cardinality <= alpha`.
#[derive(Clone, PartialEq, Eq)]
pub struct CardSumSet {
    width: u64,
    alpha: u64,
    bits: BitSet,
}

impl CardSumSet {
    pub fn empty(width: u64, alpha: u64) -> Self {
        let cells = (width + 1)
            .checked_mul(alpha + 1)
            .filter(|c| *c <= MAX_BOUND)
            .unwrap_or_else(|| panic!("grid {width}x{alpha} too large"));
        CardSumSet {
            width,
            alpha,
            bits: BitSet::new(cells as usize),
        }
    }

    /// `{(0, 0)}`.
    pub fn zero(width: u64, alpha: u64) -> Self {
        let mut g = Self::empty(width, alpha);
        g.insert(0, 0);
        g
    }

    pub fn from_pairs(width: u64, alpha: u64, pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut g = Self::empty(width, alpha);
        for (s, j) in pairs {
            g.insert(s, j);
        }
        g
    }

    #[inline]
    pub fn width(&self) -> u64 {
        self.width
    }

    #[inline]
    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    #[inline]
    fn index(&self, s: u64, j: u64) -> usize {
        (s + j * (self.width + 1)) as usize
    }

    pub fn contains(&self, s: u64, j: u64) -> bool {
        s <= self.width && j <= self.alpha && self.bits.get(self.index(s, j))
    }

    pub fn insert(&mut self, s: u64, j: u64) {
        assert!(
            s <= self.width && j <= self.alpha,
            "({s}, {j}) outside [0, {}] x [0, {}]",
            self.width,
            self.alpha
        );
        let i = self.index(s, j);
        self.bits.insert(i);
    }

    /// Members ordered by cardinality, then sum.
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let stride = self.width + 1;
        self.bits
            .ones()
            .map(move |i| (i as u64 % stride, i as u64 / stride))
    }

    /// Members sorted lexicographically by `(sum, cardinality)`.
    pub fn sorted_pairs(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<_> = self.pairs().collect();
        v.sort_unstable();
        v
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    /// Projection onto the sum axis, intersected with `[0, bound]`.
    pub fn project(&self, bound: u64) -> SumSet {
        let mut out = SumSet::empty_capped(bound);
        for (s, _) in self.pairs() {
            if s <= bound {
                out.insert(s);
            }
        }
        out
    }
}

impl std::fmt::Debug for CardSumSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Grid[{}x{}]", self.width, self.alpha)?;
        f.debug_set().entries(self.sorted_pairs()).finish()
    }
}
