//! Reproducible random instances and output fingerprints.

use crate::multiset::Multiset;
use crate::sumset::SumSet;

/// Knuth's MMIX linear congruential generator:
/// `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub const MULTIPLIER: u64 = 6364136223846793005;
    pub const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    /// Advances the state and returns it.
    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// A value in `[1, max]` from the high 31 bits of the next state.
    pub fn draw(&mut self, max: u64) -> u64 {
        1 + (self.next_u64() >> 33) % max
    }
}

/// `n` independent draws from `[1, max_value]` (repeats become multiplicity).
pub fn random_multiset(rng: &mut Lcg, n: usize, max_value: u64) -> Multiset {
    let values: Vec<u64> = (0..n).map(|_| rng.draw(max_value.max(1))).collect();
    Multiset::from_values(&values).expect("draws are positive")
}

/// FNV-1a (64-bit) over the members, each as 8 little-endian bytes, in
/// ascending order.
pub fn checksum(s: &SumSet) -> u64 {
    const OFFSET: u64 = 0xcbf29ce484222325;
    const PRIME: u64 = 0x100000001b3;
    let mut h = OFFSET;
    for v in s.members() {
        for byte in v.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_fixed() {
        let mut rng = Lcg::new(7);
        assert_eq!(
            rng.next_u64(),
            7u64.wrapping_mul(Lcg::MULTIPLIER)
                .wrapping_add(Lcg::INCREMENT)
        );
        let mut a = Lcg::new(42);
        let mut b = Lcg::new(42);
        let x: Vec<u64> = (0..5).map(|_| a.draw(10)).collect();
        let y: Vec<u64> = (0..5).map(|_| b.draw(10)).collect();
        assert_eq!(x, y);
        assert!(x.iter().all(|&v| (1..=10).contains(&v)));
    }

    #[test]
    fn checksum_of_zero_set() {
        // FNV-1a of eight zero bytes
        let z = SumSet::zero_capped(3);
        let mut h: u64 = 0xcbf29ce484222325;
        for _ in 0..8 {
            h = h.wrapping_mul(0x100000001b3);
        }
        assert_eq!(checksum(&z), h);
        assert_ne!(checksum(&z), checksum(&SumSet::capped_from(3, [0, 1])));
    }
}
