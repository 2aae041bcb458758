//! Modular arithmetic and factorization helpers.

use crate::error::{Error, Result};

/// Largest modulus accepted by cyclic-mode factorization.
pub const MAX_MODULUS: u64 = 1 << 40;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (g, x, _) = ext_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `m` by trial division, with derived divisor data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTable {
    pub modulus: u64,
    /// `(prime, exponent)` with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
    /// Number of divisors.
    pub sigma0: u64,
    /// Sum of divisors.
    pub sigma1: u64,
    /// Euler's totient.
    pub phi: u64,
}

impl FactorTable {
    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(q, r) in &self.factors {
            let len = divs.len();
            let mut pw = 1;
            for _ in 0..r {
                pw *= q;
                for i in 0..len {
                    divs.push(divs[i] * pw);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factorize(m: u64) -> Result<FactorTable> {
    if m < 1 {
        return Err(Error::contract("cannot factor 0"));
    }
    if m > MAX_MODULUS {
        return Err(Error::TooLarge(format!(
            "modulus {m} exceeds the supported maximum {MAX_MODULUS}"
        )));
    }
    let mut factors = Vec::new();
    let mut rest = m;
    let mut q = 2u64;
    while q * q <= rest {
        if rest.is_multiple_of(q) {
            let mut r = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                r += 1;
            }
            factors.push((q, r));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    let mut sigma0 = 1;
    let mut sigma1 = 1;
    let mut phi = m;
    for &(q, r) in &factors {
        sigma0 *= r as u64 + 1;
        sigma1 *= (q.pow(r + 1) - 1) / (q - 1);
        phi = phi / q * (q - 1);
    }
    Ok(FactorTable {
        modulus: m,
        factors,
        sigma0,
        sigma1,
        phi,
    })
}

/// Smallest prime factor of `n >= 2`.
pub fn smallest_prime_factor(n: u64) -> u64 {
    debug_assert!(n >= 2);
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut q = 3;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return q;
        }
        q += 2;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_examples() {
        let t = factorize(12).unwrap();
        assert_eq!(t.factors, vec![(2, 2), (3, 1)]);
        assert_eq!((t.sigma0, t.sigma1, t.phi), (6, 28, 4));
        assert_eq!(t.divisors(), vec![1, 2, 3, 4, 6, 12]);

        let t = factorize(7).unwrap();
        assert_eq!(t.factors, vec![(7, 1)]);

        let t = factorize(1).unwrap();
        assert!(t.factors.is_empty());
        assert_eq!((t.sigma0, t.sigma1, t.phi), (1, 1, 1));
        assert_eq!(t.divisors(), vec![1]);

        assert!(factorize(0).is_err());
    }

    #[test]
    fn factor_table_matches_brute_force() {
        for m in 1..=400u64 {
            let t = factorize(m).unwrap();
            let divs: Vec<u64> = (1..=m).filter(|d| m % d == 0).collect();
            assert_eq!(t.divisors(), divs);
            assert_eq!(t.sigma0, divs.len() as u64);
            assert_eq!(t.sigma1, divs.iter().sum::<u64>());
            assert_eq!(t.phi, (1..=m).filter(|&x| gcd(x, m) == 1).count() as u64);
            assert_eq!(t.factors.iter().map(|&(q, r)| q.pow(r)).product::<u64>(), m);
        }
    }

    #[test]
    fn inverses() {
        for m in 2..60u64 {
            for a in 1..m {
                match mod_inverse(a, m) {
                    Some(x) => assert_eq!(mul_mod(a, x, m), 1),
                    None => assert_ne!(gcd(a, m), 1),
                }
            }
        }
        assert_eq!(mod_inverse(0, 1), Some(0));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..100).filter(|&n| is_prime(n)).collect();
        assert_eq!(small.len(), 25);
        assert!(is_prime(4179340454199820289));
        assert!(!is_prime(4179340454199820287));
        assert_eq!(smallest_prime_factor(91), 7);
        assert_eq!(smallest_prime_factor(97), 97);
    }
}
