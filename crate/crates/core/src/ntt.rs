//! Exact number-theoretic transform over word-sized primes `c * 2^k + 1`.
//!
//! Arithmetic is Montgomery form with `R = 2^64`; every prime used here is
//! below `2^62`. Data is kept in normal form and twiddles in Montgomery
//! form, so a twiddle product needs a single reduction.

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::number::{is_prime, mod_inverse, mul_mod, pow_mod};

/// `29 * 2^57 + 1`: default prime for boolean and modular-count products.
pub const DEFAULT_PRIME: u64 = 4_179_340_454_199_820_289;

/// Operands at or below this length use the schoolbook product.
pub const SCHOOLBOOK_CUTOFF: usize = 64;

const PAR_MIN_LEN: usize = 1 << 15;
const PAR_BLOCK: usize = 1 << 12;

type Butterflies = fn(&NttPrime, &mut [u64], &mut [u64], &[u64]);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NttPrime {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `R^2 mod p`
    r2: u64,
    generator: u64,
    two_adicity: u32,
}

impl NttPrime {
    /// Panics unless `p` is a prime in `(2, 2^62)`.
    pub fn new(p: u64) -> Self {
        assert!(
            p > 2 && p < (1 << 62) && is_prime(p),
            "{p} is not a usable prime"
        );
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = mul_mod(r, r, p);
        let two_adicity = (p - 1).trailing_zeros();
        NttPrime {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
            generator: primitive_root(p),
            two_adicity,
        }
    }

    pub fn default_prime() -> Self {
        Self::new(DEFAULT_PRIME)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Largest supported transform length is `2^max_log_len()`.
    pub fn max_log_len(&self) -> u32 {
        self.two_adicity
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Montgomery product `a * b / R mod p`.
    #[inline]
    fn mont_mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline]
    fn mont_form(&self, a: u64) -> u64 {
        self.mont_mul(a, self.r2)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    /// Twiddle table: entry `h + j` holds `w_{2h}^j` (Montgomery form) for
    /// every power of two `h < n` and `j < h`.
    fn twiddles(&self, n: usize, inverse: bool) -> Vec<u64> {
        let mut tw = vec![0u64; n.max(2)];
        let mut h = 1;
        while h < n {
            let mut w = pow_mod(self.generator, (self.p - 1) / (2 * h as u64), self.p);
            if inverse {
                w = pow_mod(w, self.p - 2, self.p);
            }
            let w = self.mont_form(w);
            let mut cur = self.mont_form(1);
            for j in 0..h {
                tw[h + j] = cur;
                cur = self.mont_mul(cur, w);
            }
            h *= 2;
        }
        tw
    }

    /// Decimation-in-frequency forward transform; output is bit-reversed.
    fn forward(&self, x: &mut [u64], tw: &[u64]) {
        let mut h = x.len() / 2;
        while h >= 1 {
            self.run_stage(x, h, &tw[h..2 * h], Self::dif_butterflies);
            h /= 2;
        }
    }

    /// Decimation-in-time inverse transform (unscaled); input bit-reversed.
    fn inverse(&self, x: &mut [u64], tw: &[u64]) {
        let mut h = 1;
        while h < x.len() {
            self.run_stage(x, h, &tw[h..2 * h], Self::dit_butterflies);
            h *= 2;
        }
    }

    /// Runs one butterfly stage, splitting work across threads for long inputs.
    fn run_stage(&self, x: &mut [u64], h: usize, tws: &[u64], butterflies: Butterflies) {
        let per_chunk = |chunk: &mut [u64]| {
            let (lo, hi) = chunk.split_at_mut(h);
            butterflies(self, lo, hi, tws);
        };
        if x.len() < PAR_MIN_LEN {
            x.chunks_mut(2 * h).for_each(per_chunk);
        } else if h >= PAR_BLOCK {
            for chunk in x.chunks_mut(2 * h) {
                let (lo, hi) = chunk.split_at_mut(h);
                lo.par_chunks_mut(PAR_BLOCK)
                    .zip(hi.par_chunks_mut(PAR_BLOCK))
                    .zip(tws.par_chunks(PAR_BLOCK))
                    .for_each(|((l, r), t)| butterflies(self, l, r, t));
            }
        } else {
            x.par_chunks_mut(2 * h).for_each(per_chunk);
        }
    }

    #[inline]
    fn dif_butterflies(&self, lo: &mut [u64], hi: &mut [u64], tw: &[u64]) {
        for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
            let (x, y) = (*a, *b);
            *a = self.add(x, y);
            *b = self.mont_mul(self.sub(x, y), w);
        }
    }

    #[inline]
    fn dit_butterflies(&self, lo: &mut [u64], hi: &mut [u64], tw: &[u64]) {
        for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tw) {
            let x = *a;
            let y = self.mont_mul(*b, w);
            *a = self.add(x, y);
            *b = self.sub(x, y);
        }
    }

    /// Linear convolution of `a` and `b` modulo `p`, first `out_len`
    /// coefficients. Inputs must already be reduced below `p`.
    pub fn convolve(&self, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        let full = (a.len() + b.len()).saturating_sub(1);
        let out_len = out_len.min(full);
        if out_len == 0 {
            return Vec::new();
        }
        let a = &a[..a.len().min(out_len)];
        let b = &b[..b.len().min(out_len)];
        if a.len().min(b.len()) <= SCHOOLBOOK_CUTOFF {
            return self.schoolbook(a, b, out_len);
        }
        let n = (a.len() + b.len() - 1).next_power_of_two();
        assert!(
            n.trailing_zeros() <= self.two_adicity,
            "transform length {n} unsupported by prime {}",
            self.p
        );
        let tw = self.twiddles(n, false);
        let itw = self.twiddles(n, true);
        let mut fa = vec![0u64; n];
        fa[..a.len()].copy_from_slice(a);
        let mut fb = vec![0u64; n];
        fb[..b.len()].copy_from_slice(b);
        rayon::join(|| self.forward(&mut fa, &tw), || self.forward(&mut fb, &tw));
        // mont_mul leaves a factor R^{-1}; fold R * n^{-1} into the scale.
        let n_inv = pow_mod(n as u64 % self.p, self.p - 2, self.p);
        let scale = self.mont_form(self.mont_form(n_inv));
        fa.iter_mut()
            .zip(&fb)
            .for_each(|(x, &y)| *x = self.mont_mul(*x, y));
        drop(fb);
        self.inverse(&mut fa, &itw);
        fa.truncate(out_len);
        fa.iter_mut().for_each(|x| *x = self.mont_mul(*x, scale));
        fa
    }

    fn schoolbook(&self, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        let mut out = vec![0u64; out_len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let xm = self.mont_form(x);
            for (j, &y) in b.iter().enumerate().take(out_len.saturating_sub(i)) {
                out[i + j] = self.add(out[i + j], self.mont_mul(y, xm));
            }
        }
        out
    }
}

/// `3 * 2^30 + 1`: 32-bit prime for boolean products.
pub const SMALL_PRIME: u32 = 3_221_225_473;

/// Transform over [`SMALL_PRIME`] with 32-bit Montgomery arithmetic.
///
/// Only used where every true coefficient is below the prime, so a
/// nonzero residue is the same as a nonzero count.
#[derive(Debug, Clone, Copy)]
pub struct SmallNtt {
    p: u32,
    /// `p^{-1} mod 2^32`
    inv: u32,
    r2: u32,
}

impl Default for SmallNtt {
    fn default() -> Self {
        let p = SMALL_PRIME;
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u64 << 32) % p as u64;
        SmallNtt {
            p,
            inv,
            r2: (r * r % p as u64) as u32,
        }
    }
}

impl SmallNtt {
    const GENERATOR: u64 = 5;

    pub fn modulus(&self) -> u32 {
        self.p
    }

    /// `a * b / 2^32 mod p`; valid for any `p < 2^32`.
    #[inline(always)]
    fn mont_mul(&self, a: u32, b: u32) -> u32 {
        let t = a as u64 * b as u64;
        let m = (t as u32).wrapping_mul(self.inv);
        let (hi, mp) = ((t >> 32) as u32, ((m as u64 * self.p as u64) >> 32) as u32);
        if hi >= mp {
            hi - mp
        } else {
            hi.wrapping_sub(mp).wrapping_add(self.p)
        }
    }

    #[inline(always)]
    fn add(&self, a: u32, b: u32) -> u32 {
        let (s, carry) = a.overflowing_add(b);
        if carry || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(b).wrapping_add(self.p)
        }
    }

    fn twiddles(&self, n: usize, inverse: bool) -> Vec<u32> {
        let p = self.p as u64;
        let mut tw = vec![0u32; n.max(2)];
        let mut h = 1;
        while h < n {
            let mut w = pow_mod(Self::GENERATOR, (p - 1) / (2 * h as u64), p);
            if inverse {
                w = pow_mod(w, p - 2, p);
            }
            let w = self.mont_mul(w as u32, self.r2);
            let mut cur = self.mont_mul(1, self.r2);
            for j in 0..h {
                tw[h + j] = cur;
                cur = self.mont_mul(cur, w);
            }
            h *= 2;
        }
        tw
    }

    fn forward(&self, x: &mut [u32], tw: &[u32]) {
        let mut h = x.len() / 2;
        while h >= 1 {
            let tws = &tw[h..2 * h];
            for chunk in x.chunks_exact_mut(2 * h) {
                let (lo, hi) = chunk.split_at_mut(h);
                for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tws) {
                    let (u, v) = (*a, *b);
                    *a = self.add(u, v);
                    *b = self.mont_mul(self.sub(u, v), w);
                }
            }
            h /= 2;
        }
    }

    fn inverse(&self, x: &mut [u32], tw: &[u32]) {
        let mut h = 1;
        while h < x.len() {
            let tws = &tw[h..2 * h];
            for chunk in x.chunks_exact_mut(2 * h) {
                let (lo, hi) = chunk.split_at_mut(h);
                for ((a, b), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(tws) {
                    let u = *a;
                    let v = self.mont_mul(*b, w);
                    *a = self.add(u, v);
                    *b = self.sub(u, v);
                }
            }
            h *= 2;
        }
    }

    /// Linear convolution modulo the prime, first `out_len` coefficients.
    pub fn convolve(&self, a: &[u32], b: &[u32], out_len: usize) -> Vec<u32> {
        let full = (a.len() + b.len()).saturating_sub(1);
        let out_len = out_len.min(full);
        if out_len == 0 {
            return Vec::new();
        }
        let a = &a[..a.len().min(out_len)];
        let b = &b[..b.len().min(out_len)];
        let n = (a.len() + b.len() - 1).next_power_of_two();
        assert!(n <= 1 << 30, "transform length {n} unsupported");
        let tw = self.twiddles(n, false);
        let mut fa = vec![0u32; n];
        fa[..a.len()].copy_from_slice(a);
        let mut fb = vec![0u32; n];
        fb[..b.len()].copy_from_slice(b);
        rayon::join(|| self.forward(&mut fa, &tw), || self.forward(&mut fb, &tw));
        drop(tw);
        let p = self.p as u64;
        let n_inv = pow_mod(n as u64 % p, p - 2, p) as u32;
        // two Montgomery factors: one from the pointwise product, one here
        let scale = self.mont_mul(self.mont_mul(n_inv, self.r2), self.r2);
        fa.iter_mut()
            .zip(&fb)
            .for_each(|(x, &y)| *x = self.mont_mul(*x, y));
        drop(fb);
        self.inverse(&mut fa, &self.twiddles(n, true));
        fa.truncate(out_len);
        fa.iter_mut().for_each(|x| *x = self.mont_mul(*x, scale));
        fa
    }
}

fn primitive_root(p: u64) -> u64 {
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut rest = phi;
    let mut q = 2;
    while q * q <= rest {
        if rest.is_multiple_of(q) {
            factors.push(q);
            while rest.is_multiple_of(q) {
                rest /= q;
            }
        }
        q += 1;
    }
    if rest > 1 {
        factors.push(rest);
    }
    (2..)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, phi / q, p) != 1))
        .expect("every prime has a primitive root")
}

/// `count` distinct primes `c * 2^40 + 1` in `(2^61, 2^62)`, largest first.
pub fn crt_primes(count: usize) -> Vec<NttPrime> {
    const SHIFT: u32 = 40;
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << (62 - SHIFT)) - 1;
    while out.len() < count {
        assert!(c > 1 << (61 - SHIFT), "ran out of CRT primes");
        let p = (c << SHIFT) + 1;
        if is_prime(p) {
            out.push(NttPrime::new(p));
        }
        c -= 1;
    }
    out
}

/// Exact linear convolution of arbitrary-precision sequences via
/// multi-prime transforms and Garner reconstruction.
pub fn convolve_exact(a: &[BigUint], b: &[BigUint], out_len: usize) -> Vec<BigUint> {
    let full = (a.len() + b.len()).saturating_sub(1);
    let out_len = out_len.min(full);
    if out_len == 0 {
        return Vec::new();
    }
    let a = &a[..a.len().min(out_len)];
    let b = &b[..b.len().min(out_len)];
    let bits = |v: &[BigUint]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
    let terms = a.len().min(b.len()) as u64;
    let need_bits = bits(a) + bits(b) + (64 - terms.leading_zeros() as u64) + 1;
    let primes = crt_primes(need_bits.div_ceil(61) as usize);

    let residues: Vec<Vec<u64>> = primes
        .par_iter()
        .map(|pr| {
            let p = BigUint::from(pr.modulus());
            let red = |v: &[BigUint]| -> Vec<u64> {
                v.iter()
                    .map(|x| {
                        let r = x % &p;
                        r.iter_u64_digits().next().unwrap_or(0)
                    })
                    .collect()
            };
            pr.convolve(&red(a), &red(b), out_len)
        })
        .collect();

    // Garner: x = t0 + p0 (t1 + p1 (t2 + ...)).
    let mods: Vec<u64> = primes.iter().map(|p| p.modulus()).collect();
    let k = mods.len();
    let prefix_inv: Vec<u64> = (0..k)
        .map(|i| {
            let prod = mods[..i]
                .iter()
                .fold(1u64, |acc, &m| mul_mod(acc, m, mods[i]));
            mod_inverse(prod, mods[i]).expect("distinct primes are coprime")
        })
        .collect();
    (0..out_len)
        .into_par_iter()
        .map(|idx| {
            let mut digits = Vec::with_capacity(k);
            for i in 0..k {
                // value of the partial mixed-radix number modulo mods[i]
                let mut acc = 0u64;
                let mut radix = 1u64;
                for (j, &t) in digits.iter().enumerate() {
                    acc = (acc + mul_mod(t, radix, mods[i])) % mods[i];
                    radix = mul_mod(radix, mods[j] % mods[i], mods[i]);
                }
                let diff = (residues[i][idx] + mods[i] - acc) % mods[i];
                digits.push(mul_mod(diff, prefix_inv[i], mods[i]));
            }
            let mut x = BigUint::from(0u32);
            for i in (0..k).rev() {
                x = x * mods[i] + digits[i];
            }
            x
        })
        .collect()
}
