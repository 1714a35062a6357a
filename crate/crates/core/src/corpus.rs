//! Deterministic text generators for tests and benchmarks.
//!
//! Randomness comes from xorshift64* (Marsaglia's xorshift with shifts
//! 12, 25, 27 followed by multiplication by `0x2545F4914F6CDD1D`), so a seed
//! reproduces the same corpus in any implementation.

use crate::error::{Error, Result};
use crate::reconstruct::zimin_letters;

pub const DEFAULT_SEED: u64 = 0x005e_ed0f_7a1d_2024;

/// xorshift64* generator. A zero seed is replaced by a fixed nonzero one.
#[derive(Debug, Clone)]
pub struct XorShift64 {
    state: u64,
}

impl XorShift64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: if seed == 0 { 0x9e37_79b9_7f4a_7c15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    /// Uniform value in `0..bound` by rejection.
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "empty range");
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// Uniform float in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn letter(i: usize) -> u8 {
    if i < 26 {
        b'a' + i as u8
    } else {
        i as u8
    }
}

/// `n` symbols drawn uniformly from the first `sigma` letters.
pub fn random_text(n: usize, sigma: usize, seed: u64) -> Result<Vec<u8>> {
    if sigma == 0 || sigma > 256 {
        return Err(Error::InvalidArgument(format!("alphabet size {sigma} not in 1..=256")));
    }
    let mut rng = XorShift64::new(seed);
    Ok((0..n).map(|_| letter(rng.below(sigma as u64) as usize)).collect())
}

pub fn unary(n: usize) -> Vec<u8> {
    vec![b'a'; n]
}

/// `(ab)^k`.
pub fn ab_power(k: usize) -> Vec<u8> {
    b"ab".repeat(k)
}

/// Palindromic Zimin word of degree `k` over single letters.
pub fn zimin(k: usize) -> Result<Vec<u8>> {
    zimin_letters(k)
}

/// Prefix of length `n` of the Fibonacci word `abaababaabaab...`.
pub fn fibonacci(n: usize) -> Vec<u8> {
    let (mut prev, mut word) = (b"a".to_vec(), b"ab".to_vec());
    while word.len() < n {
        let next = [word.as_slice(), prev.as_slice()].concat();
        prev = word;
        word = next;
    }
    word.truncate(n);
    word
}

/// Sturmian word of length `n` with a seeded irrational-looking slope:
/// `s[i] = floor((i + 2) a) - floor((i + 1) a)` for `a` drawn from the seed.
pub fn sturmian(n: usize, seed: u64) -> Vec<u8> {
    let mut rng = XorShift64::new(seed);
    let slope = 0.2 + 0.6 * rng.unit();
    (0..n)
        .map(|i| {
            let hi = ((i + 2) as f64 * slope).floor();
            let lo = ((i + 1) as f64 * slope).floor();
            if hi - lo >= 1.0 {
                b'b'
            } else {
                b'a'
            }
        })
        .collect()
}

/// `(q0 q1)^reps q0`.
pub fn periodic(q0: &[u8], q1: &[u8], reps: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(reps * (q0.len() + q1.len()) + q0.len());
    for _ in 0..reps {
        out.extend_from_slice(q0);
        out.extend_from_slice(q1);
    }
    out.extend_from_slice(q0);
    out
}

/// Every string of length `n` over the first `sigma` letters, in
/// lexicographic order.
pub fn all_strings(n: usize, sigma: usize) -> impl Iterator<Item = Vec<u8>> {
    let total = (sigma as u64).checked_pow(n as u32).expect("enumeration too large");
    (0..total).map(move |mut code| {
        let mut s = vec![b'a'; n];
        for i in (0..n).rev() {
            s[i] = letter((code % sigma as u64) as usize);
            code /= sigma as u64;
        }
        s
    })
}
