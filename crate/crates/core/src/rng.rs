//! Portable seeded randomness.
//!
//! Every randomized step in the crate draws from ChaCha8 seeded through
//! `SeedableRng::seed_from_u64` (rand_core's PCG32 seed expansion). Only the
//! raw `next_u64` stream is consumed; the reductions to bounded integers and
//! unit floats are defined here so that other implementations can reproduce
//! samples exactly:
//!
//! * `below(n)`: rejection sampling. Draw `x = next_u64()`; reject while
//!   `x >= u64::MAX - (u64::MAX % n)` (i.e. in the final partial bucket);
//!   return `x % n`.
//! * `unit()`: `(next_u64() >> 11) as f64 * 2^-53`, uniform on `[0, 1)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct PortableRng {
    inner: ChaCha8Rng,
}

impl PortableRng {
    pub fn seed_from_u64(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli trial with success probability `p`.
    pub fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    /// Partial Fisher-Yates: the first `k` positions of a shuffle of
    /// `0..n`, in draw order.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot draw {k} of {n} without replacement");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = PortableRng::seed_from_u64(42);
        let mut b = PortableRng::seed_from_u64(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn sample_indices_distinct_and_in_range() {
        let mut rng = PortableRng::seed_from_u64(7);
        let mut got = rng.sample_indices(20, 7);
        assert_eq!(got.len(), 7);
        assert!(got.iter().all(|&i| i < 20));
        got.sort_unstable();
        got.dedup();
        assert_eq!(got.len(), 7);
    }

    #[test]
    fn full_draw_is_permutation() {
        let mut rng = PortableRng::seed_from_u64(1);
        let mut got = rng.sample_indices(7, 7);
        got.sort_unstable();
        assert_eq!(got, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn unit_in_range() {
        let mut rng = PortableRng::seed_from_u64(3);
        for _ in 0..1000 {
            let u = rng.unit();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
