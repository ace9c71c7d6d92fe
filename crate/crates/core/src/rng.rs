//! Seeded pseudo-random numbers.
//!
//! Seeds are expanded with splitmix64 into the 256-bit state of a
//! xoshiro256** generator. Streams are deterministic per build; they are not
//! meant to match any other implementation bit for bit.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("next_int_below requires n >= 1")]
pub struct EmptyRange;

/// splitmix64 step, used only to fill the xoshiro state.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256** generator. One instance per run; never shared.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    pub fn seed(seed: u64) -> Self {
        let mut sm = seed;
        let s = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        // splitmix64 is a bijection on its counter, so four consecutive
        // outputs cannot all be zero.
        debug_assert!(s.iter().any(|&w| w != 0));
        Self { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Unbiased uniform integer in `[0, n)` (Lemire's multiply-and-reject).
    pub fn next_int_below(&mut self, n: u64) -> Result<u64, EmptyRange> {
        if n == 0 {
            return Err(EmptyRange);
        }
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = (self.next_u64() as u128) * (n as u128);
            if (m as u64) >= threshold {
                return Ok((m >> 64) as u64);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Rng::seed(7);
        let mut b = Rng::seed(7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_seeds_diverge_early() {
        let mut a = Rng::seed(7);
        let mut b = Rng::seed(8);
        let differ = (0..16).any(|_| a.next_u64() != b.next_u64());
        assert!(differ);
    }

    #[test]
    fn zero_seed_is_not_degenerate() {
        let mut r = Rng::seed(0);
        let draws: Vec<u64> = (0..64).map(|_| r.next_u64()).collect();
        assert!(draws.iter().any(|&d| d != 0));
        let distinct: std::collections::BTreeSet<_> = draws.iter().collect();
        assert!(distinct.len() > 60);
    }

    #[test]
    fn f64_in_unit_interval_with_mean_half() {
        let mut r = Rng::seed(123);
        let n = 100_000;
        let mut sum = 0.0;
        for _ in 0..n {
            let v = r.next_f64();
            assert!((0.0..1.0).contains(&v));
            sum += v;
        }
        assert!((sum / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn int_below_one_is_zero() {
        let mut r = Rng::seed(5);
        for _ in 0..100 {
            assert_eq!(r.next_int_below(1), Ok(0));
        }
    }

    #[test]
    fn int_below_zero_rejected() {
        assert_eq!(Rng::seed(5).next_int_below(0), Err(EmptyRange));
    }

    #[test]
    fn int_below_two_is_fair() {
        let mut r = Rng::seed(99);
        let n = 100_000;
        let ones: u64 = (0..n).map(|_| r.next_int_below(2).unwrap()).sum();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 0.01);
    }

    #[test]
    fn int_below_ten_passes_chi_square() {
        let mut r = Rng::seed(2024);
        let n = 100_000;
        let mut counts = [0u64; 10];
        for _ in 0..n {
            counts[r.next_int_below(10).unwrap() as usize] += 1;
        }
        let expected = n as f64 / 10.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // chi-square critical value, 9 dof, alpha = 0.001
        assert!(chi2 < 27.877, "chi2 = {chi2}");
    }

    #[test]
    fn int_below_large_n_stays_in_range() {
        let mut r = Rng::seed(1);
        let n = (1u64 << 63) + 12345;
        for _ in 0..1000 {
            assert!(r.next_int_below(n).unwrap() < n);
        }
    }
}
