//! Counter-based reproducible random streams.
//!
//! The generator is a keyed SplitMix64: output `i` of a stream is
//! `mix64(key + i * GOLDEN)` where `mix64` is the SplitMix64 finalizer and
//! the key is derived by hashing `(seed, label)`. There is no hidden state
//! beyond the counter, no platform entropy, and no data-dependent branching,
//! so streams are bitwise reproducible across platforms and thread
//! schedules. Distinct labels give statistically independent streams (the
//! cross-correlation contract is exercised in the test suite).

/// 2^64 / phi, the SplitMix64 counter stride.
const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer (Stafford variant 13).
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream identified by `(seed, label)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    key: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64, label: u64) -> Self {
        let key = mix64(
            mix64(seed.wrapping_add(GOLDEN))
                ^ mix64(label.wrapping_mul(0xA24B_AED4_963E_E407).wrapping_add(1)),
        );
        RngStream { key, counter: 0 }
    }

    /// Stream labeled by a phase name plus an index, e.g.
    /// `RngStream::labeled(seed, "trajectory", 17)`. The phase name is
    /// FNV-1a hashed so call sites stay readable.
    pub fn labeled(seed: u64, phase: &str, index: u64) -> Self {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for b in phase.bytes() {
            h = (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3);
        }
        Self::new(seed, mix64(h).wrapping_add(index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, 1), 53-bit resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    #[inline]
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Exponential waiting time with the given rate, via inversion.
    /// `-ln(1 - u)` is computed as `-ln_1p(-u)` to keep small quantiles exact.
    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        debug_assert!(rate > 0.0);
        -(-self.uniform()).ln_1p() / rate
    }

    /// Unbiased uniform index in `0..n` by rejection.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        let n64 = n as u64;
        let zone = u64::MAX - u64::MAX % n64;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n64) as usize;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_seed_and_label_reproduce_bitwise() {
        let mut a = RngStream::new(42, 7);
        let mut b = RngStream::new(42, 7);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn distinct_labels_diverge() {
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let same = (0..64).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn labeled_streams_are_stable() {
        // Frozen outputs: these must never change, or every seeded run in the
        // project changes behind the users' backs.
        let mut s = RngStream::new(1, 2);
        assert_eq!(s.next_u64(), 0x72c0_4efc_26f2_7e39);
        let mut t = RngStream::labeled(1, "trajectory", 2);
        assert_eq!(t.next_u64(), 0xc0f3_bc0c_face_b1d7);
    }

    #[test]
    fn uniform_range_and_moments() {
        let mut s = RngStream::new(3, 0);
        let n = 100_000;
        let mut sum = 0.0;
        let mut min = 1.0f64;
        let mut max = 0.0f64;
        for _ in 0..n {
            let u = s.uniform();
            assert!((0.0..1.0).contains(&u));
            sum += u;
            min = min.min(u);
            max = max.max(u);
        }
        let mean = sum / n as f64;
        // se = 1/sqrt(12 n) ~ 9.1e-4; allow 4 sigma.
        assert!((mean - 0.5).abs() < 4.0 * 9.2e-4, "mean {mean}");
        assert!(min < 0.01 && max > 0.99);
    }

    #[test]
    fn exponential_mean_matches_rate() {
        let mut s = RngStream::new(9, 0);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| s.exponential(4.0)).sum::<f64>() / n as f64;
        assert!((mean - 0.25).abs() < 0.25 * 0.02, "mean {mean}");
    }

    #[test]
    fn index_is_unbiased_over_small_range() {
        let mut s = RngStream::new(11, 0);
        let mut counts = [0u64; 3];
        for _ in 0..30_000 {
            counts[s.index(3)] += 1;
        }
        for &c in &counts {
            // 5 sigma of Binomial(30000, 1/3).
            assert!(
                (c as f64 - 10_000.0).abs()
                    < 5.0 * (30_000.0f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt()
            );
        }
    }

    #[test]
    fn cross_correlation_of_two_labels_is_small() {
        let mut a = RngStream::new(5, 100);
        let mut b = RngStream::new(5, 101);
        let n = 1_000_000;
        let mut acc = 0.0;
        for _ in 0..n {
            acc += (a.uniform() - 0.5) * (b.uniform() - 0.5);
        }
        let corr = acc / n as f64 / (1.0 / 12.0);
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr {corr}");
    }
}
