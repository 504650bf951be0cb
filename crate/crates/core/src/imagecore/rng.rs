//! Seed derivation and the SplitMix64 stream used by every stochastic kernel.
//!
//! The generator family is fixed so that a `(seed_root, path, kind, severity)`
//! tuple maps to the same corrupted raster on every platform.

use crate::corruptions::CorruptionKind;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;
const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// Incremental 64-bit FNV-1a hasher.
#[derive(Debug, Clone, Copy)]
pub struct Fnv1a(u64);

impl Default for Fnv1a {
    fn default() -> Self {
        Fnv1a(FNV_OFFSET)
    }
}

impl Fnv1a {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn update(&mut self, bytes: &[u8]) -> &mut Self {
        for &b in bytes {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(FNV_PRIME);
        }
        self
    }

    pub fn finish(&self) -> u64 {
        self.0
    }
}

pub fn fnv1a64(bytes: &[u8]) -> u64 {
    Fnv1a::new().update(bytes).finish()
}

/// SplitMix64 output mix.
#[inline]
pub fn splitmix64_mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-image seed: FNV-1a over `seed_root (LE) || path || kind id || severity`,
/// then one SplitMix64 step.
pub fn derive_seed(seed_root: u64, relative_path: &str, kind: CorruptionKind, severity: u8) -> u64 {
    let mut h = Fnv1a::new();
    h.update(&seed_root.to_le_bytes())
        .update(relative_path.as_bytes())
        .update(&[kind.id(), severity]);
    splitmix64_mix(h.finish().wrapping_add(GOLDEN_GAMMA))
}

/// SplitMix64 stream with Box-Muller normals and Poisson sampling.
#[derive(Debug, Clone)]
pub struct DeterministicRng {
    state: u64,
    spare_normal: Option<f64>,
}

impl DeterministicRng {
    pub fn new(seed: u64) -> Self {
        DeterministicRng {
            state: seed,
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        splitmix64_mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[lo, hi]` inclusive.
    pub fn int_inclusive(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        lo + (self.next_u64() % span) as i64
    }

    /// Uniform index in `[0, n)`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        (self.next_u64() % n as u64) as usize
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u keeps the log argument in (0, 1].
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * theta.sin());
        r * theta.cos()
    }

    pub fn normal(&mut self, mean: f64, std: f64) -> f64 {
        mean + std * self.standard_normal()
    }

    /// Poisson draw: inverse transform below mean 10, rounded normal
    /// approximation (continuity corrected) at and above it.
    pub fn poisson(&mut self, mean: f64) -> f64 {
        if mean <= 0.0 {
            return 0.0;
        }
        if mean < 10.0 {
            let u = self.next_f64();
            let mut k = 0u32;
            let mut p = (-mean).exp();
            let mut cdf = p;
            while u > cdf {
                k += 1;
                p *= mean / f64::from(k);
                cdf += p;
                if p < 1e-300 {
                    break;
                }
            }
            f64::from(k)
        } else {
            let z = self.standard_normal();
            (mean + mean.sqrt() * z + 0.5).floor().max(0.0)
        }
    }

    /// Independent child stream; the parent advances by one draw.
    pub fn fork(&mut self) -> DeterministicRng {
        DeterministicRng::new(splitmix64_mix(self.next_u64() ^ 0x5851_f42d_4c95_7f2d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_matches_reference_vectors() {
        assert_eq!(fnv1a64(b""), 0xcbf29ce484222325);
        assert_eq!(fnv1a64(b"a"), 0xaf63dc4c8601ec8c);
        assert_eq!(fnv1a64(b"foobar"), 0x85944171f73967e8);
    }

    #[test]
    fn splitmix_matches_reference_stream() {
        // First outputs of SplitMix64 seeded with 1234567.
        let mut rng = DeterministicRng::new(1234567);
        assert_eq!(rng.next_u64(), 6457827717110365317);
        assert_eq!(rng.next_u64(), 3203168211198807973);
        assert_eq!(rng.next_u64(), 9817491932198370423);
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = DeterministicRng::new(42);
        let mut b = DeterministicRng::new(42);
        for _ in 0..1000 {
            assert_eq!(a.standard_normal().to_bits(), b.standard_normal().to_bits());
        }
    }

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = DeterministicRng::new(7);
        for _ in 0..10_000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
            let k = rng.int_inclusive(-2, 2);
            assert!((-2..=2).contains(&k));
        }
    }

    #[test]
    fn poisson_moments_in_both_regimes() {
        let mut rng = DeterministicRng::new(99);
        for &mean in &[0.7, 4.0, 9.5, 30.0, 300.0] {
            let n = 200_000;
            let draws: Vec<f64> = (0..n).map(|_| rng.poisson(mean)).collect();
            let m = draws.iter().sum::<f64>() / n as f64;
            let v = draws.iter().map(|d| (d - m).powi(2)).sum::<f64>() / n as f64;
            assert!((m - mean).abs() / mean < 0.02, "mean {m} vs {mean}");
            assert!((v - mean).abs() / mean < 0.05, "var {v} vs {mean}");
        }
    }
}
