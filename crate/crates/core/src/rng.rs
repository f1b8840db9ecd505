//! Deterministic random streams.
//!
//! Every randomized construction takes an explicit seed, and per-item
//! streams (one per atom, one per trial) are derived from the master seed so
//! results do not depend on build order or thread schedule.

use crate::math;
use num_complex::Complex64;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// splitmix64 finalizer; good avalanche behavior for seed derivation.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Mix a master seed with a stream index into a fresh generator.
///
/// Streams for distinct indices are independent for practical purposes, and
/// `derive(s, i)` depends on nothing else, so items may be built in any
/// order (or in parallel) with identical results.
pub fn derive(master_seed: u64, stream: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(stream)))
}

/// Uniform f64 in [0, 1) with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw (Box-Muller; consumes two uniforms per pair).
pub struct Normal {
    spare: Option<f64>,
}

impl Normal {
    pub fn new() -> Self {
        Normal { spare: None }
    }

    pub fn sample(&mut self, rng: &mut impl RngCore) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        // u1 in (0, 1] so the log is finite.
        let u1 = 1.0 - uniform(rng);
        let u2 = uniform(rng);
        let r = math::sqrt(-2.0 * math::ln(u1));
        let theta = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(r * math::sin(theta));
        r * math::cos(theta)
    }

    /// Complex Gaussian with independent N(0,1) real and imaginary parts.
    pub fn sample_complex(&mut self, rng: &mut impl RngCore) -> Complex64 {
        let re = self.sample(rng);
        let im = self.sample(rng);
        Complex64::new(re, im)
    }
}

impl Default for Normal {
    fn default() -> Self {
        Self::new()
    }
}
