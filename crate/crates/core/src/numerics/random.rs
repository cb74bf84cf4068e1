//! Reproducible, independently seekable random streams.
//!
//! A stream is a ChaCha20 keystream keyed by the master seed with the stream
//! index selecting the ChaCha nonce, so `(master_seed, stream_index)` fully
//! determines the sequence and shards can be generated in any order.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};

#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha20Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    #[inline]
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}

/// One draw from `N(mean, variance)`. Zero variance returns `mean` exactly
/// without consuming randomness.
pub fn sample_normal(stream: &mut RandomStream, mean: f64, variance: f64) -> Result<f64> {
    if !(variance >= 0.0) || !variance.is_finite() {
        return Err(invalid(format!("variance must be finite and non-negative, got {variance}")));
    }
    if variance == 0.0 {
        return Ok(mean);
    }
    Ok(mean + variance.sqrt() * stream.standard_normal())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_is_exact() {
        let mut s = RandomStream::new(1, 0);
        assert_eq!(sample_normal(&mut s, 0.731, 0.0).unwrap(), 0.731);
    }

    #[test]
    fn negative_variance_rejected() {
        let mut s = RandomStream::new(1, 0);
        assert!(sample_normal(&mut s, 0.0, -1e-3).is_err());
        assert!(sample_normal(&mut s, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn sample_mean_within_five_standard_errors() {
        let n = 1_000_000;
        let mut s = RandomStream::new(2024, 7);
        let mut sum = 0.0;
        for _ in 0..n {
            sum += sample_normal(&mut s, 0.0, 1.0).unwrap();
        }
        let mean = sum / n as f64;
        assert!(mean.abs() < 5.0 / (n as f64).sqrt(), "mean {mean}");
    }

    #[test]
    fn equal_keys_reproduce_distinct_keys_diverge() {
        let draw = |seed, idx| {
            let mut s = RandomStream::new(seed, idx);
            (0..1000).map(|_| s.standard_normal().to_bits()).collect::<Vec<_>>()
        };
        assert_eq!(draw(5, 3), draw(5, 3));
        assert_ne!(draw(5, 3), draw(5, 4));
        assert_ne!(draw(5, 3), draw(6, 3));
    }

    #[test]
    fn distinct_streams_are_uncorrelated() {
        let n = 200_000;
        let mut a = RandomStream::new(11, 0);
        let mut b = RandomStream::new(11, 1);
        let mut cross = 0.0;
        for _ in 0..n {
            cross += a.standard_normal() * b.standard_normal();
        }
        let corr = cross / n as f64;
        assert!(corr.abs() < 5.0 / (n as f64).sqrt(), "corr {corr}");
    }
}
