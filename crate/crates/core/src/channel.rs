//! Binary-input AWGN channel under all-zero transmission.
//!
//! Bit 0 is sent as +1 and bit 1 as −1, so a received `y` has LLR
//! `2y/σ²` and, for the all-zero word, LLRs are i.i.d. `N(2/σ², 4/σ²)`.

use std::ops::Deref;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelSpec {
    sigma: f64,
    rate: f64,
}

impl ChannelSpec {
    pub fn new(sigma: f64, rate: f64) -> Result<Self> {
        check_sigma(sigma)?;
        if !(rate > 0.0 && rate < 1.0) {
            return Err(Error::Channel(format!("rate {rate} outside (0, 1)")));
        }
        Ok(Self { sigma, rate })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn ebn0_db(&self) -> f64 {
        10.0 * (1.0 / (2.0 * self.rate * self.sigma * self.sigma)).log10()
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(Error::Channel(format!("sigma {sigma} must be positive and finite")))
    }
}

/// Channel log-likelihood ratios `log p(y|0)/p(y|1)`, one per code bit.
#[derive(Clone, Debug, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Channel(format!("non-finite llr {bad}")));
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for LlrVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// `Eb/N0` in dB for noise level `sigma` at code rate `rate`.
pub fn sigma_to_ebn0_db(sigma: f64, rate: f64) -> Result<f64> {
    Ok(ChannelSpec::new(sigma, rate)?.ebn0_db())
}

/// Draws `n` LLRs for the all-zero codeword: i.i.d. with mean `2/σ²` and
/// variance `4/σ²`. The same `(n, sigma, seed)` always gives the same vector.
pub fn sample_llr(n: usize, sigma: f64, seed: u64) -> Result<LlrVector> {
    check_sigma(sigma)?;
    let s2 = sigma * sigma;
    let normal = Normal::new(2.0 / s2, 2.0 / sigma).expect("finite positive std");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LlrVector::new((0..n).map(|_| normal.sample(&mut rng)).collect())
}

/// LLRs `2·y/σ²` of a received real vector.
pub fn llr_from_received(y: &[f64], sigma: f64) -> Result<LlrVector> {
    check_sigma(sigma)?;
    let scale = 2.0 / (sigma * sigma);
    LlrVector::new(y.iter().map(|v| v * scale).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        (mean, var)
    }

    #[test]
    fn table_snr_column() {
        assert!((sigma_to_ebn0_db(0.9, 0.25).unwrap() - 3.93).abs() < 0.005);
        assert!((sigma_to_ebn0_db(1.2, 0.25).unwrap() - 1.43).abs() < 0.005);
        assert!(sigma_to_ebn0_db(1.0, 0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn ebn0_domain_errors() {
        assert!(sigma_to_ebn0_db(0.0, 0.5).is_err());
        assert!(sigma_to_ebn0_db(1.0, 1.0).is_err());
        assert!(sigma_to_ebn0_db(1.0, 0.0).is_err());
        assert!(sigma_to_ebn0_db(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn ebn0_strictly_decreasing() {
        let sigmas = [0.5, 0.7, 0.9, 1.1, 1.3];
        for w in sigmas.windows(2) {
            assert!(sigma_to_ebn0_db(w[0], 0.25).unwrap() > sigma_to_ebn0_db(w[1], 0.25).unwrap());
        }
        assert!(sigma_to_ebn0_db(1.0, 0.25).unwrap() > sigma_to_ebn0_db(1.0, 0.4).unwrap());
    }

    #[test]
    fn llr_moments() {
        for (sigma, mean, var) in [(1.0, 2.0, 4.0), (0.5, 8.0, 16.0)] {
            let llr = sample_llr(1_000_000, sigma, 42).unwrap();
            let (m, v) = moments(&llr);
            assert!((m - mean).abs() / mean < 0.01, "mean {m}");
            assert!((v - var).abs() / var < 0.01, "var {v}");
        }
    }

    #[test]
    fn llr_deterministic() {
        assert_eq!(sample_llr(50, 0.8, 9).unwrap(), sample_llr(50, 0.8, 9).unwrap());
        assert_ne!(sample_llr(50, 0.8, 9).unwrap(), sample_llr(50, 0.8, 10).unwrap());
    }

    #[test]
    fn received_llrs() {
        let l = llr_from_received(&[0.0, 1.0, -0.5, 2.0], 1.0).unwrap();
        assert_eq!(l.values(), &[0.0, 2.0, -1.0, 4.0]);
        let y = [0.3f64, -0.2, 1.7];
        for (yi, li) in y.iter().zip(llr_from_received(&y, 0.7).unwrap().iter()) {
            assert_eq!(yi.signum(), li.signum());
        }
    }

    #[test]
    fn received_and_sampled_llrs_agree_in_distribution() {
        use rand_distr::Normal;
        let sigma = 0.8;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let noise = Normal::new(0.0, sigma).unwrap();
        let y: Vec<f64> = (0..200_000).map(|_| 1.0 + noise.sample(&mut rng)).collect();
        let (m1, v1) = moments(&llr_from_received(&y, sigma).unwrap());
        let (m2, v2) = moments(&sample_llr(200_000, sigma, 6).unwrap());
        assert!((m1 - m2).abs() / m2 < 0.01);
        assert!((v1 - v2).abs() / v2 < 0.02);
    }
}
