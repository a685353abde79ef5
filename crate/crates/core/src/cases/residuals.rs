//! Seeded synthetic residuals.
//!
//! Noise is drawn with ChaCha20 (`rand_chacha`, seeded through
//! `SeedableRng::seed_from_u64`) feeding the Box-Muller transform. Uniforms
//! take the top 53 bits of each `u64` and map to `(0, 1]`; the transcendental
//! functions come from `libm`, so the same seed gives the same bits on every
//! platform.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::evidence::SignalDataset;

/// Standard normal stream: ChaCha20 + Box-Muller, both outputs of each pair used.
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform on `(0, 1]` from the same stream.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * libm::sin(angle));
        r * libm::cos(angle)
    }
}

/// `y_i = amplitude g_i + eps_i`, `eps_i ~ N(0, noise_sd^2)`.
pub fn generate_uranus_residuals(pattern: &[f64], amplitude: f64, noise_sd: f64, seed: u64) -> Result<SignalDataset> {
    if pattern.is_empty() {
        return Err(Error::domain("pattern is empty"));
    }
    if !(noise_sd.is_finite() && noise_sd >= 0.0) {
        return Err(Error::domain(format!("noise sd must be nonnegative, got {noise_sd}")));
    }
    if !amplitude.is_finite() {
        return Err(Error::domain("amplitude must be finite"));
    }
    let mut noise = GaussianStream::new(seed);
    let y = pattern
        .iter()
        .map(|g| {
            let eps = noise.next_standard();
            if noise_sd == 0.0 {
                amplitude * g
            } else {
                amplitude * g + noise_sd * eps
            }
        })
        .collect();
    SignalDataset::new(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_is_exact() {
        let d = generate_uranus_residuals(&[1.0; 4], 2.0, 0.0, 99).unwrap();
        assert_eq!(d.residuals(), &[2.0; 4]);
    }

    #[test]
    fn seeded_runs_repeat() {
        let g: Vec<f64> = (0..32).map(|i| (i as f64).sin()).collect();
        let a = generate_uranus_residuals(&g, 1.5, 1.0, 7).unwrap();
        let b = generate_uranus_residuals(&g, 1.5, 1.0, 7).unwrap();
        let bits = |d: &SignalDataset| d.residuals().iter().map(|y| y.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&a), bits(&b));
        let c = generate_uranus_residuals(&g, 1.5, 1.0, 8).unwrap();
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn pure_noise_mean_is_near_zero() {
        let n = 10_000;
        let d = generate_uranus_residuals(&vec![1.0; n], 0.0, 1.0, 2024).unwrap();
        let mean = d.residuals().iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "{mean}");
        let var = d.residuals().iter().map(|y| (y - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 1.0).abs() < 0.06, "{var}");
    }

    #[test]
    fn argument_checks() {
        assert!(generate_uranus_residuals(&[], 1.0, 1.0, 0).is_err());
        assert!(generate_uranus_residuals(&[1.0], 1.0, -1.0, 0).is_err());
    }
}
