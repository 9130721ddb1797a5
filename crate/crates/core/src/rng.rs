//! Seeded sampling for the random state generators.
//!
//! The stream is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`, so a given seed yields the same states on
//! every platform. Uniforms take the top 53 bits of `next_u64`; normals use
//! the Box–Muller transform.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    fn uniform_open(&mut self) -> f64 {
        1.0 - self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        let u = self.uniform_open();
        let v = self.uniform();
        libm::sqrt(-2.0 * libm::log(u)) * libm::cos(2.0 * core::f64::consts::PI * v)
    }

    /// Complex standard normal (independent real and imaginary parts).
    pub fn complex_normal(&mut self) -> Complex64 {
        Complex64::new(self.normal(), self.normal())
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Uniform point on the `k - 1` simplex (normalized exponentials).
    pub fn simplex(&mut self, k: usize) -> Vec<f64> {
        let mut w: Vec<f64> = (0..k).map(|_| -libm::log(self.uniform_open())).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_in_range() {
        let mut a = Sampler::new(7);
        let mut b = Sampler::new(7);
        for _ in 0..1000 {
            let x = a.uniform();
            assert_eq!(x, b.uniform());
            assert!((0.0..1.0).contains(&x));
        }
        let w = a.simplex(5);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(w.iter().all(|&x| x > 0.0));
        assert!((0..100).all(|_| a.below(3) < 3));
    }

    #[test]
    fn normal_moments() {
        let mut s = Sampler::new(1);
        let xs: Vec<f64> = (0..20000).map(|_| s.normal()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.03);
        assert!((var - 1.0).abs() < 0.05);
    }
}
