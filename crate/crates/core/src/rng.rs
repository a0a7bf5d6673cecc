//! Reproducible random states.
//!
//! The stream is SplitMix64 (Steele, Lea & Flood reference constants). Each
//! complex coefficient consumes two 64-bit words `u1, u2`, mapped to `(0, 1]`
//! as `((x >> 11) + 1) * 2^-53` and turned into a Gaussian pair by
//! Box-Muller: `re = r cos(2 pi u2)`, `im = r sin(2 pi u2)` with
//! `r = sqrt(-2 ln u1)`. The vector is then normalized, and optionally
//! projected onto S.

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::Result;
use crate::galapon::project_onto_s;
use crate::spectral::QuantumState;

#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: SplitMix64,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Uniform on `(0, 1]`.
    pub fn unit(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 1.0) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn complex_gaussian(&mut self) -> Complex64 {
        let u1 = self.unit();
        let u2 = self.unit();
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::from_polar(r, std::f64::consts::TAU * u2)
    }

    pub fn raw_vector(&mut self, n: usize) -> Vec<Complex64> {
        (0..n).map(|_| self.complex_gaussian()).collect()
    }

    /// Haar-like random unit state on `n` levels.
    pub fn state(&mut self, n: usize) -> Result<QuantumState> {
        QuantumState::normalized(self.raw_vector(n))
    }

    /// Random unit state in S (coefficients summing to zero).
    pub fn s_state(&mut self, n: usize) -> Result<QuantumState> {
        let psi = self.state(n)?;
        project_onto_s(&psi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::coefficient_sum;

    #[test]
    fn same_seed_same_stream() {
        let a = StateSampler::new(7).state(8).unwrap();
        let b = StateSampler::new(7).state(8).unwrap();
        assert_eq!(a, b);
        let c = StateSampler::new(8).state(8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn unit_interval_is_half_open() {
        let mut s = StateSampler::new(0);
        for _ in 0..10_000 {
            let u = s.unit();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn s_states_sum_to_zero() {
        let mut s = StateSampler::new(3);
        for n in 2..20 {
            let psi = s.s_state(n).unwrap();
            assert!(coefficient_sum(&psi).norm() < 1e-13);
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-13);
        }
    }
}
