//! Explicit sequences in S converging to an energy eigenstate.
//!
//! For the ground state, step `N` has `N + 1` coefficients
//!
//! ```text
//! c_0(N) = h(N) / D,   c_j(N) = -(1/j) / D   (j = 1..N),   D = sqrt(sigma(N) + h(N)^2)
//! ```
//!
//! with `h(N) = sum 1/j` and `sigma(N) = sum 1/j^2`. The coefficients sum to
//! zero and have unit norm, while `c_0(N) -> 1` because `h` diverges and
//! `sigma` stays bounded. Other eigenstates are reached by swapping index 0
//! with the target index.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{invalid, QtError, Result};
use crate::galapon::s_projector;
use crate::numeric::NeumaierSum;
use crate::spectral::QuantumState;

/// `pi^2 / 6`, the limit of `sigma(N)`.
pub const BASEL: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;

/// `(h(N), sigma(N))` by forward compensated summation.
pub fn partial_sums(n: u64) -> (f64, f64) {
    let mut h = NeumaierSum::new();
    let mut sigma = NeumaierSum::new();
    for j in 1..=n {
        let inv = 1.0 / j as f64;
        h.add(inv);
        sigma.add(inv * inv);
    }
    (h.value(), sigma.value())
}

/// One element of the sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyStep {
    pub n: usize,
    pub target: usize,
    pub h: f64,
    pub sigma: f64,
    pub state: QuantumState,
}

impl CauchyStep {
    /// The large coefficient, sitting at the target index.
    pub fn leading(&self) -> f64 {
        self.state.coeffs()[self.target].re
    }
}

pub fn cauchy_state(n: usize, target: usize) -> Result<CauchyStep> {
    if n == 0 {
        return Err(invalid("n", "sequence index starts at 1"));
    }
    if target > n {
        return Err(QtError::Index {
            index: target,
            len: n + 1,
        });
    }
    let (h, sigma) = partial_sums(n as u64);
    let denom = (sigma + h * h).sqrt();
    let mut coeffs: Vec<Complex64> = std::iter::once(h / denom)
        .chain((1..=n).map(|j| -(1.0 / j as f64) / denom))
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    coeffs.swap(0, target);
    Ok(CauchyStep {
        n,
        target,
        h,
        sigma,
        state: QuantumState::from_unit_unchecked(coeffs),
    })
}

/// `|| psi_N - |E_target> ||`, computed entrywise.
pub fn distance_to_eigenstate(step: &CauchyStep, target: usize) -> Result<f64> {
    let c = step.state.coeffs();
    if target >= c.len() {
        return Err(QtError::Index {
            index: target,
            len: c.len(),
        });
    }
    let sq: f64 = c
        .iter()
        .enumerate()
        .map(|(j, cj)| {
            if j == target {
                (cj - 1.0).norm_sqr()
            } else {
                cj.norm_sqr()
            }
        })
        .sum();
    Ok(sq.sqrt())
}

/// Distance between two states of possibly different length, padding the
/// shorter with zeros.
pub fn padded_distance(a: &QuantumState, b: &QuantumState) -> f64 {
    let (a, b) = (a.coeffs(), b.coeffs());
    let len = a.len().max(b.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..len)
        .map(|j| {
            let x = a.get(j).copied().unwrap_or(zero);
            let y = b.get(j).copied().unwrap_or(zero);
            (x - y).norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// Scalar summary of the ground-state construction at a single `N`, without
/// materializing the vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeadingAmplitude {
    pub n: u64,
    pub h: f64,
    pub sigma: f64,
    pub c0: f64,
    /// `1 - c_0(N)`, evaluated as `sigma / (D (D + h))` to avoid cancellation.
    pub one_minus_c0: f64,
}

impl LeadingAmplitude {
    pub fn at(n: u64) -> Self {
        let (h, sigma) = partial_sums(n);
        let d = (sigma + h * h).sqrt();
        Self {
            n,
            h,
            sigma,
            c0: h / d,
            one_minus_c0: sigma / (d * (d + h)),
        }
    }

    /// `(1 - c_0) 2 h^2 / (pi^2/6)`, which tends to 1.
    pub fn rate_ratio(&self) -> f64 {
        self.one_minus_c0 * 2.0 * self.h * self.h / BASEL
    }
}

/// Rows `(N, c_target(N), distance)` for `N = 1..=n_max`.
pub fn convergence_table(n_max: usize, target: usize) -> Result<Vec<(usize, f64, f64)>> {
    let first = target.max(1);
    (first..=n_max)
        .map(|n| {
            let step = cauchy_state(n, target)?;
            let dist = distance_to_eigenstate(&step, target)?;
            Ok((n, step.leading(), dist))
        })
        .collect()
}

/// Orthonormal (Helmert) basis of `S_n`: for `k = 1..n-1`, `k` entries equal
/// to `1/sqrt(k(k+1))` followed by `-k/sqrt(k(k+1))`.
pub fn s_basis(n: usize) -> Vec<Vec<f64>> {
    (1..n)
        .map(|k| {
            let a = 1.0 / ((k * (k + 1)) as f64).sqrt();
            let mut v = vec![0.0; n];
            v[..k].iter_mut().for_each(|x| *x = a);
            v[k] = -(k as f64) * a;
            v
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub n: usize,
    pub max_overlap: f64,
    pub projector_rank: usize,
}

/// Largest overlap between `N^{-1/2} sum_j |E_j>` and a basis of `S_n`,
/// together with the rank of the projector onto `S_n`.
pub fn uniform_vector_orthogonality(n: usize) -> Result<OrthogonalityReport> {
    if n < 2 {
        return Err(QtError::TooFewLevels(n));
    }
    let u = 1.0 / (n as f64).sqrt();
    let max_overlap = s_basis(n)
        .iter()
        .map(|v| v.iter().map(|x| x * u).sum::<f64>().abs())
        .fold(0.0, f64::max);
    Ok(OrthogonalityReport {
        n,
        max_overlap,
        projector_rank: s_projector(n).hermitian_rank(1e-10),
    })
}
