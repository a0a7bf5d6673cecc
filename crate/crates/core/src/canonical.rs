//! Canonical time density for a discrete nondegenerate spectrum.
//!
//! With time kets `<E_j|t> = gamma^{-1/2} exp(-i E_j t / hbar)` the density is
//!
//! ```text
//! p(t|psi) = |<t|psi>|^2 = |sum_j c_j exp(+i E_j t / hbar)|^2 / gamma
//! ```
//!
//! and satisfies `p(t|psi_tau) = p(t - tau|psi_0)` identically. `p` is a
//! density with respect to the Bohr (long-time) mean; with `gamma = 1` a
//! unit-norm state has Bohr mean 1.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::galapon::validate_grid;
use crate::numeric::NeumaierSum;
use crate::spectral::{check_dim, evolve, EnergySpectrum, QuantumState};

#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalDensity {
    spectrum: EnergySpectrum,
    amplitudes: Vec<Complex64>,
    gamma: f64,
}

impl CanonicalDensity {
    /// Density with `gamma = sum_j |c_j|^2` (equal to 1 for a unit state), so
    /// that its Bohr mean is 1.
    pub fn new(spectrum: &EnergySpectrum, state: &QuantumState) -> Result<Self> {
        Self::with_gamma(spectrum, state, state.norm_sqr())
    }

    pub fn with_gamma(spectrum: &EnergySpectrum, state: &QuantumState, gamma: f64) -> Result<Self> {
        check_dim(spectrum.len(), state.len())?;
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(invalid("gamma", format!("must be positive, got {gamma}")));
        }
        Ok(Self {
            spectrum: spectrum.clone(),
            amplitudes: state.coeffs().to_vec(),
            gamma,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    /// `<t|psi>` up to the `gamma^{-1/2}` factor.
    pub fn time_amplitude(&self, t: f64) -> Complex64 {
        let hbar = self.spectrum.hbar();
        self.amplitudes
            .iter()
            .zip(self.spectrum.levels())
            .map(|(c, e)| c * Complex64::from_polar(1.0, e * t / hbar))
            .sum()
    }

    pub fn density_at(&self, t: f64) -> f64 {
        self.time_amplitude(t).norm_sqr() / self.gamma
    }

    /// Upper bound `(sum_j |c_j|)^2 / gamma`.
    pub fn max_density_bound(&self) -> f64 {
        let l1: f64 = self.amplitudes.iter().map(|c| c.norm()).sum();
        l1 * l1 / self.gamma
    }
}

/// Density at `t`; free-function form of [`CanonicalDensity::density_at`].
pub fn density_at(d: &CanonicalDensity, t: f64) -> f64 {
    d.density_at(t)
}

/// JSON record emitted by the covariance check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CovarianceRecord {
    pub tau: f64,
    pub max_deviation: f64,
    pub grid_points: usize,
}

/// `max_t |p(t|psi_tau) - p(t - tau|psi_0)|` over the grid.
///
/// The left side evolves the state and evaluates its density; the right side
/// shifts the argument of the original density.
pub fn verify_covariance(
    spectrum: &EnergySpectrum,
    state: &QuantumState,
    tau: f64,
    t_grid: &[f64],
) -> Result<f64> {
    if t_grid.is_empty() {
        return Err(crate::error::QtError::EmptyGrid);
    }
    let original = CanonicalDensity::new(spectrum, state)?;
    let moved = CanonicalDensity::new(spectrum, &evolve(state, spectrum, tau)?)?;
    Ok(t_grid
        .par_iter()
        .map(|&t| (moved.density_at(t) - original.density_at(t - tau)).abs())
        .reduce(|| 0.0, f64::max))
}

pub fn covariance_record(
    spectrum: &EnergySpectrum,
    state: &QuantumState,
    tau: f64,
    t_grid: &[f64],
) -> Result<CovarianceRecord> {
    Ok(CovarianceRecord {
        tau,
        max_deviation: verify_covariance(spectrum, state, tau, t_grid)?,
        grid_points: t_grid.len(),
    })
}

/// Trapezoid average of the density over `[0, window]` with `samples` points.
///
/// Exact for trigonometric polynomials of degree below `samples - 1` when
/// `window` is a common period.
pub fn bohr_mean_density(d: &CanonicalDensity, window: f64, samples: usize) -> Result<f64> {
    if !(window > 0.0 && window.is_finite()) {
        return Err(invalid("window", format!("must be positive, got {window}")));
    }
    if samples < 2 {
        return Err(invalid(
            "samples",
            format!("need at least 2, got {samples}"),
        ));
    }
    let step = window / (samples - 1) as f64;
    let mut acc = NeumaierSum::new();
    for i in 0..samples {
        let w = if i == 0 || i == samples - 1 { 0.5 } else { 1.0 };
        acc.add(w * d.density_at(i as f64 * step));
    }
    Ok(acc.value() * step / window)
}

/// Evenly spaced `points` samples of the density on `[0, t_max]`.
pub fn density_table(d: &CanonicalDensity, t_max: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(invalid("points", format!("need at least 2, got {points}")));
    }
    let grid: Vec<f64> = (0..points)
        .map(|i| t_max * i as f64 / (points - 1) as f64)
        .collect();
    validate_grid(&grid)?;
    Ok(grid.into_iter().map(|t| (t, d.density_at(t))).collect())
}
